//! A small arithmetic language for the formula and equation tables.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' INT)?
//! primary := INT | IDENT | 'binom' '(' expr ',' INT ')' | '(' expr ')'
//! ```
//!
//! Identifiers are `n`, `k`, `E`, `W` and the count symbols `p3..p5`,
//! `l1..l9`, `m1..m21`, `n1..n62`. Division is only defined by constants.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Count families: cycles `p`, and classes of order four, five and six.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    P,
    L,
    M,
    N,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::P, Family::L, Family::M, Family::N];

    pub fn prefix(self) -> char {
        match self {
            Family::P => 'p',
            Family::L => 'l',
            Family::M => 'm',
            Family::N => 'n',
        }
    }

    /// Valid subscripts.
    pub fn indices(self) -> std::ops::RangeInclusive<usize> {
        match self {
            Family::P => 3..=5,
            Family::L => 1..=9,
            Family::M => 1..=21,
            Family::N => 1..=62,
        }
    }

    pub fn len(self) -> usize {
        self.indices().count()
    }

    pub fn is_empty(self) -> bool {
        self.len() == 0
    }

    /// Order of the subgraphs counted by the family, if it is a class family.
    pub fn subgraph_order(self) -> Option<usize> {
        match self {
            Family::P => None,
            Family::L => Some(4),
            Family::M => Some(5),
            Family::N => Some(6),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub family: Family,
    pub index: usize,
}

impl Symbol {
    pub fn new(family: Family, index: usize) -> Self {
        Symbol { family, index }
    }

    /// The free parameter `n3`.
    pub const N3: Symbol = Symbol {
        family: Family::N,
        index: 3,
    };
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.prefix(), self.index)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    /// graph order
    N,
    /// valency
    K,
    /// edge count
    Edges,
    /// vertices at distance two from all vertices of a triangle
    W,
    Count(Symbol),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(BigInt),
    Atom(Atom),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Binom(Box<Expr>, u32),
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0, text };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    /// Evaluates to a polynomial, resolving atoms through `atom`.
    pub fn eval(&self, atom: &mut dyn FnMut(Atom) -> Result<Poly>) -> Result<Poly> {
        Ok(match self {
            Expr::Num(n) => Poly::integer(n.clone()),
            Expr::Atom(a) => atom(*a)?,
            Expr::Neg(e) => -&e.eval(atom)?,
            Expr::Add(a, b) => &a.eval(atom)? + &b.eval(atom)?,
            Expr::Sub(a, b) => &a.eval(atom)? - &b.eval(atom)?,
            Expr::Mul(a, b) => &a.eval(atom)? * &b.eval(atom)?,
            Expr::Div(a, b) => {
                let num = a.eval(atom)?;
                let den = b.eval(atom)?;
                let c = den
                    .as_constant()
                    .ok_or_else(|| Error::Expr(format!("division by non-constant {den}")))?;
                if c.is_zero() {
                    return Err(Error::Expr("division by zero".into()));
                }
                num.scale(&(BigRational::one() / c))
            }
            Expr::Pow(e, p) => e.eval(atom)?.pow(*p),
            Expr::Binom(e, r) => {
                let x = e.eval(atom)?;
                let mut out = Poly::one();
                let mut fact = BigInt::one();
                for i in 0..*r {
                    out = &out * &(&x - &Poly::integer(i));
                    fact *= BigInt::from(i + 1);
                }
                out.scale(&BigRational::new(BigInt::one(), fact))
            }
        })
    }

    /// Count symbols referenced by the expression, in order of appearance.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.visit(&mut |a| {
            if let Atom::Count(s) = a {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        });
        out
    }

    fn visit(&self, f: &mut dyn FnMut(Atom)) {
        match self {
            Expr::Num(_) => {}
            Expr::Atom(a) => f(*a),
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Binom(e, _) => e.visit(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    pub fn scaled(self, factor: i64) -> Expr {
        Expr::Mul(Box::new(Expr::Num(BigInt::from(factor))), Box::new(self))
    }
}

/// `lhs = rhs` with the source text kept for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub text: String,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Relation {
    pub fn parse(text: &str) -> Result<Relation> {
        let mut parts = text.split('=');
        let (Some(l), Some(r), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Expr(format!("expected exactly one '=' in `{text}`")));
        };
        Ok(Relation {
            text: text.trim().to_string(),
            lhs: Expr::parse(l)?,
            rhs: Expr::parse(r)?,
        })
    }

    /// `lhs - rhs`.
    pub fn residual(&self, atom: &mut dyn FnMut(Atom) -> Result<Poly>) -> Result<Poly> {
        Ok(&self.lhs.eval(atom)? - &self.rhs.eval(atom)?)
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = self.lhs.symbols();
        for s in self.rhs.symbols() {
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Int(s.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Expr(format!("unexpected character `{c}` in `{text}`")));
        }
    }
    Ok(out)
}

fn resolve(name: &str) -> Result<Atom> {
    Ok(match name {
        "n" => Atom::N,
        "k" => Atom::K,
        "E" => Atom::Edges,
        "W" => Atom::W,
        _ => {
            let mut chars = name.chars();
            let family = match chars.next() {
                Some('p') => Family::P,
                Some('l') => Family::L,
                Some('m') => Family::M,
                Some('n') => Family::N,
                _ => return Err(Error::Expr(format!("unknown symbol `{name}`"))),
            };
            let index: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Expr(format!("unknown symbol `{name}`")))?;
            if !family.indices().contains(&index) {
                return Err(Error::Expr(format!("unknown symbol `{name}`")));
            }
            Atom::Count(Symbol::new(family, index))
        }
    })
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Expr(format!("{msg} at token {} in `{}`", self.pos, self.text.trim()))
    }

    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expect_op(&mut self, c: char) -> Result<()> {
        if self.peek_op() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn small_int(&mut self) -> Result<u32> {
        match self.tokens.get(self.pos) {
            Some(Token::Int(n)) => {
                let v = u32::try_from(n.clone()).map_err(|_| self.error("integer too large"))?;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error("expected an integer literal")),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            e = if c == '+' {
                Expr::Add(Box::new(e), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(e), Box::new(rhs))
            };
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            e = if c == '*' {
                Expr::Mul(Box::new(e), Box::new(rhs))
            } else {
                Expr::Div(Box::new(e), Box::new(rhs))
            };
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let e = self.small_int()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Token::Ident(name)) if name == "binom" => {
                self.pos += 1;
                self.expect_op('(')?;
                let x = self.expr()?;
                self.expect_op(',')?;
                let r = self.small_int()?;
                self.expect_op(')')?;
                Ok(Expr::Binom(Box::new(x), r))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Atom(resolve(&name)?))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(e)
            }
            _ => Err(self.error("expected a number, symbol or `(`")),
        }
    }
}
