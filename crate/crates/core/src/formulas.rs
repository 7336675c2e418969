//! Closed-form subgraph counts for srg(n,k,1,2).
//!
//! The counts `p3..p5`, `l1..l9` and `m1..m21` are polynomials in `n` and
//! `k`; the six-vertex counts `n1..n62` are affine in the free parameter `n3`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Atom, Expr, Family, Symbol};
use crate::poly::{rational, Poly, Var};

const FORMULAS_TOML: &str = include_str!("../data/formulas.toml");

#[derive(Deserialize)]
struct RawEntry {
    index: usize,
    expr: String,
}

#[derive(Deserialize)]
struct RawBook {
    p: Vec<RawEntry>,
    l: Vec<RawEntry>,
    m: Vec<RawEntry>,
    n: Vec<RawEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Formula {
    pub symbol: Symbol,
    pub text: String,
    pub expr: Expr,
}

/// The full table of closed forms, indexed by family and subscript.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaBook {
    formulas: Vec<Formula>,
}

fn slot(sym: Symbol) -> usize {
    let mut offset = 0;
    for f in Family::ALL {
        if f == sym.family {
            return offset + sym.index - *f.indices().start();
        }
        offset += f.len();
    }
    unreachable!("every family is listed")
}

impl FormulaBook {
    /// The built-in table.
    pub fn builtin() -> &'static FormulaBook {
        static BOOK: OnceLock<FormulaBook> = OnceLock::new();
        BOOK.get_or_init(|| FormulaBook::parse(FORMULAS_TOML).expect("built-in formula table is valid"))
    }

    /// Parses a table in the TOML layout of the built-in data file.
    pub fn parse(text: &str) -> Result<FormulaBook> {
        let raw: RawBook = toml::from_str(text).map_err(|e| Error::Data(e.to_string()))?;
        let total: usize = Family::ALL.iter().map(|f| f.len()).sum();
        let mut slots: Vec<Option<Formula>> = vec![None; total];
        for (family, entries) in [
            (Family::P, raw.p),
            (Family::L, raw.l),
            (Family::M, raw.m),
            (Family::N, raw.n),
        ] {
            for e in entries {
                if !family.indices().contains(&e.index) {
                    return Err(Error::Data(format!(
                        "{}{} is not a valid subscript",
                        family.prefix(),
                        e.index
                    )));
                }
                let symbol = Symbol::new(family, e.index);
                let expr = Expr::parse(&e.expr)?;
                check_formula_atoms(symbol, &expr)?;
                let s = &mut slots[slot(symbol)];
                if s.is_some() {
                    return Err(Error::Data(format!("{symbol} is defined twice")));
                }
                *s = Some(Formula {
                    symbol,
                    text: e.expr,
                    expr,
                });
            }
        }
        let mut formulas = Vec::with_capacity(total);
        for (i, s) in slots.into_iter().enumerate() {
            match s {
                Some(f) => formulas.push(f),
                None => {
                    let sym = all_symbols().nth(i).expect("slot in range");
                    return Err(Error::Data(format!("{sym} has no formula")));
                }
            }
        }
        Ok(FormulaBook { formulas })
    }

    pub fn formula(&self, sym: Symbol) -> &Formula {
        &self.formulas[slot(sym)]
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    /// A copy with one formula replaced.
    pub fn with_formula(&self, sym: Symbol, text: &str) -> Result<FormulaBook> {
        let expr = Expr::parse(text)?;
        check_formula_atoms(sym, &expr)?;
        let mut book = self.clone();
        book.formulas[slot(sym)] = Formula {
            symbol: sym,
            text: text.to_string(),
            expr,
        };
        Ok(book)
    }

    /// The closed form as a polynomial in `k` and `n3`, with `n = k^2/2 + 1`.
    pub fn symbolic(&self, sym: Symbol) -> Result<Poly> {
        let k = Poly::var(Var::K);
        let n = &(&k * &k).scale(&rational(1, 2)) + &Poly::one();
        self.formula(sym).expr.eval(&mut |a| resolve_params(a, &n, &k))
    }

    /// The closed form at numeric `(n, k)`, as `a + b*n3`.
    pub fn affine(&self, sym: Symbol, n: &BigInt, k: &BigInt) -> Result<AffineCount> {
        let np = Poly::integer(n.clone());
        let kp = Poly::integer(k.clone());
        let p = self.formula(sym).expr.eval(&mut |a| resolve_params(a, &np, &kp))?;
        let (a, b) = p
            .affine_in_n3()
            .ok_or_else(|| Error::Data(format!("{sym} is not affine in n3: {p}")))?;
        Ok(AffineCount { a, b })
    }

    fn integral(&self, sym: Symbol, n: &BigInt, k: &BigInt) -> Result<BigInt> {
        let c = self.affine(sym, n, k)?;
        if !c.b.is_zero() {
            return Err(Error::Data(format!("{sym} depends on n3")));
        }
        if !c.a.is_integer() {
            return Err(Error::NonIntegral {
                family: sym.family.prefix(),
                index: sym.index,
                n: n.to_string(),
                k: k.to_string(),
                value: c.a.to_string(),
            });
        }
        Ok(c.a.to_integer())
    }

    fn family_integral(&self, family: Family, n: &BigInt, k: &BigInt) -> Result<Vec<BigInt>> {
        family
            .indices()
            .map(|i| self.integral(Symbol::new(family, i), n, k))
            .collect()
    }

    pub fn eval_p(&self, n: &BigInt, k: &BigInt) -> Result<Vec<BigInt>> {
        self.family_integral(Family::P, n, k)
    }

    pub fn eval_l(&self, n: &BigInt, k: &BigInt) -> Result<Vec<BigInt>> {
        self.family_integral(Family::L, n, k)
    }

    pub fn eval_m(&self, n: &BigInt, k: &BigInt) -> Result<Vec<BigInt>> {
        self.family_integral(Family::M, n, k)
    }

    pub fn eval_n(&self, n: &BigInt, k: &BigInt) -> Result<Vec<AffineCount>> {
        Family::N
            .indices()
            .map(|i| self.affine(Symbol::new(Family::N, i), n, k))
            .collect()
    }

    /// Every formula evaluated at `(n, k)`.
    pub fn evaluate(&self, n: &BigInt, k: &BigInt) -> Result<FormulaSet> {
        Ok(FormulaSet {
            n: n.clone(),
            k: k.clone(),
            p: self.eval_p(n, k)?,
            l: self.eval_l(n, k)?,
            m: self.eval_m(n, k)?,
            six: self.eval_n(n, k)?,
        })
    }
}

/// Iterates `p3..p5, l1..l9, m1..m21, n1..n62`.
pub fn all_symbols() -> impl Iterator<Item = Symbol> {
    Family::ALL
        .into_iter()
        .flat_map(|f| f.indices().map(move |i| Symbol::new(f, i)))
}

fn check_formula_atoms(sym: Symbol, expr: &Expr) -> Result<()> {
    for s in expr.symbols() {
        if s != Symbol::N3 {
            return Err(Error::Data(format!(
                "formula for {sym} refers to {s}; only n, k and n3 are allowed"
            )));
        }
    }
    Ok(())
}

fn resolve_params(a: Atom, n: &Poly, k: &Poly) -> Result<Poly> {
    match a {
        Atom::N => Ok(n.clone()),
        Atom::K => Ok(k.clone()),
        Atom::Count(Symbol::N3) => Ok(Poly::var(Var::N3)),
        other => Err(Error::Expr(format!("{other:?} is not allowed in a closed form"))),
    }
}

/// The count `a + b*n3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineCount {
    #[serde(with = "rational_string")]
    pub a: BigRational,
    #[serde(with = "rational_string")]
    pub b: BigRational,
}

impl AffineCount {
    pub fn at(&self, n3: &BigInt) -> BigRational {
        &self.a + &self.b * BigRational::from_integer(n3.clone())
    }
}

impl fmt::Display for AffineCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*n3", self.b),
            (false, false) if self.b.is_negative() => write!(f, "{} - {}*n3", self.a, -&self.b),
            (false, false) => write!(f, "{} + {}*n3", self.a, self.b),
        }
    }
}

/// Serde adapter writing rationals as `"p"` or `"p/q"`.
pub mod rational_string {
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map_err(|_| D::Error::custom(format!("invalid rational `{s}`")))
    }
}

/// Serde adapter writing big integers as decimal strings.
pub mod bigint_string {
    use num_bigint::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map_err(|_| D::Error::custom(format!("invalid integer `{s}`")))
    }
}

/// All closed forms evaluated at one parameter pair.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaSet {
    pub n: BigInt,
    pub k: BigInt,
    pub p: Vec<BigInt>,
    pub l: Vec<BigInt>,
    pub m: Vec<BigInt>,
    pub six: Vec<AffineCount>,
}

impl FormulaSet {
    /// The 62 six-vertex counts at `n3`, rejecting negative or fractional
    /// values.
    pub fn instantiate(&self, n3: &BigInt) -> Result<Vec<BigInt>> {
        let mut out = Vec::with_capacity(self.six.len());
        let mut violations = Vec::new();
        if n3.is_negative() {
            violations.push("n3 must be non-negative".to_string());
        }
        for (i, c) in self.six.iter().enumerate() {
            let v = c.at(n3);
            if !v.is_integer() {
                violations.push(format!("n{} = {} is not an integer", i + 1, v));
            } else if v.is_negative() {
                violations.push(format!("n{} = {} is negative", i + 1, v));
            }
            out.push(v.to_integer());
        }
        if violations.is_empty() {
            Ok(out)
        } else {
            Err(Error::InfeasibleN3 {
                n3: n3.to_string(),
                violations,
            })
        }
    }

    /// Values of `n3` for which every six-vertex count is a non-negative
    /// integer.
    pub fn feasible_n3_range(&self) -> N3Range {
        feasible_n3_range(&self.six)
    }
}

/// `{ x >= lower, x <= upper, x = residue (mod modulus) }`, or empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct N3Range {
    /// `None` when no integer satisfies every integrality condition.
    pub congruence: Option<Congruence>,
    #[serde(with = "bigint_string")]
    pub lower: BigInt,
    pub upper: Option<Bound>,
    /// Subscript of the six-vertex count that sets the lower bound, if it
    /// is stronger than `n3 >= 0`.
    pub lower_binding: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Congruence {
    #[serde(with = "bigint_string")]
    pub residue: BigInt,
    #[serde(with = "bigint_string")]
    pub modulus: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    #[serde(with = "bigint_string")]
    pub value: BigInt,
    /// Subscript of the six-vertex count that sets this bound.
    pub binding: usize,
}

impl N3Range {
    /// Smallest feasible value.
    pub fn first(&self) -> Option<BigInt> {
        let c = self.congruence.as_ref()?;
        let shift = (&c.residue - &self.lower).mod_floor(&c.modulus);
        let x = &self.lower + shift;
        match &self.upper {
            Some(u) if x > u.value => None,
            _ => Some(x),
        }
    }

    /// Largest feasible value, if bounded.
    pub fn last(&self) -> Option<BigInt> {
        let c = self.congruence.as_ref()?;
        let u = &self.upper.as_ref()?.value;
        let x = u - (u - &c.residue).mod_floor(&c.modulus);
        (x >= self.lower).then_some(x)
    }

    pub fn is_empty(&self) -> bool {
        self.first().is_none()
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        let Some(c) = &self.congruence else {
            return false;
        };
        *x >= self.lower
            && self.upper.as_ref().is_none_or(|u| *x <= u.value)
            && (x - &c.residue).mod_floor(&c.modulus).is_zero()
    }
}

fn lcm_denominators(x: &BigRational, y: &BigRational) -> BigInt {
    x.denom().lcm(y.denom())
}

/// Combines `x = r1 (mod m1)` and `x = r2 (mod m2)`.
fn crt(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Option<(BigInt, BigInt)> {
    let e = m1.extended_gcd(m2);
    let g = e.gcd;
    if !(r2 - r1).mod_floor(&g).is_zero() {
        return None;
    }
    let l = m1 / &g * m2;
    // x = r1 + m1 * t with m1 t = r2 - r1 (mod m2)
    let t = ((r2 - r1) / &g * e.x).mod_floor(&(m2 / &g));
    Some(((r1 + m1 * t).mod_floor(&l), l))
}

pub fn feasible_n3_range(six: &[AffineCount]) -> N3Range {
    let mut congruence = Some((BigInt::zero(), BigInt::one()));
    let mut lower = BigInt::zero();
    let mut lower_binding = None;
    let mut upper: Option<Bound> = None;
    for (i, c) in six.iter().enumerate() {
        let index = i + 1;
        // integrality: d*a + d*b*x = 0 (mod d)
        let d = lcm_denominators(&c.a, &c.b);
        if !d.is_one() {
            let big_a = (&c.a * BigRational::from_integer(d.clone())).to_integer();
            let big_b = (&c.b * BigRational::from_integer(d.clone())).to_integer();
            let g = big_b.gcd(&d);
            let cond = if (-&big_a).mod_floor(&g).is_zero() {
                // (B/g) x = -A/g (mod d/g)
                let md = &d / &g;
                let inv = (&big_b / &g).extended_gcd(&md).x;
                Some(((-&big_a / &g * inv).mod_floor(&md), md))
            } else {
                None
            };
            congruence = match (congruence, cond) {
                (Some((r1, m1)), Some((r2, m2))) => crt(&r1, &m1, &r2, &m2),
                _ => None,
            };
        }
        // non-negativity: a + b x >= 0
        if c.b.is_positive() {
            let bound = (-&c.a / &c.b).ceil().to_integer();
            if bound > lower {
                lower = bound;
                lower_binding = Some(index);
            }
        } else if c.b.is_negative() {
            let bound = (&c.a / -&c.b).floor().to_integer();
            if upper.as_ref().is_none_or(|u| bound < u.value) {
                upper = Some(Bound {
                    value: bound,
                    binding: index,
                });
            }
        } else if c.a.is_negative() {
            // a constant negative count: nothing is feasible
            congruence = None;
        }
    }
    N3Range {
        congruence: congruence.map(|(residue, modulus)| Congruence { residue, modulus }),
        lower,
        upper,
        lower_binding,
    }
}
