//! Counting relations between subgraph counts, checked as exact polynomial
//! identities in `k` and `n3` (with `n = k^2/2 + 1`) or numerically against
//! measured counts.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Atom, Expr, Relation, Symbol};
use crate::formulas::{all_symbols, FormulaBook};
use crate::poly::{rational, Poly, Var};

const EQUATIONS_TOML: &str = include_str!("../data/equations.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Group {
    /// Six-vertex constructions.
    Construction,
    /// One-vertex extensions of four-vertex classes.
    FourFive,
    /// One-vertex extensions of five-vertex classes.
    FiveSix,
    /// Class counts summing to the number of vertex subsets.
    Total,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    pub name: String,
    pub group: Group,
    pub printed: Relation,
    /// Alternative reading for a printed relation with a known slip.
    pub repaired: Option<Relation>,
    pub note: Option<String>,
}

#[derive(Deserialize)]
struct RawDefinitions {
    #[serde(rename = "E")]
    edges: String,
    #[serde(rename = "W")]
    w: String,
}

#[derive(Deserialize)]
struct RawEquation {
    name: String,
    group: Group,
    eq: String,
    repaired: Option<String>,
    note: Option<String>,
}

#[derive(Deserialize)]
struct RawTable {
    definitions: RawDefinitions,
    equation: Vec<RawEquation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquationTable {
    edges: Expr,
    w: Expr,
    equations: Vec<Equation>,
}

impl EquationTable {
    pub fn builtin() -> &'static EquationTable {
        static TABLE: OnceLock<EquationTable> = OnceLock::new();
        TABLE.get_or_init(|| EquationTable::parse(EQUATIONS_TOML).expect("built-in equation table is valid"))
    }

    pub fn parse(text: &str) -> Result<EquationTable> {
        let raw: RawTable = toml::from_str(text).map_err(|e| Error::Data(e.to_string()))?;
        let edges = Expr::parse(&raw.definitions.edges)?;
        let w = Expr::parse(&raw.definitions.w)?;
        if !edges.symbols().is_empty() || !w.symbols().is_empty() {
            return Err(Error::Data("definitions may only use n and k".into()));
        }
        let mut names = BTreeSet::new();
        let mut equations = Vec::with_capacity(raw.equation.len());
        for e in raw.equation {
            if !names.insert(e.name.clone()) {
                return Err(Error::Data(format!("equation `{}` is defined twice", e.name)));
            }
            equations.push(Equation {
                printed: Relation::parse(&e.eq)?,
                repaired: e.repaired.as_deref().map(Relation::parse).transpose()?,
                name: e.name,
                group: e.group,
                note: e.note,
            });
        }
        Ok(EquationTable { edges, w, equations })
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn get(&self, name: &str) -> Option<&Equation> {
        self.equations.iter().find(|e| e.name == name)
    }

    /// `lhs - rhs` with every count replaced by its closed form.
    pub fn symbolic_residual(&self, rel: &Relation, closed: &ClosedForms) -> Result<Poly> {
        let k = Poly::var(Var::K);
        let n = &(&k * &k).scale(&rational(1, 2)) + &Poly::one();
        let params = |a: Atom| match a {
            Atom::N => Ok(n.clone()),
            Atom::K => Ok(k.clone()),
            _ => Err(Error::Expr(format!("{a:?} in a definition"))),
        };
        let edges = self.edges.eval(&mut { params })?;
        let w = self.w.eval(&mut { params })?;
        rel.residual(&mut |a| match a {
            Atom::Edges => Ok(edges.clone()),
            Atom::W => Ok(w.clone()),
            Atom::Count(s) => Ok(closed.get(s).clone()),
            other => params(other),
        })
    }

    /// `lhs - rhs` at numeric `(n, k)` with counts supplied by `count`.
    pub fn numeric_residual(
        &self,
        rel: &Relation,
        n: &BigInt,
        k: &BigInt,
        count: &dyn Fn(Symbol) -> Option<BigRational>,
    ) -> Result<BigRational> {
        let np = Poly::integer(n.clone());
        let kp = Poly::integer(k.clone());
        let params = |a: Atom| match a {
            Atom::N => Ok(np.clone()),
            Atom::K => Ok(kp.clone()),
            _ => Err(Error::Expr(format!("{a:?} in a definition"))),
        };
        let edges = self.edges.eval(&mut { params })?;
        let w = self.w.eval(&mut { params })?;
        let p = rel.residual(&mut |a| match a {
            Atom::Edges => Ok(edges.clone()),
            Atom::W => Ok(w.clone()),
            Atom::Count(s) => count(s)
                .map(Poly::constant)
                .ok_or_else(|| Error::Expr(format!("no value for {s}"))),
            other => params(other),
        })?;
        p.as_constant()
            .ok_or_else(|| Error::Expr(format!("numeric residual is not constant: {p}")))
    }
}

/// Closed forms of every count symbol as polynomials in `k` and `n3`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForms {
    polys: Vec<Poly>,
}

impl ClosedForms {
    pub fn new(book: &FormulaBook) -> Result<ClosedForms> {
        Ok(ClosedForms {
            polys: all_symbols().map(|s| book.symbolic(s)).collect::<Result<_>>()?,
        })
    }

    pub fn builtin() -> &'static ClosedForms {
        static FORMS: OnceLock<ClosedForms> = OnceLock::new();
        FORMS.get_or_init(|| ClosedForms::new(FormulaBook::builtin()).expect("built-in formulas evaluate"))
    }

    pub fn get(&self, s: Symbol) -> &Poly {
        let i = all_symbols().position(|x| x == s).expect("valid symbol");
        &self.polys[i]
    }
}

/// Outcome of checking one reading of a relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub relation: String,
    pub holds: bool,
    /// `lhs - rhs`, rendered; `"0"` when the relation holds.
    pub residual: String,
}

impl Verdict {
    fn from_poly(rel: &Relation, p: &Poly) -> Verdict {
        Verdict {
            relation: rel.text.clone(),
            holds: p.is_zero(),
            residual: p.to_string(),
        }
    }
}

/// How a relation fared: as printed, after the recorded repair, or not at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    HoldsRepaired,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub group: Group,
    pub status: Status,
    pub printed: Verdict,
    pub repaired: Option<Verdict>,
    pub note: Option<String>,
}

fn status(printed: &Verdict, repaired: Option<&Verdict>) -> Status {
    if printed.holds {
        Status::Holds
    } else if repaired.is_some_and(|r| r.holds) {
        Status::HoldsRepaired
    } else {
        Status::Fails
    }
}

/// Checks both readings of `eq` symbolically; with `at_k`, the residuals are
/// specialised to that valency (leaving `n3` free).
pub fn check_identity(
    table: &EquationTable,
    eq: &Equation,
    closed: &ClosedForms,
    at_k: Option<&BigInt>,
) -> Result<IdentityCheck> {
    let verdict = |rel: &Relation| -> Result<Verdict> {
        let mut p = table.symbolic_residual(rel, closed)?;
        if let Some(k) = at_k {
            p = p.at_k(&BigRational::from_integer(k.clone()));
        }
        Ok(Verdict::from_poly(rel, &p))
    };
    let printed = verdict(&eq.printed)?;
    let repaired = eq.repaired.as_ref().map(verdict).transpose()?;
    Ok(IdentityCheck {
        name: eq.name.clone(),
        group: eq.group,
        status: status(&printed, repaired.as_ref()),
        printed,
        repaired,
        note: eq.note.clone(),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub holds: usize,
    pub holds_repaired: usize,
    pub fails: usize,
}

impl Summary {
    fn of(checks: &[IdentityCheck]) -> Summary {
        let mut s = Summary {
            total: checks.len(),
            ..Summary::default()
        };
        for c in checks {
            match c.status {
                Status::Holds => s.holds += 1,
                Status::HoldsRepaired => s.holds_repaired += 1,
                Status::Fails => s.fails += 1,
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// Valency the residuals were specialised to, if any.
    pub k: Option<String>,
    pub summary: Summary,
    pub checks: Vec<IdentityCheck>,
}

pub fn check_all(table: &EquationTable, book: &FormulaBook, at_k: Option<&BigInt>) -> Result<IdentityReport> {
    let closed = ClosedForms::new(book)?;
    let checks = table
        .equations()
        .iter()
        .map(|eq| check_identity(table, eq, &closed, at_k))
        .collect::<Result<Vec<_>>>()?;
    Ok(IdentityReport {
        k: at_k.map(|k| k.to_string()),
        summary: Summary::of(&checks),
        checks,
    })
}

/// Outcome of one relation evaluated on concrete counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericCheck {
    pub name: String,
    pub group: Group,
    pub status: Status,
    /// `lhs - rhs` for the printed reading.
    pub printed_residual: String,
    pub repaired_residual: Option<String>,
}

/// Evaluates both readings of every relation at `(n, k)` with the given
/// counts.
pub fn check_numeric(
    table: &EquationTable,
    n: &BigInt,
    k: &BigInt,
    count: &dyn Fn(Symbol) -> Option<BigRational>,
) -> Result<Vec<NumericCheck>> {
    table
        .equations()
        .iter()
        .map(|eq| {
            let printed = table.numeric_residual(&eq.printed, n, k, count)?;
            let repaired = eq
                .repaired
                .as_ref()
                .map(|r| table.numeric_residual(r, n, k, count))
                .transpose()?;
            let status = if printed.is_zero() {
                Status::Holds
            } else if repaired.as_ref().is_some_and(Zero::is_zero) {
                Status::HoldsRepaired
            } else {
                Status::Fails
            };
            Ok(NumericCheck {
                name: eq.name.clone(),
                group: eq.group,
                status,
                printed_residual: printed.to_string(),
                repaired_residual: repaired.map(|r| r.to_string()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Family;

    fn closed() -> &'static ClosedForms {
        ClosedForms::builtin()
    }

    fn check(name: &str) -> IdentityCheck {
        let t = EquationTable::builtin();
        check_identity(t, t.get(name).unwrap(), closed(), None).unwrap()
    }

    #[test]
    fn table_shape() {
        let t = EquationTable::builtin();
        let count = |g| t.equations().iter().filter(|e| e.group == g).count();
        assert_eq!(count(Group::FourFive), 9);
        assert_eq!(count(Group::FiveSix), 21);
        assert_eq!(count(Group::Total), 4);
        assert!(count(Group::Construction) >= 55);
    }

    #[test]
    fn simple_constructions_hold() {
        assert_eq!(check("n1").status, Status::Holds);
        let n8 = check("n8");
        assert_eq!(n8.status, Status::Holds, "{n8:?}");
    }

    #[test]
    fn sums_hold_identically() {
        for name in ["sum-l", "sum-m", "sum-n", "pentagons"] {
            assert_eq!(check(name).status, Status::Holds, "{name}");
        }
    }

    #[test]
    fn repaired_readings_are_labelled() {
        let n48 = check("n48");
        assert_eq!(n48.status, Status::HoldsRepaired);
        assert!(!n48.printed.holds);
        assert!(n48.note.is_some());
    }

    #[test]
    fn residuals_are_stable() {
        let t = EquationTable::builtin();
        let a = check_all(t, FormulaBook::builtin(), None).unwrap();
        let b = check_all(t, FormulaBook::builtin(), None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.summary.total, t.equations().len());
    }

    #[test]
    fn mutation_breaks_an_equation() {
        let t = EquationTable::builtin();
        let base = check_all(t, FormulaBook::builtin(), None).unwrap();
        let book = FormulaBook::builtin()
            .with_formula(Symbol::new(Family::N, 2), "2*(n*k*(k-2)/2)")
            .unwrap();
        let mutated = check_all(t, &book, None).unwrap();
        assert!(mutated.summary.fails > base.summary.fails);
    }

    #[test]
    fn numeric_spot_check_at_k4() {
        let t = EquationTable::builtin();
        let eq = t.get("l8").unwrap();
        let fs = FormulaBook::builtin()
            .evaluate(&BigInt::from(9), &BigInt::from(4))
            .unwrap();
        let six = fs.instantiate(&BigInt::zero()).unwrap();
        let value = |s: Symbol| {
            let v = match s.family {
                Family::P => fs.p[s.index - 3].clone(),
                Family::L => fs.l[s.index - 1].clone(),
                Family::M => fs.m[s.index - 1].clone(),
                Family::N => six[s.index - 1].clone(),
            };
            Some(BigRational::from_integer(v))
        };
        let r = t
            .numeric_residual(&eq.printed, &BigInt::from(9), &BigInt::from(4), &value)
            .unwrap();
        assert!(r.is_zero());
    }
}
