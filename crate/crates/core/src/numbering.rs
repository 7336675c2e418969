//! Recovers the subscripts used by the formula tables (`l1..l9`, `m1..m21`,
//! `n1..n62`) as catalog classes.
//!
//! The one-vertex extension relations state `l_i (n-4) = sum_j c_ij m_j`
//! and `m_j (n-5) = sum_t d_jt n_t`, where `c_ij` is the number of vertices
//! of class `m_j` whose deletion leaves class `l_i`. The same matrices are
//! computed from the catalog. Colour refinement on the layered weighted
//! graph (four-, five- and six-vertex classes, edges weighted by these
//! multiplicities) run jointly on both sides matches subscripts to classes;
//! a colour shared by several classes is a tie group.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::catalog::{anchor_classes, catalog, deck_matrix, Anchors};
use crate::error::{Error, Result};
use crate::expr::{Atom, Expr, Family, Symbol};
use crate::identities::{Equation, EquationTable, Group};
use crate::poly::Poly;

/// Coefficients of the count symbols in the right-hand side of `rel`, which
/// must be a linear combination with constant coefficients.
pub fn linear_coefficients(rhs: &Expr) -> Result<BTreeMap<Symbol, BigRational>> {
    let eval = |assign: &dyn Fn(Symbol) -> i64, n: i64, k: i64| -> Result<BigRational> {
        let p = rhs.eval(&mut |a| match a {
            Atom::N => Ok(Poly::integer(n)),
            Atom::K => Ok(Poly::integer(k)),
            Atom::Count(s) => Ok(Poly::integer(assign(s))),
            other => Err(Error::Expr(format!("{other:?} in an extension relation"))),
        })?;
        p.as_constant().ok_or_else(|| Error::Expr("non-constant value".into()))
    };
    let mut out = BTreeMap::new();
    for (n, k) in [(9, 4), (99, 14)] {
        let base = eval(&|_| 0, n, k)?;
        if !base.is_zero() {
            return Err(Error::Expr("extension relation has a constant term".into()));
        }
        for s in rhs.symbols() {
            let c = eval(&|x| (x == s) as i64, n, k)?;
            match out.get(&s) {
                Some(prev) if *prev != c => {
                    return Err(Error::Expr(format!("coefficient of {s} depends on the parameters")));
                }
                _ => {
                    out.insert(s, c);
                }
            }
        }
    }
    Ok(out)
}

/// The reading used to derive multiplicities: the repaired one when the
/// table records one.
fn effective(eq: &Equation) -> &Expr {
    &eq.repaired.as_ref().unwrap_or(&eq.printed).rhs
}

/// Extension matrix `[row subscript - 1][column subscript - 1]` for the
/// given group.
pub fn extension_matrix(table: &EquationTable, group: Group) -> Result<Vec<Vec<u32>>> {
    let (rows, cols) = match group {
        Group::FourFive => (Family::L, Family::M),
        Group::FiveSix => (Family::M, Family::N),
        _ => return Err(Error::Data(format!("{group:?} relations are not extension relations"))),
    };
    let mut mat = vec![vec![0u32; cols.len()]; rows.len()];
    for i in rows.indices() {
        let name = format!("{}{}", rows.prefix(), i);
        let eq = table
            .equations()
            .iter()
            .find(|e| e.group == group && e.name == name)
            .ok_or_else(|| Error::Data(format!("no extension relation for {name}")))?;
        for (s, c) in linear_coefficients(effective(eq))? {
            if s.family != cols {
                return Err(Error::Data(format!("{name} refers to {s}")));
            }
            let v = c
                .to_integer()
                .to_u32()
                .filter(|_| c.is_integer())
                .ok_or_else(|| Error::Data(format!("{name}: coefficient {c} of {s}")))?;
            mat[i - 1][s.index - 1] = v;
        }
    }
    Ok(mat)
}

type Node = (u8, usize);

struct Layered {
    nodes: Vec<Node>,
    adj: BTreeMap<Node, Vec<(u32, Node)>>,
}

fn layered(a: &[Vec<u32>], b: &[Vec<u32>]) -> Layered {
    let mut nodes = Vec::new();
    nodes.extend((0..a.len()).map(|i| (4u8, i)));
    nodes.extend((0..b.len()).map(|j| (5u8, j)));
    nodes.extend((0..b.first().map_or(0, Vec::len)).map(|t| (6u8, t)));
    let mut adj: BTreeMap<Node, Vec<(u32, Node)>> = nodes.iter().map(|&x| (x, Vec::new())).collect();
    let mut link = |x: Node, y: Node, w: u32| {
        if w > 0 {
            adj.get_mut(&x).expect("node").push((w, y));
            adj.get_mut(&y).expect("node").push((w, x));
        }
    };
    for (i, row) in a.iter().enumerate() {
        for (j, &w) in row.iter().enumerate() {
            link((4, i), (5, j), w);
        }
    }
    for (j, row) in b.iter().enumerate() {
        for (t, &w) in row.iter().enumerate() {
            link((5, j), (6, t), w);
        }
    }
    Layered { nodes, adj }
}

/// Joint colour refinement of two layered graphs; returns the stable colour
/// of every node on each side.
/// A node's colour with the sorted (weight, colour) pairs of its neighbours.
type Signature = (usize, Vec<(u32, usize)>);

fn refine(sides: [&Layered; 2]) -> [BTreeMap<Node, usize>; 2] {
    let mut colour: [BTreeMap<Node, usize>; 2] = sides.map(|s| s.nodes.iter().map(|&x| (x, x.0 as usize)).collect());
    let mut classes = 3;
    loop {
        let mut sigs: [BTreeMap<Node, Signature>; 2] = [BTreeMap::new(), BTreeMap::new()];
        for (side, s) in sides.iter().enumerate() {
            for &x in &s.nodes {
                let mut nb: Vec<(u32, usize)> = s.adj[&x].iter().map(|&(w, y)| (w, colour[side][&y])).collect();
                nb.sort_unstable();
                sigs[side].insert(x, (colour[side][&x], nb));
            }
        }
        let mut ids: BTreeMap<&Signature, usize> = BTreeMap::new();
        for s in &sigs {
            for sig in s.values() {
                ids.entry(sig).or_insert(0);
            }
        }
        for (i, v) in ids.values_mut().enumerate() {
            *v = i;
        }
        let next: [BTreeMap<Node, usize>; 2] =
            [0, 1].map(|side| sigs[side].iter().map(|(&x, sig)| (x, ids[sig])).collect());
        let count = ids.len();
        colour = next;
        if count == classes {
            return colour;
        }
        classes = count;
    }
}

/// Catalog classes matched to each subscript.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    /// `l[i - 1]`: order-4 catalog indices carrying the colour of `l_i`.
    pub l: Vec<Vec<usize>>,
    pub m: Vec<Vec<usize>>,
    pub n: Vec<Vec<usize>>,
    /// Both sides produced the same colour histogram.
    pub consistent: bool,
    /// The structural anchors land on the matching subscripts.
    pub anchors_agree: bool,
}

impl Assignment {
    fn family(&self, f: Family) -> Option<&[Vec<usize>]> {
        match f {
            Family::L => Some(&self.l),
            Family::M => Some(&self.m),
            Family::N => Some(&self.n),
            Family::P => None,
        }
    }

    /// The unique class for a subscript, if the refinement isolated it.
    pub fn class_of(&self, s: Symbol) -> Option<usize> {
        match self.family(s.family)?.get(s.index - 1)?.as_slice() {
            [c] => Some(*c),
            _ => None,
        }
    }

    pub fn classes_of(&self, s: Symbol) -> &[usize] {
        self.family(s.family)
            .and_then(|f| f.get(s.index - 1))
            .map_or(&[], Vec::as_slice)
    }

    /// Whether every subscript is matched to exactly one class.
    pub fn is_complete(&self) -> bool {
        [&self.l, &self.m, &self.n]
            .iter()
            .all(|f| f.iter().all(|c| c.len() == 1))
    }
}

/// Matches subscripts to catalog classes from the extension relations of
/// `table` and the catalog's deletion multiplicities.
pub fn assign(table: &EquationTable) -> Result<Assignment> {
    let e45 = extension_matrix(table, Group::FourFive)?;
    let e56 = extension_matrix(table, Group::FiveSix)?;
    let feasible = |m: usize| -> Result<Vec<usize>> { Ok(catalog(m)?.feasible().map(|c| c.index).collect()) };
    let (f4, f5, f6) = (feasible(4)?, feasible(5)?, feasible(6)?);
    let restrict = |deck: Vec<Vec<u32>>, rows: &[usize], cols: &[usize]| -> Vec<Vec<u32>> {
        rows.iter()
            .map(|&r| cols.iter().map(|&c| deck[r][c]).collect())
            .collect()
    };
    let d45 = restrict(deck_matrix(5)?, &f4, &f5);
    let d56 = restrict(deck_matrix(6)?, &f5, &f6);
    if (e45.len(), e45[0].len(), e56[0].len()) != (d45.len(), d45[0].len(), d56[0].len()) {
        return Err(Error::Data(
            "extension matrices do not match the feasible catalogs".into(),
        ));
    }
    let paper = layered(&e45, &e56);
    let ours = layered(&d45, &d56);
    let [cp, co] = refine([&paper, &ours]);
    let mut by_colour: BTreeMap<usize, Vec<Node>> = BTreeMap::new();
    for (&x, &c) in &co {
        by_colour.entry(c).or_default().push(x);
    }
    let histogram = |side: &BTreeMap<Node, usize>| {
        let mut h: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in side.values() {
            *h.entry(c).or_default() += 1;
        }
        h
    };
    let consistent = histogram(&cp) == histogram(&co);
    let layer = |order: u8, len: usize, feasible: &[usize]| -> Vec<Vec<usize>> {
        (0..len)
            .map(|i| {
                by_colour
                    .get(&cp[&(order, i)])
                    .map(|v| v.iter().map(|&(_, j)| feasible[j]).collect())
                    .unwrap_or_default()
            })
            .collect()
    };
    let mut out = Assignment {
        l: layer(4, f4.len(), &f4),
        m: layer(5, f5.len(), &f5),
        n: layer(6, f6.len(), &f6),
        consistent,
        anchors_agree: false,
    };
    let a: Anchors = anchor_classes(catalog(6)?)?;
    out.anchors_agree = [(1, a.n1), (2, a.n2), (3, a.n3), (12, a.n12)]
        .iter()
        .all(|&(i, c)| out.class_of(Symbol::new(Family::N, i)) == Some(c));
    Ok(out)
}

/// Counts by subscript from full censuses of orders 4, 5 and 6.
pub fn counts_by_symbol(
    assignment: &Assignment,
    c4: &[u64],
    c5: &[u64],
    c6: &[u64],
) -> BTreeMap<Symbol, Option<BigInt>> {
    let mut out = BTreeMap::new();
    for (family, counts) in [(Family::L, c4), (Family::M, c5), (Family::N, c6)] {
        for i in family.indices() {
            let s = Symbol::new(family, i);
            out.insert(s, assignment.class_of(s).map(|c| BigInt::from(counts[c])));
        }
    }
    out
}
