//! Canonical forms and classification tables for small graphs.
//!
//! Two bit layouts are used for the upper triangle of an adjacency matrix:
//!
//! * **labeled codes** list the pairs in column-major order
//!   `(0,1), (0,2), (1,2), (0,3), ...` with the first pair in the least
//!   significant bit. Appending a vertex appends a contiguous block of bits,
//!   which lets enumeration maintain the code of a growing subset
//!   incrementally. This is also the order graph6 uses.
//! * **canonical codes** list the pairs row by row
//!   `(0,1), (0,2), ..., (0,m-1), (1,2), ...` with the first pair in the most
//!   significant bit, minimised over all vertex permutations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MIN_CANON_ORDER: usize = 3;
pub const MAX_CANON_ORDER: usize = 8;
/// Largest order for which a full labeled-code table is built.
pub const MAX_TABLE_ORDER: usize = 6;

/// Number of vertex pairs on `m` vertices.
#[inline]
pub const fn pair_count(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// Bit position of the pair `{i, j}` (`i < j`) in a labeled code.
#[inline]
pub const fn colex_pair(i: usize, j: usize) -> usize {
    j * (j - 1) / 2 + i
}

/// Minimal row-major encoding of an isomorphism class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalCode {
    pub order: u8,
    pub code: u32,
}

impl CanonicalCode {
    pub fn edge_count(&self) -> u32 {
        self.code.count_ones()
    }

    /// Rebuilds a representative graph of the class.
    pub fn to_graph(&self) -> Graph {
        let m = self.order as usize;
        let total = pair_count(m);
        let mut g = Graph::new(m).expect("canonical orders are small");
        let mut bit = total;
        for i in 0..m {
            for j in i + 1..m {
                bit -= 1;
                if self.code >> bit & 1 == 1 {
                    g.add_edge(i, j).expect("in range");
                }
            }
        }
        g
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = pair_count(self.order as usize).div_ceil(4).max(1);
        write!(f, "{:0width$x}", self.code, width = width)
    }
}

/// Row-major, most-significant-first code of `g` with vertex `v` placed at
/// position `pos[v]`.
fn row_major_code(m: usize, edges: &[(usize, usize)], pos: &[usize]) -> u32 {
    let total = pair_count(m);
    let mut code = 0u32;
    for &(u, v) in edges {
        let (a, b) = if pos[u] < pos[v] {
            (pos[u], pos[v])
        } else {
            (pos[v], pos[u])
        };
        // index of (a,b) in row-major order
        let idx = a * (2 * m - a - 1) / 2 + (b - a - 1);
        code |= 1 << (total - 1 - idx);
    }
    code
}

fn colex_code(edges: &[(usize, usize)], pos: &[usize]) -> u32 {
    let mut code = 0u32;
    for &(u, v) in edges {
        let (a, b) = if pos[u] < pos[v] {
            (pos[u], pos[v])
        } else {
            (pos[v], pos[u])
        };
        code |= 1 << colex_pair(a, b);
    }
    code
}

/// Calls `f` with every permutation of `0..m` (Heap's algorithm).
pub(crate) fn for_each_permutation(m: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..m).collect();
    let mut c = vec![0usize; m];
    f(&perm);
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Canonical code of a graph on 3 to 8 vertices by exhaustive permutation
/// minimisation.
pub fn canonical_code(g: &Graph) -> Result<CanonicalCode> {
    let m = g.order();
    if !(MIN_CANON_ORDER..=MAX_CANON_ORDER).contains(&m) {
        return Err(Error::CanonicalOrder {
            got: m,
            min: MIN_CANON_ORDER,
            max: MAX_CANON_ORDER,
        });
    }
    Ok(canonical_code_unchecked(g))
}

/// Same as [`canonical_code`] without the lower order bound; used for the
/// trivial catalogs of orders 1 and 2.
pub(crate) fn canonical_code_unchecked(g: &Graph) -> CanonicalCode {
    let m = g.order();
    debug_assert!(m <= MAX_CANON_ORDER);
    let edges: Vec<_> = g.edges().collect();
    let mut best = u32::MAX;
    for_each_permutation(m, |perm| {
        best = best.min(row_major_code(m, &edges, perm));
    });
    if m == 0 {
        best = 0;
    }
    CanonicalCode {
        order: m as u8,
        code: best,
    }
}

/// Labeled code of `g` in the column-major layout.
pub fn labeled_code(g: &Graph) -> u32 {
    assert!(pair_count(g.order()) <= 32, "labeled codes need at most 8 vertices");
    let mut code = 0u32;
    for (u, v) in g.edges() {
        code |= 1 << colex_pair(u, v);
    }
    code
}

/// Labeled code of the subgraph of `g` induced on `subset` (in that order).
#[inline]
pub fn subset_code(g: &Graph, subset: &[usize]) -> u32 {
    let mut code = 0u32;
    for j in 1..subset.len() {
        let row = g.row(subset[j]);
        for (i, &u) in subset[..j].iter().enumerate() {
            code |= ((row[u / 64] >> (u % 64) & 1) as u32) << colex_pair(i, j);
        }
    }
    code
}

/// Graph on `m` vertices from a labeled code.
pub fn graph_from_labeled_code(m: usize, code: u32) -> Graph {
    let mut g = Graph::new(m).expect("small order");
    for j in 1..m {
        for i in 0..j {
            if code >> colex_pair(i, j) & 1 == 1 {
                g.add_edge(i, j).expect("in range");
            }
        }
    }
    g
}

/// Maps every labeled code on `order` vertices to its isomorphism class.
///
/// Classes are numbered by (edge count, canonical code), ascending.
#[derive(Clone)]
pub struct LookupTable {
    order: usize,
    classes: Vec<CanonicalCode>,
    index: Vec<u16>,
}

impl fmt::Debug for LookupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LookupTable")
            .field("order", &self.order)
            .field("classes", &self.classes.len())
            .finish()
    }
}

impl LookupTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn classes(&self) -> &[CanonicalCode] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Class index of a labeled code.
    #[inline]
    pub fn classify(&self, code: u32) -> usize {
        self.index[code as usize] as usize
    }

    pub fn class_of(&self, code: CanonicalCode) -> Option<usize> {
        self.classes.iter().position(|&c| c == code)
    }
}

/// Builds the labeled-code table for orders 1 to 6.
pub fn build_lookup_table(m: usize) -> Result<LookupTable> {
    if !(1..=MAX_TABLE_ORDER).contains(&m) {
        return Err(Error::CatalogOrder(m));
    }
    const UNSET: u32 = u32::MAX;
    let size = 1usize << pair_count(m);
    // first pass: labeled code -> canonical code
    let mut canon = vec![UNSET; size];
    let mut classes = Vec::new();
    for code in 0..size {
        if canon[code] != UNSET {
            continue;
        }
        let g = graph_from_labeled_code(m, code as u32);
        let edges: Vec<_> = g.edges().collect();
        let mut orbit = Vec::new();
        let mut best = u32::MAX;
        for_each_permutation(m, |perm| {
            orbit.push(colex_code(&edges, perm));
            best = best.min(row_major_code(m, &edges, perm));
        });
        if m == 1 {
            best = 0;
        }
        for c in orbit {
            canon[c as usize] = best;
        }
        classes.push(CanonicalCode {
            order: m as u8,
            code: best,
        });
    }
    classes.sort_by_key(|c| (c.edge_count(), c.code));
    let index = canon
        .iter()
        .map(|&c| {
            classes
                .binary_search_by_key(&(c.count_ones(), c), |x| (x.edge_count(), x.code))
                .expect("every canonical code was registered") as u16
        })
        .collect();
    Ok(LookupTable {
        order: m,
        classes,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_has_all_bits_set() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(canonical_code(&k3).unwrap().code, 0b111);
    }

    #[test]
    fn empty_graph_code_is_zero() {
        let e6 = Graph::new(6).unwrap();
        assert_eq!(canonical_code(&e6).unwrap().code, 0);
    }

    #[test]
    fn relabeled_paths_agree() {
        // a-b-c and b-a-c
        let p = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let q = Graph::from_edges(3, &[(1, 0), (0, 2)]).unwrap();
        assert_eq!(canonical_code(&p).unwrap(), canonical_code(&q).unwrap());
    }

    #[test]
    fn order_bounds() {
        assert!(canonical_code(&Graph::new(2).unwrap()).is_err());
        assert!(canonical_code(&Graph::new(9).unwrap()).is_err());
        assert!(canonical_code(&Graph::cycle(8).unwrap()).is_ok());
    }

    #[test]
    fn table_sizes() {
        for (m, entries, classes) in [(3, 8, 4), (4, 64, 11), (5, 1024, 34), (6, 32768, 156)] {
            let t = build_lookup_table(m).unwrap();
            assert_eq!(t.len(), entries, "order {m}");
            assert_eq!(t.classes().len(), classes, "order {m}");
        }
        assert_eq!(build_lookup_table(1).unwrap().classes().len(), 1);
        assert_eq!(build_lookup_table(2).unwrap().classes().len(), 2);
        assert!(build_lookup_table(7).is_err());
    }

    #[test]
    fn representative_round_trips() {
        let t = build_lookup_table(5).unwrap();
        for (i, c) in t.classes().iter().enumerate() {
            let g = c.to_graph();
            assert_eq!(canonical_code(&g).unwrap(), *c);
            assert_eq!(t.classify(labeled_code(&g)), i);
        }
    }

    #[test]
    fn heap_visits_every_permutation_once() {
        let mut seen = std::collections::HashSet::new();
        for_each_permutation(5, |p| {
            assert!(seen.insert(p.to_vec()));
        });
        assert_eq!(seen.len(), 120);
    }

    #[test]
    fn subset_code_matches_induced() {
        let g = Graph::from_edges(7, &[(0, 3), (3, 6), (6, 1), (1, 0), (2, 5)]).unwrap();
        let subset = [6, 0, 3, 1];
        assert_eq!(subset_code(&g, &subset), labeled_code(&g.induced(&subset).unwrap()));
    }
}
