//! Dense undirected graphs with bit-vector adjacency rows.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported vertex count; rows are at most 16 machine words.
pub const MAX_ORDER: usize = 1024;

/// Maximum number of 64-bit words in one adjacency row.
pub const MAX_WORDS: usize = MAX_ORDER / 64;

/// A simple undirected graph on vertices `0..order`.
///
/// Row `u` holds a bit for every neighbour of `u`. Rows are kept symmetric and
/// the diagonal is always clear.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    order: usize,
    words: usize,
    rows: Vec<u64>,
}

/// Parameters of a strongly regular graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SrgParams {
    pub n: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

impl fmt::Display for SrgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "srg({},{},{},{})", self.n, self.k, self.lambda, self.mu)
    }
}

impl Graph {
    /// The edgeless graph on `order` vertices.
    pub fn new(order: usize) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::OrderOutOfRange(order));
        }
        let words = order.div_ceil(64);
        Ok(Graph {
            order,
            words,
            rows: vec![0; order * words],
        })
    }

    pub fn from_edges(order: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(order)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(order: usize) -> Result<Self> {
        let mut g = Graph::new(order)?;
        for v in 1..order {
            for u in 0..v {
                g.set(u, v);
            }
        }
        Ok(g)
    }

    pub fn cycle(order: usize) -> Result<Self> {
        let mut g = Graph::new(order)?;
        if order >= 3 {
            for v in 0..order {
                g.set(v, (v + 1) % order);
            }
        }
        Ok(g)
    }

    pub fn path(order: usize) -> Result<Self> {
        let mut g = Graph::new(order)?;
        for v in 1..order {
            g.set(v - 1, v);
        }
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of 64-bit words per adjacency row.
    #[inline]
    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.set(u, v);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.rows[u * self.words + v / 64] &= !(1 << (v % 64));
        self.rows[v * self.words + u / 64] &= !(1 << (u % 64));
        Ok(())
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.order {
            Err(Error::VertexOutOfRange {
                vertex: v,
                order: self.order,
            })
        } else {
            Ok(())
        }
    }

    pub fn degree(&self, u: usize) -> usize {
        popcount(self.row(u))
    }

    pub fn neighbors(&self, u: usize) -> BitIter<'_> {
        BitIter::new(self.row(u))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.order).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// The subgraph induced on `subset`, with vertex `i` of the result being
    /// `subset[i]`.
    pub fn induced(&self, subset: &[usize]) -> Result<Graph> {
        let mut seen = vec![false; self.order];
        for &v in subset {
            self.check_vertex(v)?;
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::DuplicateVertex(v));
            }
        }
        let mut g = Graph::new(subset.len())?;
        for (j, &v) in subset.iter().enumerate() {
            for (i, &u) in subset[..j].iter().enumerate() {
                if self.has_edge(u, v) {
                    g.set(i, j);
                }
            }
        }
        Ok(g)
    }

    /// Relabels vertices: old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.order {
            return Err(Error::InvalidParams(format!(
                "permutation of length {} for a graph of order {}",
                perm.len(),
                self.order
            )));
        }
        let mut seen = vec![false; self.order];
        for &p in perm {
            self.check_vertex(p)?;
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::DuplicateVertex(p));
            }
        }
        let mut g = Graph::new(self.order)?;
        for (u, v) in self.edges() {
            g.set(perm[u], perm[v]);
        }
        Ok(g)
    }

    pub fn is_connected(&self) -> bool {
        if self.order == 0 {
            return true;
        }
        let mut seen = vec![0u64; self.words];
        let mut frontier = vec![0usize];
        seen[0] |= 1;
        while let Some(u) = frontier.pop() {
            for v in self.neighbors(u) {
                if seen[v / 64] >> (v % 64) & 1 == 0 {
                    seen[v / 64] |= 1 << (v % 64);
                    frontier.push(v);
                }
            }
        }
        popcount(&seen) == self.order
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.order];
        let mut out = Vec::new();
        for start in 0..self.order {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                i += 1;
                for v in self.neighbors(u) {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        members.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Returns the parameters if the graph is strongly regular.
    ///
    /// Complete and edgeless graphs have no non-adjacent (resp. adjacent)
    /// pairs; the missing parameter is reported as 0.
    pub fn is_srg(&self) -> Option<SrgParams> {
        let n = self.order;
        if n < 3 {
            return None;
        }
        let k = self.degree(0);
        if (1..n).any(|u| self.degree(u) != k) {
            return None;
        }
        let mut lambda = None;
        let mut mu = None;
        for v in 1..n {
            for u in 0..v {
                let c = self.common_neighbors(u, v);
                let slot = if self.has_edge(u, v) { &mut lambda } else { &mut mu };
                match *slot {
                    None => *slot = Some(c),
                    Some(x) if x != c => return None,
                    _ => {}
                }
            }
        }
        Some(SrgParams {
            n,
            k,
            lambda: lambda.unwrap_or(0),
            mu: mu.unwrap_or(0),
        })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("order", &self.order)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

#[inline]
pub(crate) fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// Iterator over the positions of set bits in a word slice.
pub struct BitIter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl<'a> BitIter<'a> {
    pub fn new(words: &'a [u64]) -> Self {
        BitIter {
            words,
            index: 0,
            current: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn induced_empty_subset() {
        let g = Graph::complete(5).unwrap();
        let h = g.induced(&[]).unwrap();
        assert_eq!(h.order(), 0);
        assert_eq!(h.edge_count(), 0);
    }

    #[test]
    fn induced_keeps_subset_order() {
        let g = Graph::path(4).unwrap();
        let h = g.induced(&[3, 1, 2]).unwrap();
        assert!(h.has_edge(0, 2));
        assert!(h.has_edge(1, 2));
        assert!(!h.has_edge(0, 1));
    }

    #[test]
    fn induced_rejects_bad_subsets() {
        let g = Graph::path(4).unwrap();
        assert!(matches!(g.induced(&[0, 0]), Err(Error::DuplicateVertex(0))));
        assert!(matches!(
            g.induced(&[4]),
            Err(Error::VertexOutOfRange { vertex: 4, order: 4 })
        ));
    }

    #[test]
    fn adjacency_is_symmetric() {
        let mut g = Graph::new(130).unwrap();
        g.add_edge(3, 129).unwrap();
        g.add_edge(64, 65).unwrap();
        assert!(g.has_edge(129, 3) && g.has_edge(3, 129));
        assert!(g.has_edge(65, 64));
        assert_eq!(g.edge_count(), 2);
        assert!(matches!(g.add_edge(7, 7), Err(Error::SelfLoop(7))));
        g.remove_edge(129, 3).unwrap();
        assert!(!g.has_edge(3, 129));
    }

    #[test]
    fn order_cap() {
        assert!(Graph::new(MAX_ORDER).is_ok());
        assert!(matches!(Graph::new(MAX_ORDER + 1), Err(Error::OrderOutOfRange(_))));
    }

    #[test]
    fn path_is_not_srg() {
        assert_eq!(Graph::path(4).unwrap().is_srg(), None);
    }

    #[test]
    fn petersen_is_srg_10_3_0_1() {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, i + 5));
        }
        let g = Graph::from_edges(10, &edges).unwrap();
        assert_eq!(
            g.is_srg(),
            Some(SrgParams {
                n: 10,
                k: 3,
                lambda: 0,
                mu: 1
            })
        );
    }

    #[test]
    fn components_and_connectivity() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!g.is_connected());
        assert_eq!(g.components(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert!(Graph::cycle(6).unwrap().is_connected());
    }
}
