//! Isomorphism-class catalogs of small graphs, feasibility inside
//! srg(n,k,1,2), structural anchors and the coefficient tables used to
//! complete disconnected census counts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::canon::{
    build_lookup_table, canonical_code_unchecked, labeled_code, subset_code, CanonicalCode, LookupTable,
    MAX_TABLE_ORDER,
};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest common-neighbour count allowed inside a subgraph for adjacent and
/// non-adjacent pairs respectively.
pub const LAMBDA: usize = 1;
pub const MU: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub index: usize,
    pub code: CanonicalCode,
    pub edges: usize,
    pub connected: bool,
    /// Canonical codes of the connected components, sorted.
    pub components: Vec<CanonicalCode>,
    pub feasible: bool,
}

/// All isomorphism classes of one order, ordered by (edge count, canonical
/// code), with an O(1) labeled-code lookup.
#[derive(Debug, Clone)]
pub struct IsoCatalog {
    order: usize,
    classes: Vec<ClassInfo>,
    lookup: LookupTable,
}

/// Whether `g` can occur as an induced subgraph of an srg(n,k,1,2).
pub fn is_feasible(g: &Graph) -> bool {
    let m = g.order();
    (0..m).all(|u| {
        (u + 1..m).all(|v| {
            let bound = if g.has_edge(u, v) { LAMBDA } else { MU };
            g.common_neighbors(u, v) <= bound
        })
    })
}

pub fn build_catalog(m: usize) -> Result<IsoCatalog> {
    let lookup = build_lookup_table(m)?;
    let classes = lookup
        .classes()
        .iter()
        .enumerate()
        .map(|(index, &code)| {
            let g = code.to_graph();
            let comps = g.components();
            let mut components: Vec<CanonicalCode> = comps
                .iter()
                .map(|c| canonical_code_unchecked(&g.induced(c).expect("component vertices are valid")))
                .collect();
            components.sort();
            ClassInfo {
                index,
                code,
                edges: g.edge_count(),
                connected: comps.len() == 1,
                components,
                feasible: is_feasible(&g),
            }
        })
        .collect();
    Ok(IsoCatalog {
        order: m,
        classes,
        lookup,
    })
}

/// Shared catalog of order 1 to 6, built on first use.
pub fn catalog(m: usize) -> Result<&'static IsoCatalog> {
    static CATALOGS: [OnceLock<IsoCatalog>; MAX_TABLE_ORDER] = [const { OnceLock::new() }; MAX_TABLE_ORDER];
    if !(1..=MAX_TABLE_ORDER).contains(&m) {
        return Err(Error::CatalogOrder(m));
    }
    Ok(CATALOGS[m - 1].get_or_init(|| build_catalog(m).expect("order checked")))
}

impl IsoCatalog {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn lookup(&self) -> &LookupTable {
        &self.lookup
    }

    /// Class index of a labeled code on `order` vertices.
    #[inline]
    pub fn classify_code(&self, code: u32) -> usize {
        self.lookup.classify(code)
    }

    /// Class index of a graph of this catalog's order.
    pub fn classify(&self, g: &Graph) -> Result<usize> {
        if g.order() != self.order {
            return Err(Error::InvalidParams(format!(
                "graph of order {} classified against the order-{} catalog",
                g.order(),
                self.order
            )));
        }
        Ok(self.lookup.classify(labeled_code(g)))
    }

    pub fn feasible(&self) -> impl Iterator<Item = &ClassInfo> {
        self.classes.iter().filter(|c| c.feasible)
    }

    pub fn feasible_count(&self) -> usize {
        self.feasible().count()
    }

    pub fn representative(&self, index: usize) -> Graph {
        self.classes[index].code.to_graph()
    }
}

/// Order-six classes whose structure is pinned down by the constructions of
/// the counting relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anchors {
    /// Triangular prism: two triangles joined by a perfect matching.
    pub n1: usize,
    /// 4-cycle abcd with one apex on ab and one apex on bc.
    pub n2: usize,
    /// Prism minus one matching edge; its count is the free parameter.
    pub n3: usize,
    /// Induced 6-cycle.
    pub n12: usize,
}

fn find_anchor(cat: &IsoCatalog, name: &'static str, edges: &[(usize, usize)]) -> Result<usize> {
    let g = Graph::from_edges(6, edges)?;
    let i = cat.classify(&g)?;
    if cat.classes[i].feasible {
        Ok(i)
    } else {
        Err(Error::MissingAnchor(name))
    }
}

pub fn anchor_classes(cat: &IsoCatalog) -> Result<Anchors> {
    if cat.order != 6 {
        return Err(Error::CatalogOrder(cat.order));
    }
    let triangles = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)];
    let mut prism = triangles.to_vec();
    prism.extend([(0, 3), (1, 4), (2, 5)]);
    let mut prism_minus = triangles.to_vec();
    prism_minus.extend([(0, 3), (1, 4)]);
    let n2 = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1), (5, 1), (5, 2)];
    let c6 = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)];
    Ok(Anchors {
        n1: find_anchor(cat, "N1", &prism)?,
        n2: find_anchor(cat, "N2", &n2)?,
        n3: find_anchor(cat, "N3", &prism_minus)?,
        n12: find_anchor(cat, "N12", &c6)?,
    })
}

/// `deck[c][f]`: number of vertices of order-`m` class `f` whose deletion
/// leaves order-`(m-1)` class `c`. Indices refer to the full catalogs.
pub fn deck_matrix(m: usize) -> Result<Vec<Vec<u32>>> {
    if !(2..=MAX_TABLE_ORDER).contains(&m) {
        return Err(Error::CatalogOrder(m));
    }
    let big = catalog(m)?;
    let small = catalog(m - 1)?;
    let mut deck = vec![vec![0u32; big.len()]; small.len()];
    for (f, info) in big.classes.iter().enumerate() {
        let g = info.code.to_graph();
        for v in 0..m {
            let rest: Vec<usize> = (0..m).filter(|&u| u != v).collect();
            deck[small.classify_code(subset_code(&g, &rest))][f] += 1;
        }
    }
    Ok(deck)
}

/// A class of some order, addressed by its index in the full catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassRef {
    pub order: u8,
    pub class: u16,
}

impl ClassRef {
    pub fn new(order: usize, class: usize) -> Self {
        ClassRef {
            order: order as u8,
            class: class as u16,
        }
    }
}

/// Exact integer tables relating ordered class pairs `(A, B)` to the classes
/// that contain them.
///
/// * `split[(A,B)]` lists `(F, q)`: `F` of order `|A|+|B|` has `q` ordered
///   bipartitions of its vertex set into parts inducing `A` and `B`.
/// * `overlap[(A,B)]` lists `(W, r)`: `W` of order below `|A|+|B|` has `r`
///   ordered pairs `(S,T)` of vertex sets covering `W`, meeting in at least
///   one vertex, with `W[S]` in `A` and `W[T]` in `B`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoefficientTables {
    pub split: BTreeMap<(ClassRef, ClassRef), Vec<(ClassRef, u64)>>,
    pub overlap: BTreeMap<(ClassRef, ClassRef), Vec<(ClassRef, u64)>>,
}

const SPLIT_CSV: &str = include_str!("../data/split.csv");
const OVERLAP_CSV: &str = include_str!("../data/overlap.csv");
const SPLIT_HEADER: &str = "a_order,a_class,b_order,b_class,f_order,f_class,count";
const OVERLAP_HEADER: &str = "a_order,a_class,b_order,b_class,w_order,w_class,count";

fn subset_class(g: &Graph, mask: u32) -> Result<ClassRef> {
    let verts: Vec<usize> = (0..g.order()).filter(|&v| mask >> v & 1 == 1).collect();
    let cat = catalog(verts.len())?;
    Ok(ClassRef::new(verts.len(), cat.classify_code(subset_code(g, &verts))))
}

impl CoefficientTables {
    /// Recomputes both tables for all orders up to 6 by exhaustive
    /// enumeration.
    pub fn compute() -> Result<CoefficientTables> {
        let mut split: BTreeMap<(ClassRef, ClassRef), BTreeMap<ClassRef, u64>> = BTreeMap::new();
        let mut overlap: BTreeMap<(ClassRef, ClassRef), BTreeMap<ClassRef, u64>> = BTreeMap::new();
        for w in 1..=MAX_TABLE_ORDER {
            let cat = catalog(w)?;
            let full = (1u32 << w) - 1;
            for (idx, info) in cat.classes.iter().enumerate() {
                let g = info.code.to_graph();
                let here = ClassRef::new(w, idx);
                let mut class_of = vec![None; 1 << w];
                for mask in 1..=full {
                    class_of[mask as usize] = Some(subset_class(&g, mask)?);
                }
                let cls = |mask: u32| class_of[mask as usize].expect("nonempty");
                // ordered bipartitions into nonempty parts
                if w >= 2 {
                    for s in 1..full {
                        let key = (cls(s), cls(full & !s));
                        *split.entry(key).or_default().entry(here).or_default() += 1;
                    }
                }
                // covers by two overlapping parts whose sizes sum to at most 6
                for s in 1..=full {
                    let rest = full & !s;
                    // t = rest | u with u a nonempty subset of s
                    let mut u = s;
                    while u != 0 {
                        let t = rest | u;
                        if (s.count_ones() + t.count_ones()) as usize <= MAX_TABLE_ORDER {
                            let key = (cls(s), cls(t));
                            *overlap.entry(key).or_default().entry(here).or_default() += 1;
                        }
                        u = (u - 1) & s;
                    }
                }
            }
        }
        let flatten = |m: BTreeMap<(ClassRef, ClassRef), BTreeMap<ClassRef, u64>>| {
            m.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect()
        };
        Ok(CoefficientTables {
            split: flatten(split),
            overlap: flatten(overlap),
        })
    }

    /// The persisted tables shipped with the crate.
    pub fn builtin() -> &'static CoefficientTables {
        static TABLES: OnceLock<CoefficientTables> = OnceLock::new();
        TABLES.get_or_init(|| {
            CoefficientTables::from_csv(SPLIT_CSV, OVERLAP_CSV).expect("persisted coefficient tables are valid")
        })
    }

    pub fn split_csv(&self) -> String {
        to_csv(SPLIT_HEADER, &self.split)
    }

    pub fn overlap_csv(&self) -> String {
        to_csv(OVERLAP_HEADER, &self.overlap)
    }

    pub fn from_csv(split: &str, overlap: &str) -> Result<CoefficientTables> {
        Ok(CoefficientTables {
            split: from_csv(SPLIT_HEADER, split)?,
            overlap: from_csv(OVERLAP_HEADER, overlap)?,
        })
    }

    pub fn split(&self, a: ClassRef, b: ClassRef) -> &[(ClassRef, u64)] {
        self.split.get(&(a, b)).map_or(&[], Vec::as_slice)
    }

    pub fn overlap(&self, a: ClassRef, b: ClassRef) -> &[(ClassRef, u64)] {
        self.overlap.get(&(a, b)).map_or(&[], Vec::as_slice)
    }
}

type Table = BTreeMap<(ClassRef, ClassRef), Vec<(ClassRef, u64)>>;

fn to_csv(header: &str, table: &Table) -> String {
    let mut out = String::new();
    writeln!(out, "{header}").expect("writing to a string");
    for ((a, b), row) in table {
        for (f, c) in row {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                a.order, a.class, b.order, b.class, f.order, f.class, c
            )
            .expect("writing to a string");
        }
    }
    out
}

fn from_csv(header: &str, text: &str) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let found = reader.headers().map_err(|e| Error::Data(e.to_string()))?;
    if found.iter().collect::<Vec<_>>().join(",") != header {
        return Err(Error::Data(format!("unexpected coefficient table header: {found:?}")));
    }
    let mut table = Table::new();
    for rec in reader.deserialize::<(u8, u16, u8, u16, u8, u16, u64)>() {
        let (ao, ac, bo, bc, fo, fc, c) = rec.map_err(|e| Error::Data(e.to_string()))?;
        let r = |o, c| ClassRef { order: o, class: c };
        table.entry((r(ao, ac), r(bo, bc))).or_default().push((r(fo, fc), c));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinalities() {
        let expect = [(1, 1, 1), (2, 2, 2), (3, 4, 4), (4, 11, 9), (5, 34, 21), (6, 156, 62)];
        for (m, total, feasible) in expect {
            let c = catalog(m).unwrap();
            assert_eq!(c.len(), total, "order {m}");
            assert_eq!(c.feasible_count(), feasible, "order {m}");
        }
    }

    #[test]
    fn infeasible_order_four_classes() {
        let c = catalog(4).unwrap();
        let bad: Vec<usize> = c.classes().iter().filter(|x| !x.feasible).map(|x| x.edges).collect();
        // diamond and K4
        assert_eq!(bad, vec![5, 6]);
    }

    #[test]
    fn feasibility_is_hereditary() {
        let six = catalog(6).unwrap();
        let five = catalog(5).unwrap();
        let deck = deck_matrix(6).unwrap();
        for f in six.feasible() {
            for (c, row) in deck.iter().enumerate() {
                if row[f.index] > 0 {
                    assert!(five.classes()[c].feasible);
                }
            }
        }
    }

    #[test]
    fn anchors() {
        let cat = catalog(6).unwrap();
        let a = anchor_classes(cat).unwrap();
        assert_eq!(cat.classes()[a.n1].edges, 9);
        assert_eq!(cat.classes()[a.n3].edges, 8);
        assert_eq!(cat.classes()[a.n2].edges, 8);
        assert_eq!(cat.classes()[a.n12].edges, 6);
        assert!(cat.classes()[a.n12].connected);
        assert!(anchor_classes(catalog(5).unwrap()).is_err());
        // N3 has exactly one induced 4-cycle
        let g = cat.representative(a.n3);
        let c4 = catalog(4).unwrap().classify(&Graph::cycle(4).unwrap()).unwrap();
        let mut cycles = 0;
        for mask in 0u32..64 {
            if mask.count_ones() == 4 {
                let verts: Vec<usize> = (0..6).filter(|&v| mask >> v & 1 == 1).collect();
                if catalog(4).unwrap().classify_code(subset_code(&g, &verts)) == c4 {
                    cycles += 1;
                }
            }
        }
        assert_eq!(cycles, 1);
    }

    #[test]
    fn components_are_recorded() {
        let c = catalog(6).unwrap();
        let two_triangles = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let i = c.classify(&two_triangles).unwrap();
        assert!(!c.classes()[i].connected);
        assert_eq!(c.classes()[i].components.len(), 2);
        assert!(c.classify(&Graph::cycle(5).unwrap()).is_err());
    }

    #[test]
    fn split_and_overlap_examples() {
        let t = CoefficientTables::builtin();
        let k3 = ClassRef::new(3, catalog(3).unwrap().classify(&Graph::complete(3).unwrap()).unwrap());
        let cat6 = catalog(6).unwrap();
        let two_k3 = cat6
            .classify(&Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap())
            .unwrap();
        let c6 = cat6.classify(&Graph::cycle(6).unwrap()).unwrap();
        let q = |f: usize| {
            t.split(k3, k3)
                .iter()
                .find(|(x, _)| *x == ClassRef::new(6, f))
                .map_or(0, |(_, c)| *c)
        };
        assert_eq!(q(two_k3), 2);
        assert_eq!(q(c6), 0);

        let edge = ClassRef::new(2, 1);
        let p3 = ClassRef::new(3, catalog(3).unwrap().classify(&Graph::path(3).unwrap()).unwrap());
        // the pair (S, S) on a single edge counts too
        assert_eq!(t.overlap(edge, edge), &[(edge, 1), (p3, 2), (k3, 6)]);
    }

    #[test]
    fn overlap_sizes_are_bounded() {
        for ((a, b), row) in &CoefficientTables::builtin().overlap {
            for (w, _) in row {
                assert!(w.order < a.order + b.order);
                assert!(w.order >= a.order.max(b.order));
            }
        }
    }

    #[test]
    fn persisted_tables_regenerate_exactly() {
        let fresh = CoefficientTables::compute().unwrap();
        assert_eq!(fresh.split_csv(), SPLIT_CSV);
        assert_eq!(fresh.overlap_csv(), OVERLAP_CSV);
        assert_eq!(&fresh, CoefficientTables::builtin());
    }

    #[test]
    fn deterministic() {
        let a = build_catalog(6).unwrap();
        let b = build_catalog(6).unwrap();
        assert_eq!(a.classes(), b.classes());
    }
}
