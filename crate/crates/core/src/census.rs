//! Induced-subgraph censuses: brute force over all vertex subsets, ESU
//! enumeration of connected subsets, and exact completion of the
//! disconnected classes from lower-order counts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{colex_pair, MAX_TABLE_ORDER};
use crate::catalog::{catalog, ClassRef, CoefficientTables, IsoCatalog};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default brute-force budget in subsets.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;
/// Budget with `--long`; admits order 5 on 243 vertices.
pub const LONG_BUDGET: u128 = 10_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "brute")]
    Brute,
    #[serde(rename = "esu+completion")]
    EsuCompletion,
}

/// Exact per-class counts over the full catalog of one order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusResult {
    pub host: String,
    pub order: usize,
    pub method: Method,
    #[serde(with = "u64_strings")]
    pub counts: Vec<u64>,
}

impl CensusResult {
    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }
}

/// Serde adapter writing `u64` vectors as decimal strings.
pub mod u64_strings {
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[u64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(u64::to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u64>, D::Error> {
        Vec::<String>::deserialize(d)?
            .into_iter()
            .map(|x| x.parse().map_err(|_| D::Error::custom(format!("invalid count `{x}`"))))
            .collect()
    }
}

/// `C(n, r)` in 128 bits.
pub fn binomial(n: u128, r: u128) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Largest number of subsets brute force may visit.
    pub budget: u128,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            threads: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Runs `f` on a pool with the requested number of threads.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::InvalidParams(format!("cannot start {t} threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn check_order(m: usize) -> Result<&'static IsoCatalog> {
    if !(1..=MAX_TABLE_ORDER).contains(&m) {
        return Err(Error::CatalogOrder(m));
    }
    catalog(m)
}

fn merge(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

#[inline]
fn adjacent(rows: &[u64], words: usize, u: usize, v: usize) -> u64 {
    rows[u * words + v / 64] >> (v % 64) & 1
}

/// Counts every `m`-subset of `g` by class, visiting subsets grouped by
/// their largest vertex.
pub fn brute_census(g: &Graph, m: usize, opts: CensusOptions) -> Result<Vec<u64>> {
    let cat = check_order(m)?;
    let n = g.order();
    let subsets = binomial(n as u128, m as u128);
    if subsets > opts.budget {
        return Err(Error::BudgetExceeded {
            subsets,
            budget: opts.budget,
        });
    }
    let words = g.words();
    let rows: Vec<u64> = (0..n).flat_map(|u| g.row(u).iter().copied()).collect();
    let classes = cat.len();
    with_threads(opts.threads, || {
        (0..n)
            .into_par_iter()
            .fold(
                || vec![0u64; classes],
                |mut counts, top| {
                    let mut verts = [0usize; MAX_TABLE_ORDER];
                    verts[0] = top;
                    brute_rec(&rows, words, m, 1, &mut verts, 0, top, cat, &mut counts);
                    counts
                },
            )
            .reduce(|| vec![0u64; classes], merge)
    })
}

#[allow(clippy::too_many_arguments)]
fn brute_rec(
    rows: &[u64],
    words: usize,
    m: usize,
    depth: usize,
    verts: &mut [usize; MAX_TABLE_ORDER],
    code: u32,
    limit: usize,
    cat: &IsoCatalog,
    counts: &mut [u64],
) {
    if depth == m {
        counts[cat.classify_code(code)] += 1;
        return;
    }
    let remaining = m - depth;
    if limit < remaining {
        return;
    }
    for u in (remaining - 1..limit).rev() {
        let mut c = code;
        for (i, &w) in verts[..depth].iter().enumerate() {
            c |= (adjacent(rows, words, w, u) as u32) << colex_pair(i, depth);
        }
        verts[depth] = u;
        brute_rec(rows, words, m, depth + 1, verts, c, u, cat, counts);
    }
}

/// Counts every connected `m`-subset of `g` by class (ESU enumeration).
/// Disconnected classes are reported as zero.
pub fn esu_census(g: &Graph, m: usize, threads: Option<usize>) -> Result<Vec<u64>> {
    let cat = check_order(m)?;
    let words = g.words();
    let width = [1usize, 2, 4, 8, 16]
        .into_iter()
        .find(|&w| w >= words)
        .expect("hosts have at most 16 words per row");
    with_threads(threads, || match width {
        1 => esu_all::<1>(g, m, cat),
        2 => esu_all::<2>(g, m, cat),
        4 => esu_all::<4>(g, m, cat),
        8 => esu_all::<8>(g, m, cat),
        _ => esu_all::<16>(g, m, cat),
    })
}

type Bits<const W: usize> = [u64; W];

#[inline]
fn has<const W: usize>(b: &Bits<W>, v: usize) -> bool {
    b[v / 64] >> (v % 64) & 1 == 1
}

#[inline]
fn or<const W: usize>(a: &Bits<W>, b: &Bits<W>) -> Bits<W> {
    std::array::from_fn(|i| a[i] | b[i])
}

fn esu_all<const W: usize>(g: &Graph, m: usize, cat: &IsoCatalog) -> Vec<u64> {
    let n = g.order();
    let rows: Vec<Bits<W>> = (0..n)
        .map(|u| {
            let mut r = [0u64; W];
            r[..g.words()].copy_from_slice(g.row(u));
            r
        })
        .collect();
    let classes = cat.len();
    (0..n)
        .into_par_iter()
        .fold(
            || vec![0u64; classes],
            |mut counts, v| {
                esu_root(&rows, m, v, cat, &mut counts);
                counts
            },
        )
        .reduce(|| vec![0u64; classes], merge)
}

fn esu_root<const W: usize>(rows: &[Bits<W>], m: usize, v: usize, cat: &IsoCatalog, counts: &mut [u64]) {
    if m == 1 {
        counts[0] += 1;
        return;
    }
    // vertices above v
    let above: Bits<W> = std::array::from_fn(|i| {
        let lo = i * 64;
        if v < lo {
            u64::MAX
        } else if v + 1 >= lo + 64 {
            0
        } else {
            u64::MAX << (v + 1 - lo)
        }
    });
    let mut closed = rows[v];
    closed[v / 64] |= 1 << (v % 64);
    let ext: Bits<W> = std::array::from_fn(|i| rows[v][i] & above[i]);
    let mut sub = [0usize; MAX_TABLE_ORDER];
    sub[0] = v;
    esu_extend(rows, m, 1, &mut sub, 0, ext, &closed, &above, cat, counts);
}

#[allow(clippy::too_many_arguments)]
fn esu_extend<const W: usize>(
    rows: &[Bits<W>],
    m: usize,
    depth: usize,
    sub: &mut [usize; MAX_TABLE_ORDER],
    code: u32,
    mut ext: Bits<W>,
    closed: &Bits<W>,
    above: &Bits<W>,
    cat: &IsoCatalog,
    counts: &mut [u64],
) {
    for word in 0..W {
        while ext[word] != 0 {
            let bit = ext[word].trailing_zeros() as usize;
            ext[word] &= ext[word] - 1;
            let w = word * 64 + bit;
            let row = &rows[w];
            let mut c = code;
            for (i, &u) in sub[..depth].iter().enumerate() {
                c |= (has(row, u) as u32) << colex_pair(i, depth);
            }
            if depth + 1 == m {
                counts[cat.classify_code(c)] += 1;
                continue;
            }
            let next_ext: Bits<W> = std::array::from_fn(|i| ext[i] | (row[i] & !closed[i] & above[i]));
            let next_closed = or(closed, row);
            sub[depth] = w;
            esu_extend(rows, m, depth + 1, sub, c, next_ext, &next_closed, above, cat, counts);
        }
    }
}

/// Recovers the disconnected class counts of order `m`.
///
/// `connected` holds the order-`m` counts of connected classes (other
/// entries are ignored) and `lower[j]` the complete counts of order `j + 1`
/// for `j < m - 1`. For every ordered class pair `(A, B)` with
/// `|A| + |B| = m`, the number of ordered pairs of disjoint vertex sets
/// inducing `A` and `B` is `cnt(A) cnt(B)` minus the overlapping pairs
/// `sum_W r(W;A,B) cnt(W)`, and it also equals `sum_F q(F;A,B) cnt(F)`.
/// The resulting exact linear system is solved for the disconnected
/// classes; a unique, consistent, non-negative integral solution is
/// required.
pub fn complete_disconnected(
    connected: &[u64],
    m: usize,
    lower: &[Vec<u64>],
    tables: &CoefficientTables,
) -> Result<Vec<u64>> {
    let cat = check_order(m)?;
    if connected.len() != cat.len() {
        return Err(Error::Completion(format!(
            "expected {} order-{m} counts, got {}",
            cat.len(),
            connected.len()
        )));
    }
    if lower.len() + 1 < m {
        return Err(Error::Completion(format!("orders 1..{} are required", m - 1)));
    }
    let unknowns: Vec<usize> = cat.classes().iter().filter(|c| !c.connected).map(|c| c.index).collect();
    let mut out: Vec<u64> = connected.to_vec();
    for &u in &unknowns {
        out[u] = 0;
    }
    if unknowns.is_empty() {
        return Ok(out);
    }
    let column: BTreeMap<usize, usize> = unknowns.iter().enumerate().map(|(j, &u)| (u, j)).collect();
    let count = |c: ClassRef| -> BigInt { BigInt::from(lower[c.order as usize - 1][c.class as usize]) };

    // rows of [coefficients | rhs]
    let mut system: Vec<Vec<BigRational>> = Vec::new();
    for a_order in 1..m {
        let b_order = m - a_order;
        for a in 0..catalog(a_order)?.len() {
            for b in 0..catalog(b_order)?.len() {
                let (ra, rb) = (ClassRef::new(a_order, a), ClassRef::new(b_order, b));
                let mut rhs = count(ra) * count(rb);
                for (w, r) in tables.overlap(ra, rb) {
                    rhs -= BigInt::from(*r) * count(*w);
                }
                let mut row = vec![BigRational::zero(); unknowns.len() + 1];
                for (f, q) in tables.split(ra, rb) {
                    let f = f.class as usize;
                    match column.get(&f) {
                        Some(&j) => row[j] += BigRational::from_integer(BigInt::from(*q)),
                        None => rhs -= BigInt::from(*q) * BigInt::from(connected[f]),
                    }
                }
                row[unknowns.len()] = BigRational::from_integer(rhs);
                system.push(row);
            }
        }
    }
    let solution = solve_exact(system, unknowns.len())?;
    for (j, x) in solution.into_iter().enumerate() {
        if !x.is_integer() || x.is_negative() {
            return Err(Error::Completion(format!(
                "class {} of order {m} solved to {x}",
                unknowns[j]
            )));
        }
        out[unknowns[j]] = x
            .to_integer()
            .to_u64()
            .ok_or_else(|| Error::Completion(format!("count {x} overflows")))?;
    }
    Ok(out)
}

/// Gauss-Jordan elimination over the rationals on an augmented matrix with
/// `vars` unknowns. Fails unless the solution exists and is unique.
fn solve_exact(mut rows: Vec<Vec<BigRational>>, vars: usize) -> Result<Vec<BigRational>> {
    let mut pivot_row = 0;
    for col in 0..vars {
        let Some(p) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            return Err(Error::Completion(format!("system is singular at unknown {col}")));
        };
        rows.swap(pivot_row, p);
        let inv = BigRational::one() / rows[pivot_row][col].clone();
        for x in rows[pivot_row].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivot_row += 1;
    }
    if let Some(r) = rows[pivot_row..].iter().find(|r| !r[vars].is_zero()) {
        return Err(Error::Completion(format!("inconsistent system: residual {}", r[vars])));
    }
    Ok(rows[..vars].iter().map(|r| r[vars].clone()).collect())
}

/// Complete censuses of orders `1..=max_order`.
pub fn census_up_to(
    g: &Graph,
    host: &str,
    max_order: usize,
    method: Method,
    opts: CensusOptions,
) -> Result<Vec<CensusResult>> {
    check_order(max_order)?;
    let mut out: Vec<CensusResult> = Vec::with_capacity(max_order);
    for m in 1..=max_order {
        let counts = match method {
            Method::Brute => brute_census(g, m, opts)?,
            Method::EsuCompletion => {
                let connected = esu_census(g, m, opts.threads)?;
                let lower: Vec<Vec<u64>> = out.iter().map(|c| c.counts.clone()).collect();
                complete_disconnected(&connected, m, &lower, CoefficientTables::builtin())?
            }
        };
        out.push(CensusResult {
            host: host.to_string(),
            order: m,
            method,
            counts,
        });
    }
    Ok(out)
}

/// Complete census of a single order.
pub fn census(g: &Graph, host: &str, m: usize, method: Method, opts: CensusOptions) -> Result<CensusResult> {
    match method {
        Method::Brute => Ok(CensusResult {
            host: host.to_string(),
            order: m,
            method,
            counts: brute_census(g, m, opts)?,
        }),
        Method::EsuCompletion => Ok(census_up_to(g, host, m, method, opts)?
            .pop()
            .expect("at least one order")),
    }
}

/// Histogram of induced pentagons per induced path on three vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PentagonProfile {
    /// pentagons through a path -> number of such paths
    pub histogram: BTreeMap<u64, u64>,
    pub paths: u64,
    /// Sum over paths; every pentagon contains five induced paths.
    pub incidences: u64,
}

/// For each induced path `a - c - b`, counts the induced 5-cycles
/// `a c b x y`: edges `x y` with `x` adjacent to `b` only and `y` adjacent
/// to `a` only among the path vertices.
pub fn pentagon_profile(g: &Graph, threads: Option<usize>) -> Result<PentagonProfile> {
    let p = g
        .is_srg()
        .ok_or_else(|| Error::NotInFamily("host is not strongly regular".into()))?;
    if p.lambda != 1 || p.mu != 2 {
        return Err(Error::NotInFamily(format!("parameters {p}")));
    }
    let n = g.order();
    let words = g.words();
    let hist = with_threads(threads, || {
        (0..n)
            .into_par_iter()
            .fold(BTreeMap::<u64, u64>::new, |mut hist, c| {
                let nbrs: Vec<usize> = g.neighbors(c).collect();
                let rc = g.row(c);
                for (i, &a) in nbrs.iter().enumerate() {
                    for &b in &nbrs[i + 1..] {
                        if g.has_edge(a, b) {
                            continue;
                        }
                        let (ra, rb) = (g.row(a), g.row(b));
                        // xs: neighbours of b outside N[c] and N(a); ys symmetric
                        let mut count = 0u64;
                        for w in 0..words {
                            let mut xs = rb[w] & !rc[w] & !ra[w];
                            if w == c / 64 {
                                xs &= !(1 << (c % 64));
                            }
                            while xs != 0 {
                                let x = w * 64 + xs.trailing_zeros() as usize;
                                xs &= xs - 1;
                                let rx = g.row(x);
                                for v in 0..words {
                                    let mut ys = ra[v] & !rc[v] & !rb[v] & rx[v];
                                    if v == c / 64 {
                                        ys &= !(1 << (c % 64));
                                    }
                                    count += ys.count_ones() as u64;
                                }
                            }
                        }
                        *hist.entry(count).or_default() += 1;
                    }
                }
                hist
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_default() += v;
                }
                a
            })
    })?;
    Ok(PentagonProfile {
        paths: hist.values().sum(),
        incidences: hist.iter().map(|(k, v)| k * v).sum(),
        histogram: hist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::rook9;

    fn nonzero(v: &[u64]) -> Vec<u64> {
        let mut x: Vec<u64> = v.iter().copied().filter(|&c| c > 0).collect();
        x.sort();
        x
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(9, 4), 126);
        assert_eq!(binomial(243, 6), 268_715_232_324);
        assert_eq!(binomial(243, 5), 6_774_333_588);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn rook9_brute() {
        let g = rook9();
        let c4 = brute_census(&g, 4, CensusOptions::default()).unwrap();
        assert_eq!(c4.iter().sum::<u64>(), 126);
        assert_eq!(nonzero(&c4), vec![9, 9, 36, 36, 36]);
        let c6 = brute_census(&g, 6, CensusOptions::default()).unwrap();
        assert_eq!(nonzero(&c6), vec![6, 6, 36, 36]);
        let cat = catalog(6).unwrap();
        for c in cat.classes() {
            if !c.connected {
                assert_eq!(c6[c.index], 0);
            }
        }
    }

    #[test]
    fn triangles_match_a_direct_count() {
        let g = rook9();
        let c3 = brute_census(&g, 3, CensusOptions::default()).unwrap();
        let direct: usize = g.edges().map(|(u, v)| g.common_neighbors(u, v)).sum::<usize>() / 3;
        assert_eq!(c3[3] as usize, direct);
    }

    #[test]
    fn esu_matches_brute_on_rook9() {
        let g = rook9();
        for m in 1..=6 {
            let brute = brute_census(&g, m, CensusOptions::default()).unwrap();
            let esu = esu_census(&g, m, None).unwrap();
            let cat = catalog(m).unwrap();
            for c in cat.classes() {
                if c.connected {
                    assert_eq!(esu[c.index], brute[c.index], "order {m} class {}", c.index);
                }
            }
        }
    }

    #[test]
    fn path_host() {
        let g = Graph::path(5).unwrap();
        let esu = esu_census(&g, 5, None).unwrap();
        assert_eq!(nonzero(&esu), vec![1]);
    }

    #[test]
    fn completion_on_two_triangles() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let all = census_up_to(&g, "two-triangles", 6, Method::EsuCompletion, CensusOptions::default()).unwrap();
        let c6 = &all[5].counts;
        let cat = catalog(6).unwrap();
        let idx = cat.classify(&g).unwrap();
        assert_eq!(c6[idx], 1);
        assert_eq!(c6.iter().sum::<u64>(), 1);
        let brute = census_up_to(&g, "two-triangles", 6, Method::Brute, CensusOptions::default()).unwrap();
        for (a, b) in all.iter().zip(&brute) {
            assert_eq!(a.counts, b.counts);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = Graph::new(100).unwrap();
        let opts = CensusOptions {
            threads: None,
            budget: 1000,
        };
        assert!(matches!(brute_census(&g, 3, opts), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn singular_and_inconsistent_systems_are_rejected() {
        let r = |x: i64| BigRational::from_integer(BigInt::from(x));
        assert!(solve_exact(vec![vec![r(0), r(1)]], 1).is_err());
        assert!(solve_exact(vec![vec![r(1), r(1)], vec![r(1), r(2)]], 1).is_err());
        assert_eq!(
            solve_exact(vec![vec![r(2), r(4)], vec![r(1), r(2)]], 1).unwrap(),
            vec![r(2)]
        );
    }

    #[test]
    fn pentagon_profile_rook9() {
        let p = pentagon_profile(&rook9(), None).unwrap();
        assert_eq!(p.histogram, BTreeMap::from([(0, 36)]));
        assert_eq!(p.incidences, 0);
        assert!(pentagon_profile(&Graph::path(4).unwrap(), None).is_err());
    }

    #[test]
    fn thread_counts_agree() {
        let g = rook9();
        let a = esu_census(&g, 5, Some(1)).unwrap();
        let b = esu_census(&g, 5, Some(3)).unwrap();
        assert_eq!(a, b);
    }
}
