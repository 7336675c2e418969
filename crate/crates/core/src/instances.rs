//! Concrete members of the srg(n,k,1,2) family and parameter admissibility.

use std::path::Path;

use num_integer::Roots;

use crate::error::{Error, Result};
use crate::graph::{Graph, SrgParams};
use crate::graph6;

/// Order of an srg(n,k,1,2) with valency `k`: `1 + k + k(k-2)/2`.
///
/// With lambda = 1 every neighbourhood is a perfect matching, so `k` must be
/// even.
pub fn order_from_valency(k: u64) -> Result<u64> {
    if k < 2 {
        return Err(Error::InvalidParams(format!("valency {k} is too small")));
    }
    if k % 2 == 1 {
        return Err(Error::InvalidParams(format!(
            "valency {k} is odd; lambda = 1 forces a perfect matching in every neighbourhood"
        )));
    }
    Ok(1 + k + k * (k - 2) / 2)
}

/// Even valencies `4 <= k <= limit` for which srg(1 + k^2/2, k, 1, 2) passes
/// the eigenvalue integrality test: `4k - 7` is a perfect square `s^2` and
/// both multiplicities `(k^2/2 -+ (2k - k^2/2)/s) / 2` are integers.
pub fn admissible_valencies(limit: u64) -> Vec<u64> {
    (4..=limit)
        .step_by(2)
        .filter(|&k| {
            let d = 4 * k - 7;
            let s = d.sqrt();
            if s * s != d {
                return false;
            }
            let half_sq = (k * k / 2) as i64;
            let skew = 2 * k as i64 - half_sq;
            if skew % s as i64 != 0 {
                return false;
            }
            let t = skew / s as i64;
            (half_sq - t) % 2 == 0 && (half_sq - t) >= 0 && (half_sq + t) >= 0
        })
        .collect()
}

/// The 3x3 rook graph: cells `(r, c)` at index `3r + c`, adjacent when they
/// share a row or a column. It is the unique srg(9,4,1,2).
pub fn rook9() -> Graph {
    let mut g = Graph::new(9).expect("small");
    for a in 0..9 {
        for b in a + 1..9 {
            if a / 3 == b / 3 || a % 3 == b % 3 {
                g.add_edge(a, b).expect("in range");
            }
        }
    }
    g
}

/// Generator matrix of the ternary Golay [11,6,5] code: the six shifts of
/// g(x) = 2 + x^2 + 2x^3 + x^4 + x^5, a degree-5 factor of x^11 - 1 over
/// GF(3). Coordinate `j` holds the coefficient of `x^j`.
pub const GOLAY_GENERATOR: [[u8; 11]; 6] = [
    [2, 0, 1, 2, 1, 1, 0, 0, 0, 0, 0],
    [0, 2, 0, 1, 2, 1, 1, 0, 0, 0, 0],
    [0, 0, 2, 0, 1, 2, 1, 1, 0, 0, 0],
    [0, 0, 0, 2, 0, 1, 2, 1, 1, 0, 0],
    [0, 0, 0, 0, 2, 0, 1, 2, 1, 1, 0],
    [0, 0, 0, 0, 0, 2, 0, 1, 2, 1, 1],
];

const GOLAY_LEN: usize = 11;
const GOLAY_DIM: usize = 6;
const SYNDROME_LEN: usize = GOLAY_LEN - GOLAY_DIM;

/// Minimum Hamming weight over all nonzero codewords spanned by `rows`.
pub fn min_weight(rows: &[[u8; 11]]) -> usize {
    let total = 3usize.pow(rows.len() as u32);
    let mut best = usize::MAX;
    for msg in 1..total {
        let mut word = [0u8; 11];
        let mut m = msg;
        for row in rows {
            let c = (m % 3) as u8;
            m /= 3;
            for (w, &r) in word.iter_mut().zip(row) {
                *w = (*w + c * r) % 3;
            }
        }
        best = best.min(word.iter().filter(|&&x| x != 0).count());
    }
    best
}

fn inv3(x: u8) -> u8 {
    // 1*1 = 1, 2*2 = 4 = 1 (mod 3)
    x
}

/// A parity-check matrix (5 x 11) for [`GOLAY_GENERATOR`], derived by
/// row-reducing the generator to systematic form.
pub fn golay_parity_check() -> Result<[[u8; 11]; 5]> {
    let mut g = GOLAY_GENERATOR;
    let mut pivots = Vec::with_capacity(GOLAY_DIM);
    let mut row = 0;
    for col in 0..GOLAY_LEN {
        if row == GOLAY_DIM {
            break;
        }
        let Some(p) = (row..GOLAY_DIM).find(|&r| g[r][col] != 0) else {
            continue;
        };
        g.swap(row, p);
        let s = inv3(g[row][col]);
        for x in g[row].iter_mut() {
            *x = (*x * s) % 3;
        }
        for r in 0..GOLAY_DIM {
            if r != row && g[r][col] != 0 {
                let f = g[r][col];
                let pivot = g[row];
                for (x, p) in g[r].iter_mut().zip(pivot) {
                    *x = (*x + 3 * 3 - f * p) % 3;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() != GOLAY_DIM {
        return Err(Error::Construction("generator matrix is rank deficient".into()));
    }
    let free: Vec<usize> = (0..GOLAY_LEN).filter(|c| !pivots.contains(c)).collect();
    // each free column f gives a null vector: x_f = 1, x_pivot(r) = -g[r][f]
    let mut h = [[0u8; 11]; SYNDROME_LEN];
    for (i, &f) in free.iter().enumerate() {
        h[i][f] = 1;
        for (r, &p) in pivots.iter().enumerate() {
            h[i][p] = (3 - g[r][f]) % 3;
        }
    }
    for grow in GOLAY_GENERATOR.iter() {
        for hrow in h.iter() {
            let dot: u32 = grow.iter().zip(hrow).map(|(&a, &b)| (a * b) as u32).sum();
            if !dot.is_multiple_of(3) {
                return Err(Error::Construction("parity check is not orthogonal to the code".into()));
            }
        }
    }
    Ok(h)
}

fn syndrome_index(s: &[u8; SYNDROME_LEN]) -> usize {
    s.iter().rev().fold(0, |acc, &x| acc * 3 + x as usize)
}

fn syndrome_of(index: usize) -> [u8; SYNDROME_LEN] {
    let mut s = [0u8; SYNDROME_LEN];
    let mut x = index;
    for v in s.iter_mut() {
        *v = (x % 3) as u8;
        x /= 3;
    }
    s
}

/// The 22 syndromes of weight-one error vectors (`c * e_j`, `c` in {1, 2}),
/// as vertex indices.
pub fn weight_one_syndromes() -> Result<Vec<usize>> {
    let h = golay_parity_check()?;
    let mut out = Vec::with_capacity(2 * GOLAY_LEN);
    for c in 1..=2u8 {
        for j in 0..GOLAY_LEN {
            let mut s = [0u8; SYNDROME_LEN];
            for (i, row) in h.iter().enumerate() {
                s[i] = (c * row[j]) % 3;
            }
            out.push(syndrome_index(&s));
        }
    }
    Ok(out)
}

/// The coset graph of the ternary Golay code, srg(243,22,1,2).
///
/// Vertices are the 243 syndromes in GF(3)^5; two syndromes are adjacent when
/// their difference is the syndrome of a weight-one vector. The construction
/// verifies the code's minimum distance and the resulting parameters.
pub fn bvls243() -> Result<Graph> {
    let d = min_weight(&GOLAY_GENERATOR);
    if d != 5 {
        return Err(Error::Construction(format!(
            "Golay generator has minimum weight {d}, expected 5"
        )));
    }
    let connection = weight_one_syndromes()?;
    let mut sorted = connection.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != connection.len() || sorted.contains(&0) {
        return Err(Error::Construction(
            "weight-one syndromes are not distinct and nonzero".into(),
        ));
    }
    let n = 3usize.pow(SYNDROME_LEN as u32);
    let mut g = Graph::new(n)?;
    for x in 0..n {
        let sx = syndrome_of(x);
        for &c in &connection {
            let sc = syndrome_of(c);
            let mut y = [0u8; SYNDROME_LEN];
            for i in 0..SYNDROME_LEN {
                y[i] = (sx[i] + sc[i]) % 3;
            }
            let y = syndrome_index(&y);
            if x < y {
                g.add_edge(x, y)?;
            }
        }
    }
    let expected = SrgParams {
        n: 243,
        k: 22,
        lambda: 1,
        mu: 2,
    };
    match g.is_srg() {
        Some(p) if p == expected => Ok(g),
        other => Err(Error::Construction(format!(
            "coset graph has parameters {other:?}, expected {expected}"
        ))),
    }
}

/// Reads a host graph from a graph6 file holding exactly one graph.
pub fn load_host(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut graphs = graph6::read_all(&text)?;
    match graphs.len() {
        0 => Err(Error::Graph6(format!("{}: no graph found", path.display()))),
        1 => Ok(graphs.pop().expect("one graph")),
        found => Err(Error::GraphCount {
            path: path.to_path_buf(),
            found,
        }),
    }
}
