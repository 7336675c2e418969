#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, RngExt};
use srgsub::Graph;

/// Erdos-Renyi graph on `n` vertices with edge probability `p`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n).unwrap();
    for j in 1..n {
        for i in 0..j {
            if rng.random_bool(p) {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    g
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

/// Graph on `n` vertices whose edges are the set bits of `bits` over the
/// upper triangle in row-major order.
pub fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut g = Graph::new(n).unwrap();
    let mut it = bits.iter();
    for i in 0..n {
        for j in i + 1..n {
            if *it.next().unwrap() {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    g
}
