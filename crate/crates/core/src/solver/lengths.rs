//! Generic edge-length assignments for the realization system.
//!
//! Squared spherical edge lengths are sampled uniformly from a sub-interval
//! of (0, 4); the induced inner product `c_e = 1 - lambda_e / 2` then lies
//! strictly inside (-1, 1). Sampling is deterministic per seed and uses a
//! portable stream cipher RNG so results agree across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeLengthAssignment {
    /// `(edge, lambda)` pairs in the graph's sorted edge order.
    lengths: Vec<((usize, usize), f64)>,
    seed: u64,
}

impl EdgeLengthAssignment {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn lambda(&self, u: usize, v: usize) -> f64 {
        let key = (u.min(v), u.max(v));
        self.lengths
            .iter()
            .find(|&&(e, _)| e == key)
            .map(|&(_, l)| l)
            .expect("edge has an assigned length")
    }

    /// Inner product `c_e = 1 - lambda_e / 2` prescribed between the two
    /// endpoint position vectors.
    pub fn cosine(&self, u: usize, v: usize) -> f64 {
        1.0 - self.lambda(u, v) / 2.0
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.lengths.iter().copied()
    }
}

/// Samples independent uniform lengths in `range` for every edge of `g`.
pub fn sample_lengths(g: &Graph, seed: u64, range: (f64, f64)) -> EdgeLengthAssignment {
    assert!(
        0.0 < range.0 && range.0 < range.1 && range.1 < 4.0,
        "length interval must be inside (0, 4)"
    );
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let lengths = g.edges().map(|e| (e, rng.gen_range(range.0..range.1))).collect();
    EdgeLengthAssignment { lengths, seed }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn deterministic_per_seed() {
        let a = sample_lengths(&k3(), 7, (0.5, 3.5));
        let b = sample_lengths(&k3(), 7, (0.5, 3.5));
        assert_eq!(a, b);
    }

    #[test]
    fn different_seeds_differ() {
        let a = sample_lengths(&k3(), 7, (0.5, 3.5));
        let b = sample_lengths(&k3(), 8, (0.5, 3.5));
        assert_ne!(a, b);
    }

    #[test]
    fn cosines_in_default_band() {
        let a = sample_lengths(&k3(), 123, (0.5, 3.5));
        for ((u, v), _) in a.iter() {
            let c = a.cosine(u, v);
            assert!(c > -0.75 && c < 0.75, "c = {c}");
        }
    }
}
