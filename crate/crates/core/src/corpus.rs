//! Graph corpora and slow oracles used by the test suites and benchmarks:
//! exhaustive enumeration of small graphs, construction-based generation of
//! minimally rigid graphs, and brute-force isomorphism testing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::collections::BTreeSet;

use crate::canon::{canonical_key, Pinning};
use crate::graph::Graph;
use crate::rigidity::is_minimally_rigid;

/// All labelled graphs on `n` vertices (2^(n(n-1)/2) of them; keep `n <= 7`).
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let total: u64 = 1u64 << pairs.len();
    (0..total).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        Graph::new(n, edges).expect("enumerated graphs are valid")
    })
}

/// All labelled graphs on `n` vertices with exactly `m` edges, enumerated by
/// stepping through bitmasks of fixed popcount.
pub fn graphs_with_edges(n: usize, m: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let npairs = pairs.len();
    let mut mask: u64 = if m == 0 { 0 } else { (1u64 << m) - 1 };
    let mut done = m > npairs;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let current = mask;
        if m == 0 {
            done = true;
        } else {
            // Gosper's hack: next bitmask with the same popcount.
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
            if mask >= 1u64 << npairs {
                done = true;
            }
        }
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| current >> i & 1 == 1)
            .map(|(_, &e)| e);
        Some(Graph::new(n, edges).expect("enumerated graphs are valid"))
    })
}

/// Brute-force isomorphism test by permutation search (`n <= 8`).
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut deg_a: Vec<usize> = (0..n).map(|v| a.degree(v)).collect();
    let mut deg_b: Vec<usize> = (0..n).map(|v| b.degree(v)).collect();
    deg_a.sort_unstable();
    deg_b.sort_unstable();
    if deg_a != deg_b {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    permute_search(a, b, &mut perm, 0)
}

fn permute_search(a: &Graph, b: &Graph, perm: &mut [usize], k: usize) -> bool {
    let n = perm.len();
    if k == n {
        return a.edges().all(|(u, v)| b.has_edge(perm[u], perm[v]));
    }
    for i in k..n {
        perm.swap(k, i);
        // Prune: degree must match, and edges among already-placed vertices
        // must map to edges.
        let consistent = a.degree(k) == b.degree(perm[k])
            && (0..k).all(|j| a.has_edge(j, k) == b.has_edge(perm[j], perm[k]));
        if consistent && permute_search(a, b, perm, k + 1) {
            return true;
        }
        perm.swap(k, i);
    }
    false
}

/// All isomorphism classes of connected graphs on `n` vertices.
pub fn connected_graph_classes(n: usize) -> Vec<Graph> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for g in all_graphs(n) {
        if !g.is_connected() {
            continue;
        }
        let key = canonical_key(&g, Pinning::None).unwrap().bytes().to_vec();
        if seen.insert(key) {
            out.push(g);
        }
    }
    out
}

/// All isomorphism classes of minimally rigid graphs on `n` vertices,
/// obtained by filtering the exhaustive `2|V| - 3`-edge corpus through the
/// pebble game (`n <= 7` is practical).
pub fn laman_classes(n: usize) -> Vec<Graph> {
    assert!(n >= 2);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for g in graphs_with_edges(n, 2 * n - 3) {
        if !is_minimally_rigid(&g).unwrap() {
            continue;
        }
        let key = canonical_key(&g, Pinning::None).unwrap().bytes().to_vec();
        if seen.insert(key) {
            out.push(g);
        }
    }
    out
}

/// A random minimally rigid graph on `n >= 3` vertices built by vertex
/// additions and edge splits, both of which preserve minimal rigidity.
pub fn random_minimally_rigid(n: usize, seed: u64) -> Graph {
    assert!((3..=crate::graph::MAX_VERTICES).contains(&n));
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
    while g.vertex_count() < n {
        let v = g.vertex_count();
        if rng.gen_bool(0.5) || g.edge_count() == 0 {
            // Vertex addition: join a new vertex to two distinct vertices.
            let a = rng.gen_range(0..v);
            let b = loop {
                let b = rng.gen_range(0..v);
                if b != a {
                    break b;
                }
            };
            g = g
                .with_new_vertex()
                .and_then(|(g, w)| g.with_edge(a, w))
                .and_then(|g| g.with_edge(b, w_of(&g)))
                .unwrap();
        } else {
            // Edge split: subdivide an edge and connect to a third vertex.
            let edges: Vec<(usize, usize)> = g.edges().collect();
            let &(a, b) = &edges[rng.gen_range(0..edges.len())];
            let c = loop {
                let c = rng.gen_range(0..v);
                if c != a && c != b {
                    break c;
                }
            };
            let without: Vec<(usize, usize)> =
                g.edges().filter(|&e| e != (a.min(b), a.max(b))).collect();
            let reduced = Graph::new(v, without).unwrap();
            g = reduced
                .with_new_vertex()
                .and_then(|(g, w)| g.with_edge(a, w))
                .and_then(|g| g.with_edge(b, w_of(&g)))
                .and_then(|g| g.with_edge(c, w_of(&g)))
                .unwrap();
        }
        debug_assert!(is_minimally_rigid(&g).unwrap());
    }
    g
}

fn w_of(g: &Graph) -> usize {
    g.vertex_count() - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigidity::brute_force_laman;

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_graphs(3).count(), 8);
        assert_eq!(graphs_with_edges(4, 5).count(), 6); // C(6,5)
        assert_eq!(graphs_with_edges(4, 0).count(), 1);
    }

    #[test]
    fn isomorphism_oracle() {
        let c6 = Graph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let c6_shuffled = Graph::new(6, [(0, 2), (2, 4), (4, 1), (1, 3), (3, 5), (5, 0)]).unwrap();
        let two_k3 = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(are_isomorphic(&c6, &c6_shuffled));
        assert!(!are_isomorphic(&c6, &two_k3));
    }

    #[test]
    fn laman_class_counts_match_enumeration() {
        // Independently verified counts of minimally rigid graphs: a single
        // class on 3 and 4 vertices, three on 5.
        assert_eq!(laman_classes(3).len(), 1);
        assert_eq!(laman_classes(4).len(), 1);
        assert_eq!(laman_classes(5).len(), 3);
    }

    #[test]
    fn random_rigid_graphs_are_rigid() {
        for seed in 0..10 {
            let g = random_minimally_rigid(8, seed);
            assert!(brute_force_laman(&g).unwrap());
        }
    }
}
