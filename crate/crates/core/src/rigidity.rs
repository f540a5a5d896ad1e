//! Generic rigidity of graphs via (2,3)-sparsity.
//!
//! A graph on at least two vertices is minimally rigid iff it has exactly
//! `2|V| - 3` edges and every subgraph on at least two vertices spans at most
//! `2|V'| - 3` edges. The pebble game decides this in polynomial time; the
//! brute-force subgraph check is kept as an independent oracle for testing.
//! Rigidity on the sphere coincides with rigidity in the plane, so a single
//! combinatorial test serves both.

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RigidityError {
    #[error("rigidity is undefined for trivial graphs (fewer than 2 vertices)")]
    TrivialGraph,
    #[error("brute-force check refused for {0} vertices (limit 8)")]
    TooLargeForBruteForce(usize),
}

/// Size of a maximum (2,3)-independent edge set, computed by the pebble game.
///
/// This is the rank of the graph in the (2,3)-count matroid; it equals
/// `2|V| - 3` exactly when the graph contains a spanning minimally rigid
/// subgraph.
pub fn pebble_game_rank(g: &Graph) -> usize {
    let n = g.vertex_count();
    let mut pebbles = vec![2u8; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut rank = 0usize;

    // Moves one pebble to `root` along a reversed directed path, if any free
    // pebble is reachable. `other` may not donate its own pebbles.
    fn pull_pebble(root: usize, other: usize, pebbles: &mut [u8], out: &mut [Vec<usize>]) -> bool {
        let n = pebbles.len();
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        seen[other] = true;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for i in 0..out[v].len() {
                let w = out[v][i];
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                parent[w] = v;
                if pebbles[w] > 0 {
                    // Reverse the path root -> ... -> w.
                    pebbles[w] -= 1;
                    pebbles[root] += 1;
                    let mut cur = w;
                    while cur != root {
                        let p = parent[cur];
                        let idx = out[p].iter().position(|&x| x == cur).expect("tree edge");
                        out[p].swap_remove(idx);
                        out[cur].push(p);
                        cur = p;
                    }
                    return true;
                }
                stack.push(w);
            }
        }
        false
    }

    for (u, v) in g.edges() {
        while pebbles[u] + pebbles[v] < 4 {
            if !pull_pebble(u, v, &mut pebbles, &mut out)
                && !pull_pebble(v, u, &mut pebbles, &mut out)
            {
                break;
            }
        }
        if pebbles[u] + pebbles[v] >= 4 {
            pebbles[u] -= 1;
            out[u].push(v);
            rank += 1;
        }
    }
    rank
}

/// True iff `|E| = 2|V| - 3` and every subgraph is (2,3)-sparse.
pub fn is_tight_2_3(g: &Graph) -> Result<bool, RigidityError> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(RigidityError::TrivialGraph);
    }
    if g.edge_count() != 2 * n - 3 {
        return Ok(false);
    }
    Ok(pebble_game_rank(g) == g.edge_count())
}

/// Minimal rigidity (for generic edge lengths, in the plane and equivalently
/// on the sphere). Identical to [`is_tight_2_3`]; exposed so callers state
/// intent.
pub fn is_minimally_rigid(g: &Graph) -> Result<bool, RigidityError> {
    is_tight_2_3(g)
}

/// True iff the graph contains a spanning minimally rigid subgraph.
pub fn is_rigid_spanning(g: &Graph) -> Result<bool, RigidityError> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(RigidityError::TrivialGraph);
    }
    Ok(pebble_game_rank(g) == 2 * n - 3)
}

/// Exhaustive subgraph-counting oracle for minimal rigidity (≤ 8 vertices).
pub fn brute_force_laman(g: &Graph) -> Result<bool, RigidityError> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(RigidityError::TrivialGraph);
    }
    if n > 8 {
        return Err(RigidityError::TooLargeForBruteForce(n));
    }
    if g.edge_count() != 2 * n - 3 {
        return Ok(false);
    }
    for subset in 0u32..(1 << n) {
        let size = subset.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let mut edges = 0usize;
        for v in 0..n {
            if subset & (1 << v) != 0 {
                edges += (g.adjacency_mask(v) & subset).count_ones() as usize;
            }
        }
        edges /= 2;
        if edges > 2 * size - 3 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn k4_minus_edge() -> Graph {
        Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    #[test]
    fn triangle_is_tight() {
        assert!(is_tight_2_3(&k(3)).unwrap());
        assert!(brute_force_laman(&k(3)).unwrap());
    }

    #[test]
    fn k4_is_not_tight_but_spans() {
        assert!(!is_tight_2_3(&k(4)).unwrap());
        assert!(is_rigid_spanning(&k(4)).unwrap());
    }

    #[test]
    fn k4_minus_edge_is_tight() {
        // Oracle first: all 11 subgraphs on >= 2 vertices are sparse.
        assert!(brute_force_laman(&k4_minus_edge()).unwrap());
        assert!(is_tight_2_3(&k4_minus_edge()).unwrap());
        assert!(is_minimally_rigid(&k4_minus_edge()).unwrap());
    }

    #[test]
    fn double_triangle_not_rigid() {
        // Two triangles sharing one vertex: 5 vertices, 6 edges.
        let g = Graph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert!(!is_minimally_rigid(&g).unwrap());
    }

    #[test]
    fn tree_does_not_span() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(!is_rigid_spanning(&g).unwrap());
    }

    #[test]
    fn trivial_graphs_rejected() {
        let g = Graph::new(1, []).unwrap();
        assert_eq!(is_tight_2_3(&g).unwrap_err(), RigidityError::TrivialGraph);
        assert_eq!(is_rigid_spanning(&g).unwrap_err(), RigidityError::TrivialGraph);
    }

    #[test]
    fn isolated_vertices_break_spanning() {
        let g = Graph::new(4, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!is_rigid_spanning(&g).unwrap());
    }

    #[test]
    fn two_isolated_vertices_not_laman() {
        let g = Graph::new(2, []).unwrap();
        assert!(!brute_force_laman(&g).unwrap());
        assert!(!is_tight_2_3(&g).unwrap());
    }

    #[test]
    fn brute_force_size_guard() {
        assert!(matches!(
            brute_force_laman(&Graph::new(9, []).unwrap()),
            Err(RigidityError::TooLargeForBruteForce(9))
        ));
    }

    #[test]
    fn monotone_under_edge_addition() {
        let g = k4_minus_edge();
        assert!(is_rigid_spanning(&g).unwrap());
        let g2 = g.with_edge(2, 3).unwrap();
        assert!(is_rigid_spanning(&g2).unwrap());
    }
}
