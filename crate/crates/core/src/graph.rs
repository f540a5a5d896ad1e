//! Simple undirected graphs on a small vertex range.
//!
//! Vertices are labelled `0..n` and adjacency is kept as one bitmask per
//! vertex, which caps the supported size at [`MAX_VERTICES`]. Everything in
//! this crate works on graphs far below that bound, so the dense
//! representation keeps subset and component operations cheap.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard upper bound on the number of vertices (adjacency rows are `u32`).
pub const MAX_VERTICES: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    EndpointOutOfRange(usize, usize, usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graphs with more than {MAX_VERTICES} vertices are not supported (got {0})")]
    TooManyVertices(usize),
    #[error("pinned label {0} is not a vertex of the graph")]
    InvalidPin(usize),
}

/// An immutable simple undirected graph with vertices `0..vertex_count`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adj: Vec<u32>,
    /// Sorted list of edges with `u < v`.
    edges: Vec<(u8, u8)>,
}

impl Graph {
    /// Builds a graph from an explicit edge list, rejecting loops, duplicate
    /// edges (as unordered pairs) and out-of-range endpoints.
    pub fn new<I>(vertex_count: usize, edge_list: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if vertex_count > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(vertex_count));
        }
        let mut adj = vec![0u32; vertex_count];
        let mut edges: Vec<(u8, u8)> = Vec::new();
        for (u, v) in edge_list {
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(GraphError::EndpointOutOfRange(u, v, vertex_count));
            }
            if adj[u] & (1 << v) != 0 {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            edges.push((a as u8, b as u8));
        }
        edges.sort_unstable();
        Ok(Graph { n: vertex_count, adj, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Edges as `(u, v)` pairs with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(u, v)| (u as usize, v as usize))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] & (1 << v) != 0
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Neighbourhood of `v` as a bitmask.
    pub fn adjacency_mask(&self, v: usize) -> u32 {
        self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let mask = self.adj[v];
        (0..self.n).filter(move |&u| mask & (1 << u) != 0)
    }

    /// Returns a copy with the edge `{u, v}` added; adding an existing edge
    /// is a no-op (set union semantics).
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        if self.has_edge(u, v) {
            return Ok(self.clone());
        }
        let mut edges: Vec<(usize, usize)> = self.edges().collect();
        edges.push((u, v));
        Graph::new(self.n, edges)
    }

    /// Returns a copy with one extra isolated vertex, plus its label.
    pub fn with_new_vertex(&self) -> Result<(Self, usize), GraphError> {
        let g = Graph::new(self.n + 1, self.edges())?;
        Ok((g, self.n))
    }

    /// Induced subgraph on `vertices` (original labels, deduplicated order
    /// preserved as given). Returns the subgraph together with the map from
    /// local label to original label.
    pub fn induced(&self, vertices: &[usize]) -> (Self, Vec<usize>) {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let edges = self.edges().filter_map(|(u, v)| {
            let (lu, lv) = (local[u], local[v]);
            (lu != usize::MAX && lv != usize::MAX).then_some((lu, lv))
        });
        let g = Graph::new(vertices.len(), edges).expect("induced subgraph of a valid graph");
        (g, vertices.to_vec())
    }

    /// Relabels vertices: `perm[old] = new`. `perm` must be a permutation of
    /// `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.n);
        let edges = self.edges().map(|(u, v)| (perm[u], perm[v]));
        Graph::new(self.n, edges).expect("relabelling preserves validity")
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let comps = self.components_excluding(0);
        comps.len() == 1 && comps[0].count_ones() as usize == self.n
    }

    /// Connected components of the graph induced on the vertices NOT in
    /// `excluded` (a bitmask). Each component is returned as a bitmask.
    pub fn components_excluding(&self, excluded: u32) -> Vec<u32> {
        let mut seen = excluded;
        let all: u32 = if self.n == 32 { !0 } else { (1u32 << self.n) - 1 };
        let mut comps = Vec::new();
        for v in 0..self.n {
            if seen & (1 << v) != 0 {
                continue;
            }
            // BFS over the allowed vertex set.
            let mut comp = 1u32 << v;
            let mut frontier = 1u32 << v;
            while frontier != 0 {
                let mut next = 0u32;
                let mut f = frontier;
                while f != 0 {
                    let u = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= self.adj[u] & all & !excluded & !comp;
                }
                comp |= next;
                frontier = next;
            }
            seen |= comp;
            comps.push(comp);
        }
        comps
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

/// Iterates the vertices set in a bitmask, in increasing order.
pub fn mask_vertices(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let v = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_construction() {
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(2, 0));
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn loop_rejected() {
        let err = Graph::new(4, [(0, 0)]).unwrap_err();
        assert_eq!(err, GraphError::LoopEdge(0));
    }

    #[test]
    fn duplicate_unordered_pair_rejected() {
        let err = Graph::new(2, [(0, 1), (1, 0)]).unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge(1, 0));
    }

    #[test]
    fn out_of_range_rejected() {
        let err = Graph::new(2, [(0, 2)]).unwrap_err();
        assert_eq!(err, GraphError::EndpointOutOfRange(0, 2, 2));
    }

    #[test]
    fn with_edge_is_set_union() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        let g2 = g.with_edge(0, 1).unwrap();
        assert_eq!(g, g2);
        let g3 = g.with_edge(1, 2).unwrap();
        assert_eq!(g3.edge_count(), 2);
    }

    #[test]
    fn components() {
        // Path 0-1-2 and isolated 3.
        let g = Graph::new(4, [(0, 1), (1, 2)]).unwrap();
        assert!(!g.is_connected());
        let comps = g.components_excluding(0b0010);
        // Removing vertex 1 leaves {0}, {2}, {3}.
        assert_eq!(comps.len(), 3);
        let g2 = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(g2.is_connected());
    }

    #[test]
    fn mask_vertex_iteration() {
        let vs: Vec<usize> = mask_vertices(0b10110).collect();
        assert_eq!(vs, vec![1, 2, 4]);
    }
}
