//! Decomposing a graph into two calligraphs that share one edge and one
//! further vertex.
//!
//! A split of `G` is a pair of subgraphs covering `G` whose vertex sets meet
//! in exactly three vertices (the two base endpoints and the apex) and whose
//! edge sets meet in exactly the base edge. The enumeration anchors on every
//! (edge, apex) choice: removing the three shared vertices leaves connected
//! components, each of which must go wholly to one side, and any apex-base
//! chord must be assigned to exactly one side.

use serde::Serialize;
use thiserror::Error;

use crate::calligraph::MarkedCalligraph;
use crate::canon::{canonical_key, Pinning};
use crate::graph::{mask_vertices, Graph};
use crate::rigidity::{is_minimally_rigid, RigidityError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplitError {
    #[error("split enumeration needs a connected graph")]
    Disconnected,
    #[error("split enumeration needs at least 4 vertices (got {0})")]
    TooSmall(usize),
    #[error("graph is not minimally rigid")]
    NotMinimallyRigid,
    #[error("anchor ({u}, {v}; {w}) leaves {components} components, exceeding the assignment cap of {cap}")]
    AssignmentCap { u: usize, v: usize, w: usize, components: usize, cap: u64 },
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitConfig {
    /// Upper bound on `2^k` where `k` is the component count at one anchor.
    pub max_assignments: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig { max_assignments: 1 << 20 }
    }
}

/// One side of a split: the calligraph in local labels plus the map back to
/// the labels of the parent graph (`vertices[local] = original`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitSide {
    pub calligraph: MarkedCalligraph,
    pub vertices: Vec<usize>,
}

impl SplitSide {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
}

/// A calligraphic split. The shared base is ordered consistently with the
/// base orientation of both sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitCandidate {
    pub left: SplitSide,
    pub right: SplitSide,
    pub shared_base: (usize, usize),
    pub shared_apex: usize,
}

/// Enumerates every calligraphic split of `g`, up to exchanging the two
/// sides. Deterministic order.
pub fn enumerate_splits(g: &Graph, cfg: &SplitConfig) -> Result<Vec<SplitCandidate>, SplitError> {
    let n = g.vertex_count();
    if n < 4 {
        return Err(SplitError::TooSmall(n));
    }
    if !g.is_connected() {
        return Err(SplitError::Disconnected);
    }
    let mut out = Vec::new();
    for (u, v) in g.edges() {
        for w in g.vertices() {
            if w == u || w == v {
                continue;
            }
            collect_anchor_splits(g, (u, v), w, cfg, &mut out)?;
        }
    }
    Ok(out)
}

fn collect_anchor_splits(
    g: &Graph,
    (u, v): (usize, usize),
    w: usize,
    cfg: &SplitConfig,
    out: &mut Vec<SplitCandidate>,
) -> Result<(), SplitError> {
    let anchor_mask = (1u32 << u) | (1 << v) | (1 << w);
    let comps = g.components_excluding(anchor_mask);
    let k = comps.len();
    debug_assert!(k >= 1, "n >= 4 leaves at least one outside vertex");
    if (1u64 << k) > cfg.max_assignments {
        return Err(SplitError::AssignmentCap {
            u,
            v,
            w,
            components: k,
            cap: cfg.max_assignments,
        });
    }
    // Chords inside the anchor triple other than the base edge must each be
    // assigned to exactly one side.
    let chords: Vec<(usize, usize)> =
        [(u, w), (v, w)].into_iter().filter(|&(a, b)| g.has_edge(a, b)).collect();

    // Component 0 is pinned to the left side, which rules out yielding a
    // split and its left/right exchange separately.
    for assign in 0u32..(1 << (k - 1)) {
        let assign = assign << 1;
        for chord_assign in 0u32..(1 << chords.len()) {
            let left_comps =
                (0..k).filter(|&i| assign & (1 << i) == 0).fold(0u32, |m, i| m | comps[i]);
            let right_comps = (0..k)
                .filter(|&i| assign & (1 << i) != 0)
                .fold(0u32, |m, i| m | comps[i]);
            let left_chords: Vec<(usize, usize)> = chords
                .iter()
                .enumerate()
                .filter(|&(i, _)| chord_assign & (1 << i) == 0)
                .map(|(_, &c)| c)
                .collect();
            let right_chords: Vec<(usize, usize)> = chords
                .iter()
                .enumerate()
                .filter(|&(i, _)| chord_assign & (1 << i) != 0)
                .map(|(_, &c)| c)
                .collect();
            let left = build_side(g, (u, v), w, left_comps, &left_chords);
            let right = build_side(g, (u, v), w, right_comps, &right_chords);
            if let (Some(left), Some(right)) = (left, right) {
                out.push(SplitCandidate { left, right, shared_base: (u, v), shared_apex: w });
            }
        }
    }
    Ok(())
}

/// Assembles one side from the anchor, its assigned components and chords,
/// and validates it as a calligraph. Vertices are relabelled to ascending
/// original-label order.
fn build_side(
    g: &Graph,
    (u, v): (usize, usize),
    w: usize,
    comps: u32,
    chords: &[(usize, usize)],
) -> Option<SplitSide> {
    let side_mask = comps | (1 << u) | (1 << v) | (1 << w);
    let vertices: Vec<usize> = mask_vertices(side_mask).collect();
    let mut local = vec![usize::MAX; g.vertex_count()];
    for (i, &x) in vertices.iter().enumerate() {
        local[x] = i;
    }
    let mut edges: Vec<(usize, usize)> = vec![(local[u], local[v])];
    for &(a, b) in chords {
        edges.push((local[a], local[b]));
    }
    for (a, b) in g.edges() {
        // Induced edges touching an assigned component vertex; anchor-anchor
        // edges are handled above.
        let a_comp = comps & (1 << a) != 0;
        let b_comp = comps & (1 << b) != 0;
        if (a_comp && (b_comp || side_mask & (1 << b) != 0))
            || (b_comp && side_mask & (1 << a) != 0)
        {
            edges.push((local[a], local[b]));
        }
    }
    let side_graph = Graph::new(vertices.len(), edges).ok()?;
    let calligraph =
        MarkedCalligraph::validate(side_graph, (local[u], local[v]), local[w]).ok()?;
    Some(SplitSide { calligraph, vertices })
}

/// Finds a split in which both sides have at least five vertices, preferring
/// the most balanced one; ties are broken by canonical keys and then by the
/// vertex lists, so the choice is deterministic.
pub fn find_nontrivial_split(
    g: &Graph,
    cfg: &SplitConfig,
) -> Result<Option<SplitCandidate>, SplitError> {
    if !is_minimally_rigid(g)? {
        return Err(SplitError::NotMinimallyRigid);
    }
    if g.vertex_count() < 7 {
        // Both sides need >= 5 vertices and they share exactly 3.
        return Ok(None);
    }
    let candidates = enumerate_splits(g, cfg)?;
    let mut best: Option<(SplitRank, SplitCandidate)> = None;
    for cand in candidates {
        if cand.left.vertex_count() < 5 || cand.right.vertex_count() < 5 {
            continue;
        }
        let rank = SplitRank::of(&cand);
        match &best {
            Some((r, _)) if *r <= rank => {}
            _ => best = Some((rank, cand)),
        }
    }
    Ok(best.map(|(_, c)| c))
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct SplitRank {
    imbalance: usize,
    left_key: Vec<u8>,
    right_key: Vec<u8>,
    left_vertices: Vec<usize>,
    right_vertices: Vec<usize>,
    base: (usize, usize),
}

impl SplitRank {
    fn of(cand: &SplitCandidate) -> Self {
        let key = |side: &SplitSide| {
            let c = &side.calligraph;
            canonical_key(
                c.graph(),
                Pinning::Marked { apex: c.apex(), base: c.base() },
            )
            .expect("valid marks")
            .bytes()
            .to_vec()
        };
        SplitRank {
            imbalance: cand.left.vertex_count().abs_diff(cand.right.vertex_count()),
            left_key: key(&cand.left),
            right_key: key(&cand.right),
            left_vertices: cand.left.vertices.clone(),
            right_vertices: cand.right.vertices.clone(),
            base: cand.shared_base,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calligraph::{basic_c, Gadget};

    fn cfg() -> SplitConfig {
        SplitConfig::default()
    }

    /// Union of both sides mapped back to original labels.
    fn reconstruct(cand: &SplitCandidate, n: usize) -> Graph {
        let mut edges = std::collections::BTreeSet::new();
        for side in [&cand.left, &cand.right] {
            for (a, b) in side.calligraph.graph().edges() {
                let (x, y) = (side.vertices[a], side.vertices[b]);
                edges.insert((x.min(y), x.max(y)));
            }
        }
        Graph::new(n, edges).unwrap()
    }

    #[test]
    fn double_hub_splits_into_two_basic_cs() {
        let g = basic_c().augment(Gadget::C);
        let splits = enumerate_splits(&g, &cfg()).unwrap();
        assert!(!splits.is_empty());
        let with_two_cs = splits.iter().filter(|s| {
            s.left.calligraph.basic_kind() == Some(Gadget::C)
                && s.right.calligraph.basic_kind() == Some(Gadget::C)
        });
        assert!(with_two_cs.count() >= 1);
        for s in &splits {
            assert_eq!(reconstruct(s, 5), g);
            // Shared vertices: exactly the anchor triple.
            let shared: Vec<usize> = s
                .left
                .vertices
                .iter()
                .filter(|v| s.right.vertices.contains(v))
                .copied()
                .collect();
            assert_eq!(shared.len(), 3);
        }
    }

    #[test]
    fn k4_minus_edge_has_only_three_vertex_sides() {
        let g = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let splits = enumerate_splits(&g, &cfg()).unwrap();
        for s in &splits {
            assert!(s.left.vertex_count() == 3 || s.right.vertex_count() == 3);
        }
        assert_eq!(find_nontrivial_split(&g, &cfg()).unwrap(), None);
    }

    #[test]
    fn small_rigid_graphs_have_no_nontrivial_split() {
        // 6 vertices cannot host two sides of >= 5 vertices sharing 3.
        let g = basic_c().augment(Gadget::C); // 5 vertices
        assert_eq!(find_nontrivial_split(&g, &cfg()).unwrap(), None);
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(enumerate_splits(&g, &cfg()).unwrap_err(), SplitError::Disconnected);
    }

    #[test]
    fn not_rigid_rejected_by_finder() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(find_nontrivial_split(&g, &cfg()).unwrap_err(), SplitError::NotMinimallyRigid);
    }
}
