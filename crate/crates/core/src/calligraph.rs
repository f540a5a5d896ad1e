//! Marked calligraphs: graphs with one degree of freedom.
//!
//! A calligraph is a graph with `|E| = 2|V| - 4` edges together with a marked
//! base edge and an apex vertex, such that joining the apex to at least one
//! base endpoint yields a rigid graph. The base edge is stored *ordered*:
//! the class entries `b` and `c` computed by the recursion are attached to
//! the first and second base vertex respectively, so the orientation must be
//! part of the value. Reversing it mirrors the calligraph and swaps `b`/`c`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::rigidity::is_rigid_spanning;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalligraphError {
    #[error("label {0} is not a vertex of the graph")]
    LabelOutOfRange(usize),
    #[error("apex {0} coincides with a base endpoint")]
    ApexOnBase(usize),
    #[error("base pair ({0}, {1}) is not an edge")]
    MissingBaseEdge(usize, usize),
    #[error("edge count mismatch: a calligraph on {vertices} vertices needs {expected} edges, got {got}")]
    EdgeCountMismatch { vertices: usize, expected: usize, got: usize },
    #[error("joining the apex to either base endpoint does not produce a rigid graph")]
    NotRigidWhenAugmented,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One of the three gadgets glued onto a calligraph by the recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gadget {
    /// Adds the edge {apex, first base vertex}.
    L,
    /// Adds the edge {apex, second base vertex}.
    R,
    /// Adds a fresh vertex joined to the apex and both base vertices.
    C,
}

impl Gadget {
    pub const ALL: [Gadget; 3] = [Gadget::L, Gadget::R, Gadget::C];

    pub fn letter(self) -> char {
        match self {
            Gadget::L => 'L',
            Gadget::R => 'R',
            Gadget::C => 'C',
        }
    }
}

/// A validated calligraph with its ordered base edge and apex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedCalligraph {
    graph: Graph,
    base: (usize, usize),
    apex: usize,
}

impl MarkedCalligraph {
    /// Checks all calligraph conditions and returns the marked value.
    pub fn validate(graph: Graph, base: (usize, usize), apex: usize) -> Result<Self, CalligraphError> {
        let n = graph.vertex_count();
        for label in [base.0, base.1, apex] {
            if label >= n {
                return Err(CalligraphError::LabelOutOfRange(label));
            }
        }
        if apex == base.0 || apex == base.1 {
            return Err(CalligraphError::ApexOnBase(apex));
        }
        if !graph.has_edge(base.0, base.1) {
            return Err(CalligraphError::MissingBaseEdge(base.0, base.1));
        }
        let expected = 2 * n - 4;
        if graph.edge_count() != expected {
            return Err(CalligraphError::EdgeCountMismatch {
                vertices: n,
                expected,
                got: graph.edge_count(),
            });
        }
        let rigid_either = [base.0, base.1].into_iter().any(|u| {
            let aug = graph.with_edge(apex, u).expect("labels validated");
            is_rigid_spanning(&aug).expect("at least 3 vertices")
        });
        if !rigid_either {
            return Err(CalligraphError::NotRigidWhenAugmented);
        }
        Ok(MarkedCalligraph { graph, base, apex })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn base(&self) -> (usize, usize) {
        self.base
    }

    pub fn apex(&self) -> usize {
        self.apex
    }

    /// The same calligraph with the base orientation reversed.
    pub fn mirrored(&self) -> Self {
        MarkedCalligraph {
            graph: self.graph.clone(),
            base: (self.base.1, self.base.0),
            apex: self.apex,
        }
    }

    /// Glues a gadget onto the marks. Adding an edge that is already present
    /// is a no-op (the result then fails minimal rigidity, which the
    /// recursion treats as a degenerate equation).
    pub fn augment(&self, gadget: Gadget) -> Graph {
        match gadget {
            Gadget::L => self.graph.with_edge(self.apex, self.base.0).expect("valid labels"),
            Gadget::R => self.graph.with_edge(self.apex, self.base.1).expect("valid labels"),
            Gadget::C => {
                let (g, v) = self.graph.with_new_vertex().expect("below vertex limit");
                g.with_edge(self.apex, v)
                    .and_then(|g| g.with_edge(self.base.0, v))
                    .and_then(|g| g.with_edge(self.base.1, v))
                    .expect("fresh vertex edges are new")
            }
        }
    }

    /// Recognizes the three basic gadgets, which are the base cases of the
    /// class recursion.
    pub fn basic_kind(&self) -> Option<Gadget> {
        let g = &self.graph;
        let (b1, b2) = self.base;
        match (g.vertex_count(), g.edge_count()) {
            (3, 2) if g.has_edge(self.apex, b1) => Some(Gadget::L),
            (3, 2) if g.has_edge(self.apex, b2) => Some(Gadget::R),
            (4, 4) => {
                let hub = (0..4).find(|&v| v != self.apex && v != b1 && v != b2)?;
                (g.has_edge(self.apex, hub) && g.has_edge(b1, hub) && g.has_edge(b2, hub))
                    .then_some(Gadget::C)
            }
            _ => None,
        }
    }
}

/// The basic calligraph with the apex joined to the first base vertex.
pub fn basic_l() -> MarkedCalligraph {
    let g = Graph::new(3, [(1, 2), (0, 1)]).unwrap();
    MarkedCalligraph::validate(g, (1, 2), 0).expect("L is a calligraph")
}

/// The basic calligraph with the apex joined to the second base vertex.
pub fn basic_r() -> MarkedCalligraph {
    let g = Graph::new(3, [(1, 2), (0, 2)]).unwrap();
    MarkedCalligraph::validate(g, (1, 2), 0).expect("R is a calligraph")
}

/// The basic four-vertex calligraph whose hub is joined to apex and base.
pub fn basic_c() -> MarkedCalligraph {
    let g = Graph::new(4, [(1, 2), (0, 3), (1, 3), (2, 3)]).unwrap();
    MarkedCalligraph::validate(g, (1, 2), 0).expect("C is a calligraph")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigidity::{brute_force_laman, is_minimally_rigid};

    #[test]
    fn basic_gadgets_validate() {
        assert_eq!(basic_l().basic_kind(), Some(Gadget::L));
        assert_eq!(basic_r().basic_kind(), Some(Gadget::R));
        assert_eq!(basic_c().basic_kind(), Some(Gadget::C));
        assert_eq!(basic_l().graph().edge_count(), 2);
        assert_eq!(basic_c().graph().edge_count(), 4);
    }

    #[test]
    fn k3_is_not_a_calligraph() {
        let k3 = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        match MarkedCalligraph::validate(k3, (1, 2), 0) {
            Err(CalligraphError::EdgeCountMismatch { expected: 2, got: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn distinct_errors() {
        let g = Graph::new(3, [(1, 2), (0, 1)]).unwrap();
        assert!(matches!(
            MarkedCalligraph::validate(g.clone(), (1, 2), 1),
            Err(CalligraphError::ApexOnBase(1))
        ));
        assert!(matches!(
            MarkedCalligraph::validate(g.clone(), (0, 2), 1),
            Err(CalligraphError::MissingBaseEdge(0, 2))
        ));
        assert!(matches!(
            MarkedCalligraph::validate(g, (1, 3), 0),
            Err(CalligraphError::LabelOutOfRange(3))
        ));
        // Right edge count but both apex-base edges already present, so both
        // augmentations are no-ops and nothing becomes rigid.
        let loose = Graph::new(4, [(1, 2), (0, 1), (0, 2), (1, 3)]).unwrap();
        assert!(matches!(
            MarkedCalligraph::validate(loose, (1, 2), 0),
            Err(CalligraphError::NotRigidWhenAugmented)
        ));
    }

    #[test]
    fn mirror_validates_identically() {
        let c = basic_c();
        let mirrored =
            MarkedCalligraph::validate(c.graph().clone(), (c.base().1, c.base().0), c.apex());
        assert!(mirrored.is_ok());
    }

    #[test]
    fn augment_c_gadget() {
        // Gluing C onto the basic C yields the 5-vertex, 7-edge double-hub
        // graph, which is minimally rigid.
        let g = basic_c().augment(Gadget::C);
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 7);
        assert!(is_minimally_rigid(&g).unwrap());
    }

    #[test]
    fn augment_l_gives_k4_minus_edge() {
        let g = basic_c().augment(Gadget::L);
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 5);
        assert!(brute_force_laman(&g).unwrap());
        // The missing edge is {apex, second base vertex}.
        assert!(!g.has_edge(0, 2));
    }

    #[test]
    fn augment_existing_edge_is_noop() {
        let l = basic_l();
        assert_eq!(l.augment(Gadget::L), *l.graph());
    }

    #[test]
    fn cv_plus_base_l_edge_spans() {
        // The basic C plus the L edge is exactly K4 minus one edge (oracle:
        // brute force), hence rigid-spanning.
        let g = basic_c().augment(Gadget::L);
        assert!(crate::rigidity::is_rigid_spanning(&g).unwrap());
    }
}
