//! The recursive realization counter.
//!
//! `count_realizations` first looks for a split into two calligraphs that
//! both have at least five vertices; if one exists, the count is the product
//! of the two class triples under the quadratic form, otherwise the
//! numerical solver takes over. A calligraph's class is determined by gluing
//! each of the three basic gadgets onto its marks and counting the resulting
//! graphs: with `[H] = (a, b, c)` the counts satisfy
//!
//! ```text
//! 2(a - b) = count(H_L),  2(a - c) = count(H_R),  4a = count(H_C)
//! ```
//!
//! where a gadget whose glued graph fails minimal rigidity contributes a
//! zero count. Both recursions shrink the vertex count strictly, and all
//! intermediate results are memoized under canonical keys.

use serde::Serialize;
use thiserror::Error;

use crate::cache::{CacheStore, Provenance};
use crate::calligraph::{basic_c, basic_l, basic_r, Gadget, MarkedCalligraph};
use crate::class::{quad_form, S2Class, CLASS_C, CLASS_L, CLASS_R};
use crate::graph::Graph;
use crate::rigidity::{is_minimally_rigid, RigidityError};
use crate::solver::{fallback_count, SolveError, SolverConfig};
use crate::split::{find_nontrivial_split, SplitConfig, SplitError};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("graph is not minimally rigid")]
    NotMinimallyRigid,
    #[error("recursion depth limit of {0} exceeded")]
    DepthLimit(usize),
    #[error(
        "class integrality violated for the equations (L: {r_l}, R: {r_r}, C: {r_c}); \
         this signals a solver miscount or a non-generic run"
    )]
    ClassIntegrality { r_l: i64, r_r: i64, r_c: i64 },
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub solver: SolverConfig,
    pub split: SplitConfig,
    pub depth_limit: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            solver: SolverConfig::default(),
            split: SplitConfig::default(),
            depth_limit: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Split,
    Fallback,
}

/// One equation `[F] . (a, b, c) = rhs` used to pin down a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassEquation {
    pub gadget: char,
    pub rigid: bool,
    pub rhs: i64,
}

/// Recursion trace for auditing; emitted by the CLI under `--trace`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TraceNode {
    CachedCount { vertices: usize, count: i64 },
    CachedClass { vertices: usize, class: [i64; 3] },
    BaseClass { gadget: char, class: [i64; 3] },
    SplitCount {
        vertices: usize,
        count: i64,
        base: (usize, usize),
        apex: usize,
        left: Box<TraceNode>,
        right: Box<TraceNode>,
    },
    FallbackCount {
        vertices: usize,
        count: i64,
        paths_tracked: u64,
        trials: usize,
    },
    ClassBySystem {
        vertices: usize,
        class: [i64; 3],
        equations: Vec<ClassEquation>,
        children: Vec<TraceNode>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountOutcome {
    pub count: i64,
    pub method: CountMethod,
    pub trace: TraceNode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassOutcome {
    pub class: S2Class,
    pub equations: Vec<ClassEquation>,
    pub trace: TraceNode,
}

/// Shared entry point owning the cache and configuration.
#[derive(Debug, Default)]
pub struct Engine {
    cfg: EngineConfig,
    cache: CacheStore,
}

impl Engine {
    pub fn new(cfg: EngineConfig) -> Self {
        Engine { cfg, cache: CacheStore::new() }
    }

    pub fn with_cache(cfg: EngineConfig, cache: CacheStore) -> Self {
        Engine { cfg, cache }
    }

    pub fn cache(&self) -> &CacheStore {
        &self.cache
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    /// The number of realizations of a minimally rigid graph on the sphere,
    /// up to rotations.
    pub fn count_realizations(&self, g: &Graph) -> Result<CountOutcome, EngineError> {
        self.count_inner(g, 0, usize::MAX)
    }

    /// The class triple of a calligraph.
    pub fn s2_class(&self, h: &MarkedCalligraph) -> Result<ClassOutcome, EngineError> {
        self.class_inner(h, 0, usize::MAX)
    }

    fn count_inner(&self, g: &Graph, depth: usize, parent_vertices: usize) -> Result<CountOutcome, EngineError> {
        debug_assert!(
            g.vertex_count() < parent_vertices || parent_vertices == usize::MAX,
            "recursion must shrink the vertex count"
        );
        if depth > self.cfg.depth_limit {
            return Err(EngineError::DepthLimit(self.cfg.depth_limit));
        }
        if !is_minimally_rigid(g)? {
            return Err(EngineError::NotMinimallyRigid);
        }
        if let Some((count, method)) = self.cache.get_count_entry(g) {
            let method =
                if method == "fallback" { CountMethod::Fallback } else { CountMethod::Split };
            return Ok(CountOutcome {
                count,
                method,
                trace: TraceNode::CachedCount { vertices: g.vertex_count(), count },
            });
        }

        let outcome = match find_nontrivial_split(g, &self.cfg.split)? {
            Some(split) => {
                let left = self.class_inner(&split.left.calligraph, depth + 1, g.vertex_count())?;
                let right =
                    self.class_inner(&split.right.calligraph, depth + 1, g.vertex_count())?;
                let count = quad_form(left.class, right.class);
                CountOutcome {
                    count,
                    method: CountMethod::Split,
                    trace: TraceNode::SplitCount {
                        vertices: g.vertex_count(),
                        count,
                        base: split.shared_base,
                        apex: split.shared_apex,
                        left: Box::new(left.trace),
                        right: Box::new(right.trace),
                    },
                }
            }
            None => {
                let (count, certificate) = fallback_count(g, &self.cfg.solver)?;
                let trace = TraceNode::FallbackCount {
                    vertices: g.vertex_count(),
                    count,
                    paths_tracked: certificate.paths_tracked,
                    trials: certificate.trials.len(),
                };
                self.cache.put_count(
                    g,
                    count,
                    Provenance::with_certificate("fallback", certificate),
                );
                return Ok(CountOutcome { count, method: CountMethod::Fallback, trace });
            }
        };
        self.cache.put_count(g, outcome.count, Provenance::new("split"));
        Ok(outcome)
    }

    fn class_inner(
        &self,
        h: &MarkedCalligraph,
        depth: usize,
        parent_vertices: usize,
    ) -> Result<ClassOutcome, EngineError> {
        if depth > self.cfg.depth_limit {
            return Err(EngineError::DepthLimit(self.cfg.depth_limit));
        }
        if let Some(gadget) = h.basic_kind() {
            let class = match gadget {
                Gadget::L => CLASS_L,
                Gadget::R => CLASS_R,
                Gadget::C => CLASS_C,
            };
            return Ok(ClassOutcome {
                class,
                equations: Vec::new(),
                trace: TraceNode::BaseClass { gadget: gadget.letter(), class: class.as_array() },
            });
        }
        if let Some(class) = self.cache.get_class(h) {
            return Ok(ClassOutcome {
                class,
                equations: Vec::new(),
                trace: TraceNode::CachedClass {
                    vertices: h.graph().vertex_count(),
                    class: class.as_array(),
                },
            });
        }

        let mut equations = Vec::with_capacity(3);
        let mut children = Vec::with_capacity(3);
        let mut counts = [0i64; 3];
        for (i, gadget) in Gadget::ALL.into_iter().enumerate() {
            let glued = h.augment(gadget);
            let rigid = is_minimally_rigid(&glued)?;
            if rigid {
                // Gluing adds at most one vertex, so this still shrinks
                // relative to the graph the calligraph was split from.
                let outcome = self.count_inner(&glued, depth + 1, parent_vertices)?;
                counts[i] = outcome.count;
                children.push(outcome.trace);
            }
            equations.push(ClassEquation { gadget: gadget.letter(), rigid, rhs: counts[i] });
        }
        let [r_l, r_r, r_c] = counts;
        if r_c % 4 != 0 || r_l % 2 != 0 || r_r % 2 != 0 {
            return Err(EngineError::ClassIntegrality { r_l, r_r, r_c });
        }
        let a = r_c / 4;
        let class = S2Class::new(a, a - r_l / 2, a - r_r / 2);
        self.cache.put_class(h, class, Provenance::new("system"));
        Ok(ClassOutcome {
            class,
            equations: equations.clone(),
            trace: TraceNode::ClassBySystem {
                vertices: h.graph().vertex_count(),
                class: class.as_array(),
                equations,
                children,
            },
        })
    }

    /// Forces the equation path even for the basic gadgets (used to validate
    /// the base classes against the recursion itself).
    pub fn class_by_equations(&self, h: &MarkedCalligraph) -> Result<ClassOutcome, EngineError> {
        let mut equations = Vec::with_capacity(3);
        let mut counts = [0i64; 3];
        for (i, gadget) in Gadget::ALL.into_iter().enumerate() {
            let glued = h.augment(gadget);
            let rigid = is_minimally_rigid(&glued)?;
            if rigid {
                counts[i] = self.count_inner(&glued, 1, usize::MAX)?.count;
            }
            equations.push(ClassEquation { gadget: gadget.letter(), rigid, rhs: counts[i] });
        }
        let [r_l, r_r, r_c] = counts;
        if r_c % 4 != 0 || r_l % 2 != 0 || r_r % 2 != 0 {
            return Err(EngineError::ClassIntegrality { r_l, r_r, r_c });
        }
        let a = r_c / 4;
        let class = S2Class::new(a, a - r_l / 2, a - r_r / 2);
        Ok(ClassOutcome {
            class,
            equations: equations.clone(),
            trace: TraceNode::ClassBySystem {
                vertices: h.graph().vertex_count(),
                class: class.as_array(),
                equations,
                children: Vec::new(),
            },
        })
    }
}

/// Convenience constructors for the basic gadgets, re-exported here so that
/// engine callers see the whole class vocabulary in one place.
pub fn basic_gadget(gadget: Gadget) -> MarkedCalligraph {
    match gadget {
        Gadget::L => basic_l(),
        Gadget::R => basic_r(),
        Gadget::C => basic_c(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calligraph::basic_c;

    fn engine() -> Engine {
        Engine::new(EngineConfig::default())
    }

    #[test]
    fn base_classes() {
        let e = engine();
        assert_eq!(e.s2_class(&basic_l()).unwrap().class, CLASS_L);
        assert_eq!(e.s2_class(&basic_r()).unwrap().class, CLASS_R);
        assert_eq!(e.s2_class(&basic_c()).unwrap().class, CLASS_C);
    }

    #[test]
    fn k4_minus_edge_counts_four() {
        let e = engine();
        let g = basic_c().augment(Gadget::L);
        let out = e.count_realizations(&g).unwrap();
        assert_eq!(out.count, 4);
        assert_eq!(out.method, CountMethod::Fallback);
        // Second run hits the cache.
        let again = e.count_realizations(&g).unwrap();
        assert_eq!(again.count, 4);
        assert!(matches!(again.trace, TraceNode::CachedCount { .. }));
    }

    #[test]
    fn double_hub_counts_eight() {
        let e = engine();
        let g = basic_c().augment(Gadget::C);
        assert_eq!(e.count_realizations(&g).unwrap().count, 8);
    }

    #[test]
    fn forced_equations_reproduce_hub_class() {
        let e = engine();
        let out = e.class_by_equations(&basic_c()).unwrap();
        assert_eq!(out.class, CLASS_C);
        let rhs: Vec<i64> = out.equations.iter().map(|eq| eq.rhs).collect();
        assert_eq!(rhs, vec![4, 4, 8]);
    }

    #[test]
    fn non_rigid_input_rejected() {
        let e = engine();
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert!(matches!(e.count_realizations(&g), Err(EngineError::NotMinimallyRigid)));
    }

    #[test]
    fn mirror_rule() {
        // The class of the mirrored calligraph swaps b and c.
        let e = engine();
        let c = basic_c();
        let m = c.mirrored();
        assert_eq!(e.s2_class(&m).unwrap().class, e.s2_class(&c).unwrap().class.swapped());
        let l = basic_l();
        assert_eq!(e.s2_class(&l.mirrored()).unwrap().class, CLASS_L.swapped());
    }
}
