//! The gauge-fixed polynomial system cutting out realizations on the sphere.
//!
//! One endpoint of a chosen gauge edge is pinned to (0, 0, 1) and the other
//! is confined to the y = 0 plane, which kills the rotation group except for
//! the rotation by pi about the z-axis. Each remaining vertex contributes its
//! sphere equation and one dot-product equation per incident edge, giving a
//! square system of `3|V| - 4` quadrics in as many unknowns. The surviving
//! symmetry acts on solutions as `(x, y, z) -> (-x, -y, z)` per vertex, i.e.
//! diagonally by signs on the variables, and pairs up the endpoints.

use num_complex::Complex64;

use crate::graph::Graph;
use crate::rigidity::is_minimally_rigid;
use crate::solver::lengths::EdgeLengthAssignment;
use crate::solver::SolveError;

/// A monomial of degree at most two over the system variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mono {
    One,
    Lin(u32),
    /// Product of two variables, stored with `i <= j`.
    Quad(u32, u32),
}

#[derive(Debug, Clone, Copy)]
pub struct Term {
    pub coeff: Complex64,
    pub mono: Mono,
}

/// A sparse polynomial with complex coefficients.
#[derive(Debug, Clone, Default)]
pub struct Poly {
    pub terms: Vec<Term>,
}

impl Poly {
    fn push(&mut self, coeff: f64, mono: Mono) {
        self.terms.push(Term { coeff: Complex64::new(coeff, 0.0), mono });
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::default();
        for t in &self.terms {
            acc += match t.mono {
                Mono::One => t.coeff,
                Mono::Lin(i) => t.coeff * z[i as usize],
                Mono::Quad(i, j) => t.coeff * z[i as usize] * z[j as usize],
            };
        }
        acc
    }

    /// Adds this polynomial's gradient at `z`, scaled by `scale`, into `row`.
    pub fn grad_into(&self, z: &[Complex64], scale: Complex64, row: &mut [Complex64]) {
        for t in &self.terms {
            match t.mono {
                Mono::One => {}
                Mono::Lin(i) => row[i as usize] += scale * t.coeff,
                Mono::Quad(i, j) if i == j => {
                    row[i as usize] += scale * t.coeff * 2.0 * z[i as usize];
                }
                Mono::Quad(i, j) => {
                    row[i as usize] += scale * t.coeff * z[j as usize];
                    row[j as usize] += scale * t.coeff * z[i as usize];
                }
            }
        }
    }

    /// Degree in each variable group, given the group id of every variable.
    fn multidegree(&self, group_of: &[usize], ngroups: usize) -> Vec<u32> {
        let mut deg = vec![0u32; ngroups];
        for t in &self.terms {
            match t.mono {
                Mono::One => {}
                Mono::Lin(i) => deg[group_of[i as usize]] = deg[group_of[i as usize]].max(1),
                Mono::Quad(i, j) => {
                    let (gi, gj) = (group_of[i as usize], group_of[j as usize]);
                    if gi == gj {
                        deg[gi] = deg[gi].max(2);
                    } else {
                        deg[gi] = deg[gi].max(1);
                        deg[gj] = deg[gj].max(1);
                    }
                }
            }
        }
        deg
    }
}

/// Which coordinate of which vertex a system variable stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarInfo {
    pub vertex: usize,
    pub coord: Coord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coord {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaugeRecord {
    /// Vertex pinned to (0, 0, 1).
    pub pinned: usize,
    /// Vertex confined to the y = 0 plane.
    pub planar: usize,
}

#[derive(Debug, Clone)]
pub struct RealizationSystem {
    pub nvars: usize,
    pub polys: Vec<Poly>,
    pub var_info: Vec<VarInfo>,
    /// Sign of each variable under the residual pi-rotation.
    pub sigma_sign: Vec<f64>,
    /// Variable indices per vertex group (group 0 is the planar vertex).
    pub groups: Vec<Vec<u32>>,
    /// Actual degree of each polynomial in each group.
    pub multidegrees: Vec<Vec<u32>>,
    pub gauge: GaugeRecord,
}

impl RealizationSystem {
    /// Bezout bound of the start family: every constraint is a quadric, so
    /// the total-degree homotopy tracks `2^(3|V| - 4)` paths.
    pub fn total_degree(&self) -> u64 {
        1u64 << self.nvars
    }

    /// Applies the residual symmetry to a solution vector.
    pub fn apply_sigma(&self, z: &[Complex64]) -> Vec<Complex64> {
        z.iter().zip(&self.sigma_sign).map(|(&v, &s)| v * s).collect()
    }

    pub fn eval_into(&self, z: &[Complex64], out: &mut [Complex64]) {
        for (p, o) in self.polys.iter().zip(out.iter_mut()) {
            *o = p.eval(z);
        }
    }

    /// Writes the Jacobian (row-major) at `z` into `jac`.
    pub fn jacobian_into(&self, z: &[Complex64], jac: &mut [Complex64]) {
        jac.fill(Complex64::default());
        let one = Complex64::new(1.0, 0.0);
        for (r, p) in self.polys.iter().enumerate() {
            p.grad_into(z, one, &mut jac[r * self.nvars..(r + 1) * self.nvars]);
        }
    }
}

/// Builds the gauge-fixed system for a minimally rigid graph. The gauge edge
/// is the lexicographically smallest edge.
pub fn build_system(
    g: &Graph,
    lengths: &EdgeLengthAssignment,
) -> Result<RealizationSystem, SolveError> {
    if !is_minimally_rigid(g).map_err(|_| SolveError::NotMinimallyRigid)? {
        return Err(SolveError::NotMinimallyRigid);
    }
    let (p, q) = g.edges().next().expect("a rigid graph has edges");
    let n = g.vertex_count();
    let nvars = 3 * n - 4;

    // Variable layout: (x_q, z_q), then (x_v, y_v, z_v) for the remaining
    // vertices in ascending label order.
    let mut var_of = vec![[usize::MAX; 3]; n];
    let mut var_info = Vec::with_capacity(nvars);
    let mut sigma_sign = Vec::with_capacity(nvars);
    let mut groups: Vec<Vec<u32>> = Vec::new();
    let mut group_of_var = Vec::with_capacity(nvars);

    var_of[q][0] = 0;
    var_of[q][2] = 1;
    var_info.push(VarInfo { vertex: q, coord: Coord::X });
    var_info.push(VarInfo { vertex: q, coord: Coord::Z });
    sigma_sign.extend([-1.0, 1.0]);
    groups.push(vec![0, 1]);
    group_of_var.extend([0, 0]);

    for v in g.vertices().filter(|&v| v != p && v != q) {
        let base = var_info.len();
        var_of[v] = [base, base + 1, base + 2];
        var_info.extend([
            VarInfo { vertex: v, coord: Coord::X },
            VarInfo { vertex: v, coord: Coord::Y },
            VarInfo { vertex: v, coord: Coord::Z },
        ]);
        sigma_sign.extend([-1.0, -1.0, 1.0]);
        groups.push(vec![base as u32, base as u32 + 1, base as u32 + 2]);
        group_of_var.extend([groups.len() - 1; 3]);
    }
    debug_assert_eq!(var_info.len(), nvars);

    let mut polys = Vec::with_capacity(nvars);

    // Sphere equation of the planar vertex: x_q^2 + z_q^2 - 1.
    let mut sphere_q = Poly::default();
    sphere_q.push(1.0, Mono::Quad(0, 0));
    sphere_q.push(1.0, Mono::Quad(1, 1));
    sphere_q.push(-1.0, Mono::One);
    polys.push(sphere_q);

    // Gauge edge: z_q = c_pq.
    let mut gauge_edge = Poly::default();
    gauge_edge.push(1.0, Mono::Lin(1));
    gauge_edge.push(-lengths.cosine(p, q), Mono::One);
    polys.push(gauge_edge);

    // Sphere equations of the free vertices.
    for v in g.vertices().filter(|&v| v != p && v != q) {
        let mut s = Poly::default();
        for k in 0..3 {
            let i = var_of[v][k] as u32;
            s.push(1.0, Mono::Quad(i, i));
        }
        s.push(-1.0, Mono::One);
        polys.push(s);
    }

    // Dot-product equations for the non-gauge edges, with the pinned vertex
    // substituted as (0, 0, 1) and the planar vertex as (x_q, 0, z_q).
    let quad = |a: usize, b: usize| {
        let (i, j) = (a.min(b) as u32, a.max(b) as u32);
        Mono::Quad(i, j)
    };
    for (u, v) in g.edges().filter(|&e| e != (p, q)) {
        let c = lengths.cosine(u, v);
        let mut eq = Poly::default();
        match (u == p || v == p, u == q || v == q) {
            (true, _) => {
                // Edge to the pinned vertex: z_w = c.
                let w = if u == p { v } else { u };
                eq.push(1.0, Mono::Lin(var_of[w][2] as u32));
            }
            (false, true) => {
                // Edge to the planar vertex: x_q x_w + z_q z_w = c.
                let w = if u == q { v } else { u };
                eq.push(1.0, quad(0, var_of[w][0]));
                eq.push(1.0, quad(1, var_of[w][2]));
            }
            (false, false) => {
                for k in 0..3 {
                    eq.push(1.0, quad(var_of[u][k], var_of[v][k]));
                }
            }
        }
        eq.push(-c, Mono::One);
        polys.push(eq);
    }
    assert_eq!(polys.len(), nvars, "gauge accounting: equations == unknowns == 3|V| - 4");

    let ngroups = groups.len();
    let multidegrees = polys.iter().map(|p| p.multidegree(&group_of_var, ngroups)).collect();

    Ok(RealizationSystem {
        nvars,
        polys,
        var_info,
        sigma_sign,
        groups,
        multidegrees,
        gauge: GaugeRecord { pinned: p, planar: q },
    })
}
