//! Projective form of the homotopy.
//!
//! Tracking in affine coordinates chases diverging paths toward infinity
//! with ever-shrinking steps. Instead, each variable group is homogenized
//! with an extra coordinate and cut by a random affine patch, so that paths
//! heading to infinity converge to ordinary bounded endpoints with the
//! homogenizing coordinate near zero. Every constraint in the realization
//! system has (multi-)degree at most two, so homogenized target rows and the
//! expanded linear-product start rows are again quadrics and share one
//! sparse-polynomial representation.
//!
//! The total-degree start treats every equation as a quadric
//! (`z_i^2 - h^2`, `2^n` paths, one homogenizing variable). The
//! multi-homogeneous start groups variables by vertex: each equation is
//! replaced by a product of random linear forms matching its degree in each
//! group, and the start points are the ways of choosing one factor per
//! equation so that every group is cut exactly as often as it has
//! variables. Patch rows are constant in the homotopy parameter.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::solver::system::{Mono, Poly, RealizationSystem, Term};
use crate::solver::track::{lu_factor, lu_solve};
use crate::solver::{SolveError, StartKind};

/// Ratio of the homogenizing coordinate to the point scale below which an
/// endpoint counts as lying at infinity.
const INFINITY_RATIO: f64 = 1e-8;

#[derive(Debug, Clone)]
enum StartPoints {
    /// Sign choices for the variables paired with quadratic equations; the
    /// variables paired with linear equations are forced and the patch fixes
    /// the overall scale.
    TotalDegree { quadratic_vars: Vec<u32> },
    /// One factor choice per equation, for every start point.
    Cells { factors: Vec<Vec<LinForm>>, cells: Vec<Vec<u8>> },
}

/// A homogeneous linear form supported on one extended variable group.
#[derive(Debug, Clone)]
struct LinForm {
    group: usize,
    /// Coefficients aligned with the extended group (hom variable last).
    coeffs: Vec<Complex64>,
}

/// The homotopy-ready projective system.
#[derive(Debug, Clone)]
pub struct Tracked {
    /// Tracked variables: the affine ones first, homogenizing ones after.
    pub dim: usize,
    pub naffine: usize,
    /// Homogenized target rows (one per affine equation).
    f_rows: Vec<Poly>,
    /// Homogenized start rows.
    g_rows: Vec<Poly>,
    /// Affine patch rows, one per homogenizing variable; constant in `t`.
    patches: Vec<Poly>,
    /// Homogenizing (tracked) variable attached to each affine variable.
    hom_of_var: Vec<u32>,
    /// Extended groups: group variables plus their hom variable.
    groups_ext: Vec<Vec<u32>>,
    start: StartPoints,
}

impl Tracked {
    pub fn path_count(&self) -> u64 {
        match &self.start {
            StartPoints::TotalDegree { quadratic_vars } => 1u64 << quadratic_vars.len(),
            StartPoints::Cells { cells, .. } => cells.len() as u64,
        }
    }

    pub fn start_point(&self, idx: u64) -> Vec<Complex64> {
        let mut z = vec![Complex64::default(); self.dim];
        match &self.start {
            StartPoints::TotalDegree { quadratic_vars } => {
                // z_i = s_i * h with s_i = -1 on the idx-selected quadratic
                // variables, and the scale h fixed by the patch row.
                let patch = &self.patches[0];
                let h_var = self.naffine;
                let mut sign = vec![1.0f64; self.naffine];
                for (bit, &v) in quadratic_vars.iter().enumerate() {
                    if idx >> bit & 1 == 1 {
                        sign[v as usize] = -1.0;
                    }
                }
                let mut acc = Complex64::default();
                for t in &patch.terms {
                    match t.mono {
                        Mono::Lin(v) if (v as usize) < self.naffine => {
                            acc += t.coeff * sign[v as usize]
                        }
                        Mono::Lin(_) => acc += t.coeff,
                        _ => {}
                    }
                }
                let h = acc.inv();
                z[h_var] = h;
                for i in 0..self.naffine {
                    z[i] = h * sign[i];
                }
            }
            StartPoints::Cells { factors, cells } => {
                let cell = &cells[idx as usize];
                for (g, vars) in self.groups_ext.iter().enumerate() {
                    let k = vars.len();
                    let mut a = vec![Complex64::default(); k * k];
                    let mut b = vec![Complex64::default(); k];
                    let mut row = 0usize;
                    for (eq, &choice) in cell.iter().enumerate() {
                        let form = &factors[eq][choice as usize];
                        if form.group == g {
                            a[row * k..(row + 1) * k].copy_from_slice(&form.coeffs);
                            row += 1;
                        }
                    }
                    debug_assert_eq!(row, k - 1);
                    // Last row: the group's patch.
                    let pc = patch_coeffs(&self.patches[g], vars);
                    for (col, &c) in pc.iter().enumerate() {
                        a[row * k + col] = c;
                    }
                    b[row] = Complex64::new(1.0, 0.0);
                    let mut piv = vec![0usize; k];
                    let ok = lu_factor(&mut a, k, &mut piv);
                    debug_assert!(ok, "generic forms and patch are independent");
                    lu_solve(&a, &piv, &mut b, k);
                    for (i, &v) in vars.iter().enumerate() {
                        z[v as usize] = b[i];
                    }
                }
            }
        }
        z
    }

    /// `H(z, t) = (1-t) gamma G + t F` on equation rows, patch rows as-is.
    pub fn h_eval_into(&self, z: &[Complex64], t: f64, gamma: Complex64, out: &mut [Complex64]) {
        let m = self.f_rows.len();
        let s = gamma * (1.0 - t);
        for (i, (f, g)) in self.f_rows.iter().zip(&self.g_rows).enumerate() {
            out[i] = t * f.eval(z) + s * g.eval(z);
        }
        for (i, p) in self.patches.iter().enumerate() {
            out[m + i] = p.eval(z);
        }
    }

    /// `dH/dt`: `F - gamma G` on equation rows, zero on patch rows.
    pub fn h_dt_into(&self, z: &[Complex64], gamma: Complex64, out: &mut [Complex64]) {
        let m = self.f_rows.len();
        for (i, (f, g)) in self.f_rows.iter().zip(&self.g_rows).enumerate() {
            out[i] = f.eval(z) - gamma * g.eval(z);
        }
        out[m..].fill(Complex64::default());
    }

    pub fn h_jacobian_into(
        &self,
        z: &[Complex64],
        t: f64,
        gamma: Complex64,
        jac: &mut [Complex64],
    ) {
        jac.fill(Complex64::default());
        let n = self.dim;
        let m = self.f_rows.len();
        let s = gamma * (1.0 - t);
        let tc = Complex64::new(t, 0.0);
        for i in 0..m {
            let row = &mut jac[i * n..(i + 1) * n];
            self.f_rows[i].grad_into(z, tc, row);
            self.g_rows[i].grad_into(z, s, row);
        }
        let one = Complex64::new(1.0, 0.0);
        for (i, p) in self.patches.iter().enumerate() {
            p.grad_into(z, one, &mut jac[(m + i) * n..(m + i + 1) * n]);
        }
    }

    /// Magnitudes of the homogenizing coordinates, one per group.
    pub fn hom_values<'a>(&'a self, z: &'a [Complex64]) -> impl Iterator<Item = f64> + 'a {
        self.groups_ext
            .iter()
            .map(move |g| z[*g.last().expect("groups are nonempty") as usize].norm())
    }

    /// Affine coordinates of a projective endpoint, or `None` if any group's
    /// homogenizing coordinate vanishes relative to the point scale.
    pub fn dehomogenize(&self, z: &[Complex64]) -> Option<Vec<Complex64>> {
        let scale = z.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
        for group in &self.groups_ext {
            let h = *group.last().expect("groups are nonempty") as usize;
            if z[h].norm() <= INFINITY_RATIO * scale {
                return None;
            }
        }
        Some(
            (0..self.naffine)
                .map(|i| z[i] / z[self.hom_of_var[i] as usize])
                .collect(),
        )
    }
}

fn patch_coeffs(patch: &Poly, vars: &[u32]) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); vars.len()];
    for t in &patch.terms {
        if let Mono::Lin(v) = t.mono {
            if let Some(pos) = vars.iter().position(|&x| x == v) {
                out[pos] = t.coeff;
            }
        }
    }
    out
}

/// Builds the tracked projective system for the configured start kind.
pub fn build_tracked(
    sys: &RealizationSystem,
    kind: StartKind,
    seed: u64,
    max_paths: u64,
) -> Result<Tracked, SolveError> {
    let n = sys.nvars;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut unit = move |rng: &mut ChaCha20Rng| {
        let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let radius: f64 = rng.gen_range(0.4..1.0);
        Complex64::from_polar(radius, angle)
    };

    match kind {
        StartKind::TotalDegree => {
            // One homogenizing variable `h` at index n. The start pairs the
            // i-th equation with the i-th variable at the equation's actual
            // degree: padding linear equations up to quadrics would force
            // pairs of paths to coalesce at infinity and stall the tracker.
            let h = n as u32;
            let degrees: Vec<u32> = sys.polys.iter().map(poly_degree).collect();
            let f_rows = sys
                .polys
                .iter()
                .zip(&degrees)
                .map(|(p, &d)| homogenize_total(p, h, d))
                .collect();
            let g_rows = degrees
                .iter()
                .enumerate()
                .map(|(i, &d)| {
                    let i = i as u32;
                    let (plus, minus) = if d == 2 {
                        (Mono::Quad(i, i), Mono::Quad(h, h))
                    } else {
                        (Mono::Lin(i), Mono::Lin(h))
                    };
                    Poly {
                        terms: vec![
                            Term { coeff: Complex64::new(1.0, 0.0), mono: plus },
                            Term { coeff: Complex64::new(-1.0, 0.0), mono: minus },
                        ],
                    }
                })
                .collect();
            let patch = Poly {
                terms: (0..=n as u32)
                    .map(|v| Term { coeff: unit(&mut rng), mono: Mono::Lin(v) })
                    .chain([Term { coeff: Complex64::new(-1.0, 0.0), mono: Mono::One }])
                    .collect(),
            };
            let quadratic_vars: Vec<u32> = degrees
                .iter()
                .enumerate()
                .filter(|&(_, &d)| d == 2)
                .map(|(i, _)| i as u32)
                .collect();
            Ok(Tracked {
                dim: n + 1,
                naffine: n,
                f_rows,
                g_rows,
                patches: vec![patch],
                hom_of_var: vec![h; n],
                groups_ext: vec![(0..=n as u32).collect()],
                start: StartPoints::TotalDegree { quadratic_vars },
            })
        }
        StartKind::MultiHomogeneous => {
            let ngroups = sys.groups.len();
            let hom_var = |g: usize| (n + g) as u32;
            let mut hom_of_var = vec![0u32; n];
            let mut groups_ext = Vec::with_capacity(ngroups);
            for (g, vars) in sys.groups.iter().enumerate() {
                for &v in vars {
                    hom_of_var[v as usize] = hom_var(g);
                }
                let mut ext = vars.clone();
                ext.push(hom_var(g));
                groups_ext.push(ext);
            }

            let f_rows: Vec<Poly> = sys
                .polys
                .iter()
                .zip(&sys.multidegrees)
                .map(|(p, mdeg)| homogenize_multi(p, mdeg, &hom_of_var, &hom_var))
                .collect();

            // Random factors per equation, then their expanded products.
            let mut factors: Vec<Vec<LinForm>> = Vec::with_capacity(sys.polys.len());
            for mdeg in &sys.multidegrees {
                let mut eq_factors = Vec::new();
                for (g, &d) in mdeg.iter().enumerate() {
                    for _ in 0..d {
                        eq_factors.push(LinForm {
                            group: g,
                            coeffs: (0..groups_ext[g].len()).map(|_| unit(&mut rng)).collect(),
                        });
                    }
                }
                debug_assert!((1..=2).contains(&eq_factors.len()));
                factors.push(eq_factors);
            }
            let g_rows = factors.iter().map(|fs| expand_product(fs, &groups_ext)).collect();

            let patches = groups_ext
                .iter()
                .map(|ext| Poly {
                    terms: ext
                        .iter()
                        .map(|&v| Term { coeff: unit(&mut rng), mono: Mono::Lin(v) })
                        .chain([Term { coeff: Complex64::new(-1.0, 0.0), mono: Mono::One }])
                        .collect(),
                })
                .collect();

            let caps: Vec<u32> = sys.groups.iter().map(|g| g.len() as u32).collect();
            let cells = enumerate_cells(&factors, &caps, max_paths)?;
            Ok(Tracked {
                dim: n + ngroups,
                naffine: n,
                f_rows,
                g_rows,
                patches,
                hom_of_var,
                groups_ext,
                start: StartPoints::Cells { factors, cells },
            })
        }
    }
}

/// Actual total degree of a constraint polynomial (1 or 2 here).
fn poly_degree(p: &Poly) -> u32 {
    p.terms
        .iter()
        .map(|t| match t.mono {
            Mono::One => 0,
            Mono::Lin(_) => 1,
            Mono::Quad(..) => 2,
        })
        .max()
        .unwrap_or(0)
}

/// Homogenizes a polynomial to degree `d` with variable `h`.
fn homogenize_total(p: &Poly, h: u32, d: u32) -> Poly {
    let terms = p
        .terms
        .iter()
        .map(|t| Term {
            coeff: t.coeff,
            mono: match (t.mono, d) {
                (Mono::One, 1) => Mono::Lin(h),
                (Mono::One, _) => Mono::Quad(h, h),
                (Mono::Lin(i), 1) => Mono::Lin(i),
                (Mono::Lin(i), _) => Mono::Quad(i.min(h), i.max(h)),
                (Mono::Quad(i, j), _) => Mono::Quad(i, j),
            },
        })
        .collect();
    Poly { terms }
}

/// Homogenizes a polynomial to its exact multidegree, one homogenizing
/// variable per group.
fn homogenize_multi(
    p: &Poly,
    mdeg: &[u32],
    hom_of_var: &[u32],
    hom_var: &impl Fn(usize) -> u32,
) -> Poly {
    let terms = p
        .terms
        .iter()
        .map(|t| {
            let mut vars: Vec<u32> = Vec::with_capacity(2);
            match t.mono {
                Mono::One => {}
                Mono::Lin(i) => vars.push(i),
                Mono::Quad(i, j) => {
                    vars.push(i);
                    vars.push(j);
                }
            }
            // Per-group deficit against the equation's multidegree.
            for (g, &d) in mdeg.iter().enumerate() {
                let have = vars
                    .iter()
                    .filter(|&&v| hom_of_var.get(v as usize) == Some(&hom_var(g)))
                    .count() as u32;
                for _ in have..d {
                    vars.push(hom_var(g));
                }
            }
            debug_assert!(vars.len() <= 2);
            let mono = match vars.as_slice() {
                [] => Mono::One,
                [i] => Mono::Lin(*i),
                [i, j] => Mono::Quad(*i.min(j), *i.max(j)),
                _ => unreachable!("degree stays at most two"),
            };
            Term { coeff: t.coeff, mono }
        })
        .collect();
    Poly { terms }
}

/// Product of one or two homogeneous linear forms as an expanded polynomial.
fn expand_product(fs: &[LinForm], groups_ext: &[Vec<u32>]) -> Poly {
    let linear = |f: &LinForm| -> Vec<(u32, Complex64)> {
        groups_ext[f.group].iter().copied().zip(f.coeffs.iter().copied()).collect()
    };
    match fs {
        [f] => Poly {
            terms: linear(f)
                .into_iter()
                .map(|(v, c)| Term { coeff: c, mono: Mono::Lin(v) })
                .collect(),
        },
        [f1, f2] => {
            let mut terms = Vec::new();
            for (v1, c1) in linear(f1) {
                for (v2, c2) in linear(f2) {
                    terms.push(Term {
                        coeff: c1 * c2,
                        mono: Mono::Quad(v1.min(v2), v1.max(v2)),
                    });
                }
            }
            Poly { terms }
        }
        _ => unreachable!("equations have at most two factors"),
    }
}

/// Depth-first enumeration of factor choices in which every group is chosen
/// exactly as many times as it has affine variables.
fn enumerate_cells(
    factors: &[Vec<LinForm>],
    caps: &[u32],
    max_paths: u64,
) -> Result<Vec<Vec<u8>>, SolveError> {
    let neqs = factors.len();
    let ngroups = caps.len();
    let mut supply = vec![vec![0u32; ngroups]; neqs + 1];
    for eq in (0..neqs).rev() {
        supply[eq] = supply[eq + 1].clone();
        for f in &factors[eq] {
            supply[eq][f.group] += 1;
        }
    }
    let mut capacity = caps.to_vec();
    let mut cells = Vec::new();
    let mut current = vec![0u8; neqs];
    dfs(0, factors, &supply, &mut capacity, &mut current, &mut cells, max_paths)?;
    return Ok(cells);

    fn dfs(
        eq: usize,
        factors: &[Vec<LinForm>],
        supply: &[Vec<u32>],
        capacity: &mut [u32],
        current: &mut [u8],
        cells: &mut Vec<Vec<u8>>,
        max_paths: u64,
    ) -> Result<(), SolveError> {
        if capacity.iter().zip(&supply[eq]).any(|(&c, &s)| c > s) {
            return Ok(());
        }
        if eq == factors.len() {
            if cells.len() as u64 >= max_paths {
                return Err(SolveError::TooManyPaths {
                    paths: cells.len() as u64 + 1,
                    cap: max_paths,
                });
            }
            cells.push(current.to_vec());
            return Ok(());
        }
        for (fi, f) in factors[eq].iter().enumerate() {
            if capacity[f.group] == 0 {
                continue;
            }
            capacity[f.group] -= 1;
            current[eq] = fi as u8;
            dfs(eq + 1, factors, supply, capacity, current, cells, max_paths)?;
            capacity[f.group] += 1;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::solver::lengths::sample_lengths;
    use crate::solver::system::build_system;
    use crate::solver::SolverConfig;

    fn k4_minus_edge_tracked(kind: StartKind) -> (RealizationSystem, Tracked) {
        let g = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let cfg = SolverConfig::default();
        let lengths = sample_lengths(&g, 5, cfg.length_range);
        let sys = build_system(&g, &lengths).unwrap();
        let tracked = build_tracked(&sys, kind, 42, cfg.max_paths).unwrap();
        (sys, tracked)
    }

    #[test]
    fn total_degree_path_count_and_start_roots() {
        // 3 sphere equations and 2 planar-vertex dot equations are quadratic,
        // the gauge and pinned-vertex equations are linear: 2^5 paths.
        let (_, tracked) = k4_minus_edge_tracked(StartKind::TotalDegree);
        assert_eq!(tracked.path_count(), 32);
        let mut out = vec![Complex64::default(); tracked.dim];
        for idx in [0u64, 1, 20, 31] {
            let z = tracked.start_point(idx);
            tracked.h_eval_into(&z, 0.0, Complex64::new(0.3, 0.4), &mut out);
            for v in &out {
                assert!(v.norm() < 1e-9, "start residual {v}");
            }
        }
    }

    #[test]
    fn multihom_path_count_and_start_roots() {
        // Hand count for this graph: three sphere equations contribute a
        // factor 2 each, the rest are forced: 8 paths.
        let (_, tracked) = k4_minus_edge_tracked(StartKind::MultiHomogeneous);
        assert_eq!(tracked.path_count(), 8);
        let mut out = vec![Complex64::default(); tracked.dim];
        for idx in 0..tracked.path_count() {
            let z = tracked.start_point(idx);
            tracked.h_eval_into(&z, 0.0, Complex64::new(0.3, 0.4), &mut out);
            for v in &out {
                assert!(v.norm() < 1e-9, "start residual {v}");
            }
        }
    }

    #[test]
    fn target_rows_match_affine_system_on_patch() {
        // At a point with all homogenizing coordinates 1, the homogenized
        // rows agree with the affine system.
        let (sys, tracked) = k4_minus_edge_tracked(StartKind::MultiHomogeneous);
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let zaff: Vec<Complex64> = (0..sys.nvars)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut ztracked = zaff.clone();
        ztracked.extend(vec![Complex64::new(1.0, 0.0); tracked.dim - sys.nvars]);
        let mut faff = vec![Complex64::default(); sys.nvars];
        sys.eval_into(&zaff, &mut faff);
        let mut ftr = vec![Complex64::default(); tracked.dim];
        tracked.h_eval_into(&ztracked, 1.0, Complex64::new(1.0, 0.0), &mut ftr);
        for i in 0..sys.nvars {
            assert!((faff[i] - ftr[i]).norm() < 1e-12);
        }
        let back = tracked.dehomogenize(&ztracked).unwrap();
        for i in 0..sys.nvars {
            assert!((back[i] - zaff[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn infinity_detection() {
        let (_, tracked) = k4_minus_edge_tracked(StartKind::TotalDegree);
        let mut z = vec![Complex64::new(0.5, 0.1); tracked.dim];
        z[tracked.dim - 1] = Complex64::new(1e-12, 0.0);
        assert!(tracked.dehomogenize(&z).is_none());
    }
}
