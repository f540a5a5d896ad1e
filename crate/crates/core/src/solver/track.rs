//! Predictor-corrector tracking of one homotopy path.
//!
//! The homotopy blends the projective start and target rows,
//! `H(z, t) = (1 - t) * gamma * G(z) + t * F(z)`, keeping the patch rows
//! fixed. Steps use a first-order predictor and a damped Newton corrector at
//! fixed `t` with an adaptive step size. A path that reaches `t = 1` is
//! dehomogenized and polished against the affine target system; endpoints
//! whose homogenizing coordinate vanishes are classified as diverging to
//! infinity.

use num_complex::Complex64;

use crate::solver::proj::Tracked;
use crate::solver::system::RealizationSystem;

#[derive(Debug, Clone, Copy)]
pub struct TrackSettings {
    /// Relative Newton tolerance while following the path.
    pub path_tol: f64,
    /// Relative Newton tolerance for the endpoint polish.
    pub endpoint_tol: f64,
    pub max_steps: usize,
    pub min_step: f64,
    pub initial_step: f64,
    pub max_step: f64,
    pub newton_iters: usize,
    /// Projective iterates beyond this norm abort the attempt (the patch
    /// normally keeps them of order one).
    pub blowup: f64,
    /// Dehomogenized endpoints beyond this norm count as diverged.
    pub finite_threshold: f64,
    pub residual_tol: f64,
    pub cond_singular: f64,
    /// From this `t` on, endpoints are classified eagerly: paths heading to
    /// infinity end at singular projective points, so waiting for `t = 1`
    /// stalls the step size.
    pub endgame_start: f64,
    /// Homogenizing-coordinate ratio below which an endgame iterate counts
    /// as diverging.
    pub endgame_infinity_ratio: f64,
    /// A path that stalls past this `t` with a homogenizing ratio below
    /// `stall_infinity_ratio` is classified as diverging: excess paths
    /// coalesce in pairs toward infinity and starve the step size there.
    pub stall_min_t: f64,
    pub stall_infinity_ratio: f64,
}

impl Default for TrackSettings {
    fn default() -> Self {
        TrackSettings {
            path_tol: 1e-6,
            endpoint_tol: 1e-11,
            max_steps: 10_000,
            min_step: 1e-13,
            initial_step: 0.05,
            max_step: 0.1,
            newton_iters: 4,
            blowup: 1e10,
            finite_threshold: 1e6,
            residual_tol: 1e-7,
            cond_singular: 1e12,
            endgame_start: 0.99,
            endgame_infinity_ratio: 1e-6,
            stall_min_t: 0.8,
            stall_infinity_ratio: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PathOutcome {
    Converged { point: Vec<Complex64>, cond: f64, residual: f64 },
    AtInfinity,
    Failed,
}

/// Scratch space reused across paths within one worker.
pub struct Workspace {
    dim: usize,
    jac: Vec<Complex64>,
    h_val: Vec<Complex64>,
    delta: Vec<Complex64>,
    trial: Vec<Complex64>,
    z_next: Vec<Complex64>,
    piv: Vec<usize>,
}

impl Workspace {
    pub fn new(dim: usize) -> Self {
        Workspace {
            dim,
            jac: vec![Complex64::default(); dim * dim],
            h_val: vec![Complex64::default(); dim],
            delta: vec![Complex64::default(); dim],
            trial: vec![Complex64::default(); dim],
            z_next: vec![Complex64::default(); dim],
            piv: vec![0usize; dim],
        }
    }
}

fn inf_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// In-place LU with partial pivoting; returns false on a (numerically)
/// singular pivot. `a` is row-major `n x n`.
pub fn lu_factor(a: &mut [Complex64], n: usize, piv: &mut [usize]) -> bool {
    for k in 0..n {
        let mut best = k;
        let mut best_mag = a[k * n + k].norm_sqr();
        for r in (k + 1)..n {
            let mag = a[r * n + k].norm_sqr();
            if mag > best_mag {
                best = r;
                best_mag = mag;
            }
        }
        if !(best_mag > 1e-300) {
            return false;
        }
        piv[k] = best;
        if best != k {
            for c in 0..n {
                a.swap(k * n + c, best * n + c);
            }
        }
        let inv = a[k * n + k].inv();
        for r in (k + 1)..n {
            let factor = a[r * n + k] * inv;
            a[r * n + k] = factor;
            for c in (k + 1)..n {
                let sub = factor * a[k * n + c];
                a[r * n + c] -= sub;
            }
        }
    }
    true
}

/// Solves with a factorization from [`lu_factor`], overwriting `b`.
pub fn lu_solve(a: &[Complex64], piv: &[usize], b: &mut [Complex64], n: usize) {
    for k in 0..n {
        b.swap(k, piv[k]);
        let bk = b[k];
        for r in (k + 1)..n {
            let sub = a[r * n + k] * bk;
            b[r] -= sub;
        }
    }
    for k in (0..n).rev() {
        let mut acc = b[k];
        for c in (k + 1)..n {
            acc -= a[k * n + c] * b[c];
        }
        b[k] = acc / a[k * n + k];
    }
}

/// Ratio of extreme pivot magnitudes, a cheap condition proxy.
fn pivot_cond(a: &[Complex64], n: usize) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for k in 0..n {
        let m = a[k * n + k].norm();
        lo = lo.min(m);
        hi = hi.max(m);
    }
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Newton for `H(., t)` in place on `z`; false when the tolerance is missed.
fn newton(
    tracked: &Tracked,
    gamma: Complex64,
    z: &mut [Complex64],
    t: f64,
    set: &TrackSettings,
    ws: &mut Workspace,
) -> bool {
    let n = ws.dim;
    for _ in 0..set.newton_iters {
        tracked.h_eval_into(z, t, gamma, &mut ws.h_val);
        let res = inf_norm(&ws.h_val);
        if !res.is_finite() {
            return false;
        }
        tracked.h_jacobian_into(z, t, gamma, &mut ws.jac);
        if !lu_factor(&mut ws.jac, n, &mut ws.piv) {
            return false;
        }
        for i in 0..n {
            ws.delta[i] = -ws.h_val[i];
        }
        lu_solve(&ws.jac, &ws.piv, &mut ws.delta, n);

        // Damped update: the full step is taken unless the residual blows up
        // catastrophically (Newton residuals need not decrease monotonically,
        // so mild growth is tolerated).
        let mut scale = 1.0f64;
        let mut accepted = false;
        for _ in 0..3 {
            for i in 0..n {
                ws.trial[i] = z[i] + scale * ws.delta[i];
            }
            tracked.h_eval_into(&ws.trial, t, gamma, &mut ws.h_val);
            let r1 = inf_norm(&ws.h_val);
            if r1.is_finite() && r1 <= 10.0 * res {
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            return false;
        }
        z.copy_from_slice(&ws.trial);
        if scale * inf_norm(&ws.delta) <= set.path_tol * inf_norm(z).max(1.0) {
            return true;
        }
    }
    false
}

/// Tracks start point `idx` from `t = 0` to `t = 1` and classifies the end.
pub fn track_path(
    target: &RealizationSystem,
    tracked: &Tracked,
    idx: u64,
    gamma: Complex64,
    set: &TrackSettings,
    ws: &mut Workspace,
) -> PathOutcome {
    let n = ws.dim;
    let mut z = tracked.start_point(idx);
    let mut t = 0.0f64;
    let mut dt = set.initial_step;
    let mut streak = 0usize;

    for _ in 0..set.max_steps {
        if t >= 1.0 {
            break;
        }
        dt = dt.min(1.0 - t);

        // First-order predictor: z_next = z - J^{-1} dH/dt * dt.
        tracked.h_jacobian_into(&z, t, gamma, &mut ws.jac);
        let mut ok = lu_factor(&mut ws.jac, n, &mut ws.piv);
        if ok {
            tracked.h_dt_into(&z, gamma, &mut ws.delta);
            for i in 0..n {
                ws.delta[i] = -ws.delta[i];
            }
            lu_solve(&ws.jac, &ws.piv, &mut ws.delta, n);
            for i in 0..n {
                ws.z_next[i] = z[i] + ws.delta[i] * dt;
            }
            let mut z_next = std::mem::take(&mut ws.z_next);
            ok = newton(tracked, gamma, &mut z_next, t + dt, set, ws);
            ws.z_next = z_next;
        }

        if ok {
            z.copy_from_slice(&ws.z_next);
            t += dt;
            streak += 1;
            let norm = inf_norm(&z);
            if !norm.is_finite() || norm > set.blowup {
                return PathOutcome::Failed;
            }
            if t >= set.endgame_start {
                if let Some(outcome) = endgame_classify(target, tracked, &z, t, set) {
                    return outcome;
                }
            }
            if streak >= 4 {
                dt = (dt * 2.0).min(set.max_step);
                streak = 0;
            }
        } else {
            streak = 0;
            dt *= 0.5;
            if dt < set.min_step {
                return stall_classify(tracked, &z, t, set);
            }
        }
    }
    if t < 1.0 {
        // Step budget exhausted.
        return stall_classify(tracked, &z, t, set);
    }
    if hom_ratio(tracked, &z) <= set.endgame_infinity_ratio {
        return PathOutcome::AtInfinity;
    }
    match tracked.dehomogenize(&z) {
        None => PathOutcome::AtInfinity,
        Some(affine) => polish_affine(target, affine, set),
    }
}

/// Classification for paths that can no longer advance.
fn stall_classify(tracked: &Tracked, z: &[Complex64], t: f64, set: &TrackSettings) -> PathOutcome {
    if t >= set.stall_min_t && hom_ratio(tracked, z) <= set.stall_infinity_ratio {
        PathOutcome::AtInfinity
    } else {
        PathOutcome::Failed
    }
}

/// Smallest homogenizing-coordinate magnitude relative to the point scale.
fn hom_ratio(tracked: &Tracked, z: &[Complex64]) -> f64 {
    let scale = inf_norm(z).max(1e-300);
    tracked.hom_values(z).map(|h| h / scale).fold(f64::INFINITY, f64::min)
}

/// Decides a path's fate inside the endgame zone, if it is already clear.
///
/// Diverging paths are recognized by a vanishing homogenizing coordinate.
/// Finite roots are claimed by polishing the dehomogenized iterate against
/// the affine target; the polish certifies the root via its residual, and a
/// proximity check keeps a polish that jumped to a distant root from ending
/// the path early.
fn endgame_classify(
    target: &RealizationSystem,
    tracked: &Tracked,
    z: &[Complex64],
    t: f64,
    set: &TrackSettings,
) -> Option<PathOutcome> {
    if hom_ratio(tracked, z) <= set.endgame_infinity_ratio {
        return Some(PathOutcome::AtInfinity);
    }
    let affine = tracked.dehomogenize(z)?;
    match polish_affine(target, affine.clone(), set) {
        PathOutcome::Converged { point, cond, residual } => {
            let moved = affine
                .iter()
                .zip(&point)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            let near = moved <= 0.25 * (1.0 + inf_norm(&point));
            (near || t >= 1.0).then_some(PathOutcome::Converged { point, cond, residual })
        }
        // Not settled yet; keep tracking.
        _ => None,
    }
}

/// Newton against the affine target system, then classification.
fn polish_affine(
    target: &RealizationSystem,
    mut z: Vec<Complex64>,
    set: &TrackSettings,
) -> PathOutcome {
    let n = target.nvars;
    let mut f_val = vec![Complex64::default(); n];
    let mut jac = vec![Complex64::default(); n * n];
    let mut piv = vec![0usize; n];
    let mut cond = f64::INFINITY;
    for _ in 0..12 {
        let norm = inf_norm(&z);
        if !norm.is_finite() || norm > set.finite_threshold {
            return PathOutcome::AtInfinity;
        }
        target.eval_into(&z, &mut f_val);
        target.jacobian_into(&z, &mut jac);
        if !lu_factor(&mut jac, n, &mut piv) {
            break;
        }
        cond = pivot_cond(&jac, n);
        for i in 0..n {
            f_val[i] = -f_val[i];
        }
        lu_solve(&jac, &piv, &mut f_val, n);
        let step = inf_norm(&f_val);
        if !step.is_finite() {
            return PathOutcome::Failed;
        }
        for i in 0..n {
            z[i] += f_val[i];
        }
        if step <= set.endpoint_tol * inf_norm(&z).max(1.0) {
            break;
        }
    }
    let norm = inf_norm(&z);
    if !norm.is_finite() || norm > set.finite_threshold {
        return PathOutcome::AtInfinity;
    }
    target.eval_into(&z, &mut f_val);
    let residual = inf_norm(&f_val);
    if residual <= set.residual_tol {
        PathOutcome::Converged { point: z, cond, residual }
    } else {
        PathOutcome::Failed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_small_systems() {
        let a0 = [
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, 0.0),
            Complex64::new(0.0, 4.0),
        ];
        let mut a = a0.to_vec();
        let mut b = vec![Complex64::new(5.0, 0.0), Complex64::new(6.0, 0.0)];
        let mut piv = vec![0usize; 2];
        assert!(lu_factor(&mut a, 2, &mut piv));
        lu_solve(&a, &piv, &mut b, 2);
        let r0 = a0[0] * b[0] + a0[1] * b[1] - Complex64::new(5.0, 0.0);
        let r1 = a0[2] * b[0] + a0[3] * b[1] - Complex64::new(6.0, 0.0);
        assert!(r0.norm() < 1e-12 && r1.norm() < 1e-12);
    }

    #[test]
    fn singular_matrix_detected() {
        let mut a = vec![Complex64::default(); 4];
        let mut piv = vec![0usize; 2];
        assert!(!lu_factor(&mut a, 2, &mut piv));
    }
}
