use num_complex::Complex64;
use scount_core::graph::Graph;
use scount_core::solver::proj::build_tracked;
use scount_core::solver::system::build_system;
use scount_core::solver::track::{track_path, PathOutcome, TrackSettings, Workspace};
use scount_core::solver::{sample_lengths, SolverConfig, StartKind};
use std::time::Instant;

#[test]
fn sweep() {
    let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
    let cfg = SolverConfig::default();
    let lengths = sample_lengths(&g, 10451216379200822465u64, cfg.length_range);
    let sys = build_system(&g, &lengths).unwrap();
    let tracked = build_tracked(&sys, StartKind::TotalDegree, 7, cfg.max_paths).unwrap();
    println!("paths: {}", tracked.path_count());
    for tol in [1e-6f64, 1e-8] {
        let settings = TrackSettings { path_tol: tol, ..TrackSettings::default() };
        let mut ws = Workspace::new(tracked.dim);
        let gamma = Complex64::from_polar(1.0, 0.9311);
        let start = Instant::now();
        let mut summary = [0usize; 3];
        for idx in 0..tracked.path_count() {
            match track_path(&sys, &tracked, idx, gamma, &settings, &mut ws) {
                PathOutcome::Converged { .. } => summary[0] += 1,
                PathOutcome::AtInfinity => summary[1] += 1,
                PathOutcome::Failed => summary[2] += 1,
            }
        }
        println!(
            "tol={tol:.0e}: conv={} inf={} fail={} in {:?}",
            summary[0], summary[1], summary[2], start.elapsed()
        );
    }
}
