//! Behavioral tests of the outer ADMM loop on small synthetic problems.

mod common;

use common::*;
use ogstv_core::{
    degrade, solve, solve_classic, KernelSpec, NoiseSpec, SolverParams, Termination,
};
use ogstv_core::ImageGrid;

/// Piecewise-smooth scene in [0, 1]: shaded background with two ramped
/// shapes, deterministic in the seed.
fn smooth_scene(side: usize, seed: u64) -> ImageGrid {
    let mut next = lcg(seed);
    let (cx, cy) = (
        side as f64 * (0.35 + 0.3 * (next() + 0.5)),
        side as f64 * (0.35 + 0.3 * (next() + 0.5)),
    );
    let radius = side as f64 * (0.15 + 0.1 * (next() + 0.5));
    let mut data = Vec::with_capacity(side * side);
    for r in 0..side {
        for c in 0..side {
            let (x, y) = (r as f64, c as f64);
            let mut v = 0.25 + 0.35 * (x + y) / (2.0 * side as f64);
            let d = ((x - cx).powi(2) + (y - cy).powi(2)).sqrt();
            if d < radius {
                v = 0.75 - 0.3 * d / radius;
            }
            if r > side * 2 / 3 && c < side / 4 {
                v = 0.15 + 0.4 * (c as f64) / (side as f64 / 4.0);
            }
            data.push(v.clamp(0.0, 1.0));
        }
    }
    ImageGrid::from_vec(side, side, data).unwrap()
}

#[test]
fn converged_trace_satisfies_the_stopping_criterion() {
    let clean = smooth_scene(48, 9);
    let kernel = KernelSpec::Gaussian { size: 5, sigma: 2.0 };
    let g = degrade(&clean, &kernel, &NoiseSpec::new(0.3, 4).unwrap()).unwrap();
    let blur = ogstv_core::blur_operator(&kernel, 48, 48).unwrap();
    let params = SolverParams::new(60.0);
    let report = solve(&g, &blur, &params).unwrap();
    assert_eq!(report.termination, Termination::Converged);
    let trace = &report.objective_trace;
    let last = trace.len() - 1;
    let rel = (trace[last] - trace[last - 1]).abs() / trace[last - 1].abs();
    assert!(rel < params.outer_tolerance, "final rel change {rel}");
}

#[test]
fn objective_trace_is_finite_and_eventually_non_increasing() {
    let clean = smooth_scene(48, 12);
    let kernel = KernelSpec::Average { size: 5 };
    let g = degrade(&clean, &kernel, &NoiseSpec::new(0.4, 8).unwrap()).unwrap();
    let blur = ogstv_core::blur_operator(&kernel, 48, 48).unwrap();
    let report = solve(&g, &blur, &SolverParams::new(60.0)).unwrap();
    let trace = &report.objective_trace;
    assert!(trace.iter().all(|v| v.is_finite()));
    let slack = 1e-3 * trace[0];
    for k in 5..trace.len() - 1 {
        assert!(
            trace[k + 1] <= trace[k] + slack,
            "iteration {k}: {} -> {}",
            trace[k],
            trace[k + 1]
        );
    }
}

#[test]
fn constraint_gaps_shrink_by_termination() {
    // Desk-scale sanity bound; the full-scale form of this check lives in
    // the acceptance suite. The gradient gaps carry the inexactness of the
    // capped inner loop, so they sit well above the z and w gaps.
    let clean = smooth_scene(48, 21);
    let kernel = KernelSpec::Gaussian { size: 5, sigma: 2.0 };
    let g = degrade(&clean, &kernel, &NoiseSpec::new(0.3, 13).unwrap()).unwrap();
    let blur = ogstv_core::blur_operator(&kernel, 48, 48).unwrap();
    let report = solve(&g, &blur, &SolverParams::new(60.0)).unwrap();
    let bound = 3e-2 * g.norm_l2();
    let res = &report.residuals;
    for (name, gap) in [
        ("grad rows", res.grad_x_gap),
        ("grad cols", res.grad_y_gap),
        ("residual", res.residual_gap),
        ("box", res.box_gap),
    ] {
        assert!(gap < bound, "{name} gap {gap} vs bound {bound}");
    }
}

#[test]
fn classic_variant_converges_under_the_same_criterion() {
    let clean = smooth_scene(32, 30);
    let kernel = KernelSpec::Gaussian { size: 3, sigma: 1.0 };
    let g = degrade(&clean, &kernel, &NoiseSpec::new(0.2, 2).unwrap()).unwrap();
    let blur = ogstv_core::blur_operator(&kernel, 32, 32).unwrap();
    let params = SolverParams::new(60.0);
    let report = solve_classic(&g, &blur, &params).unwrap();
    assert_eq!(report.termination, Termination::Converged);
    let trace = &report.objective_trace;
    let last = trace.len() - 1;
    let rel = (trace[last] - trace[last - 1]).abs() / trace[last - 1].abs();
    assert!(rel < params.outer_tolerance);
}
