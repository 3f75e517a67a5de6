//! ADMM orchestration for the constrained L1-fidelity OGS-TV deblurring
//! model: five subproblem updates per outer iteration, relaxed multiplier
//! updates, objective tracking and the relative-change stopping criterion.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::grid::ImageGrid;
use crate::ogs::{group_norm_sum, mm_denoise, GroupConfig, MmSettings};
use crate::prox::{project_box, shrink, BoxRange};
use crate::spectral::{
    grad_x, grad_x_adjoint, grad_y, grad_y_adjoint, NormalEquationSolver, SpectralOperator,
};

/// Upper bound (exclusive) for the multiplier relax parameter.
pub fn gamma_upper_bound() -> f64 {
    (5.0f64.sqrt() + 1.0) / 2.0
}

/// All tunables of the outer solver. `new` fills the standard defaults;
/// fields are public so callers override selectively.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverParams {
    /// Fidelity weight on the L1 data term.
    pub mu: f64,
    /// Penalty on the two gradient splitting constraints.
    pub beta1: f64,
    /// Penalty on the residual splitting constraint.
    pub beta2: f64,
    /// Penalty on the box splitting constraint.
    pub beta3: f64,
    /// Multiplier relax parameter in `(0, (sqrt(5)+1)/2)`; 1 gives the
    /// classic unrelaxed update.
    pub gamma: f64,
    pub group: GroupConfig,
    pub inner: MmSettings,
    /// Relative objective-change threshold for outer termination.
    pub outer_tolerance: f64,
    pub max_outer_iterations: usize,
    pub box_range: BoxRange,
}

impl SolverParams {
    pub fn new(mu: f64) -> Self {
        SolverParams {
            mu,
            beta1: 1.0,
            beta2: 500.0,
            beta3: 1.0,
            gamma: 1.618,
            group: GroupConfig::default(),
            inner: MmSettings::default(),
            outer_tolerance: 1e-5,
            max_outer_iterations: 500,
            box_range: BoxRange::unit(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("mu", self.mu),
            ("beta1", self.beta1),
            ("beta2", self.beta2),
            ("beta3", self.beta3),
            ("outer_tolerance", self.outer_tolerance),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(
                    match name {
                        "mu" => "mu",
                        "beta1" => "beta1",
                        "beta2" => "beta2",
                        "beta3" => "beta3",
                        _ => "outer_tolerance",
                    },
                    format!("{v}: must be positive"),
                ));
            }
        }
        if !(self.gamma > 0.0 && self.gamma < gamma_upper_bound()) {
            return Err(Error::invalid(
                "gamma",
                format!(
                    "{}: must lie in (0, {})",
                    self.gamma,
                    gamma_upper_bound()
                ),
            ));
        }
        if self.max_outer_iterations == 0 {
            return Err(Error::invalid("max_outer_iterations", "must be at least 1"));
        }
        self.inner.validate()
    }
}

/// Why the outer loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Relative objective change fell below the tolerance.
    Converged,
    /// The iteration cap was reached first.
    IterationCap,
}

/// L2 norms of the four splitting-constraint gaps at termination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintResiduals {
    /// `||v_x - grad_x f||`
    pub grad_x_gap: f64,
    /// `||v_y - grad_y f||`
    pub grad_y_gap: f64,
    /// `||z - (H f - g)||`
    pub residual_gap: f64,
    /// `||w - f||`
    pub box_gap: f64,
}

/// Everything a run produces. The restored image is the model variable `f`;
/// display code typically clamps it to the box first.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub restored: ImageGrid,
    pub iterations: usize,
    /// Objective values F^0..F^iterations (length iterations + 1).
    pub objective_trace: Vec<f64>,
    /// Elapsed seconds at the end of each outer iteration.
    pub iteration_seconds: Vec<f64>,
    pub termination: Termination,
    pub residuals: ConstraintResiduals,
}

/// Borrowed view of one outer iteration handed to observers.
pub struct IterationSnapshot<'a> {
    /// 0 for the initial point, then 1-based outer iterations.
    pub iteration: usize,
    pub objective: f64,
    pub elapsed: Duration,
    pub estimate: &'a ImageGrid,
}

/// Objective of the constrained model:
/// `group_norm_sum(grad_x f) + group_norm_sum(grad_y f) + mu ||H f - g||_1`.
pub fn objective(
    f: &ImageGrid,
    g: &ImageGrid,
    blur: &SpectralOperator,
    mu: f64,
    group: GroupConfig,
) -> Result<f64> {
    f.ensure_same_shape(g)?;
    let residual = ImageGrid::axpy(-1.0, g, &blur.apply(f)?)?;
    Ok(group_norm_sum(&grad_x(f), group)
        + group_norm_sum(&grad_y(f), group)
        + mu * residual.norm_l1())
}

/// Runs the full ADMM loop on the observed image `g`.
pub fn solve(
    g: &ImageGrid,
    blur: &SpectralOperator,
    params: &SolverParams,
) -> Result<SolveReport> {
    solve_with_observer(g, blur, params, |_| {})
}

/// The classic unrelaxed variant: identical code path with gamma forced to 1.
pub fn solve_classic(
    g: &ImageGrid,
    blur: &SpectralOperator,
    params: &SolverParams,
) -> Result<SolveReport> {
    let mut p = *params;
    p.gamma = 1.0;
    solve(g, blur, &p)
}

/// As [`solve`], invoking `observer` at the initial point and after every
/// outer iteration (the snapshot borrows the current image estimate).
pub fn solve_with_observer(
    g: &ImageGrid,
    blur: &SpectralOperator,
    params: &SolverParams,
    mut observer: impl FnMut(IterationSnapshot<'_>),
) -> Result<SolveReport> {
    params.validate()?;
    if g.height() != blur.height() || g.width() != blur.width() {
        return Err(Error::shape_mismatch(
            (blur.height(), blur.width()),
            g.shape(),
        ));
    }
    g.check_finite("observed image")?;

    let (mu, b1, b2, b3, gamma) = (
        params.mu,
        params.beta1,
        params.beta2,
        params.beta3,
        params.gamma,
    );
    let normal_solver = NormalEquationSolver::new(blur, b1, b2, b3)?;
    let start = Instant::now();

    let mut f = g.clone();
    let mut z = g.zeros_like();
    let mut w = project_box(g, params.box_range);
    let mut lambda1 = g.zeros_like();
    let mut lambda2 = g.zeros_like();
    let mut lambda3 = g.zeros_like();
    let mut lambda4 = g.zeros_like();

    // beta2 * H* g stays fixed across iterations
    let blur_adj_g = blur.apply_adjoint(g)?.map(|v| b2 * v);

    let mut grad_x_f = grad_x(&f);
    let mut grad_y_f = grad_y(&f);
    let mut blurred_f = blur.apply(&f)?;
    let mut residual = ImageGrid::axpy(-1.0, g, &blurred_f)?;

    let eval_objective = |gx: &ImageGrid, gy: &ImageGrid, res: &ImageGrid| {
        group_norm_sum(gx, params.group) + group_norm_sum(gy, params.group) + mu * res.norm_l1()
    };

    let mut objective_prev = eval_objective(&grad_x_f, &grad_y_f, &residual);
    if !objective_prev.is_finite() {
        return Err(Error::NonFinite {
            context: "initial objective".into(),
        });
    }
    let mut objective_trace = vec![objective_prev];
    let mut iteration_seconds = Vec::new();
    observer(IterationSnapshot {
        iteration: 0,
        objective: objective_prev,
        elapsed: start.elapsed(),
        estimate: &f,
    });

    let mut vx = f.zeros_like();
    let mut vy = f.zeros_like();
    let mut termination = Termination::IterationCap;
    let mut iterations = 0;

    for iter in 1..=params.max_outer_iterations {
        // (1) gradient-field subproblems via the MM inner loop
        let vx_target = ImageGrid::axpy(1.0 / b1, &lambda1, &grad_x_f)?;
        let vy_target = ImageGrid::axpy(1.0 / b1, &lambda2, &grad_y_f)?;
        vx = mm_denoise(&vx_target, b1, params.group, &params.inner)?;
        vy = mm_denoise(&vy_target, b1, params.group, &params.inner)?;
        vx.check_finite("gradient subproblem (rows)")?;
        vy.check_finite("gradient subproblem (columns)")?;

        // (2) residual shrinkage
        let z_target = ImageGrid::axpy(1.0 / b2, &lambda3, &residual)?;
        z = shrink(&z_target, mu / b2)?;
        z.check_finite("shrinkage step")?;

        // (3) box projection
        let w_target = ImageGrid::axpy(1.0 / b3, &lambda4, &f)?;
        w = project_box(&w_target, params.box_range);
        w.check_finite("box projection step")?;

        // (4) image update through the diagonalized normal equation
        let mut rhs = grad_x_adjoint(&ImageGrid::axpy(-1.0, &lambda1, &vx.map(|v| b1 * v))?);
        rhs = ImageGrid::axpy(
            1.0,
            &grad_y_adjoint(&ImageGrid::axpy(-1.0, &lambda2, &vy.map(|v| b1 * v))?),
            &rhs,
        )?;
        rhs = ImageGrid::axpy(
            1.0,
            &blur.apply_adjoint(&ImageGrid::axpy(-1.0, &lambda3, &z.map(|v| b2 * v))?)?,
            &rhs,
        )?;
        rhs = ImageGrid::axpy(1.0, &blur_adj_g, &rhs)?;
        rhs = ImageGrid::axpy(-1.0, &lambda4, &ImageGrid::axpy(b3, &w, &rhs)?)?;
        f = normal_solver.solve(&rhs)?;
        f.check_finite("image update step")?;

        grad_x_f = grad_x(&f);
        grad_y_f = grad_y(&f);
        blurred_f = blur.apply(&f)?;
        residual = ImageGrid::axpy(-1.0, g, &blurred_f)?;

        // (5) relaxed multiplier updates against the fresh image
        lambda1 = ImageGrid::axpy(
            -gamma * b1,
            &ImageGrid::axpy(-1.0, &grad_x_f, &vx)?,
            &lambda1,
        )?;
        lambda2 = ImageGrid::axpy(
            -gamma * b1,
            &ImageGrid::axpy(-1.0, &grad_y_f, &vy)?,
            &lambda2,
        )?;
        lambda3 = ImageGrid::axpy(
            -gamma * b2,
            &ImageGrid::axpy(-1.0, &residual, &z)?,
            &lambda3,
        )?;
        lambda4 = ImageGrid::axpy(-gamma * b3, &ImageGrid::axpy(-1.0, &f, &w)?, &lambda4)?;
        for (grid, context) in [
            (&lambda1, "multiplier update (grad rows)"),
            (&lambda2, "multiplier update (grad columns)"),
            (&lambda3, "multiplier update (residual)"),
            (&lambda4, "multiplier update (box)"),
        ] {
            grid.check_finite(context)?;
        }

        let objective_now = eval_objective(&grad_x_f, &grad_y_f, &residual);
        if !objective_now.is_finite() {
            return Err(Error::NonFinite {
                context: format!("objective at outer iteration {iter}"),
            });
        }
        objective_trace.push(objective_now);
        iteration_seconds.push(start.elapsed().as_secs_f64());
        iterations = iter;
        observer(IterationSnapshot {
            iteration: iter,
            objective: objective_now,
            elapsed: start.elapsed(),
            estimate: &f,
        });

        let rel_change = if objective_prev == 0.0 {
            if objective_now == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (objective_now - objective_prev).abs() / objective_prev.abs()
        };
        objective_prev = objective_now;
        if rel_change < params.outer_tolerance {
            termination = Termination::Converged;
            break;
        }
    }

    let residuals = ConstraintResiduals {
        grad_x_gap: ImageGrid::axpy(-1.0, &grad_x_f, &vx)?.norm_l2(),
        grad_y_gap: ImageGrid::axpy(-1.0, &grad_y_f, &vy)?.norm_l2(),
        residual_gap: ImageGrid::axpy(-1.0, &residual, &z)?.norm_l2(),
        box_gap: ImageGrid::axpy(-1.0, &f, &w)?.norm_l2(),
    };

    Ok(SolveReport {
        restored: f,
        iterations,
        objective_trace,
        iteration_seconds,
        termination,
        residuals,
    })
}
