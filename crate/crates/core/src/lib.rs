//! Grayscale image deblurring under impulse noise, combining an L1 data
//! term with an overlapping-group-sparsity total-variation regularizer and
//! a box constraint, solved by ADMM with a nested majorize-minimize inner
//! loop.
//!
//! The pieces compose bottom-up:
//!
//! * [`grid`] — the `f64` pixel field every other module works on.
//! * [`spectral`] — periodic convolutions diagonalized by the 2D FFT, the
//!   discrete gradients, and the normal-equation solve of the image update.
//! * [`ogs`] — the overlapping-group regularizer, its diagonal majorizer and
//!   the inner MM solver.
//! * [`prox`] — soft thresholding and box projection.
//! * [`solver`] — the outer ADMM loop tying the subproblems together.
//! * [`degrade`] — blur kernels and seeded salt-and-pepper noise for
//!   building test problems.
//! * [`metrics`] — PSNR and relative error.

pub mod degrade;
pub mod error;
mod fft2;
pub mod grid;
pub mod metrics;
pub mod ogs;
pub mod prox;
pub mod solver;
pub mod spectral;

pub use degrade::{add_salt_pepper, blur_operator, degrade, make_kernel, KernelSpec, NoiseSpec};
pub use error::{Error, Result};
pub use grid::{ImageGrid, PixelIndex};
pub use metrics::{psnr, relative_error, QualityReport};
pub use ogs::{group_norm_sum, lambda_sq_diagonal, mm_denoise, GroupConfig, MmSettings};
pub use prox::{project_box, shrink, BoxRange};
pub use solver::{
    gamma_upper_bound, objective, solve, solve_classic, solve_with_observer,
    ConstraintResiduals, IterationSnapshot, SolveReport, SolverParams, Termination,
};
pub use spectral::{
    grad_x, grad_x_adjoint, grad_y, grad_y_adjoint, solve_f_subproblem, Kernel,
    NormalEquationSolver, SpectralOperator,
};
