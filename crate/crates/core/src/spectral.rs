//! Periodic-boundary convolution operators and the FFT-diagonalized solve of
//! the image-update normal equation.
//!
//! Under periodic boundary conditions every convolution here is a BCCB
//! matrix, diagonalized by the 2D DFT; applying an operator and solving the
//! normal equation both reduce to elementwise work on eigenvalue grids.

use std::sync::Arc;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft2::{grid_to_complex, real_part_checked, FftPlan2d};
use crate::grid::ImageGrid;

/// Spatial convolution kernel with a designated center sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    height: usize,
    width: usize,
    center_row: usize,
    center_col: usize,
    weights: Vec<f64>,
}

impl Kernel {
    /// `weights` is row-major `height x width`; `center` is 0-based.
    pub fn new(
        weights: Vec<f64>,
        height: usize,
        width: usize,
        center: (usize, usize),
    ) -> Result<Self> {
        if height == 0 || width == 0 || weights.len() != height * width {
            return Err(Error::invalid(
                "kernel",
                format!("{height}x{width} with {} weights", weights.len()),
            ));
        }
        if center.0 >= height || center.1 >= width {
            return Err(Error::invalid(
                "kernel_center",
                format!("({}, {}) outside {height}x{width}", center.0, center.1),
            ));
        }
        if !weights.iter().all(|w| w.is_finite()) {
            return Err(Error::NonFinite {
                context: "kernel weights".into(),
            });
        }
        Ok(Kernel {
            height,
            width,
            center_row: center.0,
            center_col: center.1,
            weights,
        })
    }

    /// Kernel with the conventional centered origin `(ceil(h/2)-1, ceil(w/2)-1)`.
    pub fn centered(weights: Vec<f64>, height: usize, width: usize) -> Result<Self> {
        Self::new(weights, height, width, ((height - 1) / 2, (width - 1) / 2))
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// 0-based center sample position.
    pub fn center(&self) -> (usize, usize) {
        (self.center_row, self.center_col)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.weights[row * self.width + col]
    }
}

/// Frequency-domain form of a periodic convolution, built once per
/// (kernel, image size) pair and immutable afterwards.
pub struct SpectralOperator {
    height: usize,
    width: usize,
    eigenvalues: Vec<Complex64>,
    source_kernel: Kernel,
    plan: Arc<FftPlan2d>,
}

impl SpectralOperator {
    /// Embeds the kernel into a `height x width` field, circularly shifts its
    /// designated center to index (0,0) and takes the 2D DFT as eigenvalues.
    pub fn from_kernel(kernel: Kernel, height: usize, width: usize) -> Result<Self> {
        if kernel.height > height || kernel.width > width {
            return Err(Error::KernelTooLarge {
                kernel_height: kernel.height,
                kernel_width: kernel.width,
                image_height: height,
                image_width: width,
            });
        }
        let plan = Arc::new(FftPlan2d::new(height, width));
        let mut embedded = vec![Complex64::default(); height * width];
        for a in 0..kernel.height {
            for b in 0..kernel.width {
                let dr = (a + height - kernel.center_row) % height;
                let dc = (b + width - kernel.center_col) % width;
                embedded[dr * width + dc] = Complex64::new(kernel.get(a, b), 0.0);
            }
        }
        plan.forward(&mut embedded);
        Ok(SpectralOperator {
            height,
            width,
            eigenvalues: embedded,
            source_kernel: kernel,
            plan,
        })
    }

    /// Identity operator (delta kernel).
    pub fn delta(height: usize, width: usize) -> Result<Self> {
        Self::from_kernel(Kernel::new(vec![1.0], 1, 1, (0, 0))?, height, width)
    }

    /// Forward difference along rows with wraparound, as a spectral operator.
    pub fn diff_x(height: usize, width: usize) -> Result<Self> {
        Self::from_kernel(Kernel::new(vec![1.0, -1.0], 2, 1, (1, 0))?, height, width)
    }

    /// Forward difference along columns with wraparound, as a spectral operator.
    pub fn diff_y(height: usize, width: usize) -> Result<Self> {
        Self::from_kernel(Kernel::new(vec![1.0, -1.0], 1, 2, (0, 1))?, height, width)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    /// The spatial kernel this operator was built from, kept for audit.
    pub fn source_kernel(&self) -> &Kernel {
        &self.source_kernel
    }

    fn ensure_shape(&self, x: &ImageGrid) -> Result<()> {
        if x.height() == self.height && x.width() == self.width {
            Ok(())
        } else {
            Err(Error::shape_mismatch(
                (self.height, self.width),
                x.shape(),
            ))
        }
    }

    fn apply_spectrum(&self, x: &ImageGrid, conjugate: bool) -> Result<ImageGrid> {
        self.ensure_shape(x)?;
        let mut buf = grid_to_complex(x);
        self.plan.forward(&mut buf);
        if conjugate {
            for (v, lam) in buf.iter_mut().zip(&self.eigenvalues) {
                *v *= lam.conj();
            }
        } else {
            for (v, lam) in buf.iter_mut().zip(&self.eigenvalues) {
                *v *= lam;
            }
        }
        self.plan.inverse(&mut buf);
        real_part_checked(&buf, self.height, self.width)
    }

    /// Circular convolution with the source kernel.
    pub fn apply(&self, x: &ImageGrid) -> Result<ImageGrid> {
        self.apply_spectrum(x, false)
    }

    /// Adjoint application through conjugate eigenvalues.
    pub fn apply_adjoint(&self, x: &ImageGrid) -> Result<ImageGrid> {
        self.apply_spectrum(x, true)
    }
}

/// `(grad_x f)_{i,j} = f_{i+1,j} - f_{i,j}` with periodic wrap in the row index.
pub fn grad_x(f: &ImageGrid) -> ImageGrid {
    let (h, w) = f.shape();
    let mut out = f.zeros_like();
    for r in 0..h {
        let rn = if r + 1 == h { 0 } else { r + 1 };
        for c in 0..w {
            out.set(r, c, f.get(rn, c) - f.get(r, c));
        }
    }
    out
}

/// `(grad_y f)_{i,j} = f_{i,j+1} - f_{i,j}` with periodic wrap in the column index.
pub fn grad_y(f: &ImageGrid) -> ImageGrid {
    let (h, w) = f.shape();
    let mut out = f.zeros_like();
    for r in 0..h {
        for c in 0..w {
            let cn = if c + 1 == w { 0 } else { c + 1 };
            out.set(r, c, f.get(r, cn) - f.get(r, c));
        }
    }
    out
}

/// Adjoint of [`grad_x`]: `p_{i-1,j} - p_{i,j}` with wrap.
pub fn grad_x_adjoint(p: &ImageGrid) -> ImageGrid {
    let (h, w) = p.shape();
    let mut out = p.zeros_like();
    for r in 0..h {
        let rp = if r == 0 { h - 1 } else { r - 1 };
        for c in 0..w {
            out.set(r, c, p.get(rp, c) - p.get(r, c));
        }
    }
    out
}

/// Adjoint of [`grad_y`]: `p_{i,j-1} - p_{i,j}` with wrap.
pub fn grad_y_adjoint(p: &ImageGrid) -> ImageGrid {
    let (h, w) = p.shape();
    let mut out = p.zeros_like();
    for r in 0..h {
        for c in 0..w {
            let cp = if c == 0 { w - 1 } else { c - 1 };
            out.set(r, c, p.get(r, cp) - p.get(r, c));
        }
    }
    out
}

/// Solves `(b1 (Dx*Dx + Dy*Dy) + b2 H*H + b3 I) f = rhs` in the frequency
/// domain. The denominator grid is strictly positive because `b3 > 0`, so the
/// system always has a unique solution.
///
/// Building one of these amortizes the eigenvalue setup across repeated
/// solves with the same blur and penalties.
pub struct NormalEquationSolver {
    height: usize,
    width: usize,
    denominator: Vec<f64>,
    plan: Arc<FftPlan2d>,
}

impl NormalEquationSolver {
    pub fn new(blur: &SpectralOperator, beta1: f64, beta2: f64, beta3: f64) -> Result<Self> {
        for (name, v) in [("beta1", beta1), ("beta2", beta2), ("beta3", beta3)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("{v}: must be positive")));
            }
        }
        let (h, w) = (blur.height(), blur.width());
        let dx = SpectralOperator::diff_x(h, w)?;
        let dy = SpectralOperator::diff_y(h, w)?;
        let denominator = blur
            .eigenvalues()
            .iter()
            .zip(dx.eigenvalues())
            .zip(dy.eigenvalues())
            .map(|((lh, lx), ly)| {
                beta1 * (lx.norm_sqr() + ly.norm_sqr()) + beta2 * lh.norm_sqr() + beta3
            })
            .collect();
        Ok(NormalEquationSolver {
            height: h,
            width: w,
            denominator,
            plan: Arc::new(FftPlan2d::new(h, w)),
        })
    }

    pub fn solve(&self, rhs: &ImageGrid) -> Result<ImageGrid> {
        if rhs.height() != self.height || rhs.width() != self.width {
            return Err(Error::shape_mismatch(
                (self.height, self.width),
                rhs.shape(),
            ));
        }
        let mut buf = grid_to_complex(rhs);
        self.plan.forward(&mut buf);
        for (v, d) in buf.iter_mut().zip(&self.denominator) {
            *v /= *d;
        }
        self.plan.inverse(&mut buf);
        real_part_checked(&buf, self.height, self.width)
    }
}

/// One-shot form of [`NormalEquationSolver`] for callers that solve once.
pub fn solve_f_subproblem(
    rhs: &ImageGrid,
    blur: &SpectralOperator,
    beta1: f64,
    beta2: f64,
    beta3: f64,
) -> Result<ImageGrid> {
    NormalEquationSolver::new(blur, beta1, beta2, beta3)?.solve(rhs)
}
