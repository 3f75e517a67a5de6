//! Internal 2D FFT plumbing on top of rustfft.
//!
//! Convention: forward transform unnormalized, inverse scaled by
//! `1 / (height * width)`. Plans are immutable after construction and safe
//! to use from multiple threads.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::ImageGrid;

pub(crate) struct FftPlan2d {
    height: usize,
    width: usize,
    row_forward: Arc<dyn Fft<f64>>,
    row_inverse: Arc<dyn Fft<f64>>,
    col_forward: Arc<dyn Fft<f64>>,
    col_inverse: Arc<dyn Fft<f64>>,
}

impl FftPlan2d {
    pub fn new(height: usize, width: usize) -> Self {
        let mut planner = FftPlanner::new();
        FftPlan2d {
            height,
            width,
            row_forward: planner.plan_fft_forward(width),
            row_inverse: planner.plan_fft_inverse(width),
            col_forward: planner.plan_fft_forward(height),
            col_inverse: planner.plan_fft_inverse(height),
        }
    }

    /// In-place forward 2D DFT of a row-major `height x width` buffer.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.transform(buf, &self.row_forward, &self.col_forward);
    }

    /// In-place inverse 2D DFT including the `1/(height*width)` scaling.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.transform(buf, &self.row_inverse, &self.col_inverse);
        let scale = 1.0 / (self.height * self.width) as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    fn transform(&self, buf: &mut [Complex64], row: &Arc<dyn Fft<f64>>, col: &Arc<dyn Fft<f64>>) {
        assert_eq!(buf.len(), self.height * self.width);
        // rows are contiguous; process handles the whole buffer in chunks
        row.process(buf);
        // columns via transpose, batch transform, transpose back
        let mut t = transpose(buf, self.height, self.width);
        col.process(&mut t);
        let back = transpose(&t, self.width, self.height);
        buf.copy_from_slice(&back);
    }
}

fn transpose(buf: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); buf.len()];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = buf[r * cols + c];
        }
    }
    out
}

pub(crate) fn grid_to_complex(grid: &ImageGrid) -> Vec<Complex64> {
    grid.data().iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

/// Extracts the real part after an inverse transform of a nominally real
/// pipeline. Residue above `1e-8` of the real magnitude means the operator
/// was fed something it cannot represent, and errors instead of truncating.
pub(crate) fn real_part_checked(
    buf: &[Complex64],
    height: usize,
    width: usize,
) -> Result<ImageGrid> {
    let mut max_imag = 0.0f64;
    let mut max_real = 0.0f64;
    for v in buf {
        max_imag = max_imag.max(v.im.abs());
        max_real = max_real.max(v.re.abs());
    }
    if max_imag > 0.0 && max_imag >= 1e-8 * max_real {
        return Err(Error::ImaginaryResidue { max_imag, max_real });
    }
    ImageGrid::from_vec(height, width, buf.iter().map(|v| v.re).collect())
}
