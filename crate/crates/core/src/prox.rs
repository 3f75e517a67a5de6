//! Elementwise proximal and projection operators.

use crate::error::{Error, Result};
use crate::grid::ImageGrid;

/// Closed interval used for the box projection. Defaults to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxRange {
    lo: f64,
    hi: f64,
}

impl BoxRange {
    /// Bounds may be infinite (for an effectively unconstrained box) but not
    /// NaN, and must satisfy `lo < hi`.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::invalid(
                "box_range",
                format!("[{lo}, {hi}] is not a valid interval"),
            ));
        }
        Ok(BoxRange { lo, hi })
    }

    /// The unit interval `[0, 1]`.
    pub fn unit() -> Self {
        BoxRange { lo: 0.0, hi: 1.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

impl Default for BoxRange {
    fn default() -> Self {
        Self::unit()
    }
}

/// Soft thresholding: `sgn(x) * max(|x| - threshold, 0)` per pixel.
pub fn shrink(x: &ImageGrid, threshold: f64) -> Result<ImageGrid> {
    if !(threshold.is_finite() && threshold >= 0.0) {
        return Err(Error::invalid(
            "threshold",
            format!("{threshold}: must be non-negative"),
        ));
    }
    Ok(x.map(|v| v.signum() * (v.abs() - threshold).max(0.0)))
}

/// Elementwise clamp to the box.
pub fn project_box(x: &ImageGrid, range: BoxRange) -> ImageGrid {
    x.map(|v| v.clamp(range.lo, range.hi))
}
