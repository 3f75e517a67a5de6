//! Restoration-quality measures.

use crate::error::{Error, Result};
use crate::grid::ImageGrid;

/// PSNR and relative error of a restoration against its reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub psnr_db: f64,
    pub relative_error: f64,
    /// The peak intensity the PSNR was computed with.
    pub max_intensity: f64,
}

impl QualityReport {
    pub fn compute(
        restored: &ImageGrid,
        reference: &ImageGrid,
        max_intensity: f64,
    ) -> Result<Self> {
        Ok(QualityReport {
            psnr_db: psnr(restored, reference, max_intensity)?,
            relative_error: relative_error(restored, reference)?,
            max_intensity,
        })
    }
}

/// `10 log10(N * max_intensity^2 / ||restored - reference||^2)` in decibels,
/// with N the pixel count. Identical images return `f64::INFINITY`.
pub fn psnr(restored: &ImageGrid, reference: &ImageGrid, max_intensity: f64) -> Result<f64> {
    restored.ensure_same_shape(reference)?;
    if !(max_intensity.is_finite() && max_intensity > 0.0) {
        return Err(Error::invalid(
            "max_intensity",
            format!("{max_intensity}: must be positive"),
        ));
    }
    let sq_err: f64 = restored
        .data()
        .iter()
        .zip(reference.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    if sq_err == 0.0 {
        return Ok(f64::INFINITY);
    }
    let n = restored.pixel_count() as f64;
    Ok(10.0 * (n * max_intensity * max_intensity / sq_err).log10())
}

/// `||restored - reference||_2 / ||reference||_2`.
pub fn relative_error(restored: &ImageGrid, reference: &ImageGrid) -> Result<f64> {
    restored.ensure_same_shape(reference)?;
    let ref_norm = reference.norm_l2();
    if ref_norm == 0.0 {
        return Err(Error::invalid(
            "reference",
            "identically zero, relative error undefined",
        ));
    }
    let diff = ImageGrid::axpy(-1.0, reference, restored)?;
    Ok(diff.norm_l2() / ref_norm)
}
