//! The pixel-field data model shared by every other module.
//!
//! An [`ImageGrid`] is a dense `height x width` field of `f64` intensities,
//! stored row-major. Grids are plain values: cloning copies the data and all
//! operations return fresh grids, so sharing across threads for reading is
//! always safe.

use crate::error::{Error, Result};

/// Dense real-valued pixel field. Intensities are nominally in `[0, 1]` but
/// the grid itself does not enforce the range; solver iterates legitimately
/// leave it and only the box projection clamps.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

/// 1-based pixel coordinate validated against a grid's shape at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixelIndex {
    row: usize,
    col: usize,
}

impl PixelIndex {
    /// Builds an index checked against `grid`; `row` and `col` are 1-based.
    pub fn checked(grid: &ImageGrid, row: usize, col: usize) -> Result<Self> {
        if row == 0 || col == 0 || row > grid.height || col > grid.width {
            return Err(Error::invalid(
                "pixel_index",
                format!(
                    "({row}, {col}) outside 1..={} x 1..={}",
                    grid.height, grid.width
                ),
            ));
        }
        Ok(PixelIndex { row, col })
    }

    pub fn row(&self) -> usize {
        self.row
    }

    pub fn col(&self) -> usize {
        self.col
    }
}

impl ImageGrid {
    fn validated(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::invalid(
                "dimensions",
                format!("{height}x{width}: both must be positive"),
            ));
        }
        if data.len() != height * width {
            return Err(Error::invalid(
                "data",
                format!("length {} != {height} * {width}", data.len()),
            ));
        }
        let grid = ImageGrid {
            height,
            width,
            data,
        };
        grid.check_finite("grid construction")?;
        Ok(grid)
    }

    pub fn zeros(height: usize, width: usize) -> Result<Self> {
        Self::validated(height, width, vec![0.0; height.saturating_mul(width)])
    }

    pub fn constant(height: usize, width: usize, value: f64) -> Result<Self> {
        Self::validated(height, width, vec![value; height.saturating_mul(width)])
    }

    /// Wraps row-major data; rejects length mismatches and non-finite entries.
    pub fn from_vec(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        Self::validated(height, width, data)
    }

    /// Same shape as `self`, all zeros. Skips revalidation.
    pub(crate) fn zeros_like(&self) -> ImageGrid {
        ImageGrid {
            height: self.height,
            width: self.width,
            data: vec![0.0; self.data.len()],
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn pixel_count(&self) -> usize {
        self.data.len()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        debug_assert!(row < self.height && col < self.width);
        self.data[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.height && col < self.width);
        self.data[row * self.width + col] = value;
    }

    /// Access through a validated 1-based index.
    pub fn at(&self, index: PixelIndex) -> f64 {
        self.get(index.row - 1, index.col - 1)
    }

    pub fn same_shape(&self, other: &ImageGrid) -> bool {
        self.height == other.height && self.width == other.width
    }

    pub(crate) fn ensure_same_shape(&self, other: &ImageGrid) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::shape_mismatch(self.shape(), other.shape()))
        }
    }

    /// Inner product `sum_{i,j} a_{i,j} b_{i,j}`.
    pub fn dot(&self, other: &ImageGrid) -> Result<f64> {
        self.ensure_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// `alpha * x + y`, elementwise.
    pub fn axpy(alpha: f64, x: &ImageGrid, y: &ImageGrid) -> Result<ImageGrid> {
        x.ensure_same_shape(y)?;
        let data = x
            .data
            .iter()
            .zip(&y.data)
            .map(|(xv, yv)| alpha * xv + yv)
            .collect();
        Ok(ImageGrid {
            height: x.height,
            width: x.width,
            data,
        })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ImageGrid {
        ImageGrid {
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(
        &self,
        other: &ImageGrid,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<ImageGrid> {
        self.ensure_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(ImageGrid {
            height: self.height,
            width: self.width,
            data,
        })
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.data.len() as f64
    }

    pub fn norm_l1(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }

    pub fn norm_l2(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Errors with `context` if any entry is NaN or infinite.
    pub fn check_finite(&self, context: &str) -> Result<()> {
        if self.data.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite {
                context: context.to_string(),
            })
        }
    }
}
