//! Overlapping-group-sparsity functional, its diagonal majorizer, and the
//! majorization-minimization inner solver used for the gradient-field
//! subproblems.
//!
//! A group is the K x K window centered at a pixel (offsets -K_l..K_r per
//! axis); samples outside the grid contribute zero. The regularizer sums the
//! Euclidean norms of all overlapping groups.

use crate::error::{Error, Result};
use crate::grid::ImageGrid;

/// Group edge length K with the derived half-widths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupConfig {
    size: usize,
}

impl GroupConfig {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid("group_size", "must be at least 1"));
        }
        Ok(GroupConfig { size })
    }

    /// Group edge K; the group has K^2 samples.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Offsets reach `-left()..=right()` on each axis; left + right + 1 = K.
    pub fn left(&self) -> usize {
        (self.size - 1) / 2
    }

    pub fn right(&self) -> usize {
        self.size / 2
    }
}

impl Default for GroupConfig {
    fn default() -> Self {
        GroupConfig { size: 3 }
    }
}

/// Inner-loop controls for [`mm_denoise`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmSettings {
    /// Maximum number of majorize-minimize updates.
    pub max_inner_iterations: usize,
    /// Relative-change stopping threshold for the inner loop.
    pub inner_tolerance: f64,
    /// Group energies are clamped to this before the inverse square root,
    /// keeping the majorizer finite on zero groups.
    pub energy_floor: f64,
}

impl Default for MmSettings {
    fn default() -> Self {
        MmSettings {
            max_inner_iterations: 5,
            inner_tolerance: 1e-3,
            energy_floor: 1e-15,
        }
    }
}

impl MmSettings {
    pub fn validate(&self) -> Result<()> {
        if self.max_inner_iterations == 0 {
            return Err(Error::invalid("max_inner_iterations", "must be at least 1"));
        }
        if !(self.inner_tolerance.is_finite() && self.inner_tolerance > 0.0) {
            return Err(Error::invalid(
                "inner_tolerance",
                format!("{}: must be positive", self.inner_tolerance),
            ));
        }
        if !(self.energy_floor.is_finite() && self.energy_floor > 0.0) {
            return Err(Error::invalid(
                "energy_floor",
                format!("{}: must be positive", self.energy_floor),
            ));
        }
        Ok(())
    }
}

/// Separable windowed sum: `out[p] = sum_{d in [lo, hi]^2} src[p + d]`, with
/// samples outside the grid contributing zero. `lo <= hi`, both signed.
fn windowed_sum(src: &ImageGrid, lo: isize, hi: isize) -> ImageGrid {
    let (h, w) = src.shape();
    let mut rows = src.zeros_like();
    for d in lo..=hi {
        for r in 0..h as isize {
            let s = r + d;
            if s < 0 || s >= h as isize {
                continue;
            }
            let (r, s) = (r as usize, s as usize);
            for c in 0..w {
                let v = rows.get(r, c) + src.get(s, c);
                rows.set(r, c, v);
            }
        }
    }
    let mut out = src.zeros_like();
    for d in lo..=hi {
        for c in 0..w as isize {
            let s = c + d;
            if s < 0 || s >= w as isize {
                continue;
            }
            let (c, s) = (c as usize, s as usize);
            for r in 0..h {
                let v = out.get(r, c) + rows.get(r, s);
                out.set(r, c, v);
            }
        }
    }
    out
}

/// Per-pixel squared group norm: energy of the K x K window at each pixel.
fn group_energy(v: &ImageGrid, cfg: GroupConfig) -> ImageGrid {
    let sq = v.map(|x| x * x);
    windowed_sum(&sq, -(cfg.left() as isize), cfg.right() as isize)
}

/// The overlapping-group-sparsity functional: sum over all pixels of the
/// Euclidean norm of the K x K group centered there.
pub fn group_norm_sum(v: &ImageGrid, cfg: GroupConfig) -> f64 {
    group_energy(v, cfg).data().iter().map(|e| e.sqrt()).sum()
}

/// Diagonal of the squared majorizer: two passes of K x K windowed sums with
/// zero padding. The first pass accumulates group energies; the second sums
/// their inverse square roots over the reversed window. `floor` clamps each
/// energy before the inverse square root.
pub fn lambda_sq_diagonal(u: &ImageGrid, cfg: GroupConfig, floor: f64) -> ImageGrid {
    let energies = group_energy(u, cfg);
    let inv_roots = energies.map(|e| 1.0 / e.max(floor).sqrt());
    windowed_sum(&inv_roots, -(cfg.right() as isize), cfg.left() as isize)
}

/// Approximately minimizes `(alpha/2) ||v - v0||^2 + group_norm_sum(v)` by
/// iterating the elementwise majorize-minimize update
/// `v <- v0 / (1 + lambda_sq(v) / alpha)` from `v = v0`, stopping on the
/// relative-change tolerance or the iteration cap.
pub fn mm_denoise(
    v0: &ImageGrid,
    alpha: f64,
    cfg: GroupConfig,
    settings: &MmSettings,
) -> Result<ImageGrid> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::invalid(
            "alpha",
            format!("{alpha}: must be positive"),
        ));
    }
    settings.validate()?;
    let mut v = v0.clone();
    for _ in 0..settings.max_inner_iterations {
        let lam2 = lambda_sq_diagonal(&v, cfg, settings.energy_floor);
        let next = v0
            .zip_with(&lam2, |v0i, li| v0i / (1.0 + li / alpha))
            .expect("lambda grid shares v0 shape");
        let delta = ImageGrid::axpy(-1.0, &v, &next)
            .expect("iterates share shape")
            .norm_l2();
        let prev_norm = v.norm_l2();
        v = next;
        if delta / prev_norm.max(f64::MIN_POSITIVE) < settings.inner_tolerance {
            break;
        }
    }
    Ok(v)
}
