//! Synthetic degradation pipeline: blur-kernel generation, periodic blurring
//! and seeded salt-and-pepper noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::ImageGrid;
use crate::spectral::{Kernel, SpectralOperator};

/// Blur-kernel family and size. Sizes must be odd.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    Gaussian { size: usize, sigma: f64 },
    Average { size: usize },
}

impl KernelSpec {
    pub fn size(&self) -> usize {
        match self {
            KernelSpec::Gaussian { size, .. } | KernelSpec::Average { size } => *size,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let size = self.size();
        if size == 0 || size.is_multiple_of(2) {
            return Err(Error::invalid(
                "kernel_size",
                format!("{size}: must be odd and positive"),
            ));
        }
        if let KernelSpec::Gaussian { sigma, .. } = self {
            if !(sigma.is_finite() && *sigma > 0.0) {
                return Err(Error::invalid(
                    "sigma",
                    format!("{sigma}: must be positive"),
                ));
            }
        }
        Ok(())
    }
}

/// Fraction of corrupted pixels and the stream seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Fraction of pixels replaced, split evenly between 0 and 1.
    pub level: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(level: f64, seed: u64) -> Result<Self> {
        if !(level.is_finite() && (0.0..=1.0).contains(&level)) {
            return Err(Error::invalid(
                "noise_level",
                format!("{level}: must lie in [0, 1]"),
            ));
        }
        Ok(NoiseSpec { level, seed })
    }
}

/// Builds the spatial kernel: a normalized sampled Gaussian on the centered
/// integer grid, or a uniform average.
pub fn make_kernel(spec: &KernelSpec) -> Result<Kernel> {
    spec.validate()?;
    let size = spec.size();
    let half = (size as isize - 1) / 2;
    let weights = match spec {
        KernelSpec::Average { .. } => vec![1.0 / (size * size) as f64; size * size],
        KernelSpec::Gaussian { sigma, .. } => {
            let mut w = Vec::with_capacity(size * size);
            for x in -half..=half {
                for y in -half..=half {
                    w.push((-((x * x + y * y) as f64) / (2.0 * sigma * sigma)).exp());
                }
            }
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|v| *v /= total);
            w
        }
    };
    Kernel::centered(weights, size, size)
}

/// Convenience: spectral blur operator for `spec` at the given image size.
pub fn blur_operator(spec: &KernelSpec, height: usize, width: usize) -> Result<SpectralOperator> {
    SpectralOperator::from_kernel(make_kernel(spec)?, height, width)
}

/// Replaces each pixel independently: with probability `level/2` by 0, with
/// probability `level/2` by 1, otherwise unchanged. One uniform draw per
/// pixel in row-major order, so the corrupted set depends only on the seed
/// and the dimensions.
pub fn add_salt_pepper(image: &ImageGrid, noise: &NoiseSpec) -> Result<ImageGrid> {
    NoiseSpec::new(noise.level, noise.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let mut out = image.clone();
    for v in out.data_mut() {
        let u: f64 = rng.random();
        if u < noise.level / 2.0 {
            *v = 0.0;
        } else if u < noise.level {
            *v = 1.0;
        }
    }
    Ok(out)
}

/// Full degradation: periodic blur followed by salt-and-pepper noise.
/// `clean` must lie in `[0, 1]`.
pub fn degrade(clean: &ImageGrid, kernel: &KernelSpec, noise: &NoiseSpec) -> Result<ImageGrid> {
    if clean.data().iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::invalid(
            "clean",
            "pixel values must lie in [0, 1] before degradation",
        ));
    }
    let blur = blur_operator(kernel, clean.height(), clean.width())?;
    let blurred = blur.apply(clean)?;
    add_salt_pepper(&blurred, noise)
}
