use thiserror::Error;

/// Errors produced by grid arithmetic, spectral operators and the solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected_height}x{expected_width}, got {actual_height}x{actual_width}")]
    DimensionMismatch {
        expected_height: usize,
        expected_width: usize,
        actual_height: usize,
        actual_width: usize,
    },

    #[error("kernel ({kernel_height}x{kernel_width}) exceeds image ({image_height}x{image_width})")]
    KernelTooLarge {
        kernel_height: usize,
        kernel_width: usize,
        image_height: usize,
        image_width: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value detected in {context}")]
    NonFinite { context: String },

    /// Raised when an inverse transform leaves more imaginary residue than a
    /// real-valued pipeline can produce, signalling operator misuse.
    #[error("imaginary residue {max_imag:e} exceeds 1e-8 of real magnitude {max_real:e} after inverse transform")]
    ImaginaryResidue { max_imag: f64, max_real: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn shape_mismatch(
        expected: (usize, usize),
        actual: (usize, usize),
    ) -> Self {
        Error::DimensionMismatch {
            expected_height: expected.0,
            expected_width: expected.1,
            actual_height: actual.0,
            actual_width: actual.1,
        }
    }
}
