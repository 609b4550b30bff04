use thiserror::Error;

/// Errors from the tensor-algebra layer.
#[derive(Debug, Error)]
pub enum CurvError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("degenerate plane: |u \u{2227} v| = {norm:.3e} below cutoff")]
    DegeneratePlane { norm: f64 },

    #[error("singular conformal coupling: (n-1)(n-2)+2t = {denominator:.3e}")]
    SingularCoupling { denominator: f64 },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
}

pub type Result<T> = std::result::Result<T, CurvError>;
