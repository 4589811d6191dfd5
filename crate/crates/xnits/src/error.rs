use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("level set is exactly zero at an evaluation point; pick a side first")]
    HeavisideAtZero,

    #[error("invalid material: {0}")]
    Material(String),

    #[error("assembly error: {0}")]
    Assembly(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error(
        "iterative solve did not converge: residual {residual:.3e} after {iterations} iterations"
    )]
    NoConvergence { residual: f64, iterations: usize },

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("mesh file error: {0}")]
    MeshFormat(String),

    #[error("verification error: {0}")]
    Verify(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
