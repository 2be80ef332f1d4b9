use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A gate target asks for a generator longer than the measured one;
    /// averaged rotations can only shrink a coordinate vector.
    #[error("infeasible magnitude: |w| = {wanted:.6e} exceeds |xi| = {measured:.6e} (scale target by at most {max_scale:.6e})")]
    InfeasibleMagnitude {
        wanted: f64,
        measured: f64,
        max_scale: f64,
    },

    /// No candidate within the ansatz and size bound reached the tolerance.
    #[error("no solution within bound: best residual {best_residual:.3e} ({detail})")]
    NoSolution { best_residual: f64, detail: String },

    #[error("rotation is not in the image of the adjoint map (residual {residual:.3e})")]
    NonRepresentable { residual: f64 },

    #[error("tomography inversion inconsistent: residual {residual:.3e}")]
    Inconsistent { residual: f64 },

    #[error("degenerate time: generator extraction needs t > 0")]
    DegenerateTime,

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
