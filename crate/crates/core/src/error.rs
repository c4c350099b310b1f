use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by constructions and checkers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },

    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("dimension {d} outside supported range {min}..={max}")]
    DimensionOutOfRange { d: usize, min: usize, max: usize },

    #[error("generator list is empty")]
    EmptyGenerators,

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("matrix is not an orthogonal projector (residual {residual:.3e})")]
    NotProjector { residual: f64 },

    #[error("projector has vanishing trace")]
    DegenerateProjector,

    #[error("basis is not orthonormal (Gram deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("invalid tolerance {name} = {value}: must lie in (0, 1e-3)")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("empty sample list")]
    EmptySamples,

    #[error("unknown instance '{name}' (expected circle, hw or all)")]
    UnknownInstance { name: String },

    #[error("unknown dump object '{name}' for instance '{instance}'")]
    UnknownObject { name: String, instance: String },
}
