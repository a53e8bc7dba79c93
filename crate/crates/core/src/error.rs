use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("graph has no edges")]
    NoEdges,

    #[error("requested {requested} samples but only {available} nonzero columns exist")]
    TooManySamples { requested: usize, available: usize },

    #[error("invalid sample set: {0}")]
    InvalidSample(String),

    #[error("Krylov iteration failed: {0}")]
    Krylov(String),

    #[error("eigen-solver failure: {0}")]
    Eigen(String),

    #[error("inadmissible parameter: {0}")]
    Inadmissible(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("imaginary residue {residue:e} exceeds tolerance {tol:e}")]
    ImaginaryResidue { residue: f64, tol: f64 },

    #[error("rank-deficient product: power iterate collapsed to zero")]
    RankDeficientProduct,

    #[error("dense size cap exceeded: n = {n} > {cap}")]
    DenseCap { n: usize, cap: usize },

    #[error("invalid generator spec: {0}")]
    Generator(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
