use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid harmonic labels: {0}")]
    InvalidTriple(String),

    #[error("angle out of range: {0}")]
    InvalidAngle(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("variance mismatch: {0}")]
    VarianceMismatch(String),

    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("chart singularity: {0}")]
    ChartSingularity(String),

    #[error("quadrature orders insufficient: need theta order >= {need_theta}, phi points > {need_phi}, beta points > {need_beta}; configured {got_theta}/{got_phi}/{got_beta}")]
    QuadratureInsufficient {
        need_theta: usize,
        need_phi: usize,
        need_beta: usize,
        got_theta: usize,
        got_phi: usize,
        got_beta: usize,
    },

    #[error("Lagrangian violates 2-homogeneity: {0}")]
    NotHomogeneous(String),

    #[error("metric degenerate: {0}")]
    DegenerateMetric(String),

    #[error("supplied partial derivatives disagree with finite differences: {0}")]
    InconsistentPartials(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
