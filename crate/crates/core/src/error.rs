use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-homogeneous input: {0}")]
    NonHomogeneous(String),

    #[error("substitution image is not a linear form: {0}")]
    NonLinearImage(String),

    #[error("bad reduction: {0}")]
    BadReduction(String),

    #[error("hilbert polynomial did not stabilize: {0}")]
    NotStabilized(String),

    #[error("section module window too small: need degrees {needed_low}..={needed_high}, have {have_low}..={have_high}")]
    Window {
        needed_low: i32,
        needed_high: i32,
        have_low: i32,
        have_high: i32,
    },

    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("construction guard failed after {attempts} attempts: {reason}")]
    GuardFailed { attempts: u32, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("cohomology representatives unavailable for cell ({p},{q}); recompute with representatives enabled")]
    MissingRepresentatives { p: usize, q: i32 },

    #[error("prediction contradicts direct computation: {0}")]
    Contradiction(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
