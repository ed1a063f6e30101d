use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("weight function is not real-valued: term {term} has no matching conjugate (mismatch {mismatch:.3e})")]
    NonReal { term: String, mismatch: f64 },

    #[error("degenerate Hermitian form: eigenvalue {eigenvalue:.3e} below tolerance {tol:.3e}")]
    Degenerate { eigenvalue: f64, tol: f64 },

    #[error("{what}: index {value} out of range 0..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("Riccati flow broke down at t = {t}: {reason}")]
    Caustic { t: f64, reason: String },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("Gram matrix ill-conditioned (cond = {cond:.3e} > {limit:.1e}); use a smaller k or more precision")]
    IllConditioned { cond: f64, limit: f64 },

    #[error("weight {weight:?} lies on the wall of root {root:?}")]
    IrregularWeight { weight: Vec<i64>, root: Vec<i64> },

    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
