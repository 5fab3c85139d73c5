use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("trigonometric polynomial is identically zero at tolerance {tol:e}")]
    IdenticallyZero { tol: f64 },

    #[error("root cluster near t = {t} could not be resolved (total multiplicity {total} exceeds {cap})")]
    IllConditioned { t: f64, total: usize, cap: usize },

    #[error("tangency system has null space of dimension {nullity}, expected 1")]
    DegeneratePattern { nullity: usize },

    #[error("invalid tangency pattern: {0}")]
    InvalidPattern(String),

    #[error("neighborliness bound arc {psi} is not certified safe for k = {k} (score {score:e})")]
    SearchInconclusive { k: usize, psi: f64, score: f64 },

    #[error("no sign change of the gap function found for k = {k}")]
    BracketFailure { k: usize },

    #[error("{what} = {value} is outside its domain")]
    DomainError { what: &'static str, value: f64 },

    #[error("interpolation nodes coincide (|ti - tj| = {gap:e})")]
    CoincidentPoints { gap: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
