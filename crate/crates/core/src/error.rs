//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Parameter or configuration validation failure.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Reaction terms were evaluated at a state where they are singular
    /// (the predator logistic term divides by the prey density).
    #[error("singular kinetics: u = {u} at t = {t}")]
    Singularity { u: f64, t: f64 },
    /// A guarded denominator vanished.
    #[error("denominator vanished in {0}")]
    DenominatorZero(&'static str),
    /// Operation requested outside its parameter regime.
    #[error("regime error: {0}")]
    RegimeError(String),
    /// The quantity is undefined for these parameters.
    #[error("not applicable: {0}")]
    NotApplicable(String),
    /// No candidate modes in the requested domain-size window.
    #[error("window [{0}, {1}] contains no candidate modes")]
    WindowEmpty(f64, f64),
    /// No Turing-Hopf point exists in the search window.
    #[error("no Turing-Hopf point in window [{0}, {1}]")]
    NoTuringHopf(f64, f64),
    /// A center-manifold linear solve is too ill-conditioned to trust.
    #[error("near-resonant linear solve (condition number {0:.3e})")]
    NearResonance(f64),
    /// Non-degeneracy requirement of the planar reduction violated.
    #[error("degenerate normal form: {0}")]
    Degenerate(String),
    /// Simulated fields left the trust region.
    #[error("field blow-up: max |u|,|v| = {max} at t = {t}")]
    Blowup { max: f64, t: f64 },
    /// Trajectory too short for the requested spectral resolution.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
