//! Error types shared by every module.

use std::fmt;

/// All failure modes surfaced by the library.
///
/// Operations never return NaN/Inf as a value; anything that would produce
/// one is reported through an error variant instead.
#[derive(Debug, Clone, PartialEq)]
pub enum SolverError {
    /// Input outside the mathematical domain of the operation (log 0, term
    /// singularity, W(k≠0, 0), ...).
    Domain(String),
    /// Structurally invalid input (non-finite argument, zero exponent, bad
    /// range bounds).
    InvalidInput(String),
    /// An internal iteration failed to converge within its cap.
    Convergence(String),
    /// Argument hit a pole of Gamma or zeta.
    Pole(String),
    /// Requested accuracy cannot be met.
    Accuracy(String),
    /// Branch tuple outside the finite range declared for the term.
    Branch(String),
    /// Term index outside 1..=n.
    Index(String),
    /// A term exceeded the overflow guard during evaluation.
    Overflow(String),
    /// Scenario id not present in the registry.
    UnknownScenario(String),
    /// Equation spec document could not be parsed or validated.
    Parse(String),
    /// File system problem while reading a spec or golden table.
    Io(String),
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::Domain(msg) => write!(f, "domain error: {msg}"),
            SolverError::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            SolverError::Convergence(msg) => write!(f, "convergence failure: {msg}"),
            SolverError::Pole(msg) => write!(f, "pole: {msg}"),
            SolverError::Accuracy(msg) => write!(f, "accuracy: {msg}"),
            SolverError::Branch(msg) => write!(f, "branch out of range: {msg}"),
            SolverError::Index(msg) => write!(f, "index error: {msg}"),
            SolverError::Overflow(msg) => write!(f, "overflow: {msg}"),
            SolverError::UnknownScenario(msg) => write!(f, "unknown scenario: {msg}"),
            SolverError::Parse(msg) => write!(f, "parse error: {msg}"),
            SolverError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for SolverError {}

pub type SolverResult<T> = Result<T, SolverError>;
