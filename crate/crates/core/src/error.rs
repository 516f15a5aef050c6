use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} exceeds the supported limit {limit}")]
    SizeLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("parity set is empty for n = {0} (needs n >= 2)")]
    EmptyParitySet(usize),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("dimension {dim} is not divisible by subsystem dimension {factor}")]
    NotDivisible { dim: usize, factor: usize },

    #[error("numerical inconsistency: {what} residue {residue:e} above tolerance")]
    NumericalInconsistency { what: &'static str, residue: f64 },

    #[error("invalid POVM parameters: eta = {eta}, alpha = {alpha} ({reason})")]
    InvalidParams {
        eta: f64,
        alpha: f64,
        reason: &'static str,
    },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("no non-trivial constraints exist for n = {0}")]
    NoConstraints(usize),

    #[error("family infeasible at Bob {step}: alpha {alpha} + eta {eta} > 1")]
    InfeasibleFamily { step: usize, alpha: f64, eta: f64 },

    #[error("no feasible assignment satisfies the constraints for n = {0}")]
    NoFeasibleAssignment(usize),

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
