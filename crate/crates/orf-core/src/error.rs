//! Error type shared by every module of the library.

use thiserror::Error;

/// Errors produced by the library.
///
/// Errors fall into two classes: *validation* errors (inputs that violate a
/// documented invariant) and *numerical* errors (well-formed inputs on which a
/// computation cannot proceed reliably). [`OrfError::is_validation`] exposes
/// the class so front ends can map it to distinct exit codes.
#[derive(Debug, Error)]
pub enum OrfError {
    /// Input violates a documented precondition or schema.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Two containers that must be aligned have different sizes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A pole or parameter violates its compactness margin.
    #[error("margin violation: {0}")]
    Margin(String),

    /// Evaluation was requested at (or too close to) a pole of the function.
    #[error("evaluation at a pole: {0}")]
    PoleHit(String),

    /// A linear solve met a condition estimate beyond the configured limit.
    #[error("ill-conditioned linear solve: condition estimate {cond:.3e} exceeds limit {limit:.3e}")]
    IllConditioned {
        /// 1-norm condition estimate of the offending matrix.
        cond: f64,
        /// Configured limit.
        limit: f64,
    },

    /// The QR iteration did not converge within the sweep budget.
    #[error("eigensolver failed to converge on a {n}x{n} matrix within {sweeps} sweeps")]
    NoConvergence {
        /// Matrix order.
        n: usize,
        /// Sweep budget that was exhausted.
        sweeps: usize,
    },

    /// Orthogonalization hit a pivot too small to continue (degenerate support).
    #[error("orthogonalization breakdown at index {index}: pivot ratio {ratio:.3e} (degenerate support)")]
    Breakdown {
        /// Order at which the pivot collapsed.
        index: usize,
        /// Ratio of the offending pivot to the leading pivot.
        ratio: f64,
    },

    /// Two quadrature nodes coincide beyond the simplicity tolerance.
    #[error("quadrature node collision: nodes {i} and {j} are {dist:.3e} apart")]
    NodeCollision {
        /// Index of the first node.
        i: usize,
        /// Index of the second node.
        j: usize,
        /// Distance between the two nodes.
        dist: f64,
    },

    /// Both matrices of a pencil are singular on a common direction.
    #[error("indefinite pencil: both matrices of the pair are numerically singular")]
    IndefinitePencil,

    /// The requested transform is undefined because the measure carries mass
    /// at infinity (an eigenvalue sits at 1).
    #[error("mass at infinity: {0}")]
    MassAtInfinity(String),

    /// Two routes that must agree disagreed beyond tolerance.
    #[error("numerical inconsistency: {0}")]
    Inconsistent(String),
}

impl OrfError {
    /// True for errors caused by invalid inputs rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            OrfError::Invalid(_) | OrfError::DimensionMismatch(_) | OrfError::Margin(_)
        )
    }
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, OrfError>;
