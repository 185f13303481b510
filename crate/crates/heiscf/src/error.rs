//! Crate-wide error type.
//!
//! Exact-path operations never return approximate values in place of
//! errors: anything undefined (division by zero, inversion of the identity,
//! a constraint violation) is reported through [`Error`].

/// Errors produced by the exact and floating pipelines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A rational operation attempted to divide by zero.
    #[error("division by zero")]
    DivisionByZero,

    /// The Korányi inversion was applied to the group identity, where it is
    /// undefined.
    #[error("Korányi inversion is undefined at the identity")]
    InversionAtIdentity,

    /// A Siegel-model point violated the null constraint |u|² = 2·Re(v).
    #[error("Siegel null constraint |u|^2 = 2 Re(v) violated")]
    NullConstraint,

    /// A matrix expected to satisfy M†𝕁M = 𝕁 does not.
    #[error("matrix is not J-unitary")]
    NotUnitary,

    /// A projective action produced the point at infinity (0:0:1), which has
    /// no planar Siegel representative.
    #[error("projective action landed on the point at infinity (0:0:1)")]
    PointAtInfinity,

    /// A digit after position 0 was zero.
    #[error("digit at index {0} is zero")]
    ZeroDigit(usize),

    /// Reconstruction needed to invert the identity at the given digit index.
    #[error("reconstruction inverts the identity at digit index {0}")]
    InversionAtIdentityDuringReconstruct(usize),

    /// A caller-facing precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A certified numeric bound could not be met.
    #[error("certification failure: {0}")]
    Certification(String),

    /// An internal mathematical invariant failed; this is a bug or a corrupt
    /// input, never a rounding artifact.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
