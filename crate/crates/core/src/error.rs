use thiserror::Error;

/// Errors surfaced by the engine. Most operations are total; these cover
/// parameter-coset violations, window-backed map evaluation outside its
/// support, and modular-arithmetic edge cases.
#[derive(Debug, Error)]
pub enum Error {
    /// A map constructor was asked for parameters outside the coset where
    /// the map is defined (the target index would not be integral).
    #[error("parameter incompatible: {0}")]
    ParameterIncompatible(String),

    /// A window-backed map was evaluated outside its stored support.
    #[error("undefined support: {0}")]
    UndefinedSupport(String),

    /// A checker's precondition (e.g. `[x, y] = 0`) does not hold.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// The self-map handed to `bider_from_commuting` fails the polarized
    /// commuting test on the sample window.
    #[error("map is not commuting: {0}")]
    NotCommuting(String),

    /// The chosen prime divides a denominator of the input matrix.
    #[error("bad prime {prime}: divides denominator of entry at ({row}, {col})")]
    BadPrime { prime: u64, row: usize, col: usize },

    /// Vector/basis ambient dimensions disagree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The modular dimension pass and the exact pass disagree; neither is
    /// trusted and the run is aborted with this diagnostic.
    #[error("modular/exact disagreement: {0}")]
    ModularMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
