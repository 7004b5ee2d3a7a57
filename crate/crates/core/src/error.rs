use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// No decision rule is implemented for arrows between these two nodes.
    #[error("undecided pair: {from} → {to}")]
    UndecidedPair { from: String, to: String },

    #[error("{object} does not map into the slice base {base}")]
    NotInSlice { object: String, base: String },

    #[error("virtual object {got} is not of kind {expected}")]
    WrongKind { expected: &'static str, got: String },

    #[error(
        "exhaustive universe too large: window {window}{} exceeds {limit} ground bits",
        if *.cofinite { " with cofinite members" } else { "" }
    )]
    SizeGuard { window: u32, cofinite: bool, limit: u32 },

    #[error("{total} → {base} is not a fibration")]
    NotAFibration { total: String, base: String },

    #[error("only Ũ → ⊤ is supported as the universal fibration, got {0}")]
    UnsupportedUniversal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
