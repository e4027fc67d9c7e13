//! Error taxonomy shared by every module in the crate.
//!
//! Anything that can go wrong while building schemas, valuations, or models,
//! while evaluating relational operators, or while parsing the interchange
//! format is reported through [`Error`]. Functions never panic on malformed
//! *input*; panics are reserved for broken internal invariants.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode surfaced by the public API.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An attribute appears in a context but has no declared domain.
    #[error("attribute `{0}` has no declared domain")]
    MissingDomain(String),

    /// The same attribute set appears twice in a schema's context list.
    #[error("duplicate context {0}")]
    DuplicateContext(String),

    /// A schema must declare at least one context.
    #[error("schema declares no contexts")]
    EmptySchema,

    /// A declared domain contains no values.
    #[error("attribute `{0}` has an empty domain")]
    EmptyDomain(String),

    /// A declared domain lists the same value twice.
    #[error("attribute `{attribute}` declares duplicate domain value `{value}`")]
    DuplicateDomainValue { attribute: String, value: String },

    /// A tuple binds the same attribute more than once.
    #[error("tuple binds attribute `{0}` more than once")]
    DuplicateAttribute(String),

    /// The same tuple appears twice among the entries of one table.
    #[error("duplicate tuple {0} in one table")]
    DuplicateTuple(String),

    /// A tuple enumeration (or an operation that must enumerate tuples)
    /// would exceed the configured cap.
    #[error("enumeration exceeds the configured cap of {cap} tuples")]
    EnumerationTooLarge { cap: u64 },

    /// A valuation that must be a distribution does not sum to one.
    #[error("not normalized: total mass is {total}")]
    NotNormalized { total: String },

    /// Malformed input text; the payload describes the location or token.
    #[error("syntax error: {0}")]
    Syntax(String),

    /// A context or tuple mentions an attribute the schema does not declare.
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    /// The interchange document carries an unrecognized semiring tag.
    #[error("unknown semiring tag `{0}`")]
    UnknownSemiring(String),

    /// A tuple assigns a value that is not in the attribute's domain.
    #[error("value `{value}` is outside the domain of attribute `{attribute}`")]
    ValueOutsideDomain { attribute: String, value: String },

    /// A probability or cost value is negative.
    #[error("value `{0}` is negative")]
    NegativeValue(String),

    /// A pushforward map was undefined on a support tuple.
    #[error("map is undefined on support tuple {0}")]
    PartialMap(String),

    /// A projection target is not contained in the valuation's base.
    #[error("{left} is not a subset of {right}")]
    NotSubset { left: String, right: String },

    /// Two valuations disagree on the domain of a shared attribute.
    #[error("attribute `{0}` has conflicting domains")]
    DomainMismatch(String),

    /// Two valuations that must share a base (or a tuple and its expected
    /// base) do not.
    #[error("base mismatch: expected {expected}, found {found}")]
    BaseMismatch { expected: String, found: String },

    /// An operation received a valuation over the wrong semiring.
    #[error("operation requires a {expected} valuation, found {found}")]
    WrongSemiring {
        expected: &'static str,
        found: &'static str,
    },

    /// An operation requires every domain to be exactly {0, 1}.
    #[error("attribute `{0}` does not have the binary domain {{0, 1}}")]
    NonBinaryDomain(String),

    /// An operation requires an acyclic schema.
    #[error("schema is not acyclic: {0}")]
    NotAcyclic(String),

    /// A linear system's matrix, right-hand side, or labels disagree in size.
    #[error("linear system dimensions disagree: {0}")]
    DimensionMismatch(String),

    /// A state vector and a measurement scenario disagree on party count.
    #[error("state has {state} parties but the scenario has {scenario}")]
    PartyMismatch { state: usize, scenario: usize },

    /// No rational with a small denominator approximates a float entry.
    #[error("no rational with denominator <= {max_denominator} lies within 1e-9 of {value}")]
    NoNearbyRational { value: f64, max_denominator: u64 },

    /// A precondition on an argument was violated (party counts, angle
    /// strings, and similar).
    #[error("{0}")]
    InvalidArgument(String),
}
