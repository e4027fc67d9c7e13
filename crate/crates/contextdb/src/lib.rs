//! Semiring-valued tables over attribute covers: gluing, hidden-variable
//! feasibility, and contextuality analysis.
//!
//! The crate revolves around one question. Fix a finite family of attribute
//! sets (*contexts*) that overlap, and give one table per context — boolean
//! tables (relations), exact-rational probability tables, or tropical cost
//! tables. When do these tables arise as the restrictions (marginals) of a
//! **single** table over all attributes at once?
//!
//! That single question ties together two classical subjects:
//!
//! * In database theory it is the *universal relation* problem: when does a
//!   family of relations glue to one relation whose projections they are?
//!   Acyclicity of the schema (checked by GYO reduction) characterizes the
//!   covers for which pairwise-compatible tables always glue.
//! * In quantum foundations it is the *hidden-variable* problem: Bell,
//!   Hardy, Kochen–Specker, and GHZ arguments all exhibit families of
//!   per-context measurement statistics that are pairwise compatible yet
//!   admit no global table, at three increasingly strict strengths
//!   (probabilistic, logical, strong contextuality).
//!
//! The toolkit provides the schema/valuation core ([`schema`], [`semiring`],
//! [`valuation`], [`model`]), the relational operators ([`relalg`]), exact
//! feasibility machinery — a rational phase-1 simplex with Farkas
//! certificates and a backtracking section search ([`solver`]) — the gluing
//! and classification pipeline ([`gluing`]), schema-level structure theory
//! ([`structure`]), the standard example models ([`models`]), Born-rule
//! model construction from state vectors ([`quantum`]), a JSON interchange
//! format ([`interchange`]), and a command-line front end ([`cli`]).
//!
//! Everything in the core is exact: probabilities are arbitrary-precision
//! rationals and every infeasibility verdict is backed by a certificate that
//! is re-verified by multiplication before it is returned. Floating point
//! appears only where physics requires it (Born-rule evaluation), behind a
//! dedicated float-model type with explicit tolerances.

pub mod cli;
pub mod error;
pub mod gluing;
pub mod interchange;
pub mod model;
pub mod models;
pub mod quantum;
pub mod report;
pub mod relalg;
pub mod schema;
pub mod semiring;
pub mod solver;
pub mod structure;
pub mod valuation;

pub use error::{Error, Result};
pub use model::EmpiricalModel;
pub use schema::{Attribute, AttributeSet, DataValue, GlobalAssignment, Schema, Tuple};
pub use semiring::{SemiringKind, Tropical, Value};
pub use valuation::{Distribution, Valuation};
