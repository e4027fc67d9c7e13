//! Gluing tables and classifying the obstructions.
//!
//! Given an empirical model — one table per context — four questions arise
//! in strictly increasing order of difficulty for the model:
//!
//! 1. **Compatibility** ([`check_compatibility`]): do every two tables
//!    marginalize identically on their overlap? This is the no-signalling
//!    condition; everything below presumes nothing about it but is usually
//!    applied to compatible families.
//! 2. **Gluing / universal relation** ([`universal_relation`]): for boolean
//!    models, is there one relation over the global attribute set whose
//!    projections are exactly the per-context tables? The natural join of
//!    all tables is the canonical candidate: it is the *largest* relation
//!    whose projections are contained in the tables, so a glue exists iff
//!    the join itself re-projects onto every table.
//! 3. **Hidden-variable feasibility** ([`lhv_feasible`]): for probability
//!    models, is there one distribution on global assignments whose
//!    marginals are exactly the tables? This is an exact rational linear
//!    program with one unknown per global assignment and one equation per
//!    (context, tuple) pair — zero-probability rows included, since an
//!    unsupported tuple is an equation `Σ … = 0`, not an absence of
//!    information. Infeasibility comes with a Farkas certificate.
//! 4. **Strong contextuality** ([`strong_contextuality`]): does even a
//!    single global assignment restrict into every table's support? When
//!    not, no probabilistic data whatsoever could explain the supports.
//!
//! [`classify`] arranges the verdicts into the four-level hierarchy
//! [`ContextualityClass`]: non-contextual models admit a hidden-variable
//! distribution (or a glue, in the boolean case); probabilistically
//! contextual models fail that but their supports still glue; logically
//! contextual models fail support gluing yet retain some consistent global
//! assignment; strongly contextual models have none. The three standard
//! two-party/three-party examples (see [`crate::models`]) witness that each
//! inclusion is strict.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::EmpiricalModel;
use crate::relalg::{natural_join, project};
use crate::schema::{AttributeSet, Tuple};
use crate::semiring::{SemiringKind, Value};
use crate::solver::{
    lp_feasible, FarkasCertificate, LinearSystem, LpOutcome, SearchOutcome, SupportConstraintSet,
};
use crate::valuation::{Distribution, Valuation};

/// One failed overlap check: contexts `left` and `right` (indices into the
/// schema's context list) marginalize differently on their overlap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityViolation {
    pub left: usize,
    pub right: usize,
    pub overlap: AttributeSet,
    pub left_marginal: Valuation,
    pub right_marginal: Valuation,
}

/// The outcome of [`check_compatibility`]: all pairwise overlap violations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CompatibilityReport {
    violations: Vec<CompatibilityViolation>,
}

impl CompatibilityReport {
    /// No violations: the family agrees on every overlap.
    pub fn compatible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[CompatibilityViolation] {
        &self.violations
    }
}

/// Check every pair of tables for marginal agreement on their overlap.
///
/// Works for any semiring: marginals are semiring sums. Pairs with an empty
/// overlap are still checked — their marginals are the total masses at the
/// empty tuple, so this subsumes the "equal normalization" check.
pub fn check_compatibility(model: &EmpiricalModel) -> CompatibilityReport {
    let contexts = model.schema().contexts();
    let mut violations = Vec::new();
    for i in 0..contexts.len() {
        for j in (i + 1)..contexts.len() {
            let overlap = contexts[i].intersect(&contexts[j]);
            let left = project(model.table(i), &overlap)
                .expect("overlap is a subset of the left context");
            let right = project(model.table(j), &overlap)
                .expect("overlap is a subset of the right context");
            if left != right {
                violations.push(CompatibilityViolation {
                    left: i,
                    right: j,
                    overlap,
                    left_marginal: left,
                    right_marginal: right,
                });
            }
        }
    }
    CompatibilityReport { violations }
}

/// The outcome of [`universal_relation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GlueOutcome {
    /// A glue exists; `witness` is the natural join of all tables, which is
    /// the largest relation whose projections land inside the tables — and
    /// hence the largest glue.
    Exists {
        witness: Valuation,
        is_largest: bool,
    },
    /// No relation over the global attribute set projects onto every table.
    NotExists,
}

impl GlueOutcome {
    pub fn exists(&self) -> bool {
        matches!(self, GlueOutcome::Exists { .. })
    }

    pub fn witness(&self) -> Option<&Valuation> {
        match self {
            GlueOutcome::Exists { witness, .. } => Some(witness),
            GlueOutcome::NotExists => None,
        }
    }
}

/// Decide whether a boolean model glues to a single global relation.
///
/// Folds the natural join over all tables (never touching the full tuple
/// space) and then re-projects: the join is a glue iff its projection to
/// every context equals that context's table, and in that case it is the
/// largest glue. Fails with [`Error::WrongSemiring`] on non-boolean models.
pub fn universal_relation(model: &EmpiricalModel) -> Result<GlueOutcome> {
    if model.kind() != SemiringKind::Boolean {
        return Err(Error::WrongSemiring {
            expected: "boolean",
            found: model.kind().name(),
        });
    }
    let mut join = model.table(0).clone();
    for table in &model.tables()[1..] {
        join = natural_join(&join, table)?;
    }
    // The fold of joins over a sub-cover may live on a smaller base than
    // the global set when some attribute appears in no table... it cannot:
    // every context contributes its attributes, so the base is global.
    for (context, table) in model.schema().contexts().iter().zip(model.tables()) {
        let back = project(&join, context)?;
        if back != *table {
            return Ok(GlueOutcome::NotExists);
        }
    }
    Ok(GlueOutcome::Exists {
        witness: join,
        is_largest: true,
    })
}

/// The outcome of [`lhv_feasible`].
#[derive(Debug, Clone, PartialEq)]
pub enum LhvOutcome {
    /// A distribution on global assignments whose marginal on every context
    /// is exactly (rational equality) that context's table.
    Feasible(Distribution),
    /// A verified Farkas certificate refuting any such distribution.
    Infeasible(FarkasCertificate),
}

impl LhvOutcome {
    pub fn feasible(&self) -> bool {
        matches!(self, LhvOutcome::Feasible(_))
    }
}

/// Build the hidden-variable linear system of a probability model.
///
/// Columns are labeled by the global assignments in canonical order; rows
/// run over every (context, tuple) pair in context order then canonical
/// tuple order — including tuples the table does not support, whose
/// right-hand side is zero. Row `(C, t)` says that the probabilities of the
/// global assignments restricting to `t` on `C` sum to the table entry.
/// Nonnegativity of the unknowns is implicit in the feasibility question,
/// and normalization is implied by any one context's rows.
pub fn lhv_system(model: &EmpiricalModel) -> Result<LinearSystem> {
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    if model.kind() != SemiringKind::Probability {
        return Err(Error::WrongSemiring {
            expected: "probability",
            found: model.kind().name(),
        });
    }
    for table in model.tables() {
        if !table.is_normalized() {
            return Err(Error::NotNormalized {
                total: table.total().render(),
            });
        }
    }
    let schema = model.schema();
    let globals = schema.enumerate_tuples(schema.global())?;

    let mut matrix: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    for (context, table) in schema.contexts().iter().zip(model.tables()) {
        let locals = schema.enumerate_tuples(context)?;
        let row_of: std::collections::BTreeMap<&Tuple, usize> =
            locals.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let base = matrix.len();
        for t in &locals {
            matrix.push(vec![BigRational::zero(); globals.len()]);
            let value = match table.get(t) {
                Value::Rational(r) => r,
                _ => unreachable!("probability table holds rational values"),
            };
            rhs.push(value);
        }
        for (j, s) in globals.iter().enumerate() {
            let restricted = s.restrict(context)?;
            let i = row_of[&restricted];
            matrix[base + i][j] = BigRational::one();
        }
    }
    LinearSystem::new(matrix, rhs)?.with_labels(globals)
}

/// Decide whether a probability model admits a hidden-variable explanation:
/// one distribution on global assignments marginalizing exactly to every
/// table.
///
/// Requires a probability model with normalized tables. The answer is exact
/// in both directions: a feasible model yields the explaining distribution
/// (which re-marginalizes to the tables by construction — the LP equations
/// *are* the marginalization conditions), an infeasible one yields a Farkas
/// certificate that has been re-verified by multiplication.
pub fn lhv_feasible(model: &EmpiricalModel) -> Result<LhvOutcome> {
    let system = lhv_system(model)?;
    match lp_feasible(&system)? {
        LpOutcome::Feasible(x) => {
            let labels = system.labels().expect("lhv system is labeled");
            let entries = labels
                .iter()
                .zip(&x)
                .map(|(t, v)| (t.clone(), Value::Rational(v.clone())));
            let schema = model.schema();
            let valuation = Valuation::over(
                schema,
                schema.global(),
                SemiringKind::Probability,
                entries,
            )?;
            Ok(LhvOutcome::Feasible(Distribution::new(valuation)?))
        }
        LpOutcome::Infeasible(certificate) => Ok(LhvOutcome::Infeasible(certificate)),
    }
}

/// Search for a global assignment consistent with every table's support.
///
/// Works for any semiring, since only supports matter. Returns the
/// lexicographically least witness, or [`SearchOutcome::Exhausted`] when
/// the model is strongly contextual.
pub fn strong_contextuality(model: &EmpiricalModel) -> Result<SearchOutcome> {
    SupportConstraintSet::from_model(model).find_assignment()
}

/// The four-level contextuality hierarchy, ordered by strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContextualityClass {
    /// A hidden-variable distribution (probability) or global relation
    /// (boolean) explains the model.
    NonContextual,
    /// No hidden-variable distribution, but the supports still glue.
    ProbabilisticallyContextual,
    /// The supports do not glue, but some global assignment is consistent
    /// with all of them.
    LogicallyContextual,
    /// No global assignment is consistent with every support.
    StronglyContextual,
}

impl ContextualityClass {
    /// The hyphenated name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            ContextualityClass::NonContextual => "non-contextual",
            ContextualityClass::ProbabilisticallyContextual => "probabilistically-contextual",
            ContextualityClass::LogicallyContextual => "logically-contextual",
            ContextualityClass::StronglyContextual => "strongly-contextual",
        }
    }
}

impl fmt::Display for ContextualityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The verdict of [`classify`], with every intermediate witness or
/// certificate that was computed on the way to the class.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub class: ContextualityClass,
    /// Hidden-variable verdict (probability models only).
    pub lhv: Option<LhvOutcome>,
    /// Gluing verdict for the (support of the) model.
    pub support_glue: Option<GlueOutcome>,
    /// Global-assignment search verdict, when it was needed.
    pub assignment: Option<SearchOutcome>,
}

/// Place a model in the contextuality hierarchy.
///
/// Probability models are tested by the cascade LHV feasibility → support
/// gluing → assignment search; boolean models by gluing → assignment
/// search. Each stage runs only if the earlier ones failed, and its
/// witness or certificate is recorded. Min-plus models are not classified
/// ([`Error::WrongSemiring`]). Incompatible (signalling) models are still
/// classified: the LP or the join simply fails and the cascade continues.
pub fn classify(model: &EmpiricalModel) -> Result<Classification> {
    match model.kind() {
        SemiringKind::Probability => {
            let lhv = lhv_feasible(model)?;
            if lhv.feasible() {
                return Ok(Classification {
                    class: ContextualityClass::NonContextual,
                    lhv: Some(lhv),
                    support_glue: None,
                    assignment: None,
                });
            }
            let support = model.support_model();
            let glue = universal_relation(&support)?;
            if glue.exists() {
                return Ok(Classification {
                    class: ContextualityClass::ProbabilisticallyContextual,
                    lhv: Some(lhv),
                    support_glue: Some(glue),
                    assignment: None,
                });
            }
            let assignment = strong_contextuality(model)?;
            let class = if assignment.is_witness() {
                ContextualityClass::LogicallyContextual
            } else {
                ContextualityClass::StronglyContextual
            };
            Ok(Classification {
                class,
                lhv: Some(lhv),
                support_glue: Some(glue),
                assignment: Some(assignment),
            })
        }
        SemiringKind::Boolean => {
            let glue = universal_relation(model)?;
            if glue.exists() {
                return Ok(Classification {
                    class: ContextualityClass::NonContextual,
                    lhv: None,
                    support_glue: Some(glue),
                    assignment: None,
                });
            }
            let assignment = strong_contextuality(model)?;
            let class = if assignment.is_witness() {
                ContextualityClass::LogicallyContextual
            } else {
                ContextualityClass::StronglyContextual
            };
            Ok(Classification {
                class,
                lhv: None,
                support_glue: Some(glue),
                assignment: Some(assignment),
            })
        }
        SemiringKind::MinPlus => Err(Error::WrongSemiring {
            expected: "boolean or probability",
            found: "minplus",
        }),
    }
}
