//! Schema-level structure theory.
//!
//! Everything here depends only on the *shape* of a cover — which attribute
//! sets overlap how — and not on any particular table data:
//!
//! * [`incidence_profile`] counts, for each attribute, the contexts it
//!   belongs to.
//! * [`one_in_k_instance`] equips a binary schema with the ONE-IN-k tables:
//!   each context allows exactly the tuples with a single 1. This is the
//!   relational form of a Kochen–Specker coloring problem.
//! * [`parity_divisor_check`] is the counting shortcut for such instances:
//!   a global ONE-IN-k section picks one attribute per context, and summing
//!   incidence counts over the picked attributes tallies every context
//!   exactly once. Hence every common divisor of the incidence counts — in
//!   particular their gcd — must divide the number of contexts; when it
//!   does not, no section can exist, no search required. The 18-attribute,
//!   9-context schema of [`crate::models::ks18_schema`] fails the test with
//!   divisor 2.
//! * [`ks_global_section`] runs the explicit backtracking search for a
//!   ONE-IN-k section and self-checks any witness against the partition
//!   argument above.
//! * [`gyo_acyclicity`] decides hypergraph (alpha-)acyclicity by GYO
//!   reduction: repeatedly delete attributes that occur in exactly one
//!   context, and contexts contained in another context. The schema is
//!   acyclic exactly when this empties it. The reduction is deterministic
//!   here (first applicable attribute deletion in canonical order, else
//!   first applicable context deletion), every step is recorded, and
//!   [`replay_elimination`] re-validates a recorded order from scratch.
//! * [`vorobev_guarantee`] names the semantic meaning of acyclicity: on an
//!   acyclic schema *every* compatible probabilistic instance extends to a
//!   global distribution, and conversely cyclic schemas admit compatible
//!   instances with no extension. [`generate_compatible_instance`] samples
//!   random compatible instances along a join tree of an acyclic schema —
//!   the Markov-style construction that witnesses the guarantee, and a
//!   test-data generator for everything else in the crate.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::EmpiricalModel;
use crate::relalg::project;
use crate::schema::{Attribute, AttributeSet, DataValue, Schema, Tuple};
use crate::semiring::{SemiringKind, Value};
use crate::solver::{SearchOutcome, SupportConstraintSet};
use crate::valuation::Valuation;

/// Default bound on the denominators drawn by
/// [`generate_compatible_instance`].
pub const DEFAULT_MAX_DENOMINATOR: u64 = 64;

/// Incidence counts of a schema: how many contexts each attribute meets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceProfile {
    /// For each attribute occurring in some context, the number of contexts
    /// containing it (always >= 1).
    pub counts: BTreeMap<Attribute, usize>,
    /// The total number of contexts.
    pub context_count: usize,
}

/// Count context memberships for every attribute of the global set.
pub fn incidence_profile(schema: &Schema) -> IncidenceProfile {
    let mut counts: BTreeMap<Attribute, usize> = BTreeMap::new();
    for context in schema.contexts() {
        for a in context.iter() {
            *counts.entry(a.clone()).or_insert(0) += 1;
        }
    }
    IncidenceProfile {
        counts,
        context_count: schema.contexts().len(),
    }
}

/// Build the ONE-IN-k instance of a binary schema: each context's relation
/// holds exactly the tuples assigning 1 to a single attribute (so a context
/// of size k gets k rows).
///
/// Every attribute domain must be the binary `{0, 1}` (in either order);
/// anything else is [`Error::NonBinaryDomain`].
pub fn one_in_k_instance(schema: &Schema) -> Result<EmpiricalModel> {
    let zero = DataValue::from("0");
    let one = DataValue::from("1");
    for a in schema.global().iter() {
        let mut domain = schema.domain(a)?.to_vec();
        domain.sort();
        if domain != [zero.clone(), one.clone()] {
            return Err(Error::NonBinaryDomain(a.name().to_string()));
        }
    }
    let mut tables = Vec::with_capacity(schema.contexts().len());
    for context in schema.contexts() {
        let rows = context.iter().map(|chosen| {
            Tuple::new(
                context
                    .iter()
                    .map(|a| {
                        let v = if a == chosen { one.clone() } else { zero.clone() };
                        (a.clone(), v)
                    })
                    .collect::<Vec<_>>(),
            )
            .expect("context attributes are distinct")
        });
        tables.push(Valuation::relation(
            context.clone(),
            schema.restricted_domains(context)?,
            rows,
        )?);
    }
    let distributions = tables.iter().all(|t| !t.is_empty());
    EmpiricalModel::new(schema.clone(), tables, distributions)
}

/// The verdict of [`parity_divisor_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityCheck {
    /// The gcd of the incidence counts does not divide the context count,
    /// so no ONE-IN-k global section exists.
    NoGlobalSection { divisor: u64 },
    /// The counting argument does not settle the question.
    Inconclusive,
}

/// Apply the counting criterion: compute `g = gcd { |Σ(a)| }` over all
/// attributes and report [`ParityCheck::NoGlobalSection`] when `g` does not
/// divide the number of contexts.
///
/// A ONE-IN-k section `s` picks one attribute per context; the contexts
/// containing the picked attributes therefore partition the schema, so the
/// context count is a sum of incidence counts — divisible by any common
/// divisor of them. Checking the gcd checks every common divisor at once.
pub fn parity_divisor_check(schema: &Schema) -> ParityCheck {
    let profile = incidence_profile(schema);
    let mut gcd: u64 = 0;
    for &count in profile.counts.values() {
        gcd = gcd.gcd(&(count as u64));
    }
    if gcd == 0 {
        // No attributes at all: only degenerate schemas of empty contexts.
        return ParityCheck::Inconclusive;
    }
    if (profile.context_count as u64) % gcd != 0 {
        ParityCheck::NoGlobalSection { divisor: gcd }
    } else {
        ParityCheck::Inconclusive
    }
}

/// Search for a ONE-IN-k global section of a binary schema: a single global
/// assignment whose restriction to every context has exactly one 1.
///
/// Delegates to the backtracking search over the [`one_in_k_instance`]
/// supports. A found witness is self-checked against the partition
/// argument: the contexts containing the 1-valued attributes must partition
/// the schema.
pub fn ks_global_section(schema: &Schema) -> Result<SearchOutcome> {
    let instance = one_in_k_instance(schema)?;
    let outcome = SupportConstraintSet::from_model(&instance).find_assignment()?;
    if let SearchOutcome::Witness(s) = &outcome {
        // Partition self-check: every context contains exactly one attribute
        // that s maps to 1.
        for context in schema.contexts() {
            let ones = context
                .iter()
                .filter(|a| s.get(a).map(|v| v.token()) == Some("1"))
                .count();
            assert_eq!(
                ones, 1,
                "internal error: section witness fails the partition argument on {context}"
            );
        }
    }
    Ok(outcome)
}

/// One recorded step of a GYO reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GyoStep {
    /// `attribute` occurred in exactly one live context (isolated ear
    /// attribute) and was deleted from it.
    RemoveAttribute { attribute: Attribute, context: usize },
    /// Live context `context` was contained in live context `witness` and
    /// was deleted. Indices refer to the schema's original context order.
    RemoveContext { context: usize, witness: usize },
}

/// The verdict of [`gyo_acyclicity`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AcyclicityResult {
    /// The reduction emptied the schema; `elimination` lists every step in
    /// the order taken.
    Acyclic { elimination: Vec<GyoStep> },
    /// The reduction stalled; `core` holds the residual (already reduced)
    /// hyperedges, which admit no further step.
    Cyclic { core: Vec<AttributeSet> },
}

impl AcyclicityResult {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, AcyclicityResult::Acyclic { .. })
    }
}

/// The live reduction state: one optional attribute set per original
/// context index.
type GyoState = Vec<Option<BTreeSet<Attribute>>>;

fn gyo_initial_state(schema: &Schema) -> GyoState {
    schema
        .contexts()
        .iter()
        .map(|c| Some(c.iter().cloned().collect()))
        .collect()
}

/// Find the next applicable GYO step, preferring attribute removals (in
/// canonical attribute order) over context removals (in context order).
fn gyo_next_step(state: &GyoState) -> Option<GyoStep> {
    // Rule (i): an attribute occurring in exactly one live context.
    let mut occurrence: BTreeMap<&Attribute, Vec<usize>> = BTreeMap::new();
    for (i, ctx) in state.iter().enumerate() {
        if let Some(attrs) = ctx {
            for a in attrs {
                occurrence.entry(a).or_default().push(i);
            }
        }
    }
    for (a, contexts) in &occurrence {
        if contexts.len() == 1 {
            return Some(GyoStep::RemoveAttribute {
                attribute: (*a).clone(),
                context: contexts[0],
            });
        }
    }
    // Rule (ii): a live context contained in another live context.
    let live: Vec<usize> = (0..state.len()).filter(|&i| state[i].is_some()).collect();
    for &i in &live {
        for &j in &live {
            if i == j {
                continue;
            }
            let ci = state[i].as_ref().unwrap();
            let cj = state[j].as_ref().unwrap();
            if ci.is_subset(cj) {
                return Some(GyoStep::RemoveContext {
                    context: i,
                    witness: j,
                });
            }
        }
    }
    None
}

fn gyo_apply(state: &mut GyoState, step: &GyoStep) {
    match step {
        GyoStep::RemoveAttribute { attribute, context } => {
            state[*context]
                .as_mut()
                .expect("attribute removal targets a live context")
                .remove(attribute);
        }
        GyoStep::RemoveContext { context, .. } => {
            state[*context] = None;
        }
    }
}

/// Decide alpha-acyclicity by deterministic GYO reduction.
///
/// Each round deletes the canonically first attribute occurring in exactly
/// one live context if any, else the first live context contained in
/// another (with the first containing context as witness). The schema is
/// acyclic iff the process ends with at most one live, empty context.
pub fn gyo_acyclicity(schema: &Schema) -> AcyclicityResult {
    let mut state = gyo_initial_state(schema);
    let mut elimination = Vec::new();
    while let Some(step) = gyo_next_step(&state) {
        gyo_apply(&mut state, &step);
        elimination.push(step);
    }
    let residual: Vec<(usize, &BTreeSet<Attribute>)> = state
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.as_ref().map(|s| (i, s)))
        .collect();
    let emptied = residual.len() <= 1 && residual.iter().all(|(_, s)| s.is_empty());
    if emptied {
        AcyclicityResult::Acyclic { elimination }
    } else {
        AcyclicityResult::Cyclic {
            core: residual
                .into_iter()
                .map(|(_, s)| AttributeSet::new(s.iter().cloned()))
                .collect(),
        }
    }
}

/// Re-validate a recorded elimination order against a schema from scratch:
/// every step's precondition must hold when it is applied, and the final
/// state must be at most one empty context. Used by tests as the oracle for
/// [`gyo_acyclicity`].
pub fn replay_elimination(schema: &Schema, elimination: &[GyoStep]) -> bool {
    let mut state = gyo_initial_state(schema);
    for step in elimination {
        match step {
            GyoStep::RemoveAttribute { attribute, context } => {
                let occurrences = state
                    .iter()
                    .filter(|c| c.as_ref().is_some_and(|s| s.contains(attribute)))
                    .count();
                let lives_there = state
                    .get(*context)
                    .and_then(|c| c.as_ref())
                    .is_some_and(|s| s.contains(attribute));
                if occurrences != 1 || !lives_there {
                    return false;
                }
            }
            GyoStep::RemoveContext { context, witness } => {
                if context == witness {
                    return false;
                }
                let (Some(Some(ci)), Some(Some(cj))) =
                    (state.get(*context), state.get(*witness))
                else {
                    return false;
                };
                if !ci.is_subset(cj) {
                    return false;
                }
            }
        }
        gyo_apply(&mut state, step);
    }
    let residual: Vec<&BTreeSet<Attribute>> = state.iter().flatten().collect();
    residual.len() <= 1 && residual.iter().all(|s| s.is_empty())
}

/// Does the schema guarantee that every compatible probabilistic instance
/// extends to a global distribution? True exactly on acyclic schemas.
pub fn vorobev_guarantee(schema: &Schema) -> bool {
    gyo_acyclicity(schema).is_acyclic()
}

/// The contexts of an acyclic schema in join-tree order: the GYO survivor
/// (root) first, then removed contexts in reverse removal order. Every
/// context's intersection with the union of earlier contexts is contained
/// in its removal witness, which appears earlier — the running-intersection
/// property that drives [`generate_compatible_instance`].
fn join_tree_order(schema: &Schema, elimination: &[GyoStep]) -> Vec<(usize, Option<usize>)> {
    let mut removed: Vec<(usize, usize)> = Vec::new(); // (context, witness)
    for step in elimination {
        if let GyoStep::RemoveContext { context, witness } = step {
            removed.push((*context, *witness));
        }
    }
    let gone: BTreeSet<usize> = removed.iter().map(|(c, _)| *c).collect();
    let mut order: Vec<(usize, Option<usize>)> = (0..schema.contexts().len())
        .filter(|i| !gone.contains(i))
        .map(|i| (i, None))
        .collect();
    for (context, witness) in removed.into_iter().rev() {
        order.push((context, Some(witness)));
    }
    order
}

/// Sample a random exact-rational distribution over `cells` cells: draw a
/// denominator `D <= max_denominator`, then throw `D` balls into the cells
/// uniformly. Some cells may end up empty (outside the support).
fn random_composition(rng: &mut ChaCha8Rng, cells: usize, max_denominator: u64) -> Vec<BigRational> {
    let denominator = rng.gen_range(1..=max_denominator);
    let mut counts = vec![0u64; cells];
    for _ in 0..denominator {
        counts[rng.gen_range(0..cells)] += 1;
    }
    counts
        .into_iter()
        .map(|c| BigRational::new(BigInt::from(c), BigInt::from(denominator)))
        .collect()
}

/// Sample a compatible probabilistic instance on an acyclic schema with the
/// default denominator bound.
///
/// See [`generate_compatible_instance_with`].
pub fn generate_compatible_instance(schema: &Schema, seed: u64) -> Result<EmpiricalModel> {
    generate_compatible_instance_with(schema, seed, DEFAULT_MAX_DENOMINATOR)
}

/// Sample a compatible probabilistic instance on an acyclic schema,
/// deterministically from `seed`.
///
/// Contexts are visited in join-tree order. The root context gets a random
/// distribution outright; every later context `C` first inherits the
/// already-fixed marginal on its separator `S` (its intersection with the
/// previously covered attributes, which the running-intersection property
/// places inside an earlier context) and then extends each separator tuple
/// by a freshly sampled conditional distribution over `C \ S`. Agreement on
/// every overlap follows, so the output always passes
/// [`crate::gluing::check_compatibility`] — this is exactly the guarantee
/// named by [`vorobev_guarantee`].
///
/// Cyclic schemas are rejected with [`Error::NotAcyclic`].
pub fn generate_compatible_instance_with(
    schema: &Schema,
    seed: u64,
    max_denominator: u64,
) -> Result<EmpiricalModel> {
    let elimination = match gyo_acyclicity(schema) {
        AcyclicityResult::Acyclic { elimination } => elimination,
        AcyclicityResult::Cyclic { core } => {
            let edges: Vec<String> = core.iter().map(|c| c.to_string()).collect();
            return Err(Error::NotAcyclic(format!(
                "GYO reduction stalls on {}",
                edges.join(", ")
            )));
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = join_tree_order(schema, &elimination);

    let mut tables: Vec<Option<Valuation>> = vec![None; schema.contexts().len()];
    let mut covered = AttributeSet::empty();
    for (index, witness) in order {
        let context = &schema.contexts()[index];
        let separator = context.intersect(&covered);
        let extension = context.difference(&separator);
        let extension_tuples = schema.enumerate_tuples(&extension)?;

        // The separator marginal is read off the witness context's table,
        // which the join-tree order guarantees is already built and
        // contains the whole separator.
        let seed_pairs: Vec<(Tuple, BigRational)> = match witness {
            None => vec![(Tuple::empty(), BigRational::from_integer(BigInt::from(1)))],
            Some(w) => {
                let parent = tables[w]
                    .as_ref()
                    .expect("join-tree parent precedes its child");
                let marginal = project(parent, &separator)?;
                marginal
                    .iter()
                    .map(|(t, v)| {
                        let Value::Rational(r) = v else {
                            unreachable!("generator tables are rational")
                        };
                        (t.clone(), r.clone())
                    })
                    .collect()
            }
        };

        let mut entries: Vec<(Tuple, Value)> = Vec::new();
        for (separator_tuple, mass) in seed_pairs {
            let conditional = random_composition(&mut rng, extension_tuples.len(), max_denominator);
            for (ext, weight) in extension_tuples.iter().zip(conditional) {
                let combined = separator_tuple
                    .merge(ext)
                    .expect("separator and extension are disjoint");
                entries.push((combined, Value::Rational(mass.clone() * weight)));
            }
        }
        tables[index] = Some(Valuation::over(
            schema,
            context,
            SemiringKind::Probability,
            entries,
        )?);
        covered = covered.union(context);
    }

    let tables: Vec<Valuation> = tables
        .into_iter()
        .map(|t| t.expect("every context is visited"))
        .collect();
    EmpiricalModel::new(schema.clone(), tables, true)
}
