//! Quantum witnesses: states, equatorial measurements, and the Born rule.
//!
//! The rest of the crate is exact and combinatorial; this module is where
//! the motivating table data actually comes from. An n-qubit [`StateVector`]
//! and a [`MeasurementScenario`] (each party choosing among measurements in
//! the equatorial plane of the Bloch sphere, [`XyMeasurement`]) induce,
//! through the Born rule, one probability table per measurement context —
//! a [`FloatModel`] over the scenario's schema.
//!
//! Floating point is quarantined here. A `FloatModel` offers tolerance-based
//! diagnostics (normalization and compatibility deviations), a thresholded
//! [`FloatModel::supports`] snapshot, and an exact bridge: [`rationalize`]
//! replaces every float by the nearest small-denominator rational, erroring
//! out unless the approximation is within 1e-9 and each table sums to one
//! exactly. The built-in scenarios are chosen so the bridge lands precisely
//! on the exact models of [`crate::models`]:
//!
//! * [`bell_state`] with [`calibrated_bell_scenario`] (angles 0 and π/3 per
//!   party) rationalizes to [`crate::models::bell_model`];
//! * [`ghz_state`] with [`ghz_scenario`] (X at angle 0, Y at π/2)
//!   rationalizes to a model whose support equals
//!   [`crate::models::ghz_model`].
//!
//! Amplitude indexing: basis state k assigns party i the bit `(k >> (i-1)) & 1`
//! — party 1 occupies the least significant bit, matching the context
//! enumeration order of [`MeasurementScenario::induced_schema`].

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::EmpiricalModel;
use crate::schema::{Attribute, AttributeSet, DataValue, Schema, Tuple, DEFAULT_TUPLE_CAP};
use crate::semiring::{SemiringKind, Value};
use crate::valuation::Valuation;

/// Tolerance for state normalization and for [`rationalize`]'s distance
/// between a float and its rational replacement.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// A normalized n-qubit state: 2^n finite complex amplitudes with norm
/// within [`FLOAT_TOLERANCE`] of one.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "a state needs 2^n amplitudes for n >= 1 qubits, got {len}"
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::DimensionMismatch(
                "state amplitudes must be finite".to_string(),
            ));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > FLOAT_TOLERANCE {
            return Err(Error::NotNormalized {
                total: format!("{norm}"),
            });
        }
        Ok(StateVector { amplitudes })
    }

    /// Number of qubits, i.e. log2 of the amplitude count.
    pub fn qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

/// The two-qubit state `(|00> + |11>)/√2`.
pub fn bell_state() -> StateVector {
    ghz_state(2).expect("two qubits are in range")
}

/// The n-qubit state `(|0…0> + |1…1>)/√2`, for `n >= 1`.
pub fn ghz_state(n: usize) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "a state needs at least one qubit".to_string(),
        ));
    }
    let len = 1u64
        .checked_shl(n as u32)
        .filter(|&l| l <= DEFAULT_TUPLE_CAP)
        .ok_or(Error::EnumerationTooLarge {
            cap: DEFAULT_TUPLE_CAP,
        })? as usize;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); len];
    let w = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amplitudes[0] = w;
    amplitudes[len - 1] = w;
    StateVector::new(amplitudes)
}

/// A binary measurement in the equatorial (X-Y) plane of the Bloch sphere,
/// parameterized by its phase angle.
///
/// The two effect vectors are `(|0> + e^{iφ}|1>)/√2` for outcome 0 and
/// `(|0> - e^{iφ}|1>)/√2` for outcome 1: unit vectors, orthogonal, and
/// jointly complete, so the two outcome probabilities always sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XyMeasurement {
    pub angle: f64,
}

impl XyMeasurement {
    pub fn new(angle: f64) -> Self {
        XyMeasurement { angle }
    }

    /// The effect (eigen)vector for `outcome` 0 or 1.
    ///
    /// # Panics
    ///
    /// On outcomes other than 0 and 1.
    pub fn effect(&self, outcome: u8) -> [Complex64; 2] {
        assert!(outcome <= 1, "binary measurements have outcomes 0 and 1");
        let sign = if outcome == 0 { 1.0 } else { -1.0 };
        let w = std::f64::consts::FRAC_1_SQRT_2;
        [
            Complex64::new(w, 0.0),
            Complex64::from_polar(sign * w, self.angle),
        ]
    }
}

/// Per-party named equatorial measurements; contexts are the choices of one
/// setting per party.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementScenario {
    parties: Vec<Vec<(Attribute, XyMeasurement)>>,
}

impl MeasurementScenario {
    /// Build a scenario from per-party setting lists. Every party needs at
    /// least one setting and all setting names must be globally distinct.
    pub fn new(parties: Vec<Vec<(Attribute, XyMeasurement)>>) -> Result<Self> {
        if parties.is_empty() {
            return Err(Error::InvalidArgument(
                "a scenario needs at least one party".to_string(),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for settings in &parties {
            if settings.is_empty() {
                return Err(Error::InvalidArgument(
                    "every party needs at least one setting".to_string(),
                ));
            }
            for (attr, _) in settings {
                if !seen.insert(attr.clone()) {
                    return Err(Error::DuplicateAttribute(attr.name().to_string()));
                }
            }
        }
        Ok(MeasurementScenario { parties })
    }

    pub fn party_count(&self) -> usize {
        self.parties.len()
    }

    pub fn parties(&self) -> &[Vec<(Attribute, XyMeasurement)>] {
        &self.parties
    }

    /// Number of contexts: the product of the parties' setting counts.
    fn context_count(&self) -> Result<u64> {
        let mut count: u64 = 1;
        for settings in &self.parties {
            count = count
                .checked_mul(settings.len() as u64)
                .filter(|&c| c <= DEFAULT_TUPLE_CAP)
                .ok_or(Error::EnumerationTooLarge {
                    cap: DEFAULT_TUPLE_CAP,
                })?;
        }
        Ok(count)
    }

    /// The measurement pairs of context k, one per party, with party 1's
    /// setting index varying fastest as k increases.
    fn context_settings(&self, mut k: u64) -> Vec<&(Attribute, XyMeasurement)> {
        self.parties
            .iter()
            .map(|settings| {
                let pick = (k % settings.len() as u64) as usize;
                k /= settings.len() as u64;
                &settings[pick]
            })
            .collect()
    }

    /// The schema whose contexts are the setting combinations (party 1
    /// fastest) and whose attributes all carry the outcome domain `{0, 1}`.
    pub fn induced_schema(&self) -> Result<Schema> {
        let count = self.context_count()?;
        let domain = vec![DataValue::from("0"), DataValue::from("1")];
        let mut domains = BTreeMap::new();
        for settings in &self.parties {
            for (attr, _) in settings {
                domains.insert(attr.clone(), domain.clone());
            }
        }
        let contexts = (0..count)
            .map(|k| {
                AttributeSet::new(
                    self.context_settings(k)
                        .into_iter()
                        .map(|(attr, _)| attr.clone()),
                )
            })
            .collect();
        Schema::new(contexts, domains)
    }
}

/// The two-party scenario whose Born tables are exactly the rational Bell
/// tables: party one measures `a` at angle 0 or `a'` at π/3, party two
/// measures `b` at 0 or `b'` at π/3.
///
/// (Outcome probabilities depend on the *sum* of the two chosen angles, so
/// this calibration puts one context at combined angle 0, two at π/3, and
/// one at 2π/3 — giving the 1/2, 3/8, 3/8, 1/8 pattern of agreement
/// weights.)
pub fn calibrated_bell_scenario() -> MeasurementScenario {
    MeasurementScenario::new(vec![
        vec![
            (Attribute::from("a"), XyMeasurement::new(0.0)),
            (Attribute::from("a'"), XyMeasurement::new(FRAC_PI_3)),
        ],
        vec![
            (Attribute::from("b"), XyMeasurement::new(0.0)),
            (Attribute::from("b'"), XyMeasurement::new(FRAC_PI_3)),
        ],
    ])
    .expect("the built-in scenario is well-formed")
}

/// The n-party scenario with `X(i)` at angle 0 and `Y(i)` at π/2 for every
/// party — the standard witness for the parity model
/// [`crate::models::ghz_model`].
pub fn ghz_scenario(n: usize) -> Result<MeasurementScenario> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "a scenario needs at least one party".to_string(),
        ));
    }
    MeasurementScenario::new(
        (1..=n)
            .map(|party| {
                vec![
                    (Attribute::new(format!("X({party})")), XyMeasurement::new(0.0)),
                    (
                        Attribute::new(format!("Y({party})")),
                        XyMeasurement::new(FRAC_PI_2),
                    ),
                ]
            })
            .collect(),
    )
}

/// A float-valued empirical model: one probability table per context of its
/// schema, kept in declaration order. The exact pipeline never consumes
/// these directly — see [`rationalize`] and [`FloatModel::supports`].
#[derive(Debug, Clone, PartialEq)]
pub struct FloatModel {
    schema: Schema,
    tables: Vec<BTreeMap<Tuple, f64>>,
}

impl FloatModel {
    /// Wrap per-context tables over a schema. Each table must list only
    /// complete, in-domain tuples of its context, with finite nonnegative
    /// values (an allowance of -[`FLOAT_TOLERANCE`] absorbs rounding).
    pub fn new(schema: Schema, tables: Vec<BTreeMap<Tuple, f64>>) -> Result<Self> {
        if tables.len() != schema.contexts().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} contexts but {} tables",
                schema.contexts().len(),
                tables.len()
            )));
        }
        for (context, table) in schema.contexts().iter().zip(&tables) {
            for (tuple, &p) in table {
                if tuple.attributes() != *context {
                    return Err(Error::DomainMismatch(format!(
                        "tuple {tuple} does not cover context {context}"
                    )));
                }
                for (attr, value) in tuple.iter() {
                    if !schema.value_in_domain(attr, value)? {
                        return Err(Error::ValueOutsideDomain {
                            attribute: attr.name().to_string(),
                            value: value.token().to_string(),
                        });
                    }
                }
                if !p.is_finite() || p < -FLOAT_TOLERANCE {
                    return Err(Error::NegativeValue(format!("{tuple} -> {p}")));
                }
            }
        }
        Ok(FloatModel { schema, tables })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn tables(&self) -> &[BTreeMap<Tuple, f64>] {
        &self.tables
    }

    pub fn table(&self, index: usize) -> &BTreeMap<Tuple, f64> {
        &self.tables[index]
    }

    /// Largest `|Σ row - 1|` over the tables.
    pub fn max_normalization_deviation(&self) -> f64 {
        self.tables
            .iter()
            .map(|t| (t.values().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    fn marginal(&self, index: usize, onto: &AttributeSet) -> BTreeMap<Tuple, f64> {
        let mut out: BTreeMap<Tuple, f64> = BTreeMap::new();
        for (tuple, &p) in &self.tables[index] {
            let restricted = tuple
                .restrict(onto)
                .expect("the overlap is contained in the context");
            *out.entry(restricted).or_insert(0.0) += p;
        }
        out
    }

    /// Largest disagreement between the two marginals on any overlap of any
    /// pair of contexts — the float analogue of
    /// [`crate::gluing::check_compatibility`].
    pub fn max_compatibility_deviation(&self) -> f64 {
        let contexts = self.schema.contexts();
        let mut worst: f64 = 0.0;
        for i in 0..contexts.len() {
            for j in (i + 1)..contexts.len() {
                let overlap = contexts[i].intersect(&contexts[j]);
                let left = self.marginal(i, &overlap);
                let right = self.marginal(j, &overlap);
                let keys: std::collections::BTreeSet<&Tuple> =
                    left.keys().chain(right.keys()).collect();
                for k in keys {
                    let l = left.get(k).copied().unwrap_or(0.0);
                    let r = right.get(k).copied().unwrap_or(0.0);
                    worst = worst.max((l - r).abs());
                }
            }
        }
        worst
    }

    /// The Boolean model keeping exactly the rows with value strictly above
    /// `threshold`.
    pub fn supports(&self, threshold: f64) -> Result<EmpiricalModel> {
        let tables: Result<Vec<Valuation>> = self
            .schema
            .contexts()
            .iter()
            .zip(&self.tables)
            .map(|(context, table)| {
                Valuation::relation(
                    context.clone(),
                    self.schema.restricted_domains(context)?,
                    table
                        .iter()
                        .filter(|(_, &p)| p > threshold)
                        .map(|(t, _)| t.clone()),
                )
            })
            .collect();
        let tables = tables?;
        let distributions = tables.iter().all(|t| !t.is_empty());
        EmpiricalModel::new(self.schema.clone(), tables, distributions)
    }
}

/// Apply the Born rule: one table per context of the scenario, each row the
/// squared magnitude of the state contracted with the parties' effect
/// vectors.
///
/// The state's qubit count must equal the scenario's party count
/// ([`Error::PartyMismatch`]).
pub fn born_model(state: &StateVector, scenario: &MeasurementScenario) -> Result<FloatModel> {
    let n = scenario.party_count();
    if state.qubits() != n {
        return Err(Error::PartyMismatch {
            state: state.qubits(),
            scenario: n,
        });
    }
    let schema = scenario.induced_schema()?;
    let outcome_count = 1u64
        .checked_shl(n as u32)
        .filter(|&c| c <= DEFAULT_TUPLE_CAP)
        .ok_or(Error::EnumerationTooLarge {
            cap: DEFAULT_TUPLE_CAP,
        })?;
    let mut tables = Vec::with_capacity(schema.contexts().len());
    for k in 0..scenario.context_count()? {
        let settings = scenario.context_settings(k);
        let mut table = BTreeMap::new();
        for m in 0..outcome_count {
            // Per-party effect vectors for this outcome combination.
            let effects: Vec<[Complex64; 2]> = settings
                .iter()
                .enumerate()
                .map(|(i, (_, meas))| meas.effect(((m >> i) & 1) as u8))
                .collect();
            // <effect_1 ⊗ … ⊗ effect_n, ψ>
            let mut amplitude = Complex64::new(0.0, 0.0);
            for (basis, coefficient) in state.amplitudes().iter().enumerate() {
                let mut weight = Complex64::new(1.0, 0.0);
                for (i, effect) in effects.iter().enumerate() {
                    weight *= effect[(basis >> i) & 1].conj();
                }
                amplitude += weight * coefficient;
            }
            let tuple = Tuple::new(settings.iter().enumerate().map(|(i, (attr, _))| {
                let bit = if (m >> i) & 1 == 0 { "0" } else { "1" };
                (attr.clone(), DataValue::from(bit))
            }))
            .expect("setting names are distinct");
            table.insert(tuple, amplitude.norm_sqr());
        }
        tables.push(table);
    }
    FloatModel::new(schema, tables)
}

/// Best rational approximation to `x` with denominator at most
/// `max_denominator`, by walking the continued fraction of the float's
/// exact binary value and taking the final (semi)convergent that fits.
pub fn best_rational(x: f64, max_denominator: u64) -> BigRational {
    let exact = BigRational::from_float(x).expect("finite by validation");
    let bound = BigInt::from(max_denominator);

    // Convergents p/q of the continued fraction of `exact`.
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (exact.floor().to_integer(), BigInt::one());
    let mut rest = exact.clone() - BigRational::from_integer(p.clone());
    while !rest.is_zero() {
        let flipped = rest.recip();
        let a = flipped.floor().to_integer();
        rest = flipped - BigRational::from_integer(a.clone());
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        if q_next > bound {
            // The last convergent within bound, or the best semiconvergent
            // between it and the out-of-bound one.
            let t = (&bound - &q_prev) / &q;
            let semi_p = &t * &p + &p_prev;
            let semi_q = &t * &q + &q_prev;
            let convergent = BigRational::new(p.clone(), q.clone());
            if semi_q.is_zero() {
                return convergent;
            }
            let semi = BigRational::new(semi_p, semi_q);
            return if (&semi - &exact).abs() < (&convergent - &exact).abs() {
                semi
            } else {
                convergent
            };
        }
        (p_prev, q_prev) = (p, q);
        (p, q) = (p_next, q_next);
    }
    BigRational::new(p, q)
}

/// Replace every float by its best rational with denominator at most
/// `max_denominator`, requiring each replacement to sit within
/// [`FLOAT_TOLERANCE`] of the float ([`Error::NoNearbyRational`] otherwise)
/// and each resulting table to sum to exactly one
/// ([`Error::NotNormalized`]). Rows that rationalize to zero are dropped.
pub fn rationalize(model: &FloatModel, max_denominator: u64) -> Result<EmpiricalModel> {
    if max_denominator == 0 {
        return Err(Error::InvalidArgument(
            "the denominator bound must be positive".to_string(),
        ));
    }
    let tolerance = BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64));
    let schema = model.schema().clone();
    let mut tables = Vec::with_capacity(model.tables().len());
    for (context, table) in schema.contexts().iter().zip(model.tables()) {
        let mut entries = Vec::new();
        for (tuple, &p) in table {
            let approx = best_rational(p, max_denominator);
            let exact = BigRational::from_float(p).expect("finite by validation");
            if (&approx - &exact).abs() > tolerance {
                return Err(Error::NoNearbyRational {
                    value: p,
                    max_denominator,
                });
            }
            if !approx.is_zero() {
                entries.push((tuple.clone(), Value::Rational(approx)));
            }
        }
        let table = Valuation::over(&schema, context, SemiringKind::Probability, entries)?;
        if !table.is_normalized() {
            return Err(Error::NotNormalized {
                total: table.total().render(),
            });
        }
        tables.push(table);
    }
    EmpiricalModel::new(schema, tables, true)
}
