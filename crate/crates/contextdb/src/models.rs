//! The standard example models and schemas.
//!
//! Three empirical models anchor the contextuality hierarchy, one per
//! strictly stronger level:
//!
//! * [`bell_model`] — the two-party probability model whose tables all glue
//!   pairwise yet admit no global distribution. Its support *does* glue, so
//!   the obstruction is genuinely probabilistic: classification says
//!   probabilistically contextual, and the infeasibility certificate from
//!   the hidden-variable linear program is the Bell argument in exact
//!   arithmetic.
//! * [`hardy_model`] — a relational (Boolean) model. One supported row —
//!   `(a: 0, b: 0)` in the `{a, b}` table — extends to no global row
//!   consistent with all four tables, even though other global rows exist.
//!   Classification: logically contextual.
//! * [`ghz_model`] — the n-party parity model (n >= 3 for the interesting
//!   cases). *No* global row is consistent with all tables: strongly
//!   contextual, witnessed by an exhausted search rather than a linear
//!   program.
//!
//! Two schemas exhibit obstructions that already live at the schema level
//! when paired with ONE-IN-k tables ([`crate::structure::one_in_k_instance`]):
//! [`ks18_schema`], 18 attributes in 9 four-element contexts with every
//! attribute shared by exactly two, and the minimal [`triangle_schema`].
//! Both fail the parity divisor test with divisor 2.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::EmpiricalModel;
use crate::schema::{Attribute, AttributeSet, DataValue, Schema, Tuple, DEFAULT_TUPLE_CAP};
use crate::semiring::{rat, SemiringKind, Value};
use crate::valuation::Valuation;

/// The four outcome pairs of a two-party binary context, in table order.
const PAIRS: [(&str, &str); 4] = [("0", "0"), ("1", "0"), ("0", "1"), ("1", "1")];

/// The four overlapping two-party contexts `{a,b}, {a',b}, {a,b'}, {a',b'}`
/// over binary domains — the cover shared by [`bell_model`] and
/// [`hardy_model`], and the smallest standard cyclic cover after the
/// triangle.
pub fn two_party_schema() -> Schema {
    Schema::uniform(
        &[&["a", "b"], &["a'", "b"], &["a", "b'"], &["a'", "b'"]],
        &["0", "1"],
    )
    .expect("the two-party schema is well-formed")
}

fn pair_tuple(first: &str, second: &str, values: (&str, &str)) -> Tuple {
    Tuple::from_pairs([(first, values.0), (second, values.1)])
        .expect("distinct attributes")
}

/// The two-party probability model with perfectly correlated `(a, b)` and
/// the three `3/8 | 1/8` tables on the remaining contexts.
///
/// Pairwise compatible, no global distribution. The weights arise from a
/// maximally entangled two-party state measured at calibrated angles — see
/// [`crate::quantum`] for that derivation; here they are fixed rationals.
pub fn bell_model() -> EmpiricalModel {
    let schema = two_party_schema();
    let rows: [((&str, &str), [(i64, i64); 4]); 4] = [
        (("a", "b"), [(1, 2), (0, 1), (0, 1), (1, 2)]),
        (("a'", "b"), [(3, 8), (1, 8), (1, 8), (3, 8)]),
        (("a", "b'"), [(3, 8), (1, 8), (1, 8), (3, 8)]),
        (("a'", "b'"), [(1, 8), (3, 8), (3, 8), (1, 8)]),
    ];
    let tables = rows
        .iter()
        .zip(schema.contexts())
        .map(|(((first, second), weights), context)| {
            let entries = PAIRS.iter().zip(weights).map(|(outcomes, &(n, d))| {
                (
                    pair_tuple(first, second, *outcomes),
                    Value::Rational(rat(n, d)),
                )
            });
            Valuation::over(&schema, context, SemiringKind::Probability, entries)
                .expect("built-in table is well-formed")
        })
        .collect();
    EmpiricalModel::new(schema, tables, true).expect("the built-in model is coherent")
}

/// The two-party relational model with one impossible extension: the
/// supported row `(a: 0, b: 0)` is consistent with no global row.
///
/// Tables (1 = allowed): `(a, b)` full; `(a', b)` and `(a, b')` exclude
/// `(0, 0)`; `(a', b')` excludes `(1, 1)`.
pub fn hardy_model() -> EmpiricalModel {
    let schema = two_party_schema();
    let rows: [((&str, &str), [bool; 4]); 4] = [
        (("a", "b"), [true, true, true, true]),
        (("a'", "b"), [false, true, true, true]),
        (("a", "b'"), [false, true, true, true]),
        (("a'", "b'"), [true, true, true, false]),
    ];
    let tables = rows
        .iter()
        .zip(schema.contexts())
        .map(|(((first, second), allowed), context)| {
            let tuples = PAIRS
                .iter()
                .zip(allowed)
                .filter(|(_, &keep)| keep)
                .map(|(outcomes, _)| pair_tuple(first, second, *outcomes));
            Valuation::relation(
                context.clone(),
                schema
                    .restricted_domains(context)
                    .expect("context attributes have domains"),
                tuples,
            )
            .expect("built-in table is well-formed")
        })
        .collect();
    EmpiricalModel::new(schema, tables, true).expect("the built-in model is coherent")
}

/// A measurement setting of one party in the n-party parity model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GhzSetting {
    X,
    Y,
}

impl fmt::Display for GhzSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GhzSetting::X => write!(f, "X"),
            GhzSetting::Y => write!(f, "Y"),
        }
    }
}

/// One party's labelled setting, rendered `X(i)` / `Y(i)` with parties
/// numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct GhzLabel {
    pub party: usize,
    pub setting: GhzSetting,
}

impl GhzLabel {
    pub fn attribute(&self) -> Attribute {
        Attribute::new(self.to_string())
    }
}

impl fmt::Display for GhzLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.setting, self.party)
    }
}

/// The n-party parity model (`n >= 2`; strongly contextual from `n = 3`).
///
/// Each party i chooses setting `X(i)` or `Y(i)`; a context fixes one
/// setting per party, and the 2^n contexts are enumerated with party 1
/// varying fastest (context k gives party i its `Y` setting exactly when
/// bit i-1 of k is set). With y parties measuring `Y`, the table's support
/// is:
///
/// * y ≡ 0 (mod 4): the even-weight outcome rows,
/// * y ≡ 2 (mod 4): the odd-weight outcome rows,
/// * y odd: all rows.
///
/// These are the supports the Born rule assigns to the n-party state
/// `(|0…0> + |1…1>)/√2` under X/Y measurements; the full-support rule for
/// odd y reflects the uniform outcome distribution there.
pub fn ghz_model(n: usize) -> Result<EmpiricalModel> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "the parity model needs at least 2 parties, got {n}"
        )));
    }
    let context_count: u64 = 1u64
        .checked_shl(n as u32)
        .filter(|&c| c <= DEFAULT_TUPLE_CAP)
        .ok_or(Error::EnumerationTooLarge {
            cap: DEFAULT_TUPLE_CAP,
        })?;

    let domain = vec![DataValue::from("0"), DataValue::from("1")];
    let mut domains: BTreeMap<Attribute, Vec<DataValue>> = BTreeMap::new();
    for party in 1..=n {
        for setting in [GhzSetting::X, GhzSetting::Y] {
            domains.insert(GhzLabel { party, setting }.attribute(), domain.clone());
        }
    }

    let contexts: Vec<Vec<Attribute>> = (0..context_count)
        .map(|k| {
            (1..=n)
                .map(|party| {
                    let setting = if (k >> (party - 1)) & 1 == 0 {
                        GhzSetting::X
                    } else {
                        GhzSetting::Y
                    };
                    GhzLabel { party, setting }.attribute()
                })
                .collect()
        })
        .collect();
    let schema = Schema::new(
        contexts
            .iter()
            .map(|attrs| AttributeSet::new(attrs.iter().cloned()))
            .collect(),
        domains,
    )?;

    let mut tables = Vec::with_capacity(context_count as usize);
    for (k, attrs) in contexts.iter().enumerate() {
        let y_count = (k as u64).count_ones();
        let tuples = (0..context_count).filter_map(|m| {
            let weight = m.count_ones();
            let allowed = match y_count % 4 {
                0 => weight % 2 == 0,
                2 => weight % 2 == 1,
                _ => true, // odd number of Y settings: no parity constraint
            };
            if !allowed {
                return None;
            }
            let pairs = attrs.iter().enumerate().map(|(i, attr)| {
                let bit = if (m >> i) & 1 == 0 { "0" } else { "1" };
                (attr.clone(), DataValue::from(bit))
            });
            Some(Tuple::new(pairs).expect("party attributes are distinct"))
        });
        tables.push(Valuation::relation(
            schema.contexts()[k].clone(),
            schema.restricted_domains(&schema.contexts()[k])?,
            tuples,
        )?);
    }
    EmpiricalModel::new(schema, tables, true)
}

/// The 18-attribute, 9-context schema in which every attribute lies in
/// exactly two contexts. With ONE-IN-4 tables it has no global section —
/// already visible to [`crate::structure::parity_divisor_check`], since the
/// common incidence 2 cannot divide the 9 contexts.
pub fn ks18_schema() -> Schema {
    Schema::uniform(
        &[
            &["A", "B", "C", "D"],
            &["A", "E", "F", "G"],
            &["C", "H", "I", "J"],
            &["G", "H", "K", "L"],
            &["B", "E", "M", "N"],
            &["I", "K", "N", "O"],
            &["D", "J", "P", "Q"],
            &["F", "L", "P", "R"],
            &["M", "O", "Q", "R"],
        ],
        &["0", "1"],
    )
    .expect("the built-in schema is well-formed")
}

/// The minimal schema with the same flavour of obstruction: three
/// attributes, three two-element contexts, every attribute shared twice.
/// ONE-IN-2 tables on it admit no global section.
pub fn triangle_schema() -> Schema {
    Schema::uniform(&[&["a", "b"], &["b", "c"], &["a", "c"]], &["0", "1"])
        .expect("the built-in schema is well-formed")
}
