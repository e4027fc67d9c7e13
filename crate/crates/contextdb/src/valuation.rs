//! Semiring-valued tables.
//!
//! A [`Valuation`] is a finitely supported map from tuples over a fixed
//! *base* attribute set into one semiring. It is the common generalization
//! of a relation (boolean values), a probability table (rational values),
//! and a cost table (tropical values). Tuples mapped to the semiring zero
//! are never stored: absence *is* zero, so two valuations are equal exactly
//! when they have the same base, domains, semiring, and support values.
//!
//! A valuation carries the domains of its base attributes so that joins and
//! set operations can check domain compatibility without threading a schema
//! through every call.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::schema::{Attribute, AttributeSet, DataValue, Schema, Tuple};
use crate::semiring::{SemiringKind, Value};

/// A finitely supported map `Tup(base) → R` for one semiring `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    kind: SemiringKind,
    base: AttributeSet,
    domains: BTreeMap<Attribute, Vec<DataValue>>,
    entries: BTreeMap<Tuple, Value>,
}

impl Valuation {
    /// Build a valuation, validating every entry.
    ///
    /// Each tuple must be a total assignment over `base` with every value in
    /// the declared domain; each entry's value must belong to `kind`; no
    /// tuple may appear twice. Zero-valued entries are dropped.
    pub fn new(
        kind: SemiringKind,
        base: AttributeSet,
        domains: BTreeMap<Attribute, Vec<DataValue>>,
        entries: impl IntoIterator<Item = (Tuple, Value)>,
    ) -> Result<Self> {
        for a in base.iter() {
            match domains.get(a) {
                None => return Err(Error::MissingDomain(a.name().to_string())),
                Some(d) if d.is_empty() => {
                    return Err(Error::EmptyDomain(a.name().to_string()))
                }
                Some(_) => {}
            }
        }
        for a in domains.keys() {
            if !base.contains(a) {
                return Err(Error::UnknownAttribute(a.name().to_string()));
            }
        }
        let mut map = BTreeMap::new();
        for (tuple, value) in entries {
            if value.kind() != kind {
                return Err(Error::WrongSemiring {
                    expected: kind.name(),
                    found: value.kind().name(),
                });
            }
            if tuple.attributes() != base {
                return Err(Error::BaseMismatch {
                    expected: base.to_string(),
                    found: tuple.attributes().to_string(),
                });
            }
            for (a, v) in tuple.iter() {
                if !domains[a].contains(v) {
                    return Err(Error::ValueOutsideDomain {
                        attribute: a.name().to_string(),
                        value: v.token().to_string(),
                    });
                }
            }
            if value.is_zero() {
                continue;
            }
            if map.insert(tuple.clone(), value).is_some() {
                return Err(Error::DuplicateTuple(tuple.to_string()));
            }
        }
        Ok(Valuation {
            kind,
            base,
            domains,
            entries: map,
        })
    }

    /// An everywhere-zero valuation (the empty relation / zero table).
    pub fn zero(
        kind: SemiringKind,
        base: AttributeSet,
        domains: BTreeMap<Attribute, Vec<DataValue>>,
    ) -> Result<Self> {
        Valuation::new(kind, base, domains, [])
    }

    /// Boolean sugar: the relation containing exactly `tuples`.
    pub fn relation(
        base: AttributeSet,
        domains: BTreeMap<Attribute, Vec<DataValue>>,
        tuples: impl IntoIterator<Item = Tuple>,
    ) -> Result<Self> {
        Valuation::new(
            SemiringKind::Boolean,
            base,
            domains,
            tuples.into_iter().map(|t| (t, Value::Bool(true))),
        )
    }

    /// Build a valuation over one of `schema`'s attribute sets, taking the
    /// domains from the schema.
    pub fn over(
        schema: &Schema,
        base: &AttributeSet,
        kind: SemiringKind,
        entries: impl IntoIterator<Item = (Tuple, Value)>,
    ) -> Result<Self> {
        Valuation::new(
            kind,
            base.clone(),
            schema.restricted_domains(base)?,
            entries,
        )
    }

    pub fn kind(&self) -> SemiringKind {
        self.kind
    }

    pub fn base(&self) -> &AttributeSet {
        &self.base
    }

    pub fn domains(&self) -> &BTreeMap<Attribute, Vec<DataValue>> {
        &self.domains
    }

    /// Support size (number of stored, necessarily nonzero, entries).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The stored entries in canonical tuple order.
    pub fn iter(&self) -> impl Iterator<Item = (&Tuple, &Value)> {
        self.entries.iter()
    }

    /// The support in canonical tuple order.
    pub fn support(&self) -> impl Iterator<Item = &Tuple> {
        self.entries.keys()
    }

    pub fn contains(&self, tuple: &Tuple) -> bool {
        self.entries.contains_key(tuple)
    }

    /// The value at `tuple` (the semiring zero when unsupported).
    pub fn get(&self, tuple: &Tuple) -> Value {
        self.entries
            .get(tuple)
            .cloned()
            .unwrap_or_else(|| self.kind.zero())
    }

    /// Total mass: the semiring sum over the whole table.
    pub fn total(&self) -> Value {
        self.entries
            .values()
            .fold(self.kind.zero(), |acc, v| self.kind.add(&acc, v))
    }

    /// Is the total mass the semiring one? (For probability tables: does the
    /// table sum to 1? For boolean tables: is the relation non-empty?)
    pub fn is_normalized(&self) -> bool {
        self.total().is_one()
    }

    /// The support homomorphism: replace every nonzero value by boolean
    /// `true`, yielding the possibility table underlying this valuation.
    pub fn support_relation(&self) -> Valuation {
        Valuation {
            kind: SemiringKind::Boolean,
            base: self.base.clone(),
            domains: self.domains.clone(),
            entries: self
                .entries
                .keys()
                .map(|t| (t.clone(), Value::Bool(true)))
                .collect(),
        }
    }

    /// Do the two valuations declare the same domain for every shared
    /// attribute? Reports the first offending attribute otherwise.
    pub fn check_domains_agree(&self, other: &Valuation) -> Result<()> {
        for (a, d) in &self.domains {
            if let Some(d2) = other.domains.get(a) {
                if d != d2 {
                    return Err(Error::DomainMismatch(a.name().to_string()));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} valuation over {}:", self.kind.name(), self.base)?;
        for (t, v) in &self.entries {
            writeln!(f, "  {t} -> {v}")?;
        }
        Ok(())
    }
}

/// A probability valuation whose total mass is exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution(Valuation);

impl Distribution {
    /// Validate normalization: the total must be the semiring one.
    ///
    /// For probability valuations this is the usual `Σ = 1`; for boolean
    /// valuations it demands a non-empty relation; min-plus tables are
    /// normalized when their minimum entry is zero.
    pub fn new(valuation: Valuation) -> Result<Self> {
        if !valuation.is_normalized() {
            return Err(Error::NotNormalized {
                total: valuation.total().render(),
            });
        }
        Ok(Distribution(valuation))
    }

    pub fn as_valuation(&self) -> &Valuation {
        &self.0
    }

    pub fn into_valuation(self) -> Valuation {
        self.0
    }
}
