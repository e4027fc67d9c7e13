//! Relational algebra on semiring-valued tables.
//!
//! The operators here are the named-perspective classics, generalized from
//! relations to valuations over any one semiring:
//!
//! * [`project`] is marginalization: summing out the attributes that are
//!   dropped. On boolean tables it is the usual projection; on probability
//!   tables it is the marginal distribution.
//! * [`natural_join`] matches tuples that agree on shared attributes. It is
//!   implemented by hash-partitioning on the shared attributes, never by
//!   enumerating the full tuple space of the union base.
//! * [`tensor`] places two tables side by side over disjoint (tagged)
//!   attribute copies, multiplying weights.
//! * [`union`], [`intersect`], and [`difference`] are the boolean set
//!   operations on same-base relations.
//!
//! `project` and `natural_join` are adjoint in the sense that for any
//! relation `T` over `A ∪ B`: `T ⊆ project(T, A) ⋈ project(T, B)`, and the
//! projections of a join are contained in the join's arguments. Projection
//! is functorial (`project(project(v, B), C) = project(v, C)` for
//! `C ⊆ B ⊆ base`) and mass-conserving on probability tables.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::schema::{Attribute, AttributeSet, DataValue, Tuple, DEFAULT_TUPLE_CAP};
use crate::semiring::SemiringKind;
use crate::valuation::Valuation;

/// Push a valuation forward along a tuple map `f : Tup(base) → Tup(target)`.
///
/// The weight of a target tuple is the semiring sum of the weights of its
/// preimages. `f` must be defined on every support tuple (else
/// [`Error::PartialMap`]) and must land in `Tup(target)` (else
/// [`Error::BaseMismatch`] or [`Error::ValueOutsideDomain`]).
pub fn pushforward<F>(
    v: &Valuation,
    target: &AttributeSet,
    target_domains: &BTreeMap<Attribute, Vec<DataValue>>,
    f: F,
) -> Result<Valuation>
where
    F: Fn(&Tuple) -> Option<Tuple>,
{
    let kind = v.kind();
    let mut acc: BTreeMap<Tuple, crate::semiring::Value> = BTreeMap::new();
    for (t, w) in v.iter() {
        let image = f(t).ok_or_else(|| Error::PartialMap(t.to_string()))?;
        match acc.remove(&image) {
            Some(prev) => {
                acc.insert(image, kind.add(&prev, w));
            }
            None => {
                acc.insert(image, w.clone());
            }
        }
    }
    Valuation::new(kind, target.clone(), target_domains.clone(), acc)
}

/// Marginalize onto `target ⊆ base(v)` by restricting every tuple and
/// summing weights of tuples that collide.
pub fn project(v: &Valuation, target: &AttributeSet) -> Result<Valuation> {
    if !target.is_subset(v.base()) {
        return Err(Error::NotSubset {
            left: target.to_string(),
            right: v.base().to_string(),
        });
    }
    let target_domains: BTreeMap<Attribute, Vec<DataValue>> = v
        .domains()
        .iter()
        .filter(|(a, _)| target.contains(a))
        .map(|(a, d)| (a.clone(), d.clone()))
        .collect();
    pushforward(v, target, &target_domains, |t| t.restrict(target).ok())
}

/// Natural join of two relations: tuples over the union base whose
/// restrictions lie in both arguments.
///
/// Boolean only ([`Error::WrongSemiring`] otherwise); shared attributes must
/// declare identical domains ([`Error::DomainMismatch`]). The join is
/// computed by hash-partitioning both sides on their shared attributes, so
/// its cost is output-sensitive; a result larger than the enumeration cap
/// reports [`Error::EnumerationTooLarge`].
pub fn natural_join(left: &Valuation, right: &Valuation) -> Result<Valuation> {
    for v in [left, right] {
        if v.kind() != SemiringKind::Boolean {
            return Err(Error::WrongSemiring {
                expected: "boolean",
                found: v.kind().name(),
            });
        }
    }
    left.check_domains_agree(right)?;
    let shared = left.base().intersect(right.base());
    let base = left.base().union(right.base());
    let mut domains = left.domains().clone();
    for (a, d) in right.domains() {
        domains.entry(a.clone()).or_insert_with(|| d.clone());
    }

    // Index the smaller side by its restriction to the shared attributes.
    let (small, big) = if left.len() <= right.len() {
        (left, right)
    } else {
        (right, left)
    };
    let mut index: HashMap<Tuple, Vec<&Tuple>> = HashMap::new();
    for t in small.support() {
        // Restriction cannot fail: shared ⊆ base(small).
        index.entry(t.restrict(&shared)?).or_default().push(t);
    }

    let mut tuples: Vec<Tuple> = Vec::new();
    for t in big.support() {
        let key = t.restrict(&shared)?;
        if let Some(partners) = index.get(&key) {
            for s in partners {
                // Merge cannot conflict: both sides agree on `shared`.
                let merged = t
                    .merge(s)
                    .expect("join partners agree on shared attributes");
                tuples.push(merged);
                if tuples.len() as u64 > DEFAULT_TUPLE_CAP {
                    return Err(Error::EnumerationTooLarge {
                        cap: DEFAULT_TUPLE_CAP,
                    });
                }
            }
        }
    }
    Valuation::relation(base, domains, tuples)
}

/// Tag an attribute with a side marker, giving the disjoint copies used by
/// [`tensor`]: left attributes become `0/name`, right ones `1/name`.
fn tag(side: usize, attr: &Attribute) -> Attribute {
    Attribute::new(format!("{side}/{}", attr.name()))
}

/// Tensor (side-by-side) product of two same-semiring valuations.
///
/// The result lives over disjoint tagged copies of the two bases — left
/// attributes renamed `0/name`, right attributes `1/name` — and weighs each
/// combined tuple by the semiring product of the component weights.
pub fn tensor(left: &Valuation, right: &Valuation) -> Result<Valuation> {
    if left.kind() != right.kind() {
        return Err(Error::WrongSemiring {
            expected: left.kind().name(),
            found: right.kind().name(),
        });
    }
    let kind = left.kind();
    let retag = |side: usize, t: &Tuple| -> Tuple {
        Tuple::new(
            t.iter()
                .map(|(a, v)| (tag(side, a), v.clone()))
                .collect::<Vec<_>>(),
        )
        .expect("tagging preserves distinctness")
    };
    let mut domains: BTreeMap<Attribute, Vec<DataValue>> = BTreeMap::new();
    for (a, d) in left.domains() {
        domains.insert(tag(0, a), d.clone());
    }
    for (a, d) in right.domains() {
        domains.insert(tag(1, a), d.clone());
    }
    let base = AttributeSet::new(domains.keys().cloned());

    if (left.len() as u128) * (right.len() as u128) > DEFAULT_TUPLE_CAP as u128 {
        return Err(Error::EnumerationTooLarge {
            cap: DEFAULT_TUPLE_CAP,
        });
    }
    let mut entries = Vec::with_capacity(left.len() * right.len());
    for (s, ws) in left.iter() {
        let s_tagged = retag(0, s);
        for (t, wt) in right.iter() {
            let combined = s_tagged
                .merge(&retag(1, t))
                .expect("tagged bases are disjoint");
            entries.push((combined, kind.mul(ws, wt)));
        }
    }
    Valuation::new(kind, base, domains, entries)
}

fn check_set_op_args(left: &Valuation, right: &Valuation) -> Result<()> {
    for v in [left, right] {
        if v.kind() != SemiringKind::Boolean {
            return Err(Error::WrongSemiring {
                expected: "boolean",
                found: v.kind().name(),
            });
        }
    }
    if left.base() != right.base() {
        return Err(Error::BaseMismatch {
            expected: left.base().to_string(),
            found: right.base().to_string(),
        });
    }
    left.check_domains_agree(right)
}

/// Union of two same-base relations.
pub fn union(left: &Valuation, right: &Valuation) -> Result<Valuation> {
    check_set_op_args(left, right)?;
    let rows: std::collections::BTreeSet<Tuple> =
        left.support().chain(right.support()).cloned().collect();
    Valuation::relation(left.base().clone(), left.domains().clone(), rows)
}

/// Intersection of two same-base relations.
pub fn intersect(left: &Valuation, right: &Valuation) -> Result<Valuation> {
    check_set_op_args(left, right)?;
    Valuation::relation(
        left.base().clone(),
        left.domains().clone(),
        left.support().filter(|t| right.contains(t)).cloned(),
    )
}

/// Difference `left \ right` of two same-base relations.
pub fn difference(left: &Valuation, right: &Valuation) -> Result<Valuation> {
    check_set_op_args(left, right)?;
    Valuation::relation(
        left.base().clone(),
        left.domains().clone(),
        left.support().filter(|t| !right.contains(t)).cloned(),
    )
}
