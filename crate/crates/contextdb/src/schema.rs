//! Attributes, tuples, and measurement covers.
//!
//! A [`Schema`] is a finite family of overlapping attribute sets — the
//! *contexts* — together with a finite domain of values for every attribute.
//! In database terms the contexts are relation schemas sharing column names;
//! in measurement terms each context is a set of observables that can be
//! jointly observed. The union of all contexts is the *global* attribute
//! set, and the central question of this crate is whether per-context data
//! glues to a single table over the global set.
//!
//! Tuples are total assignments `attribute → value` over some attribute set.
//! They are kept sorted by attribute name, so the derived ordering on
//! [`Tuple`] is the lexicographic order induced by attribute names — the
//! canonical tuple order used by every enumeration and search in the crate.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Default ceiling on the number of tuples any single enumeration (or
/// enumeration-backed operation) may produce: `2^24`.
pub const DEFAULT_TUPLE_CAP: u64 = 1 << 24;

/// An attribute (column / observable) name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attribute(String);

impl Attribute {
    pub fn new(name: impl Into<String>) -> Self {
        Attribute(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Attribute {
    fn from(name: &str) -> Self {
        Attribute::new(name)
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A domain value token. Domains are ordered lists of these; the declared
/// order fixes the canonical enumeration order of tuples.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DataValue(String);

impl DataValue {
    pub fn new(token: impl Into<String>) -> Self {
        DataValue(token.into())
    }

    pub fn token(&self) -> &str {
        &self.0
    }
}

impl From<&str> for DataValue {
    fn from(token: &str) -> Self {
        DataValue::new(token)
    }
}

impl fmt::Display for DataValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite set of attributes, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AttributeSet {
    attrs: Vec<Attribute>,
}

impl AttributeSet {
    /// Build a set from any collection of attributes (duplicates collapse).
    pub fn new(attrs: impl IntoIterator<Item = Attribute>) -> Self {
        let mut attrs: Vec<Attribute> = attrs.into_iter().collect();
        attrs.sort();
        attrs.dedup();
        AttributeSet { attrs }
    }

    /// Convenience constructor from name strings.
    pub fn from_names<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Self {
        AttributeSet::new(names.into_iter().map(|n| Attribute::new(n.as_ref())))
    }

    pub fn empty() -> Self {
        AttributeSet::default()
    }

    pub fn len(&self) -> usize {
        self.attrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attrs.is_empty()
    }

    pub fn contains(&self, attr: &Attribute) -> bool {
        self.attrs.binary_search(attr).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Attribute> {
        self.attrs.iter()
    }

    /// The attributes in canonical (name) order.
    pub fn as_slice(&self) -> &[Attribute] {
        &self.attrs
    }

    pub fn union(&self, other: &AttributeSet) -> AttributeSet {
        AttributeSet::new(self.attrs.iter().chain(other.attrs.iter()).cloned())
    }

    pub fn intersect(&self, other: &AttributeSet) -> AttributeSet {
        AttributeSet::new(
            self.attrs
                .iter()
                .filter(|a| other.contains(a))
                .cloned()
                .collect::<Vec<_>>(),
        )
    }

    pub fn difference(&self, other: &AttributeSet) -> AttributeSet {
        AttributeSet::new(
            self.attrs
                .iter()
                .filter(|a| !other.contains(a))
                .cloned()
                .collect::<Vec<_>>(),
        )
    }

    pub fn is_subset(&self, other: &AttributeSet) -> bool {
        self.attrs.iter().all(|a| other.contains(a))
    }
}

impl FromIterator<Attribute> for AttributeSet {
    fn from_iter<T: IntoIterator<Item = Attribute>>(iter: T) -> Self {
        AttributeSet::new(iter)
    }
}

impl fmt::Display for AttributeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.attrs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// A total assignment of values to a finite attribute set.
///
/// Entries are sorted by attribute, so `Ord` on tuples over a common base is
/// the lexicographic order by attribute name — the canonical order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Tuple {
    entries: Vec<(Attribute, DataValue)>,
}

impl Tuple {
    /// Build a tuple from attribute/value pairs.
    ///
    /// Fails with [`Error::DuplicateAttribute`] if an attribute repeats.
    pub fn new(pairs: impl IntoIterator<Item = (Attribute, DataValue)>) -> Result<Self> {
        let mut entries: Vec<(Attribute, DataValue)> = pairs.into_iter().collect();
        entries.sort();
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateAttribute(w[0].0.name().to_string()));
            }
        }
        Ok(Tuple { entries })
    }

    /// Convenience constructor from name/token string pairs.
    pub fn from_pairs<S: AsRef<str>, T: AsRef<str>>(
        pairs: impl IntoIterator<Item = (S, T)>,
    ) -> Result<Self> {
        Tuple::new(
            pairs
                .into_iter()
                .map(|(a, v)| (Attribute::new(a.as_ref()), DataValue::new(v.as_ref()))),
        )
    }

    /// The empty tuple — the unique tuple over the empty attribute set.
    pub fn empty() -> Self {
        Tuple::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, attr: &Attribute) -> Option<&DataValue> {
        self.entries
            .binary_search_by(|(a, _)| a.cmp(attr))
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Attribute, &DataValue)> {
        self.entries.iter().map(|(a, v)| (a, v))
    }

    /// The attribute set this tuple is defined over.
    pub fn attributes(&self) -> AttributeSet {
        AttributeSet::new(self.entries.iter().map(|(a, _)| a.clone()))
    }

    /// Restriction `t|_A`: drop every attribute outside `target`.
    ///
    /// Fails with [`Error::NotSubset`] unless `target` is contained in this
    /// tuple's attribute set.
    pub fn restrict(&self, target: &AttributeSet) -> Result<Tuple> {
        let base = self.attributes();
        if !target.is_subset(&base) {
            return Err(Error::NotSubset {
                left: target.to_string(),
                right: base.to_string(),
            });
        }
        Ok(Tuple {
            entries: self
                .entries
                .iter()
                .filter(|(a, _)| target.contains(a))
                .cloned()
                .collect(),
        })
    }

    /// Merge two tuples that agree on shared attributes.
    ///
    /// Returns `None` when a shared attribute carries different values —
    /// the two tuples have no common extension.
    pub fn merge(&self, other: &Tuple) -> Option<Tuple> {
        let mut entries = self.entries.clone();
        for (a, v) in &other.entries {
            match self.get(a) {
                Some(existing) if existing != v => return None,
                Some(_) => {}
                None => entries.push((a.clone(), v.clone())),
            }
        }
        entries.sort();
        Some(Tuple { entries })
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}: {v}")?;
        }
        write!(f, "}}")
    }
}

/// A global assignment is simply a tuple over a schema's global attribute
/// set: one value for every attribute anywhere in the cover.
pub type GlobalAssignment = Tuple;

/// A measurement cover: contexts plus a domain for every attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    contexts: Vec<AttributeSet>,
    domains: BTreeMap<Attribute, Vec<DataValue>>,
    global: AttributeSet,
}

impl Schema {
    /// Validate and build a schema.
    ///
    /// Requirements: at least one context; no two contexts equal as sets;
    /// every attribute occurring in a context has a declared, non-empty,
    /// duplicate-free domain. Domains declared for attributes outside every
    /// context are kept (they are simply not part of the global set).
    pub fn new(
        contexts: Vec<AttributeSet>,
        domains: BTreeMap<Attribute, Vec<DataValue>>,
    ) -> Result<Self> {
        if contexts.is_empty() {
            return Err(Error::EmptySchema);
        }
        for (i, c) in contexts.iter().enumerate() {
            if contexts[..i].contains(c) {
                return Err(Error::DuplicateContext(c.to_string()));
            }
        }
        for (attr, dom) in &domains {
            if dom.is_empty() {
                return Err(Error::EmptyDomain(attr.name().to_string()));
            }
            let mut seen = dom.clone();
            seen.sort();
            for w in seen.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::DuplicateDomainValue {
                        attribute: attr.name().to_string(),
                        value: w[0].token().to_string(),
                    });
                }
            }
        }
        let global = contexts
            .iter()
            .fold(AttributeSet::empty(), |acc, c| acc.union(c));
        for attr in global.iter() {
            if !domains.contains_key(attr) {
                return Err(Error::MissingDomain(attr.name().to_string()));
            }
        }
        Ok(Schema {
            contexts,
            domains,
            global,
        })
    }

    /// Convenience constructor: contexts given as name lists, every named
    /// attribute sharing one common domain.
    pub fn uniform<S: AsRef<str>, T: AsRef<str>>(
        contexts: &[&[S]],
        domain: &[T],
    ) -> Result<Self> {
        let contexts: Vec<AttributeSet> = contexts
            .iter()
            .map(|names| AttributeSet::from_names(names.iter()))
            .collect();
        let dom: Vec<DataValue> = domain.iter().map(|v| DataValue::new(v.as_ref())).collect();
        let mut domains = BTreeMap::new();
        for c in &contexts {
            for a in c.iter() {
                domains.entry(a.clone()).or_insert_with(|| dom.clone());
            }
        }
        Schema::new(contexts, domains)
    }

    /// The contexts in declaration order.
    pub fn contexts(&self) -> &[AttributeSet] {
        &self.contexts
    }

    /// The union of all contexts.
    pub fn global(&self) -> &AttributeSet {
        &self.global
    }

    /// All declared domains.
    pub fn domains(&self) -> &BTreeMap<Attribute, Vec<DataValue>> {
        &self.domains
    }

    /// The declared domain of one attribute.
    pub fn domain(&self, attr: &Attribute) -> Result<&[DataValue]> {
        self.domains
            .get(attr)
            .map(|d| d.as_slice())
            .ok_or_else(|| Error::UnknownAttribute(attr.name().to_string()))
    }

    /// The domains restricted to `set`, for building valuations over it.
    pub fn restricted_domains(
        &self,
        set: &AttributeSet,
    ) -> Result<BTreeMap<Attribute, Vec<DataValue>>> {
        let mut out = BTreeMap::new();
        for a in set.iter() {
            out.insert(a.clone(), self.domain(a)?.to_vec());
        }
        Ok(out)
    }

    /// `|Tup(set)|` — the number of tuples over `set`, or `None` on overflow.
    pub fn tuple_space_size(&self, set: &AttributeSet) -> Result<Option<u128>> {
        let mut size: u128 = 1;
        for a in set.iter() {
            let d = self.domain(a)?.len() as u128;
            size = match size.checked_mul(d) {
                Some(s) => s,
                None => return Ok(None),
            };
        }
        Ok(Some(size))
    }

    /// Enumerate every tuple over `set` in canonical order: attributes in
    /// name order, the first attribute varying slowest, each attribute's
    /// values in declared domain order.
    ///
    /// Fails with [`Error::EnumerationTooLarge`] when `|Tup(set)|` exceeds
    /// [`DEFAULT_TUPLE_CAP`].
    pub fn enumerate_tuples(&self, set: &AttributeSet) -> Result<Vec<Tuple>> {
        self.enumerate_tuples_capped(set, DEFAULT_TUPLE_CAP)
    }

    /// [`Schema::enumerate_tuples`] with an explicit cap.
    pub fn enumerate_tuples_capped(&self, set: &AttributeSet, cap: u64) -> Result<Vec<Tuple>> {
        match self.tuple_space_size(set)? {
            Some(size) if size <= cap as u128 => {}
            _ => return Err(Error::EnumerationTooLarge { cap }),
        }
        let attrs = set.as_slice();
        let doms: Vec<&[DataValue]> = attrs
            .iter()
            .map(|a| self.domain(a))
            .collect::<Result<_>>()?;
        let mut out = Vec::new();
        let mut counters = vec![0usize; attrs.len()];
        loop {
            let entries: Vec<(Attribute, DataValue)> = attrs
                .iter()
                .enumerate()
                .map(|(j, a)| (a.clone(), doms[j][counters[j]].clone()))
                .collect();
            out.push(Tuple { entries });
            // Odometer step: last attribute varies fastest.
            let mut pos = attrs.len();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                counters[pos] += 1;
                if counters[pos] < doms[pos].len() {
                    break;
                }
                counters[pos] = 0;
            }
        }
    }

    /// Does `value` belong to `attr`'s declared domain?
    pub fn value_in_domain(&self, attr: &Attribute, value: &DataValue) -> Result<bool> {
        Ok(self.domain(attr)?.contains(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_context_schema() -> Schema {
        Schema::uniform(&[&["a", "b"], &["b", "c"]], &["0", "1"]).unwrap()
    }

    #[test]
    fn schema_validation_catches_malformed_input() {
        assert!(matches!(
            Schema::new(vec![], BTreeMap::new()),
            Err(Error::EmptySchema)
        ));

        // Missing domain for `b`.
        let contexts = vec![AttributeSet::from_names(["a", "b"])];
        let mut domains = BTreeMap::new();
        domains.insert(Attribute::from("a"), vec![DataValue::from("0")]);
        assert!(matches!(
            Schema::new(contexts.clone(), domains.clone()),
            Err(Error::MissingDomain(ref a)) if a == "b"
        ));

        // Empty domain.
        domains.insert(Attribute::from("b"), vec![]);
        assert!(matches!(
            Schema::new(contexts.clone(), domains.clone()),
            Err(Error::EmptyDomain(ref a)) if a == "b"
        ));

        // Duplicate domain value.
        domains.insert(
            Attribute::from("b"),
            vec![DataValue::from("0"), DataValue::from("0")],
        );
        assert!(matches!(
            Schema::new(contexts, domains),
            Err(Error::DuplicateDomainValue { .. })
        ));

        // Duplicate context (as a set, order-insensitive).
        let err = Schema::uniform(&[&["a", "b"], &["b", "a"]], &["0", "1"]);
        assert!(matches!(err, Err(Error::DuplicateContext(_))));
    }

    #[test]
    fn global_set_is_the_union_of_contexts() {
        let s = two_context_schema();
        assert_eq!(*s.global(), AttributeSet::from_names(["a", "b", "c"]));
    }

    #[test]
    fn enumeration_is_canonical_and_complete() {
        let s = two_context_schema();
        let tuples = s
            .enumerate_tuples(&AttributeSet::from_names(["a", "b"]))
            .unwrap();
        let rendered: Vec<String> = tuples.iter().map(|t| t.to_string()).collect();
        assert_eq!(
            rendered,
            vec![
                "{a: 0, b: 0}",
                "{a: 0, b: 1}",
                "{a: 1, b: 0}",
                "{a: 1, b: 1}"
            ]
        );
        // Canonical enumeration order coincides with the derived tuple order.
        let mut sorted = tuples.clone();
        sorted.sort();
        assert_eq!(tuples, sorted);
    }

    #[test]
    fn enumeration_respects_declared_domain_order() {
        // Domain order "1" before "0" must flip the enumeration order.
        let s = Schema::uniform(&[&["x"]], &["1", "0"]).unwrap();
        let tuples = s.enumerate_tuples(&AttributeSet::from_names(["x"])).unwrap();
        let rendered: Vec<String> = tuples.iter().map(|t| t.to_string()).collect();
        assert_eq!(rendered, vec!["{x: 1}", "{x: 0}"]);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        // 25 binary attributes exceed the 2^24 default cap.
        let names: Vec<String> = (0..25).map(|i| format!("x{i:02}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let s = Schema::uniform(&[&refs], &["0", "1"]).unwrap();
        let err = s.enumerate_tuples(s.global());
        assert!(matches!(
            err,
            Err(Error::EnumerationTooLarge { cap: DEFAULT_TUPLE_CAP })
        ));
    }

    #[test]
    fn empty_attribute_set_has_exactly_one_tuple() {
        let s = two_context_schema();
        let tuples = s.enumerate_tuples(&AttributeSet::empty()).unwrap();
        assert_eq!(tuples, vec![Tuple::empty()]);
    }

    #[test]
    fn tuple_restriction_and_merge() {
        let t = Tuple::from_pairs([("a", "0"), ("b", "1"), ("c", "0")]).unwrap();
        let r = t.restrict(&AttributeSet::from_names(["a", "c"])).unwrap();
        assert_eq!(r, Tuple::from_pairs([("a", "0"), ("c", "0")]).unwrap());
        assert!(t.restrict(&AttributeSet::from_names(["z"])).is_err());

        let u = Tuple::from_pairs([("b", "1"), ("d", "1")]).unwrap();
        let merged = t.merge(&u).unwrap();
        assert_eq!(
            merged,
            Tuple::from_pairs([("a", "0"), ("b", "1"), ("c", "0"), ("d", "1")]).unwrap()
        );
        // Conflicting shared attribute: no common extension.
        let v = Tuple::from_pairs([("b", "0")]).unwrap();
        assert!(t.merge(&v).is_none());
    }

    #[test]
    fn duplicate_attribute_in_tuple_is_rejected() {
        let err = Tuple::from_pairs([("a", "0"), ("a", "1")]);
        assert!(matches!(err, Err(Error::DuplicateAttribute(ref a)) if a == "a"));
    }
}
