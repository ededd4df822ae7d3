//! Solution mappings and multisets of mappings.

use std::collections::{btree_map, BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::term::{Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("incompatible mappings: {0} and {1}")]
pub struct IncompatibleMappings(pub Mapping, pub Mapping);

/// A partial function from variables to ground terms.
///
/// Bindings are kept sorted by variable, which makes equality, hashing and
/// ordering structural.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mapping {
    bindings: BTreeMap<Var, Term>,
}

impl Mapping {
    /// The empty mapping μ0.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Mapping with a single binding.
    pub fn single(var: Var, term: Term) -> Self {
        let mut m = Mapping::empty();
        m.bind(var, term);
        m
    }

    /// Builds a mapping from `(variable, prefixed-name)` pairs; handy in tests.
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Self {
        pairs
            .iter()
            .map(|(v, t)| (Var::new(*v), Term::iri(*t)))
            .collect()
    }

    pub fn bind(&mut self, var: Var, term: Term) -> Option<Term> {
        self.bindings.insert(var, term)
    }

    pub fn get(&self, var: &Var) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn is_bound(&self, var: &Var) -> bool {
        self.bindings.contains_key(var)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn domain(&self) -> BTreeSet<Var> {
        self.bindings.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.bindings.iter()
    }

    pub fn compatible(&self, other: &Mapping) -> bool {
        compatible(self, other)
    }

    /// True when the two domains share at least one variable.
    pub fn shares_domain_with(&self, other: &Mapping) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.bindings.keys().any(|v| large.bindings.contains_key(v))
    }

    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Mapping {
        restrict(self, vars)
    }

    /// Applies a variable renaming; variables without an entry keep their name.
    pub fn rename(&self, renaming: &BTreeMap<Var, Var>) -> Mapping {
        self.bindings
            .iter()
            .map(|(v, t)| (renaming.get(v).unwrap_or(v).clone(), t.clone()))
            .collect()
    }

    /// Canonical textual form, `{?X->:a, ?Y->:b}` with variables sorted.
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl FromIterator<(Var, Term)> for Mapping {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        Mapping {
            bindings: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}->{t}")?;
        }
        f.write_str("}")
    }
}

pub fn compatible(m1: &Mapping, m2: &Mapping) -> bool {
    let (small, large) = if m1.len() <= m2.len() { (m1, m2) } else { (m2, m1) };
    small
        .bindings
        .iter()
        .all(|(v, t)| large.bindings.get(v).is_none_or(|u| u == t))
}

pub fn restrict(m: &Mapping, vars: &BTreeSet<Var>) -> Mapping {
    m.bindings
        .iter()
        .filter(|(v, _)| vars.contains(*v))
        .map(|(v, t)| (v.clone(), t.clone()))
        .collect()
}

/// μ1 ∪ μ2 for compatible mappings.
pub fn merge(m1: &Mapping, m2: &Mapping) -> Result<Mapping, IncompatibleMappings> {
    if !compatible(m1, m2) {
        return Err(IncompatibleMappings(m1.clone(), m2.clone()));
    }
    let mut out = m1.clone();
    for (v, t) in &m2.bindings {
        out.bindings.entry(v.clone()).or_insert_with(|| t.clone());
    }
    Ok(out)
}

/// A multiset of solution mappings with explicit positive cardinalities.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MappingMultiset {
    entries: BTreeMap<Mapping, u64>,
}

impl MappingMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    /// Ω0 = {μ0}, the join identity.
    pub fn unit() -> Self {
        let mut o = Self::new();
        o.add(Mapping::empty(), 1);
        o
    }

    pub fn from_entries<I: IntoIterator<Item = (Mapping, u64)>>(entries: I) -> Self {
        let mut o = Self::new();
        for (m, n) in entries {
            o.add(m, n);
        }
        o
    }

    /// Adds `count` copies of `m`. Adding zero copies is a no-op, so stored
    /// cardinalities are always positive.
    pub fn add(&mut self, m: Mapping, count: u64) {
        if count == 0 {
            return;
        }
        *self.entries.entry(m).or_insert(0) += count;
    }

    pub fn card(&self, m: &Mapping) -> u64 {
        self.entries.get(m).copied().unwrap_or(0)
    }

    pub fn contains(&self, m: &Mapping) -> bool {
        self.entries.contains_key(m)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct mappings.
    pub fn distinct_len(&self) -> usize {
        self.entries.len()
    }

    /// Sum of all cardinalities.
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Mapping, u64> {
        self.entries.iter()
    }

    pub fn mappings(&self) -> impl Iterator<Item = &Mapping> {
        self.entries.keys()
    }

    /// dom(Ω): the union of the member domains.
    pub fn domain(&self) -> BTreeSet<Var> {
        self.entries.keys().flat_map(|m| m.bindings.keys().cloned()).collect()
    }

    /// Collapses every cardinality to one.
    pub fn distinct(&self) -> MappingMultiset {
        MappingMultiset {
            entries: self.entries.keys().map(|m| (m.clone(), 1)).collect(),
        }
    }

    /// Sub-multiset check: every cardinality here is at most the one in `other`.
    pub fn is_sub_multiset_of(&self, other: &MappingMultiset) -> bool {
        self.entries.iter().all(|(m, n)| other.card(m) >= *n)
    }

    /// Same support, ignoring cardinalities.
    pub fn set_eq(&self, other: &MappingMultiset) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.keys().all(|m| other.entries.contains_key(m))
    }

    /// Serialized records in canonical order (by the mapping's canonical text).
    pub fn records(&self) -> Vec<SolutionRecord> {
        let mut recs: Vec<(String, SolutionRecord)> = self
            .entries
            .iter()
            .map(|(m, n)| {
                let rec = SolutionRecord {
                    bindings: m
                        .iter()
                        .map(|(v, t)| (v.to_string(), t.to_string()))
                        .collect(),
                    card: *n,
                };
                (m.canonical(), rec)
            })
            .collect();
        recs.sort_by(|a, b| a.0.cmp(&b.0));
        recs.into_iter().map(|(_, r)| r).collect()
    }

    /// The solution document `{"solutions": [...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "solutions": self.records() })
    }
}

impl FromIterator<Mapping> for MappingMultiset {
    fn from_iter<I: IntoIterator<Item = Mapping>>(iter: I) -> Self {
        Self::from_entries(iter.into_iter().map(|m| (m, 1)))
    }
}

impl<'a> IntoIterator for &'a MappingMultiset {
    type Item = (&'a Mapping, &'a u64);
    type IntoIter = btree_map::Iter<'a, Mapping, u64>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

impl fmt::Display for MappingMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (m, n)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}:{n}")?;
        }
        f.write_str("}")
    }
}

/// One record of the serialized solution format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionRecord {
    pub bindings: BTreeMap<String, String>,
    pub card: u64,
}
