//! Ground RDF vocabulary: IRIs, literals, variables, triples, graphs and
//! datasets with named graphs.
//!
//! Blank nodes are not representable. Literals are opaque strings without
//! datatype or language tag.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Marker character reserved for variables generated by the rewriter.
/// User-written patterns may not contain it.
pub const FRESH_MARKER: char = '\'';

/// Name of the auxiliary named graph used by the negation-as-failure
/// encoding based on a probe graph.
pub const NAF_GRAPH: &str = ":__naf";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown graph name {0}")]
    UnknownGraph(Iri),
    #[error("duplicate named graph {0}")]
    DuplicateGraph(Iri),
    #[error("graph name {0} is reserved")]
    ReservedGraph(Iri),
}

/// An IRI, stored as written: prefixed names keep their leading `:`,
/// absolute IRIs are stored without angle brackets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(s: impl Into<String>) -> Self {
        Iri(Arc::from(s.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_prefixed(&self) -> bool {
        self.0.starts_with(':')
    }

    pub fn naf_graph() -> Self {
        Iri::new(NAF_GRAPH)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_prefixed() {
            f.write_str(&self.0)
        } else {
            write!(f, "<{}>", self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal(Arc<str>);

impl Literal {
    pub fn new(s: impl Into<String>) -> Self {
        Literal(Arc::from(s.into()))
    }

    pub fn value(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("\"")?;
        for c in self.0.chars() {
            match c {
                '"' => f.write_str("\\\"")?,
                '\\' => f.write_str("\\\\")?,
                '\n' => f.write_str("\\n")?,
                '\t' => f.write_str("\\t")?,
                '\r' => f.write_str("\\r")?,
                c => write!(f, "{c}")?,
            }
        }
        f.write_str("\"")
    }
}

/// A query variable. The name is stored without the leading `?`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        match name.strip_prefix('?') {
            Some(stripped) => Var(Arc::from(stripped)),
            None => Var(Arc::from(name)),
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// True for variables minted by the rewriter.
    pub fn is_fresh(&self) -> bool {
        self.0.contains(FRESH_MARKER)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

/// A ground RDF term (an element of I ∪ L).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
}

impl Term {
    pub fn iri(s: impl Into<String>) -> Self {
        Term::Iri(Iri::new(s))
    }

    pub fn literal(s: impl Into<String>) -> Self {
        Term::Literal(Literal::new(s))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(i) => Some(i),
            Term::Literal(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => i.fmt(f),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

impl From<Iri> for Term {
    fn from(i: Iri) -> Self {
        Term::Iri(i)
    }
}

/// A term position in a triple pattern or filter atom: a ground term or a
/// variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermPattern {
    Term(Term),
    Var(Var),
}

impl TermPattern {
    pub fn var(name: &str) -> Self {
        TermPattern::Var(Var::new(name))
    }

    pub fn iri(s: &str) -> Self {
        TermPattern::Term(Term::iri(s))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            TermPattern::Var(v) => Some(v),
            TermPattern::Term(_) => None,
        }
    }
}

impl fmt::Display for TermPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermPattern::Term(t) => t.fmt(f),
            TermPattern::Var(v) => v.fmt(f),
        }
    }
}

impl From<Term> for TermPattern {
    fn from(t: Term) -> Self {
        TermPattern::Term(t)
    }
}

impl From<Var> for TermPattern {
    fn from(v: Var) -> Self {
        TermPattern::Var(v)
    }
}

/// An RDF triple in I × I × T.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Iri, predicate: Iri, object: Term) -> Self {
        Triple {
            subject,
            predicate,
            object,
        }
    }

    /// Shorthand for a triple of prefixed names, e.g. `Triple::named(":a", ":p", ":b")`.
    pub fn named(s: &str, p: &str, o: &str) -> Self {
        Triple::new(Iri::new(s), Iri::new(p), Term::iri(o))
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// A finite set of triples.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    triples: BTreeSet<Triple>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, t: Triple) -> bool {
        self.triples.insert(t)
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.triples.contains(t)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn union(&self, other: &Graph) -> Graph {
        graph_union(self, other)
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph {
            triples: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.triples {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

pub fn graph_union(g1: &Graph, g2: &Graph) -> Graph {
    g1.triples.union(&g2.triples).cloned().collect()
}

/// An RDF dataset: one default graph and zero or more named graphs with
/// pairwise distinct names.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Dataset {
    default_graph: Graph,
    named: BTreeMap<Iri, Graph>,
}

impl Dataset {
    pub fn new(default_graph: Graph) -> Self {
        Dataset {
            default_graph,
            named: BTreeMap::new(),
        }
    }

    pub fn default_graph(&self) -> &Graph {
        &self.default_graph
    }

    pub fn add_named(&mut self, name: Iri, graph: Graph) -> Result<(), ModelError> {
        if self.named.contains_key(&name) {
            return Err(ModelError::DuplicateGraph(name));
        }
        self.named.insert(name, graph);
        Ok(())
    }

    pub fn with_named(mut self, name: Iri, graph: Graph) -> Result<Self, ModelError> {
        self.add_named(name, graph)?;
        Ok(self)
    }

    pub fn lookup(&self, name: &Iri) -> Result<&Graph, ModelError> {
        dataset_lookup(self, name)
    }

    pub fn names(&self) -> impl Iterator<Item = &Iri> {
        self.named.keys()
    }

    pub fn named_graphs(&self) -> impl Iterator<Item = (&Iri, &Graph)> {
        self.named.iter()
    }

    pub fn has_naf_graph(&self) -> bool {
        self.named.contains_key(&Iri::naf_graph())
    }

    /// Returns a copy carrying the auxiliary probe graph `:__naf` holding the
    /// single triple `(:s :p :o)`.
    pub fn with_naf_graph(&self) -> Dataset {
        let mut d = self.clone();
        d.named
            .insert(Iri::naf_graph(), std::iter::once(naf_probe_triple()).collect());
        d
    }
}

impl From<Graph> for Dataset {
    fn from(g: Graph) -> Self {
        Dataset::new(g)
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DEFAULT {{")?;
        for t in self.default_graph.iter() {
            writeln!(f, "  {t}")?;
        }
        writeln!(f, "}}")?;
        for (name, g) in &self.named {
            writeln!(f, "GRAPH {name} {{")?;
            for t in g.iter() {
                writeln!(f, "  {t}")?;
            }
            writeln!(f, "}}")?;
        }
        Ok(())
    }
}

pub fn dataset_lookup<'a>(d: &'a Dataset, name: &Iri) -> Result<&'a Graph, ModelError> {
    d.named
        .get(name)
        .ok_or_else(|| ModelError::UnknownGraph(name.clone()))
}

/// The single triple stored in the auxiliary `:__naf` graph.
pub fn naf_probe_triple() -> Triple {
    Triple::named(":s", ":p", ":o")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(ts: &[(&str, &str, &str)]) -> Graph {
        ts.iter().map(|(s, p, o)| Triple::named(s, p, o)).collect()
    }

    #[test]
    fn union_examples() {
        let a = g(&[(":a", ":p", ":b")]);
        assert_eq!(graph_union(&a, &a), a);
        let c = g(&[(":c", ":q", ":d")]);
        assert_eq!(graph_union(&Graph::new(), &c), c);
        let f = g(&[(":f", ":p", ":b")]);
        assert_eq!(
            graph_union(&a, &f),
            g(&[(":a", ":p", ":b"), (":f", ":p", ":b")])
        );
    }

    #[test]
    fn union_laws_exhaustive() {
        let universe = [
            Triple::named(":a", ":p", ":a"),
            Triple::named(":a", ":p", ":b"),
            Triple::named(":b", ":q", ":a"),
        ];
        let graphs: Vec<Graph> = (0u8..8)
            .map(|m| {
                universe
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| m & (1 << i) != 0)
                    .map(|(_, t)| t.clone())
                    .collect()
            })
            .collect();
        for x in &graphs {
            assert_eq!(graph_union(x, x), *x);
            for y in &graphs {
                assert_eq!(graph_union(x, y), graph_union(y, x));
                for z in &graphs {
                    assert_eq!(
                        graph_union(&graph_union(x, y), z),
                        graph_union(x, &graph_union(y, z))
                    );
                }
            }
        }
    }

    #[test]
    fn lookup() {
        let d = Dataset::new(Graph::new())
            .with_named(Iri::new(":g"), g(&[(":s", ":p", ":o")]))
            .unwrap();
        assert_eq!(d.lookup(&Iri::new(":g")).unwrap(), &g(&[(":s", ":p", ":o")]));

        let d0 = Dataset::new(Graph::new());
        assert_eq!(
            d0.lookup(&Iri::new(":g")),
            Err(ModelError::UnknownGraph(Iri::new(":g")))
        );

        let de = Dataset::new(Graph::new())
            .with_named(Iri::new(":g"), Graph::new())
            .unwrap();
        assert!(de.lookup(&Iri::new(":g")).unwrap().is_empty());
    }

    #[test]
    fn duplicate_named_graph_rejected() {
        let d = Dataset::new(Graph::new())
            .with_named(Iri::new(":g"), Graph::new())
            .unwrap();
        assert!(matches!(
            d.with_named(Iri::new(":g"), Graph::new()),
            Err(ModelError::DuplicateGraph(_))
        ));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Term::iri(":a").to_string(), ":a");
        assert_eq!(Term::iri("http://x.org/a").to_string(), "<http://x.org/a>");
        assert_eq!(Term::literal("say \"hi\"").to_string(), r#""say \"hi\"""#);
        assert_eq!(Var::new("?X").to_string(), "?X");
        assert!(Var::new("X'").is_fresh());
    }
}
