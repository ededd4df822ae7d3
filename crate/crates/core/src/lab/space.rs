//! Finite spaces of datasets and the brute-force equivalence oracle.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{LabError, Semantics};
use crate::algebra::ErrorMode;
use crate::pattern::{eval_pattern, EvalContext, GraphName, Pattern};
use crate::solution::MappingMultiset;
use crate::term::{Dataset, Graph, Iri, Term, Triple};

/// Environment variable overriding [`DEFAULT_SPACE_BUDGET`].
pub const SPACE_BUDGET_ENV: &str = "SPARQLNEG_SPACE_BUDGET";

/// Largest number of datasets an exhaustive space may hold by default.
pub const DEFAULT_SPACE_BUDGET: u64 = 2_000_000;

/// Named graph used when patterns only select graphs through a variable.
pub const DEFAULT_NAMED_GRAPH: &str = ":g1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Enumeration {
    /// Every subset of the triple universe with at most `max_triples` triples.
    Exhaustive,
    /// Seeded random subsets.
    Random { samples: u64, seed: u64 },
    /// Exactly these default graphs, in order.
    Explicit(Vec<Graph>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSpace {
    pub subjects: Vec<Iri>,
    pub predicates: Vec<Iri>,
    pub objects: Vec<Term>,
    pub max_triples: usize,
    pub enumeration: Enumeration,
}

impl Default for GraphSpace {
    /// Subjects and objects {:a, :b}, predicates {:p, :q}: an 8-triple
    /// universe and 256 graphs.
    fn default() -> Self {
        GraphSpace {
            subjects: vec![Iri::new(":a"), Iri::new(":b")],
            predicates: vec![Iri::new(":p"), Iri::new(":q")],
            objects: vec![Term::iri(":a"), Term::iri(":b")],
            max_triples: 8,
            enumeration: Enumeration::Exhaustive,
        }
    }
}

impl GraphSpace {
    pub fn explicit(graphs: impl IntoIterator<Item = Graph>) -> Self {
        GraphSpace {
            enumeration: Enumeration::Explicit(graphs.into_iter().collect()),
            ..Self::default()
        }
    }

    pub fn random(mut self, samples: u64, seed: u64) -> Self {
        self.enumeration = Enumeration::Random { samples, seed };
        self
    }

    /// All triples over the vocabularies, in canonical order.
    pub fn universe(&self) -> Vec<Triple> {
        let mut out = BTreeSet::new();
        for s in &self.subjects {
            for p in &self.predicates {
                for o in &self.objects {
                    out.insert(Triple::new(s.clone(), p.clone(), o.clone()));
                }
            }
        }
        out.into_iter().collect()
    }

    /// Number of graphs a single graph slot ranges over (saturating).
    pub fn graphs_per_slot(&self) -> u64 {
        match &self.enumeration {
            Enumeration::Exhaustive => {
                let n = self.universe().len() as u64;
                (0..=self.max_triples.min(n as usize) as u64)
                    .map(|k| binomial(n, k))
                    .fold(0u64, u64::saturating_add)
            }
            Enumeration::Random { samples, .. } => *samples,
            Enumeration::Explicit(gs) => gs.len() as u64,
        }
    }

    /// Every graph of the slot in canonical order: by size, then by the
    /// positions of the chosen triples in the universe.
    fn slot_graphs(&self) -> Vec<Graph> {
        let universe = self.universe();
        let max = self.max_triples.min(universe.len());
        let mut out = Vec::new();
        for k in 0..=max {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                out.push(idx.iter().map(|&i| universe[i].clone()).collect());
                // next k-combination in lexicographic order
                let mut i = k;
                while i > 0 && idx[i - 1] == universe.len() - k + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        out
    }

    fn random_graph(&self, universe: &[Triple], rng: &mut ChaCha8Rng) -> Graph {
        let mut picked: Vec<&Triple> = universe.iter().filter(|_| rng.gen_bool(0.5)).collect();
        if picked.len() > self.max_triples {
            picked.shuffle(rng);
            picked.truncate(self.max_triples);
        }
        picked.into_iter().cloned().collect()
    }
}

impl fmt::Display for GraphSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: Vec<String>| xs.join(",");
        write!(
            f,
            "s={};p={};o={};max={}",
            join(self.subjects.iter().map(|i| i.to_string()).collect()),
            join(self.predicates.iter().map(|i| i.to_string()).collect()),
            join(self.objects.iter().map(|t| t.to_string()).collect()),
            self.max_triples
        )?;
        match &self.enumeration {
            Enumeration::Exhaustive => Ok(()),
            Enumeration::Random { samples, seed } => write!(f, ";samples={samples};seed={seed}"),
            Enumeration::Explicit(gs) => write!(f, ";explicit={}", gs.len()),
        }
    }
}

fn vocab_iri(s: &str) -> Iri {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('<').and_then(|x| x.strip_suffix('>')) {
        Iri::new(inner)
    } else if s.starts_with(':') {
        Iri::new(s)
    } else {
        Iri::new(format!(":{s}"))
    }
}

fn vocab_term(s: &str) -> Term {
    let s = s.trim();
    match s.strip_prefix('"').and_then(|x| x.strip_suffix('"')) {
        Some(lit) => Term::literal(lit),
        None => Term::Iri(vocab_iri(s)),
    }
}

impl FromStr for GraphSpace {
    type Err = String;

    /// `s=a,b;p=p,q;o=a,b;max=8` with optional `samples=N;seed=S` for random
    /// sampling. Names without a leading `:` get one; `o` defaults to `s`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut space = GraphSpace::default();
        let mut objects_given = false;
        let (mut samples, mut seed) = (None, 0u64);
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, found {part:?}"))?;
            let list = || value.split(',').filter(|x| !x.trim().is_empty());
            let num = |v: &str| v.trim().parse::<u64>().map_err(|e| format!("{key}: {e}"));
            match key.trim() {
                "s" => space.subjects = list().map(vocab_iri).collect(),
                "p" => space.predicates = list().map(vocab_iri).collect(),
                "o" => {
                    space.objects = list().map(vocab_term).collect();
                    objects_given = true;
                }
                "max" => space.max_triples = num(value)? as usize,
                "samples" => samples = Some(num(value)?),
                "seed" => seed = num(value)?,
                other => return Err(format!("unknown space key {other:?}")),
            }
        }
        if !objects_given {
            space.objects = space.subjects.iter().cloned().map(Term::Iri).collect();
        }
        if space.subjects.is_empty() || space.predicates.is_empty() || space.objects.is_empty() {
            return Err("every vocabulary needs at least one term".into());
        }
        if let Some(samples) = samples {
            space.enumeration = Enumeration::Random { samples, seed };
        }
        Ok(space)
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Equivalent,
    Inequivalent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub dataset: Dataset,
    pub left: MappingMultiset,
    pub right: MappingMultiset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub graphs_checked: u64,
    pub semantics: Semantics,
}

impl EquivalenceReport {
    pub fn is_equivalent(&self) -> bool {
        self.verdict == Verdict::Equivalent
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut doc = serde_json::json!({
            "verdict": self.verdict,
            "graphs_checked": self.graphs_checked,
            "semantics": self.semantics,
        });
        if let Some(w) = &self.witness {
            doc["witness"] = serde_json::json!({
                "dataset": w.dataset.to_string(),
                "left": w.left.to_json()["solutions"],
                "right": w.right.to_json()["solutions"],
            });
        }
        doc
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.verdict {
            Verdict::Equivalent => "equivalent",
            Verdict::Inequivalent => "inequivalent",
        };
        writeln!(
            f,
            "{verdict} ({} semantics, {} datasets checked)",
            self.semantics, self.graphs_checked
        )?;
        if let Some(w) = &self.witness {
            writeln!(f, "witness dataset:\n{}", w.dataset)?;
            writeln!(f, "left:  {}", w.left)?;
            writeln!(f, "right: {}", w.right)?;
        }
        Ok(())
    }
}

/// Named graphs to enumerate for a pair of patterns.
fn named_graph_slots(p1: &Pattern, p2: &Pattern) -> Vec<Iri> {
    let naf = Iri::naf_graph();
    let mut names: BTreeSet<Iri> = p1.graph_iris().into_iter().chain(p2.graph_iris()).collect();
    names.remove(&naf);
    let uses_var = |p: &Pattern| p.any_node(&|q| matches!(q, Pattern::Graph(GraphName::Var(_), _)));
    if names.is_empty() && (uses_var(p1) || uses_var(p2)) {
        names.insert(Iri::new(DEFAULT_NAMED_GRAPH));
    }
    names.into_iter().collect()
}

pub fn space_budget() -> u64 {
    std::env::var(SPACE_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_SPACE_BUDGET)
}

/// Decides `p1 ≡ p2` over every dataset of the space.
pub fn check_equiv(
    p1: &Pattern,
    p2: &Pattern,
    space: &GraphSpace,
    semantics: Semantics,
) -> Result<EquivalenceReport, LabError> {
    check_equiv_with(p1, p2, space, semantics, ErrorMode::default())
}

pub fn check_equiv_with(
    p1: &Pattern,
    p2: &Pattern,
    space: &GraphSpace,
    semantics: Semantics,
    mode: ErrorMode,
) -> Result<EquivalenceReport, LabError> {
    let names = named_graph_slots(p1, p2);
    let slots = names.len() as u32 + 1;
    let per_slot = space.graphs_per_slot();
    let total = per_slot.checked_pow(slots).unwrap_or(u64::MAX);
    let budget = space_budget();
    if matches!(space.enumeration, Enumeration::Exhaustive) && total > budget {
        return Err(LabError::SpaceTooLarge { size: total, budget });
    }
    let datasets = build_datasets(space, &names, per_slot, total);
    let compare = |d: &Dataset| -> Result<Option<Witness>, LabError> {
        let ctx = EvalContext::new(d).with_error_mode(mode);
        let (l, r) = (eval_pattern(p1, &ctx)?, eval_pattern(p2, &ctx)?);
        let (l, r) = match semantics {
            Semantics::Bag => (l, r),
            Semantics::Set => (l.distinct(), r.distinct()),
        };
        Ok((l != r).then(|| Witness {
            dataset: d.clone(),
            left: l,
            right: r,
        }))
    };
    let found = datasets
        .par_iter()
        .enumerate()
        .map(|(i, d)| compare(d).map(|w| w.map(|w| (i, w))))
        .filter_map(|r| r.transpose())
        .find_first(|_| true);
    Ok(match found {
        Some(Err(e)) => return Err(e),
        Some(Ok((i, w))) => EquivalenceReport {
            verdict: Verdict::Inequivalent,
            witness: Some(w),
            graphs_checked: i as u64 + 1,
            semantics,
        },
        None => EquivalenceReport {
            verdict: Verdict::Equivalent,
            witness: None,
            graphs_checked: datasets.len() as u64,
            semantics,
        },
    })
}

fn build_datasets(space: &GraphSpace, names: &[Iri], per_slot: u64, total: u64) -> Vec<Dataset> {
    match &space.enumeration {
        Enumeration::Random { samples, seed } => {
            let universe = space.universe();
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*samples)
                .map(|_| {
                    let mut d = Dataset::new(space.random_graph(&universe, &mut rng));
                    for n in names {
                        d.add_named(n.clone(), space.random_graph(&universe, &mut rng))
                            .expect("distinct names");
                    }
                    d
                })
                .collect()
        }
        enumeration => {
            let graphs = match enumeration {
                Enumeration::Explicit(gs) => gs.clone(),
                _ => space.slot_graphs(),
            };
            debug_assert_eq!(graphs.len() as u64, per_slot);
            (0..total)
                .map(|mut i| {
                    let mut pick = || {
                        let g = graphs[(i % per_slot) as usize].clone();
                        i /= per_slot.max(1);
                        g
                    };
                    let mut d = Dataset::new(pick());
                    for n in names {
                        d.add_named(n.clone(), pick()).expect("distinct names");
                    }
                    d
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_space_has_256_graphs() {
        let s = GraphSpace::default();
        assert_eq!(s.universe().len(), 8);
        assert_eq!(s.graphs_per_slot(), 256);
        let gs = s.slot_graphs();
        assert_eq!(gs.len(), 256);
        assert!(gs[0].is_empty());
        assert_eq!(gs[255].len(), 8);
        let distinct: BTreeSet<_> = gs.iter().map(|g| g.to_string()).collect();
        assert_eq!(distinct.len(), 256);
    }

    #[test]
    fn bounded_size_enumeration() {
        let s: GraphSpace = "s=a,b;p=p;max=2".parse().unwrap();
        assert_eq!(s.universe().len(), 4);
        assert_eq!(s.graphs_per_slot(), 1 + 4 + 6);
        assert_eq!(s.slot_graphs().len(), 11);
    }

    #[test]
    fn parse_space() {
        let s: GraphSpace = "s=a,b;p=p,q;max=8".parse().unwrap();
        assert_eq!(s, GraphSpace::default());
        let s: GraphSpace = "s=:a;p=<http://x/p>;o=\"v\",b;max=1;samples=10;seed=3".parse().unwrap();
        assert_eq!(s.objects, vec![Term::literal("v"), Term::iri(":b")]);
        assert_eq!(s.predicates, vec![Iri::new("http://x/p")]);
        assert_eq!(s.enumeration, Enumeration::Random { samples: 10, seed: 3 });
        assert!("s=a;bogus=1".parse::<GraphSpace>().is_err());
        assert!("s=;p=p".parse::<GraphSpace>().is_err());
        assert!("max=x".parse::<GraphSpace>().is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(36, 4), 58905);
        assert_eq!(binomial(8, 0), 1);
        assert_eq!(binomial(200, 100), u64::MAX);
    }

    #[test]
    fn reflexive_and_refuting() {
        let p = Pattern::triple("?X", ":p", "?Y");
        let s = GraphSpace::default();
        let r = check_equiv(&p, &p, &s, Semantics::Bag).unwrap();
        assert!(r.is_equivalent());
        assert_eq!(r.graphs_checked, 256);
        assert!(r.witness.is_none());
        let q = Pattern::triple("?X", ":q", "?Y");
        let r = check_equiv(&p, &q, &s, Semantics::Bag).unwrap();
        assert_eq!(r.verdict, Verdict::Inequivalent);
        let w = r.witness.unwrap();
        // the first graph in canonical order with a single :p or :q triple
        assert_eq!(w.dataset.default_graph().len(), 1);
        assert_eq!(r.graphs_checked, 2);
    }

    #[test]
    fn set_semantics_ignores_duplicates() {
        let p = Pattern::triple("?X", ":p", "?Y");
        let pp = Pattern::union(p.clone(), p.clone());
        let s = GraphSpace::default();
        assert!(!check_equiv(&p, &pp, &s, Semantics::Bag).unwrap().is_equivalent());
        assert!(check_equiv(&p, &pp, &s, Semantics::Set).unwrap().is_equivalent());
    }

    #[test]
    fn named_graphs_are_enumerated() {
        let inner = Pattern::triple("?X", ":p", "?Y");
        let by_var = Pattern::graph(GraphName::Var(crate::term::Var::new("G")), inner.clone());
        let s: GraphSpace = "s=a;p=p;o=a,b;max=2".parse().unwrap();
        // one named graph slot: 4 x 4 datasets
        let r = check_equiv(&by_var, &by_var, &s, Semantics::Bag).unwrap();
        assert_eq!(r.graphs_checked, 16);
        let r = check_equiv(&inner, &by_var, &s, Semantics::Bag).unwrap();
        assert!(!r.is_equivalent());
    }

    #[test]
    fn budget_is_enforced() {
        let s: GraphSpace = "s=a,b,c;p=p,q,r;o=a,b,c;max=27".parse().unwrap();
        let p = Pattern::triple("?X", ":p", "?Y");
        assert!(matches!(
            check_equiv(&p, &p, &s, Semantics::Bag),
            Err(LabError::SpaceTooLarge { .. })
        ));
    }

    #[test]
    fn random_sampling_is_seeded() {
        let p = Pattern::triple("?X", ":p", "?Y");
        let q = Pattern::triple("?X", ":q", "?Y");
        let s = GraphSpace::default().random(50, 7);
        let a = check_equiv(&p, &q, &s, Semantics::Bag).unwrap();
        let b = check_equiv(&p, &q, &s, Semantics::Bag).unwrap();
        assert_eq!(a, b);
    }
}
