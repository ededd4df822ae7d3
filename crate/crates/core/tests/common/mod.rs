//! Seeded generators and pattern families shared by the integration tests
//! and the acceptance suite.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use sparql_negation::rewrite::{InputSchema, Schema};
use sparql_negation::{
    Atom, FilterConstraint, Formula, GraphName, Iri, Mapping, MappingMultiset, Pattern, Term,
    TermPattern, TriplePattern, Var,
};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const VARS: [&str; 3] = ["X", "Y", "Z"];
pub const CONSTS: [&str; 3] = [":a", ":b", ":c"];

pub fn var(n: &str) -> Var {
    Var::new(n)
}

fn random_mapping(rng: &mut ChaCha8Rng, domain: &[&str]) -> Mapping {
    domain
        .iter()
        .map(|v| (Var::new(*v), Term::iri(*CONSTS.choose(rng).unwrap())))
        .collect()
}

fn random_domain<'a>(rng: &mut ChaCha8Rng) -> Vec<&'a str> {
    VARS.iter().copied().filter(|_| rng.gen_bool(0.5)).collect()
}

/// A multiset whose mappings all share one random domain.
pub fn homogeneous_multiset(rng: &mut ChaCha8Rng) -> (MappingMultiset, Vec<&'static str>) {
    let domain = random_domain(rng);
    let mut out = MappingMultiset::new();
    for _ in 0..rng.gen_range(0..=3) {
        out.add(random_mapping(rng, &domain), rng.gen_range(1..=3));
    }
    (out, domain)
}

/// A multiset whose mappings each draw their own domain.
pub fn heterogeneous_multiset(rng: &mut ChaCha8Rng) -> MappingMultiset {
    let mut out = MappingMultiset::new();
    for _ in 0..rng.gen_range(0..=4) {
        let d = random_domain(rng);
        out.add(random_mapping(rng, &d), rng.gen_range(1..=3));
    }
    out
}

pub fn random_atom(rng: &mut ChaCha8Rng) -> Atom {
    let v = *VARS.choose(rng).unwrap();
    match rng.gen_range(0..6) {
        0 | 1 => Atom::eq_const(v, CONSTS.choose(rng).unwrap()),
        2 => Atom::eq_vars(v, VARS.choose(rng).unwrap()),
        3 | 4 => Atom::bound(v),
        _ => {
            if rng.gen_bool(0.5) {
                Atom::True
            } else {
                Atom::False
            }
        }
    }
}

pub fn random_formula(rng: &mut ChaCha8Rng, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.4) {
        return Formula::atom(random_atom(rng));
    }
    match rng.gen_range(0..3) {
        0 => Formula::not(random_formula(rng, depth - 1)),
        1 => Formula::and(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
        _ => Formula::or(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
    }
}

pub fn random_constraint(rng: &mut ChaCha8Rng, depth: u32) -> FilterConstraint {
    if depth == 0 || rng.gen_bool(0.4) {
        let mut a = random_atom(rng);
        while matches!(a, Atom::True | Atom::False) && rng.gen_bool(0.7) {
            a = random_atom(rng);
        }
        return a.into();
    }
    match rng.gen_range(0..3) {
        0 => FilterConstraint::not(random_constraint(rng, depth - 1)),
        1 => FilterConstraint::and(random_constraint(rng, depth - 1), random_constraint(rng, depth - 1)),
        _ => FilterConstraint::or(random_constraint(rng, depth - 1), random_constraint(rng, depth - 1)),
    }
}

/// Schema entry claiming an exact domain.
pub fn exact_schema(a: &[&str], b: &[&str]) -> Schema {
    let mut s = Schema::new();
    s.insert("A".into(), InputSchema::exact(a.iter().map(|v| var(v))));
    s.insert("B".into(), InputSchema::exact(b.iter().map(|v| var(v))));
    s
}

/// Schema entry allowing any subset of the variables.
pub fn loose_schema() -> Schema {
    let all: BTreeSet<Var> = VARS.iter().map(|v| var(v)).collect();
    let mut s = Schema::new();
    s.insert("A".into(), InputSchema::loose(all.clone()));
    s.insert("B".into(), InputSchema::loose(all));
    s
}

pub fn env(a: &MappingMultiset, b: &MappingMultiset) -> BTreeMap<String, MappingMultiset> {
    BTreeMap::from([("A".to_string(), a.clone()), ("B".to_string(), b.clone())])
}

/// Every mapping over {?X, ?Y} and {:a, :b}: 1 + 2 + 2 + 4 = 9.
pub fn tiny_mappings() -> Vec<Mapping> {
    let mut out = vec![Mapping::empty()];
    for v in ["X", "Y"] {
        for c in [":a", ":b"] {
            out.push(Mapping::from_pairs(&[(v, c)]));
        }
    }
    for x in [":a", ":b"] {
        for y in [":a", ":b"] {
            out.push(Mapping::from_pairs(&[("X", x), ("Y", y)]));
        }
    }
    out
}

/// Multisets of at most two distinct tiny mappings, cardinalities 1 or 2.
pub fn tiny_multisets() -> Vec<MappingMultiset> {
    let ms = tiny_mappings();
    let mut out = vec![MappingMultiset::new()];
    for (i, m) in ms.iter().enumerate() {
        for c in 1..=2 {
            out.push(MappingMultiset::from_entries([(m.clone(), c)]));
            for m2 in &ms[i + 1..] {
                for c2 in 1..=2 {
                    out.push(MappingMultiset::from_entries([(m.clone(), c), (m2.clone(), c2)]));
                }
            }
        }
    }
    out
}

pub fn tiny_formulas() -> Vec<Formula> {
    vec![
        Formula::truth(),
        Formula::atom(Atom::eq_vars("X", "Y")),
        Formula::not(Formula::atom(Atom::bound("Y"))),
        Formula::or(Formula::atom(Atom::eq_const("X", ":a")), Formula::atom(Atom::bound("Y"))),
        Formula::not(Formula::atom(Atom::eq_const("Y", ":b"))),
    ]
}

const PRED: [&str; 3] = [":p", ":q", ":r"];
const NODES: [&str; 3] = [":a", ":b", ":c"];
const PVARS: [&str; 4] = ["?X", "?Y", "?Z", "?W"];

fn random_position(rng: &mut ChaCha8Rng, choices: &[&str]) -> TermPattern {
    if rng.gen_bool(0.5) {
        TermPattern::var(PVARS.choose(rng).unwrap())
    } else {
        TermPattern::iri(choices.choose(rng).unwrap())
    }
}

pub fn random_triple(rng: &mut ChaCha8Rng) -> Pattern {
    loop {
        let s = random_position(rng, &NODES);
        let p = random_position(rng, &PRED);
        let o = if rng.gen_bool(0.15) {
            TermPattern::from(Term::literal(["x", "two words", "q\"uote", "back\\slash"].choose(rng).unwrap().to_string()))
        } else {
            random_position(rng, &NODES)
        };
        let t = TriplePattern::new(s, p, o);
        if !t.vars().is_empty() {
            return Pattern::Triple(t);
        }
    }
}

/// A random pattern AST using every node kind.
pub fn random_pattern(rng: &mut ChaCha8Rng, depth: u32) -> Pattern {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.1) { Pattern::Unit } else { random_triple(rng) };
    }
    let sub = |rng: &mut ChaCha8Rng| random_pattern(rng, depth - 1);
    match rng.gen_range(0..9) {
        0 => Pattern::and(sub(rng), sub(rng)),
        1 => Pattern::union(sub(rng), sub(rng)),
        2 => Pattern::opt(sub(rng), sub(rng)),
        3 => Pattern::minus(sub(rng), sub(rng)),
        4 => Pattern::not_exists(sub(rng), sub(rng)),
        5 => Pattern::diff(sub(rng), sub(rng)),
        6 => {
            let p = sub(rng);
            Pattern::filter(p, random_constraint(rng, 2))
        }
        7 => {
            let name = if rng.gen_bool(0.5) {
                GraphName::Iri(Iri::new(":g1"))
            } else {
                GraphName::Var(var("G"))
            };
            Pattern::graph(name, sub(rng))
        }
        _ => sub(rng),
    }
}

fn t(s: &str, p: &str, o: &str) -> Pattern {
    Pattern::triple(s, p, o)
}

/// Which rewrite a family member exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    OptFilter,
    OptPlain,
    MinusShared,
    MinusDisjoint,
    NotExists,
    Mixed,
}

/// Patterns over the default space vocabulary ({:a, :b}, {:p, :q}) for the
/// OPT, MINUS and NOT-EXISTS rewrites.
pub fn rewrite_family() -> Vec<(Family, Pattern)> {
    use Family::*;
    let eq = Atom::eq_const;
    vec![
        (OptPlain, Pattern::opt(t("?X", ":p", "?Y"), t("?Y", ":q", "?Z"))),
        (OptPlain, Pattern::opt(t("?X", ":p", ":a"), t("?X", ":q", "?Y"))),
        (OptPlain, Pattern::opt(t("?X", ":p", "?Y"), t("?X", ":q", "?Y"))),
        (OptPlain, Pattern::opt(t("?X", ":p", ":b"), t("?Y", ":q", ":a"))),
        (
            OptPlain,
            Pattern::opt(Pattern::and(t("?X", ":p", "?Y"), t("?Y", ":p", "?Z")), t("?Z", ":q", "?W")),
        ),
        (OptFilter, Pattern::opt(t("?X", ":p", "?Y"), Pattern::filter(t("?Y", ":q", "?Z"), eq("Z", ":a")))),
        (
            OptFilter,
            Pattern::opt(
                t("?X", ":p", "?Y"),
                Pattern::filter(t("?X", ":q", "?Z"), FilterConstraint::not(Atom::eq_vars("Z", "Y").into())),
            ),
        ),
        (OptFilter, Pattern::opt(t("?X", ":q", ":a"), Pattern::filter(t("?X", ":p", "?Y"), Atom::bound("Y")))),
        (
            OptFilter,
            Pattern::opt(
                t("?X", ":p", "?Y"),
                Pattern::filter(
                    t("?Y", ":q", "?Z"),
                    FilterConstraint::or(Atom::eq_vars("Z", "X").into(), eq("Z", ":b").into()),
                ),
            ),
        ),
        (MinusShared, Pattern::minus(t("?X", ":p", "?Y"), t("?Y", ":q", "?Z"))),
        (MinusShared, Pattern::minus(t("?X", ":p", "?Y"), t("?X", ":q", "?Y"))),
        (MinusShared, Pattern::minus(t("?X", ":p", ":a"), t("?X", ":q", "?Z"))),
        (
            MinusShared,
            Pattern::minus(Pattern::and(t("?X", ":p", "?Y"), t("?Y", ":q", "?Z")), t("?Z", ":p", ":a")),
        ),
        (
            MinusShared,
            Pattern::minus(t("?X", ":p", "?Y"), Pattern::union(t("?X", ":q", ":a"), t("?X", ":q", ":b"))),
        ),
        (MinusDisjoint, Pattern::minus(t("?X", ":p", "?Y"), t("?Z", ":q", "?W"))),
        (MinusDisjoint, Pattern::minus(t("?X", ":p", ":a"), t("?Z", ":q", ":b"))),
        (
            MinusDisjoint,
            Pattern::minus(Pattern::filter(t("?X", ":p", "?Y"), eq("Y", ":a")), t("?Z", ":q", "?W")),
        ),
        (NotExists, Pattern::not_exists(t("?X", ":p", "?Y"), t("?Y", ":q", "?Z"))),
        (NotExists, Pattern::not_exists(t("?X", ":p", "?Y"), t("?X", ":q", "?Y"))),
        (NotExists, Pattern::not_exists(t("?X", ":p", ":a"), t("?Z", ":q", ":b"))),
        (
            NotExists,
            Pattern::not_exists(t("?X", ":p", "?Y"), Pattern::and(t("?Y", ":q", "?Z"), t("?Z", ":p", "?X"))),
        ),
        (NotExists, Pattern::not_exists(t("?X", ":p", "?Y"), Pattern::filter(t("?X", ":q", "?Z"), eq("Z", ":a")))),
        (
            Mixed,
            Pattern::opt(t("?X", ":p", "?Y"), Pattern::minus(t("?Y", ":q", "?Z"), t("?Z", ":p", ":a"))),
        ),
        (
            Mixed,
            Pattern::minus(Pattern::opt(t("?X", ":p", "?Y"), t("?Y", ":q", "?Z")), t("?X", ":q", ":a")),
        ),
        (
            Mixed,
            Pattern::union(
                Pattern::opt(t("?X", ":p", "?Y"), t("?Y", ":q", "?Z")),
                Pattern::not_exists(t("?X", ":q", "?Y"), t("?Y", ":p", ":a")),
            ),
        ),
    ]
}

/// Graph and patterns of the NOT-EXISTS vs DIFF counterexample.
pub fn correlated_counterexample() -> (sparql_negation::Graph, Pattern, Pattern) {
    let g = [(":a", ":p", ":b"), (":f", ":p", ":b"), (":c", ":q", ":d"), (":e", ":r", ":a")]
        .iter()
        .map(|(s, p, o)| sparql_negation::Triple::named(s, p, o))
        .collect();
    let nex = Pattern::not_exists(
        t("?X", ":p", ":b"),
        Pattern::not_exists(t("?Z", ":q", ":d"), t("?W", ":r", "?X")),
    );
    let diff = Pattern::diff(t("?X", ":p", ":b"), Pattern::diff(t("?Z", ":q", ":d"), t("?W", ":r", "?X")));
    (g, nex, diff)
}
