//! Seeded workloads for the benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sparql_negation::{Graph, Mapping, MappingMultiset, Pattern, Term, Triple, Var};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` distinct-ish mappings over `vars`, each binding every variable to one
/// of `width` constants, cardinalities 1..=3.
pub fn multiset(rng: &mut ChaCha8Rng, n: usize, vars: &[&str], width: usize) -> MappingMultiset {
    let mut out = MappingMultiset::new();
    for _ in 0..n {
        let m: Mapping = vars
            .iter()
            .map(|v| (Var::new(*v), Term::iri(format!(":c{}", rng.gen_range(0..width)))))
            .collect();
        out.add(m, rng.gen_range(1..=3));
    }
    out
}

/// A graph of `n` triples over `nodes` subjects/objects and predicates `:p`, `:q`, `:r`.
pub fn graph(rng: &mut ChaCha8Rng, n: usize, nodes: usize) -> Graph {
    let preds = [":p", ":q", ":r"];
    let mut g = Graph::new();
    while g.len() < n.min(nodes * nodes * preds.len()) {
        let s = format!(":n{}", rng.gen_range(0..nodes));
        let o = format!(":n{}", rng.gen_range(0..nodes));
        g.insert(Triple::named(&s, preds.choose(rng).unwrap(), &o));
    }
    g
}

fn t(s: &str, p: &str, o: &str) -> Pattern {
    Pattern::triple(s, p, o)
}

/// The nested correlated negation, with NOT-EXISTS and with DIFF.
pub fn nested_negation() -> (Pattern, Pattern) {
    let inner = |build: fn(Pattern, Pattern) -> Pattern| {
        build(t("?X", ":p", "?Y"), build(t("?Z", ":q", "?Y"), t("?W", ":r", "?X")))
    };
    (inner(Pattern::not_exists), inner(Pattern::diff))
}

/// OPT then MINUS, exercising the W3C operators.
pub fn optional_minus() -> Pattern {
    Pattern::minus(Pattern::opt(t("?X", ":p", "?Y"), t("?Y", ":q", "?Z")), t("?Z", ":r", "?X"))
}
