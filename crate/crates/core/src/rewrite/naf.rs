//! Negation-as-failure encodings of DIFF built from OPT and `!bound`.

use std::fmt;
use std::str::FromStr;

use super::{Applicability, FreshVars, RewriteError, RewriteResult, Rule};
use crate::formula::{Atom, FilterConstraint};
use crate::pattern::{safe_vars, GraphName, Pattern, TriplePattern};
use crate::term::{Iri, TermPattern, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NafScheme {
    /// `(filter (opt P1 P2) (not (bound ?W)))` for a witness ?W of P2.
    Naive,
    /// Conjoins a fully variable triple to the optional arm and tests its
    /// subject. Fails when the default graph is empty.
    Perez,
    /// Conjoins a probe on the auxiliary `:__naf` graph inside the optional arm.
    Polleres,
    /// The probe conjoined outside the OPT; its filter can never pass.
    PolleresAsPrinted,
}

impl NafScheme {
    pub const ALL: [NafScheme; 4] = [
        NafScheme::Naive,
        NafScheme::Perez,
        NafScheme::Polleres,
        NafScheme::PolleresAsPrinted,
    ];
}

impl fmt::Display for NafScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NafScheme::Naive => "naive",
            NafScheme::Perez => "perez",
            NafScheme::Polleres => "polleres",
            NafScheme::PolleresAsPrinted => "polleres-as-printed",
        })
    }
}

impl FromStr for NafScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NafScheme::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| format!("unknown encoding scheme {s:?}"))
    }
}

/// The witness variable of the naive encoding: a variable of `p2` absent
/// from `p1`, preferring one that is safe in `p2`.
pub fn naive_witness(p1: &Pattern, p2: &Pattern) -> Option<Var> {
    let left = p1.vars();
    let safe = safe_vars(p2);
    let candidates: Vec<Var> = p2.vars().difference(&left).cloned().collect();
    candidates
        .iter()
        .find(|v| safe.contains(*v))
        .or_else(|| candidates.first())
        .cloned()
}

/// Encodes `(diff p1 p2)` with the given scheme.
pub fn encode_naf(
    p1: &Pattern,
    p2: &Pattern,
    scheme: NafScheme,
) -> Result<RewriteResult, RewriteError> {
    let mut fresh = FreshVars::new(p1.vars().into_iter().chain(p2.vars()));
    let output = encode(p1.clone(), p2.clone(), scheme, &mut fresh)?;
    Ok(RewriteResult {
        output,
        rule: Rule::Naf(scheme),
        fresh_vars: fresh.into_minted(),
        applicability: Applicability::Applied,
    })
}

/// Replaces every DIFF node of `p` by its encoding, innermost first.
pub fn rewrite_diff_to_naf(p: &Pattern, scheme: NafScheme) -> Result<RewriteResult, RewriteError> {
    let mut fresh = FreshVars::new(p.vars());
    let mut applied = 0;
    let output = walk(p, scheme, &mut fresh, &mut applied)?;
    Ok(RewriteResult {
        output,
        rule: Rule::Naf(scheme),
        fresh_vars: fresh.into_minted(),
        applicability: if applied > 0 {
            Applicability::Applied
        } else {
            Applicability::Inapplicable
        },
    })
}

fn walk(
    p: &Pattern,
    scheme: NafScheme,
    fresh: &mut FreshVars,
    applied: &mut usize,
) -> Result<Pattern, RewriteError> {
    Ok(match p {
        Pattern::Triple(_) | Pattern::Unit => p.clone(),
        Pattern::Filter(q, c) => Pattern::filter(walk(q, scheme, fresh, applied)?, c.clone()),
        Pattern::Graph(n, q) => Pattern::graph(n.clone(), walk(q, scheme, fresh, applied)?),
        _ => {
            let (op, l, r) = p.as_binary().expect("binary node");
            let l2 = walk(l, scheme, fresh, applied)?;
            let r2 = walk(r, scheme, fresh, applied)?;
            if let Pattern::Diff(..) = p {
                *applied += 1;
                encode(l2, r2, scheme, fresh)?
            } else {
                op.build(l2, r2)
            }
        }
    })
}

fn not_bound(v: &Var) -> FilterConstraint {
    FilterConstraint::not(FilterConstraint::Atom(Atom::Bound(v.clone())))
}

fn naf_probe(v: &Var) -> Pattern {
    Pattern::graph(
        GraphName::Iri(Iri::naf_graph()),
        Pattern::Triple(TriplePattern::new(
            TermPattern::Var(v.clone()),
            TermPattern::iri(":p"),
            TermPattern::iri(":o"),
        )),
    )
}

fn encode(
    p1: Pattern,
    p2: Pattern,
    scheme: NafScheme,
    fresh: &mut FreshVars,
) -> Result<Pattern, RewriteError> {
    Ok(match scheme {
        NafScheme::Naive => {
            let w = naive_witness(&p1, &p2).ok_or_else(|| RewriteError::NoWitnessVariable(p2.clone()))?;
            Pattern::filter(Pattern::opt(p1, p2), not_bound(&w))
        }
        NafScheme::Perez => {
            let [a, b, c] = ["F1", "F2", "F3"].map(|s| fresh.fresh_named(s));
            let any = Pattern::Triple(TriplePattern::new(
                TermPattern::Var(a.clone()),
                TermPattern::Var(b),
                TermPattern::Var(c),
            ));
            Pattern::filter(Pattern::opt(p1, Pattern::and(p2, any)), not_bound(&a))
        }
        NafScheme::Polleres => {
            let x = fresh.fresh_named("FX");
            Pattern::filter(Pattern::opt(p1, Pattern::and(p2, naf_probe(&x))), not_bound(&x))
        }
        NafScheme::PolleresAsPrinted => {
            let x = fresh.fresh_named("FX");
            Pattern::filter(Pattern::and(Pattern::opt(p1, p2), naf_probe(&x)), not_bound(&x))
        }
    })
}
