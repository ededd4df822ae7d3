//! W3C algebra to core algebra: diff, leftjoin and minus expressed with
//! project, select, join, union, simple difference and renaming.
//!
//! The textbook constructions compare a left mapping against joined rows
//! built from *other* left mappings, which is only sound when every left
//! mapping has the same domain. When an operand's exact domain is not known
//! statically it is first split into domain-homogeneous pieces with
//! `bound` guards, and each piece gets the textbook construction.

use std::collections::{BTreeMap, BTreeSet};

use super::FreshVars;
use crate::algebra::{AlgebraExpr, ErrorMode};
use crate::formula::{Atom, Formula};
use crate::term::{TermPattern, Var};

/// What is known statically about one algebra input.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InputSchema {
    /// Every variable that may be bound.
    pub vars: BTreeSet<Var>,
    /// True if every mapping binds exactly `vars`.
    pub exact: bool,
}

impl InputSchema {
    pub fn exact(vars: impl IntoIterator<Item = Var>) -> Self {
        InputSchema {
            vars: vars.into_iter().collect(),
            exact: true,
        }
    }

    pub fn loose(vars: impl IntoIterator<Item = Var>) -> Self {
        InputSchema {
            vars: vars.into_iter().collect(),
            exact: false,
        }
    }
}

pub type Schema = BTreeMap<String, InputSchema>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CoreStrategy {
    /// The textbook constructions applied as if every operand had a uniform
    /// domain. Sound only under that assumption.
    Literal,
    /// Splits operands of unknown domain first. Sound for any inputs that
    /// respect the schema.
    #[default]
    Partitioned,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreRewrite {
    pub expr: AlgebraExpr,
    pub fresh_vars: Vec<Var>,
}

/// The exact domain shared by every result mapping, when it can be derived.
pub fn exact_domain(e: &AlgebraExpr, schema: &Schema) -> Option<BTreeSet<Var>> {
    use AlgebraExpr::*;
    match e {
        Input(n) => {
            let s = schema.get(n)?;
            (s.exact || s.vars.is_empty()).then(|| s.vars.clone())
        }
        Project(w, x) => exact_domain(x, schema).map(|d| d.intersection(w).cloned().collect()),
        Select(_, x) => exact_domain(x, schema),
        Rename(r, x) => exact_domain(x, schema)
            .map(|d| d.into_iter().map(|v| r.get(&v).cloned().unwrap_or(v)).collect()),
        Join(a, b) => {
            let mut d = exact_domain(a, schema)?;
            d.extend(exact_domain(b, schema)?);
            Some(d)
        }
        Union(a, b) => {
            let d = exact_domain(a, schema)?;
            (exact_domain(b, schema)? == d).then_some(d)
        }
        Diff(a, _, _) | Minus(a, _) | Sdiff(a, _) => exact_domain(a, schema),
        LeftJoin(a, b, _) => {
            let d = exact_domain(a, schema)?;
            exact_domain(b, schema)?.is_subset(&d).then_some(d)
        }
    }
}

/// Rewrites `e` into the core algebra with the partitioned strategy.
pub fn rewrite_algebra_to_core(e: &AlgebraExpr, mode: ErrorMode, schema: &Schema) -> AlgebraExpr {
    rewrite_algebra_to_core_with(e, mode, schema, CoreStrategy::Partitioned).expr
}

pub fn rewrite_algebra_to_core_with(
    e: &AlgebraExpr,
    mode: ErrorMode,
    schema: &Schema,
    strategy: CoreStrategy,
) -> CoreRewrite {
    let bounds: BTreeMap<String, BTreeSet<Var>> =
        schema.iter().map(|(k, s)| (k.clone(), s.vars.clone())).collect();
    let mut r = CoreRewriter {
        mode,
        schema,
        bounds: &bounds,
        strategy,
        fresh: FreshVars::new(e.mentioned_vars(&bounds)),
    };
    let expr = r.rewrite(e);
    CoreRewrite {
        expr,
        fresh_vars: r.fresh.into_minted(),
    }
}

struct CoreRewriter<'a> {
    mode: ErrorMode,
    schema: &'a Schema,
    bounds: &'a BTreeMap<String, BTreeSet<Var>>,
    strategy: CoreStrategy,
    fresh: FreshVars,
}

impl CoreRewriter<'_> {
    fn rewrite(&mut self, e: &AlgebraExpr) -> AlgebraExpr {
        use AlgebraExpr::*;
        match e {
            Input(_) => e.clone(),
            Project(w, x) => AlgebraExpr::project(w.clone(), self.rewrite(x)),
            Select(f, x) => AlgebraExpr::select(f.clone(), self.rewrite(x)),
            Rename(r, x) => AlgebraExpr::rename(r.clone(), self.rewrite(x)),
            Join(a, b) => AlgebraExpr::join(self.rewrite(a), self.rewrite(b)),
            Union(a, b) => AlgebraExpr::union(self.rewrite(a), self.rewrite(b)),
            Sdiff(a, b) => AlgebraExpr::sdiff(self.rewrite(a), self.rewrite(b)),
            Diff(a, b, f) => {
                let (a2, b2) = (self.rewrite(a), self.rewrite(b));
                self.diff(a, a2, b2, f)
            }
            LeftJoin(a, b, f) => {
                let (a2, b2) = (self.rewrite(a), self.rewrite(b));
                let kept = AlgebraExpr::select(f.clone(), AlgebraExpr::join(a2.clone(), b2.clone()));
                AlgebraExpr::union(kept, self.diff(a, a2, b2, f))
            }
            Minus(a, b) => {
                let (a2, b2) = (self.rewrite(a), self.rewrite(b));
                self.minus(a, b, a2, b2)
            }
        }
    }

    /// Domain-homogeneous pieces of the left operand with their domains.
    fn pieces(&self, orig: &AlgebraExpr, rewritten: AlgebraExpr) -> Vec<(BTreeSet<Var>, AlgebraExpr)> {
        let bound = orig.domain_bound(self.bounds);
        let exact = match self.strategy {
            CoreStrategy::Literal => Some(bound.clone()),
            CoreStrategy::Partitioned => exact_domain(orig, self.schema),
        };
        if let Some(d) = exact {
            return vec![(d, rewritten)];
        }
        let vars: Vec<Var> = bound.into_iter().collect();
        (0u32..1 << vars.len())
            .map(|bits| {
                let inside: BTreeSet<Var> = vars
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| bits & (1 << i) != 0)
                    .map(|(_, v)| v.clone())
                    .collect();
                let guard = Formula::conjunction(vars.iter().map(|v| {
                    let b = Formula::atom(Atom::Bound(v.clone()));
                    if inside.contains(v) {
                        b
                    } else {
                        Formula::not(b)
                    }
                }));
                (inside, AlgebraExpr::select(guard, rewritten.clone()))
            })
            .collect()
    }

    fn diff(&mut self, a: &AlgebraExpr, a2: AlgebraExpr, b2: AlgebraExpr, f: &Formula) -> AlgebraExpr {
        let mode = self.mode;
        self.pieces(a, a2)
            .into_iter()
            .map(|(_, piece)| {
                let joined = AlgebraExpr::join(piece.clone(), b2.clone());
                let removed = match mode {
                    ErrorMode::ErrorAsFalse => AlgebraExpr::select(f.clone(), joined),
                    ErrorMode::Faithful => AlgebraExpr::union(
                        AlgebraExpr::select(f.clone(), joined.clone()),
                        AlgebraExpr::select(f.errs(), joined),
                    ),
                };
                AlgebraExpr::sdiff(piece, removed)
            })
            .reduce(AlgebraExpr::union)
            .expect("at least one piece")
    }

    fn minus(
        &mut self,
        a: &AlgebraExpr,
        b: &AlgebraExpr,
        a2: AlgebraExpr,
        b2: AlgebraExpr,
    ) -> AlgebraExpr {
        let right_bound = b.domain_bound(self.bounds);
        let right_exact = match self.strategy {
            CoreStrategy::Literal => true,
            CoreStrategy::Partitioned => exact_domain(b, self.schema).is_some(),
        };
        let mut renaming: BTreeMap<Var, Var> = BTreeMap::new();
        let pieces = self.pieces(a, a2);
        let mut out = Vec::with_capacity(pieces.len());
        for (dom, piece) in pieces {
            let shared: Vec<Var> = dom.intersection(&right_bound).cloned().collect();
            if shared.is_empty() {
                out.push(piece);
                continue;
            }
            for v in &shared {
                if !renaming.contains_key(v) {
                    let f = self.fresh.fresh(v);
                    renaming.insert(v.clone(), f);
                }
            }
            let eq = |v: &Var| {
                Formula::atom(Atom::Eq(
                    TermPattern::Var(v.clone()),
                    TermPattern::Var(renaming[v].clone()),
                ))
            };
            let cond = if right_exact {
                Formula::conjunction(shared.iter().map(eq))
            } else {
                // a right mapping may leave some shared variables unbound;
                // it only has to agree where bound and overlap somewhere
                let unbound = |v: &Var| Formula::not(Formula::atom(Atom::Bound(renaming[v].clone())));
                let agree = Formula::conjunction(shared.iter().map(|v| Formula::or(unbound(v), eq(v))));
                let overlap = Formula::disjunction(
                    shared.iter().map(|v| Formula::atom(Atom::Bound(renaming[v].clone()))),
                );
                Formula::and(agree, overlap)
            };
            let piece_renaming: BTreeMap<Var, Var> = shared
                .iter()
                .map(|v| (v.clone(), renaming[v].clone()))
                .collect();
            let copy = AlgebraExpr::rename(piece_renaming, b2.clone());
            let removed = AlgebraExpr::select(cond, AlgebraExpr::join(piece.clone(), copy));
            out.push(AlgebraExpr::sdiff(piece, removed));
        }
        out.into_iter().reduce(AlgebraExpr::union).expect("at least one piece")
    }
}
