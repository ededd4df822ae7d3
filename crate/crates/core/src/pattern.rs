//! Graph patterns and their bag-semantics evaluation over a dataset.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::algebra::{self, ErrorMode};
use crate::formula::{FilterConstraint, Formula};
use crate::solution::{Mapping, MappingMultiset};
use crate::term::{Dataset, Graph, Iri, Term, TermPattern, Triple, Var};

/// Default bound on pattern nesting depth during evaluation.
pub const DEFAULT_MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriplePattern {
    pub subject: TermPattern,
    pub predicate: TermPattern,
    pub object: TermPattern,
}

impl TriplePattern {
    pub fn new(subject: TermPattern, predicate: TermPattern, object: TermPattern) -> Self {
        TriplePattern {
            subject,
            predicate,
            object,
        }
    }

    pub fn positions(&self) -> [&TermPattern; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.positions()
            .into_iter()
            .filter_map(TermPattern::as_var)
            .cloned()
            .collect()
    }

    /// Extends `m` so that it maps this pattern onto `t`, or returns `None`.
    fn match_triple(&self, t: &Triple) -> Option<Mapping> {
        let ground = [
            Term::Iri(t.subject.clone()),
            Term::Iri(t.predicate.clone()),
            t.object.clone(),
        ];
        let mut m = Mapping::empty();
        for (pos, value) in self.positions().into_iter().zip(ground) {
            match pos {
                TermPattern::Term(c) if *c != value => return None,
                TermPattern::Term(_) => {}
                TermPattern::Var(v) => match m.get(v) {
                    Some(prev) if *prev != value => return None,
                    Some(_) => {}
                    None => {
                        m.bind(v.clone(), value);
                    }
                },
            }
        }
        Some(m)
    }

    fn map_positions(&self, f: impl Fn(&TermPattern) -> TermPattern) -> TriplePattern {
        TriplePattern::new(f(&self.subject), f(&self.predicate), f(&self.object))
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(triple {} {} {})", self.subject, self.predicate, self.object)
    }
}

/// The graph selector of a GRAPH pattern.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphName {
    Iri(Iri),
    Var(Var),
}

impl fmt::Display for GraphName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphName::Iri(i) => i.fmt(f),
            GraphName::Var(v) => v.fmt(f),
        }
    }
}

/// A graph pattern.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    Triple(TriplePattern),
    And(Box<Pattern>, Box<Pattern>),
    Union(Box<Pattern>, Box<Pattern>),
    Opt(Box<Pattern>, Box<Pattern>),
    Minus(Box<Pattern>, Box<Pattern>),
    NotExists(Box<Pattern>, Box<Pattern>),
    Diff(Box<Pattern>, Box<Pattern>),
    Filter(Box<Pattern>, FilterConstraint),
    Graph(GraphName, Box<Pattern>),
    /// The empty group pattern; evaluates to {μ0}.
    Unit,
}

/// Binary pattern operators, used to build and inspect nodes generically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    And,
    Union,
    Opt,
    Minus,
    NotExists,
    Diff,
}

impl BinaryOp {
    pub fn keyword(self) -> &'static str {
        match self {
            BinaryOp::And => "and",
            BinaryOp::Union => "union",
            BinaryOp::Opt => "opt",
            BinaryOp::Minus => "minus",
            BinaryOp::NotExists => "not-exists",
            BinaryOp::Diff => "diff",
        }
    }

    pub fn build(self, l: Pattern, r: Pattern) -> Pattern {
        let (l, r) = (Box::new(l), Box::new(r));
        match self {
            BinaryOp::And => Pattern::And(l, r),
            BinaryOp::Union => Pattern::Union(l, r),
            BinaryOp::Opt => Pattern::Opt(l, r),
            BinaryOp::Minus => Pattern::Minus(l, r),
            BinaryOp::NotExists => Pattern::NotExists(l, r),
            BinaryOp::Diff => Pattern::Diff(l, r),
        }
    }
}

impl Pattern {
    /// `Pattern::triple("?X", ":p", ":b")`: positions starting with `?` are
    /// variables, everything else is read as an IRI.
    pub fn triple(s: &str, p: &str, o: &str) -> Pattern {
        let pos = |x: &str| {
            if x.starts_with('?') {
                TermPattern::var(x)
            } else {
                TermPattern::iri(x)
            }
        };
        Pattern::Triple(TriplePattern::new(pos(s), pos(p), pos(o)))
    }

    pub fn and(l: Pattern, r: Pattern) -> Pattern {
        BinaryOp::And.build(l, r)
    }

    pub fn union(l: Pattern, r: Pattern) -> Pattern {
        BinaryOp::Union.build(l, r)
    }

    pub fn opt(l: Pattern, r: Pattern) -> Pattern {
        BinaryOp::Opt.build(l, r)
    }

    pub fn minus(l: Pattern, r: Pattern) -> Pattern {
        BinaryOp::Minus.build(l, r)
    }

    pub fn not_exists(l: Pattern, r: Pattern) -> Pattern {
        BinaryOp::NotExists.build(l, r)
    }

    pub fn diff(l: Pattern, r: Pattern) -> Pattern {
        BinaryOp::Diff.build(l, r)
    }

    pub fn filter(p: Pattern, c: impl Into<FilterConstraint>) -> Pattern {
        Pattern::Filter(Box::new(p), c.into())
    }

    pub fn graph(name: GraphName, p: Pattern) -> Pattern {
        Pattern::Graph(name, Box::new(p))
    }

    /// Splits a binary node into its operator and arms.
    pub fn as_binary(&self) -> Option<(BinaryOp, &Pattern, &Pattern)> {
        let (op, l, r) = match self {
            Pattern::And(l, r) => (BinaryOp::And, l, r),
            Pattern::Union(l, r) => (BinaryOp::Union, l, r),
            Pattern::Opt(l, r) => (BinaryOp::Opt, l, r),
            Pattern::Minus(l, r) => (BinaryOp::Minus, l, r),
            Pattern::NotExists(l, r) => (BinaryOp::NotExists, l, r),
            Pattern::Diff(l, r) => (BinaryOp::Diff, l, r),
            _ => return None,
        };
        Some((op, l, r))
    }

    /// var(P): every variable occurring syntactically in the pattern.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Pattern::Triple(t) => out.extend(t.vars()),
            Pattern::Filter(p, c) => {
                p.collect_vars(out);
                c.collect_vars(out);
            }
            Pattern::Graph(n, p) => {
                if let GraphName::Var(v) = n {
                    out.insert(v.clone());
                }
                p.collect_vars(out);
            }
            Pattern::Unit => {}
            _ => {
                let (_, l, r) = self.as_binary().expect("binary node");
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Variables that can occur in the domain of a solution: the right arms
    /// of MINUS, NOT-EXISTS and DIFF and filter constraints contribute none.
    pub fn domain_vars(&self) -> BTreeSet<Var> {
        match self {
            Pattern::Triple(t) => t.vars(),
            Pattern::And(l, r) | Pattern::Union(l, r) | Pattern::Opt(l, r) => {
                let mut s = l.domain_vars();
                s.extend(r.domain_vars());
                s
            }
            Pattern::Minus(l, _)
            | Pattern::NotExists(l, _)
            | Pattern::Diff(l, _)
            | Pattern::Filter(l, _) => l.domain_vars(),
            Pattern::Graph(n, q) => {
                let mut s = q.domain_vars();
                if let GraphName::Var(v) = n {
                    s.insert(v.clone());
                }
                s
            }
            Pattern::Unit => BTreeSet::new(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Pattern::Triple(_) | Pattern::Unit => 1,
            Pattern::Filter(p, _) | Pattern::Graph(_, p) => 1 + p.size(),
            _ => {
                let (_, l, r) = self.as_binary().expect("binary node");
                1 + l.size() + r.size()
            }
        }
    }

    /// Nesting depth of the tree.
    pub fn depth(&self) -> usize {
        match self {
            Pattern::Triple(_) | Pattern::Unit => 1,
            Pattern::Filter(p, _) | Pattern::Graph(_, p) => 1 + p.depth(),
            _ => {
                let (_, l, r) = self.as_binary().expect("binary node");
                1 + l.depth().max(r.depth())
            }
        }
    }

    /// True if any node satisfies `pred`.
    pub fn any_node(&self, pred: &impl Fn(&Pattern) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Pattern::Triple(_) | Pattern::Unit => false,
            Pattern::Filter(p, _) | Pattern::Graph(_, p) => p.any_node(pred),
            _ => {
                let (_, l, r) = self.as_binary().expect("binary node");
                l.any_node(pred) || r.any_node(pred)
            }
        }
    }

    /// IRIs named by GRAPH nodes.
    pub fn graph_iris(&self) -> BTreeSet<Iri> {
        let mut out = BTreeSet::new();
        self.visit(&mut |p| {
            if let Pattern::Graph(GraphName::Iri(i), _) = p {
                out.insert(i.clone());
            }
        });
        out
    }

    pub fn mentions_graph(&self) -> bool {
        self.any_node(&|p| matches!(p, Pattern::Graph(..)))
    }

    fn visit(&self, f: &mut impl FnMut(&Pattern)) {
        f(self);
        match self {
            Pattern::Triple(_) | Pattern::Unit => {}
            Pattern::Filter(p, _) | Pattern::Graph(_, p) => p.visit(f),
            _ => {
                let (_, l, r) = self.as_binary().expect("binary node");
                l.visit(f);
                r.visit(f);
            }
        }
    }

    /// μ(P): replaces each variable bound by `m` in triple patterns, filter
    /// constraints and GRAPH selectors.
    pub fn substitute(&self, m: &Mapping) -> Pattern {
        substitute(m, self)
    }

    /// Consistent variable renaming over the whole pattern.
    pub fn rename(&self, renaming: &BTreeMap<Var, Var>) -> Pattern {
        let f = |v: &Var| renaming.get(v).cloned().unwrap_or_else(|| v.clone());
        self.rename_with(&f)
    }

    fn rename_with(&self, f: &impl Fn(&Var) -> Var) -> Pattern {
        match self {
            Pattern::Triple(t) => Pattern::Triple(t.map_positions(|tp| match tp {
                TermPattern::Var(v) => TermPattern::Var(f(v)),
                other => other.clone(),
            })),
            Pattern::Filter(p, c) => Pattern::filter(p.rename_with(f), c.rename(f)),
            Pattern::Graph(n, p) => {
                let n = match n {
                    GraphName::Var(v) => GraphName::Var(f(v)),
                    other => other.clone(),
                };
                Pattern::graph(n, p.rename_with(f))
            }
            Pattern::Unit => Pattern::Unit,
            _ => {
                let (op, l, r) = self.as_binary().expect("binary node");
                op.build(l.rename_with(f), r.rename_with(f))
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Triple(t) => t.fmt(f),
            Pattern::Filter(p, c) => write!(f, "(filter {p} {c})"),
            Pattern::Graph(n, p) => write!(f, "(graph {n} {p})"),
            Pattern::Unit => f.write_str("(unit)"),
            _ => {
                let (op, l, r) = self.as_binary().expect("binary node");
                write!(f, "({} {l} {r})", op.keyword())
            }
        }
    }
}

pub fn var_set(p: &Pattern) -> BTreeSet<Var> {
    p.vars()
}

pub fn substitute(m: &Mapping, p: &Pattern) -> Pattern {
    match p {
        Pattern::Triple(t) => Pattern::Triple(t.map_positions(|tp| match tp {
            TermPattern::Var(v) => m
                .get(v)
                .map(|c| TermPattern::Term(c.clone()))
                .unwrap_or_else(|| tp.clone()),
            other => other.clone(),
        })),
        Pattern::Filter(q, c) => Pattern::filter(substitute(m, q), c.substitute(m)),
        Pattern::Graph(n, q) => {
            let n = match n {
                GraphName::Var(v) => match m.get(v) {
                    Some(Term::Iri(i)) => GraphName::Iri(i.clone()),
                    // a literal can never name a graph; keep the variable,
                    // the join with the binding then fails
                    _ => n.clone(),
                },
                other => other.clone(),
            };
            Pattern::graph(n, substitute(m, q))
        }
        Pattern::Unit => Pattern::Unit,
        _ => {
            let (op, l, r) = p.as_binary().expect("binary node");
            op.build(substitute(m, l), substitute(m, r))
        }
    }
}

/// svar(P): variables guaranteed bound, per the recursive safe-variable rules.
pub fn safe_vars(p: &Pattern) -> BTreeSet<Var> {
    match p {
        Pattern::Triple(t) => t.vars(),
        Pattern::And(l, r) => {
            let mut s = safe_vars(l);
            s.extend(safe_vars(r));
            s
        }
        Pattern::Union(l, r) | Pattern::Opt(l, r) => {
            safe_vars(l).intersection(&safe_vars(r)).cloned().collect()
        }
        Pattern::Filter(l, _)
        | Pattern::Minus(l, _)
        | Pattern::NotExists(l, _)
        | Pattern::Diff(l, _) => safe_vars(l),
        Pattern::Graph(n, q) => {
            let mut s = safe_vars(q);
            if let GraphName::Var(v) = n {
                s.insert(v.clone());
            }
            s
        }
        Pattern::Unit => BTreeSet::new(),
    }
}

/// A NOT-EXISTS occurrence whose correlated variable is unsafe in its right arm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentViolation {
    /// Child indices (0 = left/only child, 1 = right) from the root.
    pub path: Vec<usize>,
    pub var: Var,
    pub subpattern: Pattern,
}

impl fmt::Display for FragmentViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(
            f,
            "correlated variable {} is not safe in the right arm of {} (at /{})",
            self.var,
            self.subpattern,
            path.join("/")
        )
    }
}

/// Membership in the NOT-EXISTS fragment whose correlated variables are all
/// safe in the negated arm. Returns every violation found.
pub fn in_fragment_ex(p: &Pattern) -> (bool, Vec<FragmentViolation>) {
    let mut out = Vec::new();
    collect_violations(p, &mut Vec::new(), &mut out);
    (out.is_empty(), out)
}

fn collect_violations(p: &Pattern, path: &mut Vec<usize>, out: &mut Vec<FragmentViolation>) {
    if let Pattern::NotExists(l, r) = p {
        out.extend(nex_violations(l, r).into_iter().map(|var| FragmentViolation {
            path: path.clone(),
            var,
            subpattern: p.clone(),
        }));
    }
    let children: Vec<&Pattern> = match p {
        Pattern::Triple(_) | Pattern::Unit => vec![],
        Pattern::Filter(q, _) | Pattern::Graph(_, q) => vec![q],
        _ => {
            let (_, l, r) = p.as_binary().expect("binary node");
            vec![l, r]
        }
    };
    for (i, c) in children.into_iter().enumerate() {
        path.push(i);
        collect_violations(c, path, out);
        path.pop();
    }
}

/// Correlated variables of `(l NOT-EXISTS r)` that are not safe in `r`.
pub fn nex_violations(l: &Pattern, r: &Pattern) -> Vec<Var> {
    let safe = safe_vars(r);
    l.vars()
        .intersection(&r.vars())
        .filter(|v| !safe.contains(*v))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("pattern nesting exceeds the evaluation depth limit of {0}")]
    DepthExceeded(usize),
}

/// Evaluation settings over a dataset. The active graph starts as the
/// default graph and is switched by GRAPH.
#[derive(Debug, Clone, Copy)]
pub struct EvalContext<'a> {
    pub dataset: &'a Dataset,
    pub error_mode: ErrorMode,
    pub max_depth: usize,
}

impl<'a> EvalContext<'a> {
    pub fn new(dataset: &'a Dataset) -> Self {
        EvalContext {
            dataset,
            error_mode: ErrorMode::default(),
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }

    pub fn with_error_mode(mut self, mode: ErrorMode) -> Self {
        self.error_mode = mode;
        self
    }

    pub fn with_max_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth;
        self
    }
}

/// ⟦P⟧ over the context's dataset, starting from the default graph.
///
/// If the pattern refers to the auxiliary `:__naf` graph and the dataset
/// does not define it, the graph is injected for this evaluation.
pub fn eval_pattern(p: &Pattern, ctx: &EvalContext<'_>) -> Result<MappingMultiset, EvalError> {
    let naf = Iri::naf_graph();
    if !ctx.dataset.has_naf_graph() && p.graph_iris().contains(&naf) {
        let injected = ctx.dataset.with_naf_graph();
        let ctx = EvalContext {
            dataset: &injected,
            ..*ctx
        };
        return Evaluator { ctx: &ctx }.eval(p, ctx.dataset.default_graph(), 0);
    }
    Evaluator { ctx }.eval(p, ctx.dataset.default_graph(), 0)
}

/// ⟦P⟧ with every cardinality collapsed to one.
pub fn eval_set_semantics(
    p: &Pattern,
    ctx: &EvalContext<'_>,
) -> Result<MappingMultiset, EvalError> {
    Ok(eval_pattern(p, ctx)?.distinct())
}

struct Evaluator<'c, 'a> {
    ctx: &'c EvalContext<'a>,
}

impl Evaluator<'_, '_> {
    fn eval(&self, p: &Pattern, active: &Graph, depth: usize) -> Result<MappingMultiset, EvalError> {
        if depth >= self.ctx.max_depth {
            return Err(EvalError::DepthExceeded(self.ctx.max_depth));
        }
        let d = depth + 1;
        let mode = self.ctx.error_mode;
        Ok(match p {
            Pattern::Triple(t) => active.iter().filter_map(|tr| t.match_triple(tr)).collect(),
            Pattern::Unit => MappingMultiset::unit(),
            Pattern::And(l, r) => algebra::join(&self.eval(l, active, d)?, &self.eval(r, active, d)?),
            Pattern::Union(l, r) => {
                algebra::union(&self.eval(l, active, d)?, &self.eval(r, active, d)?)
            }
            Pattern::Opt(l, r) => {
                let left = self.eval(l, active, d)?;
                // the right arm's syntactic shape selects the left-join condition
                match r.as_ref() {
                    Pattern::Filter(inner, c) => algebra::leftjoin(
                        &left,
                        &self.eval(inner, active, d + 1)?,
                        &c.to_formula(),
                        mode,
                    ),
                    _ => algebra::leftjoin(&left, &self.eval(r, active, d)?, &Formula::truth(), mode),
                }
            }
            Pattern::Minus(l, r) => {
                algebra::minus(&self.eval(l, active, d)?, &self.eval(r, active, d)?)
            }
            Pattern::Diff(l, r) => {
                algebra::sdiff(&self.eval(l, active, d)?, &self.eval(r, active, d)?)
            }
            Pattern::NotExists(l, r) => {
                let left = self.eval(l, active, d)?;
                let mut out = MappingMultiset::new();
                for (m, n) in &left {
                    if self.eval(&substitute(m, r), active, d)?.is_empty() {
                        out.add(m.clone(), *n);
                    }
                }
                out
            }
            Pattern::Filter(q, c) => algebra::select(&self.eval(q, active, d)?, &c.to_formula()),
            Pattern::Graph(GraphName::Iri(u), q) => match self.ctx.dataset.lookup(u) {
                Ok(g) => self.eval(q, g, d)?,
                Err(_) => MappingMultiset::new(),
            },
            Pattern::Graph(GraphName::Var(x), q) => {
                let mut out = MappingMultiset::new();
                for (name, g) in self.ctx.dataset.named_graphs() {
                    let binding = MappingMultiset::from_iter([Mapping::single(
                        x.clone(),
                        Term::Iri(name.clone()),
                    )]);
                    out = algebra::union(&out, &algebra::join(&self.eval(q, g, d)?, &binding));
                }
                out
            }
        })
    }
}
