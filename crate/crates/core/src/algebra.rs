//! The SPARQL algebra over multisets of mappings, plus simple difference.
//!
//! The core algebra is the subset {project, select, join, union, sdiff};
//! `rename` is the variable-copy step used when simulating minus and is
//! admitted alongside it.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, TruthValue};
use crate::solution::{merge, Mapping, MappingMultiset};
use crate::term::Var;

/// How filter errors are treated by the W3C difference operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ErrorMode {
    /// Errors count as false (the published errata reading). Default.
    #[default]
    ErrorAsFalse,
    /// Only an explicit `false` lets a compatible right mapping through.
    Faithful,
}

impl ErrorMode {
    pub fn from_flag(error_as_false: bool) -> Self {
        if error_as_false {
            ErrorMode::ErrorAsFalse
        } else {
            ErrorMode::Faithful
        }
    }

    pub fn error_as_false(self) -> bool {
        self == ErrorMode::ErrorAsFalse
    }
}

/// π_W
pub fn project(o: &MappingMultiset, w: &BTreeSet<Var>) -> MappingMultiset {
    MappingMultiset::from_entries(o.iter().map(|(m, n)| (m.restrict(w), *n)))
}

/// σ_F: keeps mappings on which `f` is true.
pub fn select(o: &MappingMultiset, f: &Formula) -> MappingMultiset {
    MappingMultiset::from_entries(
        o.iter()
            .filter(|(m, _)| f.eval(m).is_true())
            .map(|(m, n)| (m.clone(), *n)),
    )
}

/// Ω1 ⋈ Ω2. Iterates over compatible pairs, accumulating card products, so
/// a merged mapping with several decompositions receives the sum.
pub fn join(o1: &MappingMultiset, o2: &MappingMultiset) -> MappingMultiset {
    let mut out = MappingMultiset::new();
    for (m1, n1) in o1 {
        for (m2, n2) in o2 {
            if let Ok(m) = merge(m1, m2) {
                out.add(m, n1 * n2);
            }
        }
    }
    out
}

/// Ω1 ∖_F Ω2 (W3C difference).
pub fn diff(
    o1: &MappingMultiset,
    o2: &MappingMultiset,
    f: &Formula,
    mode: ErrorMode,
) -> MappingMultiset {
    keep_left(o1, |m1| {
        o2.mappings().all(|m2| match merge(m1, m2) {
            Err(_) => true,
            Ok(m) => match f.eval(&m) {
                TruthValue::False => true,
                TruthValue::Error => mode.error_as_false(),
                TruthValue::True => false,
            },
        })
    })
}

/// Additive bag union.
pub fn union(o1: &MappingMultiset, o2: &MappingMultiset) -> MappingMultiset {
    let mut out = o1.clone();
    for (m, n) in o2 {
        out.add(m.clone(), *n);
    }
    out
}

/// Ω1 − Ω2: a right mapping eliminates μ1 only if it is compatible and
/// shares at least one variable with it.
pub fn minus(o1: &MappingMultiset, o2: &MappingMultiset) -> MappingMultiset {
    keep_left(o1, |m1| {
        o2.mappings()
            .all(|m2| !m1.compatible(m2) || !m1.shares_domain_with(m2))
    })
}

/// Ω1 ∖ Ω2 (simple difference): keeps μ1 iff it is incompatible with every
/// right mapping.
pub fn sdiff(o1: &MappingMultiset, o2: &MappingMultiset) -> MappingMultiset {
    keep_left(o1, |m1| o2.mappings().all(|m2| !m1.compatible(m2)))
}

/// Ω1 ⟕_F Ω2 = σ_F(Ω1 ⋈ Ω2) ∪ (Ω1 ∖_F Ω2).
pub fn leftjoin(
    o1: &MappingMultiset,
    o2: &MappingMultiset,
    f: &Formula,
    mode: ErrorMode,
) -> MappingMultiset {
    union(&select(&join(o1, o2), f), &diff(o1, o2, f, mode))
}

/// Renames variables in every mapping of the multiset.
pub fn rename(o: &MappingMultiset, renaming: &BTreeMap<Var, Var>) -> MappingMultiset {
    MappingMultiset::from_entries(o.iter().map(|(m, n)| (m.rename(renaming), *n)))
}

fn keep_left(o1: &MappingMultiset, keep: impl Fn(&Mapping) -> bool) -> MappingMultiset {
    MappingMultiset::from_entries(
        o1.iter()
            .filter(|(m, _)| keep(m))
            .map(|(m, n)| (m.clone(), *n)),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("unbound algebra input {0:?}")]
    UnboundInput(String),
}

/// An algebra expression over named multiset inputs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AlgebraExpr {
    Input(String),
    Project(BTreeSet<Var>, Box<AlgebraExpr>),
    Select(Formula, Box<AlgebraExpr>),
    Join(Box<AlgebraExpr>, Box<AlgebraExpr>),
    Diff(Box<AlgebraExpr>, Box<AlgebraExpr>, Formula),
    Union(Box<AlgebraExpr>, Box<AlgebraExpr>),
    Minus(Box<AlgebraExpr>, Box<AlgebraExpr>),
    LeftJoin(Box<AlgebraExpr>, Box<AlgebraExpr>, Formula),
    Sdiff(Box<AlgebraExpr>, Box<AlgebraExpr>),
    Rename(BTreeMap<Var, Var>, Box<AlgebraExpr>),
}

impl AlgebraExpr {
    pub fn input(name: &str) -> Self {
        AlgebraExpr::Input(name.to_owned())
    }

    pub fn project(w: BTreeSet<Var>, e: AlgebraExpr) -> Self {
        AlgebraExpr::Project(w, Box::new(e))
    }

    pub fn select(f: Formula, e: AlgebraExpr) -> Self {
        AlgebraExpr::Select(f, Box::new(e))
    }

    pub fn join(a: AlgebraExpr, b: AlgebraExpr) -> Self {
        AlgebraExpr::Join(Box::new(a), Box::new(b))
    }

    pub fn diff(a: AlgebraExpr, b: AlgebraExpr, f: Formula) -> Self {
        AlgebraExpr::Diff(Box::new(a), Box::new(b), f)
    }

    pub fn union(a: AlgebraExpr, b: AlgebraExpr) -> Self {
        AlgebraExpr::Union(Box::new(a), Box::new(b))
    }

    pub fn minus(a: AlgebraExpr, b: AlgebraExpr) -> Self {
        AlgebraExpr::Minus(Box::new(a), Box::new(b))
    }

    pub fn leftjoin(a: AlgebraExpr, b: AlgebraExpr, f: Formula) -> Self {
        AlgebraExpr::LeftJoin(Box::new(a), Box::new(b), f)
    }

    pub fn sdiff(a: AlgebraExpr, b: AlgebraExpr) -> Self {
        AlgebraExpr::Sdiff(Box::new(a), Box::new(b))
    }

    pub fn rename(r: BTreeMap<Var, Var>, e: AlgebraExpr) -> Self {
        AlgebraExpr::Rename(r, Box::new(e))
    }

    /// True when the expression only uses core operators (and renaming).
    pub fn is_core(&self) -> bool {
        self.count_non_core() == 0
    }

    /// Number of diff, minus and leftjoin nodes.
    pub fn count_non_core(&self) -> usize {
        let own = matches!(
            self,
            AlgebraExpr::Diff(..) | AlgebraExpr::Minus(..) | AlgebraExpr::LeftJoin(..)
        ) as usize;
        own + self.children().iter().map(|c| c.count_non_core()).sum::<usize>()
    }

    pub fn children(&self) -> Vec<&AlgebraExpr> {
        use AlgebraExpr::*;
        match self {
            Input(_) => vec![],
            Project(_, e) | Select(_, e) | Rename(_, e) => vec![e],
            Join(a, b) | Diff(a, b, _) | Union(a, b) | Minus(a, b) | LeftJoin(a, b, _)
            | Sdiff(a, b) => vec![a, b],
        }
    }

    pub fn inputs(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_inputs(&mut out);
        out
    }

    fn collect_inputs(&self, out: &mut BTreeSet<String>) {
        if let AlgebraExpr::Input(n) = self {
            out.insert(n.clone());
        }
        for c in self.children() {
            c.collect_inputs(out);
        }
    }

    /// Every variable that can occur in a result mapping, given the possible
    /// variables of each input.
    pub fn domain_bound(&self, schema: &BTreeMap<String, BTreeSet<Var>>) -> BTreeSet<Var> {
        use AlgebraExpr::*;
        match self {
            Input(n) => schema.get(n).cloned().unwrap_or_default(),
            Project(w, e) => e.domain_bound(schema).intersection(w).cloned().collect(),
            Select(_, e) => e.domain_bound(schema),
            Rename(r, e) => e
                .domain_bound(schema)
                .into_iter()
                .map(|v| r.get(&v).cloned().unwrap_or(v))
                .collect(),
            Join(a, b) | Union(a, b) | LeftJoin(a, b, _) => {
                let mut d = a.domain_bound(schema);
                d.extend(b.domain_bound(schema));
                d
            }
            Diff(a, _, _) | Minus(a, _) | Sdiff(a, _) => a.domain_bound(schema),
        }
    }

    /// Every variable mentioned anywhere: schema variables of the inputs,
    /// projection lists, formulas and renamings.
    pub fn mentioned_vars(&self, schema: &BTreeMap<String, BTreeSet<Var>>) -> BTreeSet<Var> {
        use AlgebraExpr::*;
        let mut out = BTreeSet::new();
        match self {
            Input(n) => out.extend(schema.get(n).cloned().unwrap_or_default()),
            Project(w, _) => out.extend(w.iter().cloned()),
            Select(f, _) | Diff(_, _, f) | LeftJoin(_, _, f) => f.collect_vars(&mut out),
            Rename(r, _) => out.extend(r.iter().flat_map(|(a, b)| [a.clone(), b.clone()])),
            _ => {}
        }
        for c in self.children() {
            out.extend(c.mentioned_vars(schema));
        }
        out
    }
}

impl fmt::Display for AlgebraExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AlgebraExpr::*;
        match self {
            Input(n) => f.write_str(n),
            Project(w, e) => {
                f.write_str("(project (")?;
                for (i, v) in w.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ") {e})")
            }
            Select(c, e) => write!(f, "(select {c} {e})"),
            Join(a, b) => write!(f, "(join {a} {b})"),
            Diff(a, b, c) => write!(f, "(diff {a} {b} {c})"),
            Union(a, b) => write!(f, "(union {a} {b})"),
            Minus(a, b) => write!(f, "(minus {a} {b})"),
            LeftJoin(a, b, c) => write!(f, "(leftjoin {a} {b} {c})"),
            Sdiff(a, b) => write!(f, "(sdiff {a} {b})"),
            Rename(r, e) => {
                f.write_str("(rename (")?;
                for (i, (a, b)) in r.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "({a} {b})")?;
                }
                write!(f, ") {e})")
            }
        }
    }
}

/// Bottom-up evaluation of an algebra expression.
pub fn eval_algebra(
    e: &AlgebraExpr,
    env: &BTreeMap<String, MappingMultiset>,
    mode: ErrorMode,
) -> Result<MappingMultiset, AlgebraError> {
    eval_ref(e, env, mode).map(Cow::into_owned)
}

// Inputs are borrowed from the environment instead of cloned at every leaf.
fn eval_ref<'a>(
    e: &AlgebraExpr,
    env: &'a BTreeMap<String, MappingMultiset>,
    mode: ErrorMode,
) -> Result<Cow<'a, MappingMultiset>, AlgebraError> {
    use AlgebraExpr::*;
    let ev = |x: &AlgebraExpr| eval_ref(x, env, mode);
    Ok(Cow::Owned(match e {
        Input(n) => {
            return env
                .get(n)
                .map(Cow::Borrowed)
                .ok_or_else(|| AlgebraError::UnboundInput(n.clone()))
        }
        Project(w, x) => project(&*ev(x)?, w),
        Select(f, x) => select(&*ev(x)?, f),
        Join(a, b) => join(&*ev(a)?, &*ev(b)?),
        Diff(a, b, f) => diff(&*ev(a)?, &*ev(b)?, f, mode),
        Union(a, b) => union(&*ev(a)?, &*ev(b)?),
        Minus(a, b) => minus(&*ev(a)?, &*ev(b)?),
        LeftJoin(a, b, f) => leftjoin(&*ev(a)?, &*ev(b)?, f, mode),
        Sdiff(a, b) => sdiff(&*ev(a)?, &*ev(b)?),
        Rename(r, x) => rename(&*ev(x)?, r),
    }))
}
