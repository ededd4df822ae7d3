//! Selection formulas, filter constraints and their three-valued evaluation.

use std::collections::BTreeSet;
use std::fmt;

use crate::solution::Mapping;
use crate::term::{Term, TermPattern, Var};

/// The three truth values of filter evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TruthValue {
    True,
    False,
    Error,
}

impl TruthValue {
    pub const ALL: [TruthValue; 3] = [TruthValue::True, TruthValue::False, TruthValue::Error];

    pub fn and(self, other: TruthValue) -> TruthValue {
        use TruthValue::*;
        match (self, other) {
            (False, _) | (_, False) => False,
            (True, True) => True,
            _ => Error,
        }
    }

    pub fn or(self, other: TruthValue) -> TruthValue {
        use TruthValue::*;
        match (self, other) {
            (True, _) | (_, True) => True,
            (False, False) => False,
            _ => Error,
        }
    }

    pub fn is_true(self) -> bool {
        self == TruthValue::True
    }
}

impl std::ops::Not for TruthValue {
    type Output = TruthValue;

    fn not(self) -> TruthValue {
        match self {
            TruthValue::True => TruthValue::False,
            TruthValue::False => TruthValue::True,
            TruthValue::Error => TruthValue::Error,
        }
    }
}

impl From<bool> for TruthValue {
    fn from(b: bool) -> Self {
        if b {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthValue::True => "true",
            TruthValue::False => "false",
            TruthValue::Error => "error",
        })
    }
}

/// Atomic conditions shared by formulas and filter constraints.
///
/// `Eq` accepts any pair of term positions: besides `?X = c` and `?X = ?Y`
/// it covers the constant-vs-constant comparisons produced by substituting
/// a mapping into a filter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Eq(TermPattern, TermPattern),
    Bound(Var),
    True,
    False,
}

impl Atom {
    pub fn eq_const(var: &str, iri: &str) -> Atom {
        Atom::Eq(TermPattern::var(var), TermPattern::iri(iri))
    }

    pub fn eq_vars(x: &str, y: &str) -> Atom {
        Atom::Eq(TermPattern::var(x), TermPattern::var(y))
    }

    pub fn bound(var: &str) -> Atom {
        Atom::Bound(Var::new(var))
    }

    pub fn eval(&self, m: &Mapping) -> TruthValue {
        match self {
            Atom::True => TruthValue::True,
            Atom::False => TruthValue::False,
            Atom::Bound(v) => m.is_bound(v).into(),
            Atom::Eq(l, r) => match (resolve(l, m), resolve(r, m)) {
                (Some(a), Some(b)) => (a == b).into(),
                _ => TruthValue::Error,
            },
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Atom::Eq(l, r) => {
                for side in [l, r] {
                    if let TermPattern::Var(v) = side {
                        out.insert(v.clone());
                    }
                }
            }
            Atom::Bound(v) => {
                out.insert(v.clone());
            }
            Atom::True | Atom::False => {}
        }
    }

    fn substitute(&self, m: &Mapping) -> Atom {
        let sub = |tp: &TermPattern| match tp {
            TermPattern::Var(v) => m
                .get(v)
                .map(|t| TermPattern::Term(t.clone()))
                .unwrap_or_else(|| tp.clone()),
            TermPattern::Term(_) => tp.clone(),
        };
        match self {
            Atom::Eq(l, r) => Atom::Eq(sub(l), sub(r)),
            // a substituted variable is bound by construction
            Atom::Bound(v) if m.is_bound(v) => Atom::True,
            other => other.clone(),
        }
    }

    fn rename(&self, f: &impl Fn(&Var) -> Var) -> Atom {
        let ren = |tp: &TermPattern| match tp {
            TermPattern::Var(v) => TermPattern::Var(f(v)),
            t => t.clone(),
        };
        match self {
            Atom::Eq(l, r) => Atom::Eq(ren(l), ren(r)),
            Atom::Bound(v) => Atom::Bound(f(v)),
            other => other.clone(),
        }
    }
}

fn resolve<'a>(tp: &'a TermPattern, m: &'a Mapping) -> Option<&'a Term> {
    match tp {
        TermPattern::Term(t) => Some(t),
        TermPattern::Var(v) => m.get(v),
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Eq(l, r) => write!(f, "(= {l} {r})"),
            Atom::Bound(v) => write!(f, "(bound {v})"),
            Atom::True => f.write_str("true"),
            Atom::False => f.write_str("false"),
        }
    }
}

/// A selection formula, the algebra-level condition used by σ, ∖_F and ⟕_F.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn truth() -> Formula {
        Formula::Atom(Atom::True)
    }

    pub fn falsity() -> Formula {
        Formula::Atom(Atom::False)
    }

    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::truth)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or_else(Formula::falsity)
    }

    pub fn eval(&self, m: &Mapping) -> TruthValue {
        eval_formula(self, m)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Atom(a) => a.collect_vars(out),
            Formula::Not(f) => f.collect_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn rename(&self, f: &impl Fn(&Var) -> Var) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(a.rename(f)),
            Formula::Not(x) => Formula::not(x.rename(f)),
            Formula::And(a, b) => Formula::and(a.rename(f), b.rename(f)),
            Formula::Or(a, b) => Formula::or(a.rename(f), b.rename(f)),
        }
    }

    /// A formula that is true exactly where `self` is true and false
    /// everywhere else (it never evaluates to error).
    pub fn holds(&self) -> Formula {
        match self {
            Formula::Atom(a) => match a {
                Atom::True | Atom::False | Atom::Bound(_) => self.clone(),
                Atom::Eq(l, r) => Formula::and(defined(l, r), self.clone()),
            },
            Formula::Not(f) => f.fails(),
            Formula::And(a, b) => Formula::and(a.holds(), b.holds()),
            Formula::Or(a, b) => Formula::or(a.holds(), b.holds()),
        }
    }

    /// A formula that is true exactly where `self` is false, and false
    /// everywhere else.
    pub fn fails(&self) -> Formula {
        match self {
            Formula::Atom(a) => match a {
                Atom::True => Formula::falsity(),
                Atom::False => Formula::truth(),
                Atom::Bound(_) => Formula::not(self.clone()),
                Atom::Eq(l, r) => Formula::and(defined(l, r), Formula::not(self.clone())),
            },
            Formula::Not(f) => f.holds(),
            Formula::And(a, b) => Formula::or(a.fails(), b.fails()),
            Formula::Or(a, b) => Formula::and(a.fails(), b.fails()),
        }
    }

    /// A formula that is true exactly where `self` evaluates to error.
    pub fn errs(&self) -> Formula {
        Formula::and(Formula::not(self.holds()), Formula::not(self.fails()))
    }
}

/// `bound` guards for the variable operands of an equality atom.
fn defined(l: &TermPattern, r: &TermPattern) -> Formula {
    Formula::conjunction(
        [l, r]
            .into_iter()
            .filter_map(TermPattern::as_var)
            .map(|v| Formula::Atom(Atom::Bound(v.clone()))),
    )
}

pub fn eval_formula(f: &Formula, m: &Mapping) -> TruthValue {
    match f {
        Formula::Atom(a) => a.eval(m),
        Formula::Not(x) => !eval_formula(x, m),
        Formula::And(a, b) => eval_formula(a, m).and(eval_formula(b, m)),
        Formula::Or(a, b) => eval_formula(a, m).or(eval_formula(b, m)),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => a.fmt(f),
            Formula::Not(x) => write!(f, "(not {x})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
        }
    }
}

/// A filter constraint as written inside a FILTER pattern: `!C`, `C1 || C2`,
/// `C1 && C2` over the same atoms as selection formulas.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FilterConstraint {
    Atom(Atom),
    Not(Box<FilterConstraint>),
    Or(Box<FilterConstraint>, Box<FilterConstraint>),
    And(Box<FilterConstraint>, Box<FilterConstraint>),
}

impl FilterConstraint {
    pub fn atom(a: Atom) -> Self {
        FilterConstraint::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: FilterConstraint) -> Self {
        FilterConstraint::Not(Box::new(c))
    }

    pub fn and(a: FilterConstraint, b: FilterConstraint) -> Self {
        FilterConstraint::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: FilterConstraint, b: FilterConstraint) -> Self {
        FilterConstraint::Or(Box::new(a), Box::new(b))
    }

    pub fn to_formula(&self) -> Formula {
        constraint_to_formula(self)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.to_formula().vars()
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            FilterConstraint::Atom(a) => a.collect_vars(out),
            FilterConstraint::Not(c) => c.collect_vars(out),
            FilterConstraint::And(a, b) | FilterConstraint::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn substitute(&self, m: &Mapping) -> FilterConstraint {
        self.map_atoms(&|a| a.substitute(m))
    }

    pub fn rename(&self, f: &impl Fn(&Var) -> Var) -> FilterConstraint {
        self.map_atoms(&|a| a.rename(f))
    }

    fn map_atoms(&self, f: &impl Fn(&Atom) -> Atom) -> FilterConstraint {
        match self {
            FilterConstraint::Atom(a) => FilterConstraint::Atom(f(a)),
            FilterConstraint::Not(c) => FilterConstraint::not(c.map_atoms(f)),
            FilterConstraint::And(a, b) => FilterConstraint::and(a.map_atoms(f), b.map_atoms(f)),
            FilterConstraint::Or(a, b) => FilterConstraint::or(a.map_atoms(f), b.map_atoms(f)),
        }
    }
}

impl From<Atom> for FilterConstraint {
    fn from(a: Atom) -> Self {
        FilterConstraint::Atom(a)
    }
}

impl fmt::Display for FilterConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterConstraint::Atom(a) => a.fmt(f),
            FilterConstraint::Not(c) => write!(f, "(not {c})"),
            FilterConstraint::And(a, b) => write!(f, "(and {a} {b})"),
            FilterConstraint::Or(a, b) => write!(f, "(or {a} {b})"),
        }
    }
}

/// f(C): the selection formula denoted by a filter constraint.
pub fn constraint_to_formula(c: &FilterConstraint) -> Formula {
    match c {
        FilterConstraint::Atom(a) => Formula::Atom(a.clone()),
        FilterConstraint::Not(x) => Formula::not(constraint_to_formula(x)),
        FilterConstraint::And(a, b) => {
            Formula::and(constraint_to_formula(a), constraint_to_formula(b))
        }
        FilterConstraint::Or(a, b) => Formula::or(constraint_to_formula(a), constraint_to_formula(b)),
    }
}

/// Inverse of [`constraint_to_formula`].
pub fn formula_to_constraint(f: &Formula) -> FilterConstraint {
    match f {
        Formula::Atom(a) => FilterConstraint::Atom(a.clone()),
        Formula::Not(x) => FilterConstraint::not(formula_to_constraint(x)),
        Formula::And(a, b) => FilterConstraint::and(formula_to_constraint(a), formula_to_constraint(b)),
        Formula::Or(a, b) => FilterConstraint::or(formula_to_constraint(a), formula_to_constraint(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use TruthValue::*;

    fn tv_formula(t: TruthValue) -> Formula {
        // under μ0: true, false, and an unbound comparison for error
        match t {
            True => Formula::truth(),
            False => Formula::falsity(),
            Error => Formula::atom(Atom::eq_const("X", ":a")),
        }
    }

    #[test]
    fn connective_examples() {
        let mu0 = Mapping::empty();
        assert_eq!(Formula::and(tv_formula(Error), tv_formula(False)).eval(&mu0), False);
        assert_eq!(Formula::or(tv_formula(Error), tv_formula(True)).eval(&mu0), True);
        assert_eq!(Formula::not(tv_formula(Error)).eval(&mu0), Error);
    }

    #[test]
    fn atom_examples() {
        assert_eq!(Atom::eq_const("X", ":a").eval(&Mapping::empty()), Error);
        assert_eq!(
            Atom::bound("X").eval(&Mapping::from_pairs(&[("Y", ":b")])),
            False
        );
        let m = Mapping::from_pairs(&[("X", ":a"), ("Y", ":a"), ("Z", ":b")]);
        assert_eq!(Atom::eq_const("X", ":a").eval(&m), True);
        assert_eq!(Atom::eq_const("Z", ":a").eval(&m), False);
        assert_eq!(Atom::eq_vars("X", "Y").eval(&m), True);
        assert_eq!(Atom::eq_vars("X", "Z").eval(&m), False);
        assert_eq!(Atom::eq_vars("X", "W").eval(&m), Error);
        let cc = Atom::Eq(TermPattern::iri(":a"), TermPattern::iri(":a"));
        assert_eq!(cc.eval(&Mapping::empty()), True);
    }

    #[test]
    fn constraint_translation() {
        let c = FilterConstraint::not(Atom::bound("X").into());
        assert_eq!(c.to_formula(), Formula::not(Formula::atom(Atom::bound("X"))));
        let c = FilterConstraint::and(Atom::eq_const("X", ":a").into(), Atom::eq_vars("X", "Y").into());
        assert_eq!(
            c.to_formula(),
            Formula::and(
                Formula::atom(Atom::eq_const("X", ":a")),
                Formula::atom(Atom::eq_vars("X", "Y"))
            )
        );
        let c: FilterConstraint = Atom::eq_const("X", ":a").into();
        assert_eq!(c.to_formula(), Formula::atom(Atom::eq_const("X", ":a")));
        assert_eq!(formula_to_constraint(&c.to_formula()), c);
    }

    #[test]
    fn excluded_middle_is_error_only_on_error() {
        let f = Formula::atom(Atom::eq_const("X", ":a"));
        let lem = Formula::or(f.clone(), Formula::not(f));
        assert_eq!(lem.eval(&Mapping::from_pairs(&[("X", ":a")])), True);
        assert_eq!(lem.eval(&Mapping::from_pairs(&[("X", ":b")])), True);
        assert_eq!(lem.eval(&Mapping::empty()), Error);
    }

    #[test]
    fn substitution_turns_bound_into_true() {
        let c = FilterConstraint::and(Atom::bound("X").into(), Atom::eq_const("X", ":a").into());
        let s = c.substitute(&Mapping::from_pairs(&[("X", ":a")]));
        assert_eq!(
            s,
            FilterConstraint::and(
                Atom::True.into(),
                Atom::Eq(TermPattern::iri(":a"), TermPattern::iri(":a")).into()
            )
        );
    }

    fn arb_atom() -> impl Strategy<Value = Atom> {
        let var = prop::sample::select(vec!["X", "Y"]);
        let cst = prop::sample::select(vec![":a", ":b"]);
        prop_oneof![
            (var.clone(), cst).prop_map(|(v, c)| Atom::eq_const(v, c)),
            (var.clone(), var.clone()).prop_map(|(x, y)| Atom::eq_vars(x, y)),
            var.prop_map(Atom::bound),
            Just(Atom::True),
            Just(Atom::False),
        ]
    }

    pub(crate) fn arb_formula() -> impl Strategy<Value = Formula> {
        arb_atom().prop_map(Formula::Atom).prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
            ]
        })
    }

    fn arb_mapping() -> impl Strategy<Value = Mapping> {
        let slot = prop::option::of(prop::sample::select(vec![":a", ":b"]));
        (slot.clone(), slot).prop_map(|(x, y)| {
            let mut m = Mapping::empty();
            if let Some(c) = x {
                m.bind(Var::new("X"), Term::iri(c));
            }
            if let Some(c) = y {
                m.bind(Var::new("Y"), Term::iri(c));
            }
            m
        })
    }

    proptest! {
        #[test]
        fn double_negation(f in arb_formula(), m in arb_mapping()) {
            prop_assert_eq!(Formula::not(Formula::not(f.clone())).eval(&m), f.eval(&m));
        }

        #[test]
        fn connectives_commute(f in arb_formula(), g in arb_formula(), m in arb_mapping()) {
            prop_assert_eq!(Formula::and(f.clone(), g.clone()).eval(&m), Formula::and(g.clone(), f.clone()).eval(&m));
            prop_assert_eq!(Formula::or(f.clone(), g.clone()).eval(&m), Formula::or(g, f).eval(&m));
        }

        #[test]
        fn truth_splitting_formulas(f in arb_formula(), m in arb_mapping()) {
            let v = f.eval(&m);
            prop_assert_eq!(f.holds().eval(&m), TruthValue::from(v == True));
            prop_assert_eq!(f.fails().eval(&m), TruthValue::from(v == False));
            prop_assert_eq!(f.errs().eval(&m), TruthValue::from(v == Error));
        }

        #[test]
        fn constraint_round_trip(f in arb_formula()) {
            prop_assert_eq!(formula_to_constraint(&f).to_formula(), f);
        }
    }
}
