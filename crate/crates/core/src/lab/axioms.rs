//! Set-theoretic difference axioms (a)–(l) instantiated with DIFF or MINUS.
//!
//! Difference maps to the chosen operator, intersection to join and union to
//! bag union. Slots A, B, C range over the fixtures; the two-slot axioms run
//! 25 cases, (k) and (l) run 125.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::fixtures::{fixture_dataset, Fixture};
use super::{LabError, Semantics};
use crate::algebra::{eval_algebra, join, minus, sdiff, union, AlgebraExpr, ErrorMode};
use crate::pattern::{eval_pattern, EvalContext, Pattern};
use crate::solution::MappingMultiset;
use crate::term::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
    J,
    K,
    L,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum NegOp {
    Diff,
    Minus,
}

impl fmt::Display for NegOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NegOp::Diff => "DIFF",
            NegOp::Minus => "MINUS",
        })
    }
}

impl FromStr for NegOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "diff" => Ok(NegOp::Diff),
            "minus" => Ok(NegOp::Minus),
            other => Err(format!("unknown operator {other:?} (expected diff or minus)")),
        }
    }
}

impl NegOp {
    fn expr(self, a: AlgebraExpr, b: AlgebraExpr) -> AlgebraExpr {
        match self {
            NegOp::Diff => AlgebraExpr::sdiff(a, b),
            NegOp::Minus => AlgebraExpr::minus(a, b),
        }
    }

    fn pattern(self, a: Pattern, b: Pattern) -> Pattern {
        match self {
            NegOp::Diff => Pattern::diff(a, b),
            NegOp::Minus => Pattern::minus(a, b),
        }
    }

    pub fn apply(self, a: &MappingMultiset, b: &MappingMultiset) -> MappingMultiset {
        match self {
            NegOp::Diff => sdiff(a, b),
            NegOp::Minus => minus(a, b),
        }
    }
}

/// The three set operators an axiom is built from, so one definition
/// serves algebra expressions and patterns alike.
trait SetOps {
    type T: Clone;
    fn neg(&self, a: Self::T, b: Self::T) -> Self::T;
    fn inter(&self, a: Self::T, b: Self::T) -> Self::T;
    fn uni(&self, a: Self::T, b: Self::T) -> Self::T;
}

struct ExprOps(NegOp);

impl SetOps for ExprOps {
    type T = AlgebraExpr;
    fn neg(&self, a: AlgebraExpr, b: AlgebraExpr) -> AlgebraExpr {
        self.0.expr(a, b)
    }
    fn inter(&self, a: AlgebraExpr, b: AlgebraExpr) -> AlgebraExpr {
        AlgebraExpr::join(a, b)
    }
    fn uni(&self, a: AlgebraExpr, b: AlgebraExpr) -> AlgebraExpr {
        AlgebraExpr::union(a, b)
    }
}

struct PatternOps(NegOp);

impl SetOps for PatternOps {
    type T = Pattern;
    fn neg(&self, a: Pattern, b: Pattern) -> Pattern {
        self.0.pattern(a, b)
    }
    fn inter(&self, a: Pattern, b: Pattern) -> Pattern {
        Pattern::and(a, b)
    }
    fn uni(&self, a: Pattern, b: Pattern) -> Pattern {
        Pattern::union(a, b)
    }
}

impl Axiom {
    pub const ALL: [Axiom; 12] = [
        Axiom::A,
        Axiom::B,
        Axiom::C,
        Axiom::D,
        Axiom::E,
        Axiom::F,
        Axiom::G,
        Axiom::H,
        Axiom::I,
        Axiom::J,
        Axiom::K,
        Axiom::L,
    ];

    pub fn letter(self) -> char {
        (b'a' + self as u8) as char
    }

    pub fn slot_count(self) -> usize {
        match self {
            Axiom::K | Axiom::L => 3,
            _ => 2,
        }
    }

    /// Set-theoretic statement of the axiom.
    pub fn statement(self) -> &'static str {
        match self {
            Axiom::A => "A \\ A = ∅",
            Axiom::B => "A \\ ∅ = A",
            Axiom::C => "∅ \\ A = ∅",
            Axiom::D => "A \\ (A \\ (A \\ B)) = A \\ B",
            Axiom::E => "(A ∩ B) \\ B = ∅",
            Axiom::F => "(A \\ B) ∩ B = ∅",
            Axiom::G => "A \\ (A ∩ B) = A \\ B",
            Axiom::H => "A ∩ (A \\ B) = A \\ B",
            Axiom::I => "(A \\ B) ∪ B = A ∪ B",
            Axiom::J => "(A ∪ B) \\ B = A \\ B",
            Axiom::K => "A \\ (B ∩ C) = (A \\ B) ∪ (A \\ C)",
            Axiom::L => "A \\ (B ∪ C) = (A \\ B) ∩ (A \\ C)",
        }
    }

    fn sides<O: SetOps>(self, o: &O, a: O::T, b: O::T, c: O::T, empty: O::T) -> (O::T, O::T) {
        let (a2, b2) = (a.clone(), b.clone());
        match self {
            Axiom::A => (o.neg(a.clone(), a), empty),
            Axiom::B => (o.neg(a.clone(), empty), a),
            Axiom::C => (o.neg(empty.clone(), a), empty),
            Axiom::D => {
                let inner = o.neg(a.clone(), o.neg(a.clone(), b.clone()));
                (o.neg(a2, inner), o.neg(a, b))
            }
            Axiom::E => (o.neg(o.inter(a, b.clone()), b), empty),
            Axiom::F => (o.inter(o.neg(a, b.clone()), b), empty),
            Axiom::G => (o.neg(a.clone(), o.inter(a2, b.clone())), o.neg(a, b)),
            Axiom::H => (o.inter(a.clone(), o.neg(a2, b.clone())), o.neg(a, b)),
            Axiom::I => (o.uni(o.neg(a, b.clone()), b.clone()), o.uni(a2, b2)),
            Axiom::J => (o.neg(o.uni(a.clone(), b.clone()), b.clone()), o.neg(a, b)),
            Axiom::K => (
                o.neg(a.clone(), o.inter(b.clone(), c.clone())),
                o.uni(o.neg(a2, b), o.neg(a, c)),
            ),
            Axiom::L => (
                o.neg(a.clone(), o.uni(b.clone(), c.clone())),
                o.inter(o.neg(a2, b), o.neg(a, c)),
            ),
        }
    }

    /// Both sides over the inputs `A`, `B`, `C` and `EMPTY`.
    pub fn exprs(self, op: NegOp) -> (AlgebraExpr, AlgebraExpr) {
        let i = AlgebraExpr::input;
        self.sides(&ExprOps(op), i("A"), i("B"), i("C"), i("EMPTY"))
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.letter())
    }
}

impl FromStr for Axiom {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut chars = t.chars();
        match (chars.next(), chars.next()) {
            (Some(c @ 'a'..='l'), None) => Ok(Axiom::ALL[(c as u8 - b'a') as usize]),
            _ => Err(format!("unknown axiom {s:?} (expected a letter a-l)")),
        }
    }
}

/// Pattern form of an axiom with the slots realized by fixture patterns;
/// evaluate over [`fixture_dataset`].
pub fn axiom_patterns(axiom: Axiom, op: NegOp, slots: &[Fixture]) -> (Pattern, Pattern) {
    let slot = |i: usize| slots.get(i).copied().unwrap_or(Fixture::Empty).pattern();
    axiom.sides(&PatternOps(op), slot(0), slot(1), slot(2), Fixture::Empty.pattern())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCase {
    pub axiom: Axiom,
    pub operator: NegOp,
    pub slots: Vec<Fixture>,
    pub semantics: Semantics,
    pub holds: bool,
    pub left: MappingMultiset,
    pub right: MappingMultiset,
}

impl AxiomCase {
    pub fn slots_label(&self) -> String {
        self.slots.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("/")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "axiom": self.axiom.letter().to_string(),
            "operator": self.operator,
            "slots": self.slots.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "semantics": self.semantics,
            "outcome": if self.holds { "holds" } else { "fails" },
            "left": self.left.to_json()["solutions"],
            "right": self.right.to_json()["solutions"],
        })
    }
}

impl fmt::Display for AxiomCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}: {}",
            self.axiom,
            self.operator,
            self.slots_label(),
            self.semantics,
            if self.holds { "holds" } else { "fails" }
        )?;
        if !self.holds {
            write!(f, "  left={} right={}", self.left, self.right)?;
        }
        Ok(())
    }
}

fn env(slots: &[Fixture]) -> BTreeMap<String, MappingMultiset> {
    let mut env = BTreeMap::new();
    for (name, f) in ["A", "B", "C"].iter().zip(slots) {
        env.insert(name.to_string(), f.multiset());
    }
    env.insert("EMPTY".into(), MappingMultiset::new());
    env
}

fn slot_assignments(n: usize) -> Vec<Vec<Fixture>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                Fixture::ALL.iter().map(move |f| {
                    let mut v = prefix.clone();
                    v.push(*f);
                    v
                })
            })
            .collect();
    }
    out
}

/// One axiom at one slot assignment.
pub fn evaluate_case(axiom: Axiom, op: NegOp, slots: &[Fixture], semantics: Semantics) -> AxiomCase {
    let (l, r) = axiom.exprs(op);
    let env = env(slots);
    let ev = |e: &AlgebraExpr| eval_algebra(e, &env, ErrorMode::default()).expect("all inputs bound");
    let (mut left, mut right) = (ev(&l), ev(&r));
    if semantics == Semantics::Set {
        left = left.distinct();
        right = right.distinct();
    }
    AxiomCase {
        axiom,
        operator: op,
        slots: slots.to_vec(),
        semantics,
        holds: left == right,
        left,
        right,
    }
}

/// Every axiom over every slot assignment: 10 × 25 + 2 × 125 = 500 cases.
pub fn run_axiom_matrix(op: NegOp, semantics: Semantics) -> Vec<AxiomCase> {
    Axiom::ALL
        .iter()
        .flat_map(|&ax| {
            slot_assignments(ax.slot_count())
                .into_iter()
                .map(move |slots| evaluate_case(ax, op, &slots, semantics))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct AxiomSummary {
    pub cases: usize,
    pub fails_bag: usize,
    pub fails_set: usize,
    /// Cases failing under bag semantics that hold under set semantics.
    pub bag_only: usize,
}

/// Per-axiom failure counts for one operator under both semantics.
pub fn summarize(op: NegOp) -> BTreeMap<Axiom, AxiomSummary> {
    let bag = run_axiom_matrix(op, Semantics::Bag);
    let set = run_axiom_matrix(op, Semantics::Set);
    let mut out: BTreeMap<Axiom, AxiomSummary> = BTreeMap::new();
    for (b, s) in bag.iter().zip(&set) {
        let e = out.entry(b.axiom).or_default();
        e.cases += 1;
        e.fails_bag += usize::from(!b.holds);
        e.fails_set += usize::from(!s.holds);
        e.bag_only += usize::from(!b.holds && s.holds);
    }
    out
}

/// A failure count reported in the literature, for comparison with
/// [`summarize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PublishedCount {
    pub axiom: Axiom,
    pub operator: NegOp,
    /// Cases failing regardless of semantics.
    pub fails_set: Option<usize>,
    /// Cases failing under bag semantics only.
    pub bag_only: Option<usize>,
}

const fn claim(axiom: Axiom, operator: NegOp, fails_set: Option<usize>, bag_only: Option<usize>) -> PublishedCount {
    PublishedCount {
        axiom,
        operator,
        fails_set,
        bag_only,
    }
}

pub const PUBLISHED_COUNTS: [PublishedCount; 12] = [
    claim(Axiom::H, NegOp::Diff, None, Some(5)),
    claim(Axiom::I, NegOp::Diff, Some(10), Some(4)),
    claim(Axiom::K, NegOp::Diff, None, Some(10)),
    claim(Axiom::L, NegOp::Diff, None, Some(7)),
    claim(Axiom::E, NegOp::Minus, Some(4), None),
    claim(Axiom::F, NegOp::Minus, Some(11), None),
    claim(Axiom::G, NegOp::Minus, Some(7), None),
    claim(Axiom::H, NegOp::Minus, None, Some(12)),
    claim(Axiom::I, NegOp::Minus, None, Some(3)),
    claim(Axiom::J, NegOp::Minus, Some(4), None),
    claim(Axiom::K, NegOp::Minus, Some(22), Some(65)),
    claim(Axiom::L, NegOp::Minus, None, Some(48)),
];

/// A worked counterexample from the literature: the slots and the values it
/// reports for both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublishedInstance {
    pub axiom: Axiom,
    pub operator: NegOp,
    pub slots: Vec<Fixture>,
    pub printed_left: &'static str,
    pub printed_right: &'static str,
    pub expected_left: MappingMultiset,
    pub expected_right: MappingMultiset,
    /// Semantics under which the failure is claimed.
    pub semantics: Semantics,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceOutcome {
    pub instance: PublishedInstance,
    pub case: AxiomCase,
}

impl InstanceOutcome {
    pub fn fails(&self) -> bool {
        !self.case.holds
    }

    /// Both sides equal the printed values.
    pub fn values_match(&self) -> bool {
        self.case.left == self.instance.expected_left && self.case.right == self.instance.expected_right
    }

    pub fn reproduced(&self) -> bool {
        self.fails() && self.values_match()
    }
}

impl fmt::Display for InstanceOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = &self.instance;
        let status = match (self.fails(), self.values_match()) {
            (true, true) => "reproduced",
            (true, false) => "fails, values differ from printed",
            (false, _) => "holds here",
        };
        write!(
            f,
            "{} {} {} {}: {status}; printed {} vs {}, computed {} vs {}",
            i.axiom,
            i.operator,
            self.case.slots_label(),
            i.semantics,
            i.printed_left,
            i.printed_right,
            self.case.left,
            self.case.right
        )
    }
}

/// The worked counterexamples, each evaluated at its slots. The values of
/// (g) MINUS and (k) MINUS as printed cannot arise from the operator
/// definitions; (l) is listed twice, at the printed slots (where both sides
/// are ∅) and at Ω1/∅/∅, where the printed values do arise.
pub fn published_instances() -> Vec<InstanceOutcome> {
    use Fixture::*;
    let m = |f: Fixture| f.multiset();
    let (o0, o1, o2) = (m(Omega0), m(Omega1), m(Omega2));
    let empty = MappingMultiset::new();
    let o1o1 = join(&o1, &o1);
    let inst = |axiom, operator, slots: &[Fixture], pl, pr, el, er, semantics| PublishedInstance {
        axiom,
        operator,
        slots: slots.to_vec(),
        printed_left: pl,
        printed_right: pr,
        expected_left: el,
        expected_right: er,
        semantics,
    };
    let (bag, set) = (Semantics::Bag, Semantics::Set);
    let instances = vec![
        inst(Axiom::E, NegOp::Minus, &[Omega0, Omega0], "Ω0", "∅", o0.clone(), empty.clone(), set),
        inst(Axiom::F, NegOp::Minus, &[Omega0, Omega2], "Ω2", "∅", o2.clone(), empty.clone(), set),
        inst(Axiom::G, NegOp::Minus, &[Omega1, Omega0], "Ω0", "Ω1", o0.clone(), o1.clone(), set),
        inst(Axiom::H, NegOp::Diff, &[Omega1, Empty], "Ω1 ⋈ Ω1", "Ω1", o1o1.clone(), o1.clone(), bag),
        inst(Axiom::H, NegOp::Minus, &[Omega1, Empty], "Ω1 ⋈ Ω1", "Ω1", o1o1.clone(), o1.clone(), bag),
        inst(Axiom::I, NegOp::Diff, &[Omega0, Omega1], "Ω1", "Ω0 ∪ Ω1", o1.clone(), union(&o0, &o1), set),
        inst(Axiom::I, NegOp::Minus, &[Omega1, Omega1], "Ω1", "Ω1 ∪ Ω1", o1.clone(), union(&o1, &o1), bag),
        inst(Axiom::J, NegOp::Minus, &[Omega1, Omega0], "Ω1 ∪ Ω0", "Ω1", union(&o1, &o0), o1.clone(), set),
        inst(
            Axiom::K,
            NegOp::Diff,
            &[Omega1, Omega0, Omega2],
            "Ω2",
            "(Ω2 ∖ Ω1) ∪ Ω2",
            o2.clone(),
            union(&sdiff(&o2, &o1), &o2),
            bag,
        ),
        inst(Axiom::K, NegOp::Minus, &[Omega0, Omega1, Omega1], "Ω0", "Ω1", o0.clone(), o1.clone(), bag),
        inst(Axiom::L, NegOp::Diff, &[Omega0, Omega0, Omega1], "Ω1", "Ω1 ⋈ Ω1", o1.clone(), o1o1.clone(), bag),
        inst(Axiom::L, NegOp::Minus, &[Omega0, Omega0, Omega1], "Ω1", "Ω1 ⋈ Ω1", o1.clone(), o1o1.clone(), bag),
        inst(Axiom::L, NegOp::Diff, &[Omega1, Empty, Empty], "Ω1", "Ω1 ⋈ Ω1", o1.clone(), o1o1.clone(), bag),
        inst(Axiom::L, NegOp::Minus, &[Omega1, Empty, Empty], "Ω1", "Ω1 ⋈ Ω1", o1.clone(), o1o1, bag),
    ];
    instances
        .into_iter()
        .map(|i| {
            // values are compared under bag semantics; the claimed semantics
            // only says whether the failure should survive deduplication
            let case = evaluate_case(i.axiom, i.operator, &i.slots, Semantics::Bag);
            InstanceOutcome { instance: i, case }
        })
        .collect()
}

/// Evaluates every axiom case as a pattern over the fixture dataset and
/// returns the cases where the pattern result differs from the multiset-level
/// result. Empty when the two levels agree.
pub fn spot_check(op: NegOp) -> Result<Vec<(AxiomCase, MappingMultiset, MappingMultiset)>, LabError> {
    let dataset = fixture_dataset(Graph::new());
    let ctx = EvalContext::new(&dataset);
    let mut out = Vec::new();
    for case in run_axiom_matrix(op, Semantics::Bag) {
        let (pl, pr) = axiom_patterns(case.axiom, op, &case.slots);
        let (l, r) = (eval_pattern(&pl, &ctx)?, eval_pattern(&pr, &ctx)?);
        if l != case.left || r != case.right {
            out.push((case, l, r));
        }
    }
    Ok(out)
}
