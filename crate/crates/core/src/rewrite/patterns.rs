//! OPT, MINUS and NOT-EXISTS expressed through DIFF.

use std::collections::BTreeMap;

use super::{Applicability, FreshVars, RewriteResult, Rule};
use crate::formula::{Atom, FilterConstraint};
use crate::pattern::{nex_violations, safe_vars, BinaryOp, FragmentViolation, Pattern};
use crate::term::Var;

#[derive(Debug, Clone, Copy)]
struct Rules {
    opt: bool,
    minus: bool,
    nex: bool,
}

/// Replaces every OPT node, innermost first.
///
/// `(opt P1 (filter P3 C))` becomes
/// `(union (filter (and P1 P3) C) (diff P1 (filter (and P1 P3) C)))`;
/// any other `(opt P1 P2)` becomes `(union (and P1 P2) (diff P1 (and P1 P2)))`.
pub fn rewrite_opt_to_diff(p: &Pattern) -> RewriteResult {
    run(p, Rule::OptToDiff, Rules { opt: true, minus: false, nex: false })
}

/// Replaces every MINUS node, innermost first.
///
/// Without shared variables the result is the left arm. Otherwise each
/// shared variable is renamed apart in a copy of the right arm and equated
/// with its original through a filter. When a shared variable is not safe in
/// both arms the filter only compares variables bound on both sides.
pub fn rewrite_minus_to_diff(p: &Pattern) -> RewriteResult {
    run(p, Rule::MinusToDiff, Rules { opt: false, minus: true, nex: false })
}

/// Replaces NOT-EXISTS by DIFF wherever every correlated variable is safe in
/// the negated arm. Other occurrences are kept and reported.
pub fn rewrite_nex_to_diff(p: &Pattern) -> RewriteResult {
    run(p, Rule::NexToDiff, Rules { opt: false, minus: false, nex: true })
}

/// Applies all three rewrites in one bottom-up pass. On success the output
/// only uses triple, AND, UNION, DIFF, FILTER, GRAPH and UNIT nodes.
pub fn normalize(p: &Pattern) -> RewriteResult {
    run(p, Rule::Normalize, Rules { opt: true, minus: true, nex: true })
}

fn run(p: &Pattern, rule: Rule, rules: Rules) -> RewriteResult {
    let mut w = Walker {
        rules,
        fresh: FreshVars::new(p.vars()),
        applied: 0,
        rejected: Vec::new(),
        path: Vec::new(),
    };
    let output = w.walk(p);
    let applicability = if !w.rejected.is_empty() {
        Applicability::Rejected(w.rejected)
    } else if w.applied > 0 {
        Applicability::Applied
    } else {
        Applicability::Inapplicable
    };
    RewriteResult {
        output,
        rule,
        fresh_vars: w.fresh.into_minted(),
        applicability,
    }
}

struct Walker {
    rules: Rules,
    fresh: FreshVars,
    applied: usize,
    rejected: Vec<FragmentViolation>,
    path: Vec<usize>,
}

impl Walker {
    fn child(&mut self, i: usize, p: &Pattern) -> Pattern {
        self.path.push(i);
        let out = self.walk(p);
        self.path.pop();
        out
    }

    fn walk(&mut self, p: &Pattern) -> Pattern {
        match p {
            Pattern::Triple(_) | Pattern::Unit => p.clone(),
            Pattern::Filter(q, c) => Pattern::filter(self.child(0, q), c.clone()),
            Pattern::Graph(n, q) => Pattern::graph(n.clone(), self.child(0, q)),
            _ => {
                let (op, l, r) = p.as_binary().expect("binary node");
                let l2 = self.child(0, l);
                let r2 = self.child(1, r);
                match op {
                    BinaryOp::Opt if self.rules.opt => {
                        self.applied += 1;
                        opt_to_diff(l2, r2)
                    }
                    BinaryOp::Minus if self.rules.minus => {
                        self.applied += 1;
                        self.minus_to_diff(l, r, l2, r2)
                    }
                    BinaryOp::NotExists if self.rules.nex => {
                        let bad = nex_violations(l, r);
                        if bad.is_empty() {
                            self.applied += 1;
                            Pattern::diff(l2, r2)
                        } else {
                            self.rejected.extend(bad.into_iter().map(|var| FragmentViolation {
                                path: self.path.clone(),
                                var,
                                subpattern: p.clone(),
                            }));
                            Pattern::not_exists(l2, r2)
                        }
                    }
                    _ => op.build(l2, r2),
                }
            }
        }
    }

    fn minus_to_diff(&mut self, l: &Pattern, r: &Pattern, l2: Pattern, r2: Pattern) -> Pattern {
        let shared: Vec<_> = l
            .domain_vars()
            .intersection(&r.domain_vars())
            .cloned()
            .collect();
        if shared.is_empty() {
            return shield_filter(l2);
        }
        let renaming: BTreeMap<_, _> = shared
            .iter()
            .map(|v| (v.clone(), self.fresh.fresh(v)))
            .collect();
        let eq = |x: &Var, y: &Var| FilterConstraint::from(Atom::eq_vars(x.name(), y.name()));
        let bound = |x: &Var| FilterConstraint::from(Atom::bound(x.name()));
        let (safe_l, safe_r) = (safe_vars(l), safe_vars(r));
        let cond = if shared.iter().all(|v| safe_l.contains(v) && safe_r.contains(v)) {
            renaming.iter().map(|(x, y)| eq(x, y)).reduce(FilterConstraint::and)
        } else {
            // some shared variable may be unbound on either side: require
            // agreement where both are bound and at least one such variable
            let agree = renaming.iter().map(|(x, y)| {
                FilterConstraint::or(
                    FilterConstraint::or(FilterConstraint::not(bound(x)), FilterConstraint::not(bound(y))),
                    eq(x, y),
                )
            });
            let overlap = renaming
                .iter()
                .map(|(x, y)| FilterConstraint::and(bound(x), bound(y)))
                .reduce(FilterConstraint::or);
            agree.chain(overlap).reduce(FilterConstraint::and)
        }
        .expect("at least one shared variable");
        let p3 = r2.rename(&renaming);
        let inner = Pattern::filter(Pattern::and(l2.clone(), p3), cond);
        Pattern::diff(l2, inner)
    }
}

fn opt_to_diff(p1: Pattern, p2: Pattern) -> Pattern {
    let joined = match p2 {
        Pattern::Filter(p3, c) => Pattern::filter(Pattern::and(p1.clone(), *p3), c),
        p2 => Pattern::and(p1.clone(), p2),
    };
    Pattern::union(joined.clone(), Pattern::diff(p1, joined))
}

/// A FILTER returned in place of a MINUS node could land as the right arm of
/// an OPT and silently switch it to the filtered case; joining with UNIT
/// keeps the meaning and hides the filter.
fn shield_filter(p: Pattern) -> Pattern {
    match p {
        Pattern::Filter(..) => Pattern::and(p, Pattern::Unit),
        p => p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{eval_pattern, EvalContext};
    use crate::term::{Dataset, Graph, Triple};

    fn t(s: &str, p: &str, o: &str) -> Pattern {
        Pattern::triple(s, p, o)
    }

    #[test]
    fn opt_case_ii() {
        let (t1, t2) = (t("?X", ":p", "?Y"), t("?Y", ":q", "?Z"));
        let r = rewrite_opt_to_diff(&Pattern::opt(t1.clone(), t2.clone()));
        let j = Pattern::and(t1.clone(), t2);
        assert_eq!(r.output, Pattern::union(j.clone(), Pattern::diff(t1, j)));
        assert_eq!(r.applicability, Applicability::Applied);
        assert!(r.fresh_vars.is_empty());
    }

    #[test]
    fn opt_case_i() {
        let (t1, t3) = (t("?X", ":p", "?Y"), t("?Y", ":q", "?Z"));
        let c = FilterConstraint::from(Atom::eq_const("Z", ":a"));
        let r = rewrite_opt_to_diff(&Pattern::opt(t1.clone(), Pattern::filter(t3.clone(), c.clone())));
        let f = Pattern::filter(Pattern::and(t1.clone(), t3), c);
        assert_eq!(r.output, Pattern::union(f.clone(), Pattern::diff(t1, f)));
    }

    #[test]
    fn inapplicable_without_target() {
        let p = t("?X", ":p", ":b");
        for r in [rewrite_opt_to_diff(&p), rewrite_minus_to_diff(&p), rewrite_nex_to_diff(&p)] {
            assert_eq!(r.applicability, Applicability::Inapplicable);
            assert_eq!(r.output, p);
        }
    }

    #[test]
    fn minus_disjoint_and_shared() {
        let r = rewrite_minus_to_diff(&Pattern::minus(t("?X", ":p", "?Y"), t("?Z", ":q", ":d")));
        assert_eq!(r.output, t("?X", ":p", "?Y"));
        let r = rewrite_minus_to_diff(&Pattern::minus(t("?X", ":p", "?Y"), t("?X", ":q", "?Z")));
        let expected = Pattern::diff(
            t("?X", ":p", "?Y"),
            Pattern::filter(
                Pattern::and(t("?X", ":p", "?Y"), t("?X'", ":q", "?Z")),
                Atom::eq_vars("X", "X'"),
            ),
        );
        assert_eq!(r.output, expected);
        assert_eq!(r.fresh_vars, vec![Var::new("X'")]);
    }

    #[test]
    fn minus_disjoint_filter_left_is_shielded() {
        let left = Pattern::filter(t("?X", ":p", "?Y"), Atom::eq_const("X", ":a"));
        let p = Pattern::opt(t("?X", ":r", ":o"), Pattern::minus(left.clone(), t("?Z", ":q", ":d")));
        let r = rewrite_minus_to_diff(&p);
        assert_eq!(
            r.output,
            Pattern::opt(t("?X", ":r", ":o"), Pattern::and(left, Pattern::Unit))
        );
    }

    #[test]
    fn nex_fragment_member_and_rejection() {
        let ok = Pattern::not_exists(t("?X", ":p", ":b"), t("?X", ":q", "?Z"));
        let r = rewrite_nex_to_diff(&ok);
        assert_eq!(r.output, Pattern::diff(t("?X", ":p", ":b"), t("?X", ":q", "?Z")));
        let bad = Pattern::not_exists(
            t("?X", ":p", ":b"),
            Pattern::not_exists(t("?Z", ":q", ":d"), t("?W", ":r", "?X")),
        );
        let r = rewrite_nex_to_diff(&bad);
        match &r.applicability {
            Applicability::Rejected(vs) => {
                assert_eq!(vs.len(), 1);
                assert_eq!(vs[0].var, Var::new("X"));
            }
            other => panic!("expected rejection, got {other}"),
        }
        assert!(r.applicability.to_string().contains("?X"));
        // the inner occurrence has no correlated variables and is rewritten
        assert_eq!(
            r.output,
            Pattern::not_exists(
                t("?X", ":p", ":b"),
                Pattern::diff(t("?Z", ":q", ":d"), t("?W", ":r", "?X")),
            )
        );
    }

    #[test]
    fn normalize_reaches_diff_fragment() {
        let p = Pattern::opt(
            Pattern::minus(t("?X", ":p", "?Y"), t("?Y", ":q", ":a")),
            Pattern::not_exists(t("?X", ":q", "?Z"), t("?Z", ":p", ":a")),
        );
        let r = normalize(&p);
        assert!(r.applicability.is_applied());
        assert!(!r.output.any_node(&|q| matches!(
            q,
            Pattern::Opt(..) | Pattern::Minus(..) | Pattern::NotExists(..)
        )));
        for v in &r.fresh_vars {
            assert!(!p.vars().contains(v));
        }
        let g: Graph = [
            (":a", ":p", ":b"),
            (":b", ":q", ":a"),
            (":a", ":q", ":a"),
            (":b", ":p", ":a"),
        ]
        .iter()
        .map(|(s, p, o)| Triple::named(s, p, o))
        .collect();
        let d = Dataset::new(g);
        let ctx = EvalContext::new(&d);
        assert_eq!(eval_pattern(&p, &ctx).unwrap(), eval_pattern(&r.output, &ctx).unwrap());
    }

    fn graph(triples: &[(&str, &str, &str)]) -> Dataset {
        Dataset::new(triples.iter().map(|(s, p, o)| Triple::named(s, p, o)).collect())
    }

    fn agree(p: &Pattern, q: &Pattern, d: &Dataset) -> bool {
        let ctx = EvalContext::new(d);
        eval_pattern(p, &ctx).unwrap() == eval_pattern(q, &ctx).unwrap()
    }

    #[test]
    fn minus_with_optional_left_binding() {
        // ?Z is unbound in the left solution; MINUS still removes it through ?X
        let p = Pattern::minus(
            Pattern::opt(t("?X", ":p", "?Y"), t("?Y", ":q", "?Z")),
            t("?Z", ":r", "?X"),
        );
        let r = rewrite_minus_to_diff(&p);
        let d = graph(&[(":a", ":p", ":a"), (":a", ":r", ":a")]);
        assert!(eval_pattern(&p, &EvalContext::new(&d)).unwrap().is_empty());
        assert!(agree(&p, &r.output, &d));
    }

    #[test]
    fn minus_rewrite_limit_across_left_solutions() {
        // {?Y->:a} shares nothing with the right arm and survives MINUS, but
        // the join of its extension {?X->:a, ?Y->:a} is compatible with it
        let p = Pattern::minus(
            Pattern::union(t("?Y", ":p", ":b"), t("?X", ":q", "?Y")),
            t("?X", ":r", ":b"),
        );
        let r = rewrite_minus_to_diff(&p);
        let d = graph(&[(":a", ":p", ":b"), (":a", ":q", ":a"), (":a", ":r", ":b")]);
        assert!(!agree(&p, &r.output, &d));
    }
}
