//! Translation of graph patterns into algebra expressions over named leaves.

use std::collections::BTreeMap;

use super::{InputSchema, Schema};
use crate::algebra::AlgebraExpr;
use crate::formula::Formula;
use crate::pattern::{eval_pattern, EvalContext, EvalError, Pattern};
use crate::solution::MappingMultiset;

/// An algebra expression whose inputs `t0`, `t1`, ... stand for pattern
/// leaves: triple patterns, GRAPH and NOT-EXISTS subpatterns, and UNIT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    pub expr: AlgebraExpr,
    pub leaves: BTreeMap<String, Pattern>,
    pub schema: Schema,
}

pub fn pattern_to_algebra(p: &Pattern) -> Translation {
    let mut t = Translator::default();
    let expr = t.go(p);
    Translation {
        expr,
        leaves: t.leaves.into_iter().map(|(p, (n, _))| (n, p)).collect(),
        schema: t.schema,
    }
}

/// Evaluates every leaf of a translation against the context's default graph.
pub fn leaf_env(
    t: &Translation,
    ctx: &EvalContext<'_>,
) -> Result<BTreeMap<String, MappingMultiset>, EvalError> {
    t.leaves
        .iter()
        .map(|(n, p)| Ok((n.clone(), eval_pattern(p, ctx)?)))
        .collect()
}

#[derive(Default)]
struct Translator {
    leaves: BTreeMap<Pattern, (String, usize)>,
    schema: Schema,
}

impl Translator {
    fn leaf(&mut self, p: &Pattern) -> AlgebraExpr {
        let next = self.leaves.len();
        let (name, _) = self
            .leaves
            .entry(p.clone())
            .or_insert_with(|| (format!("t{next}"), next));
        let name = name.clone();
        let exact = match p {
            Pattern::Triple(_) | Pattern::Unit => true,
            Pattern::Graph(_, q) => matches!(q.as_ref(), Pattern::Triple(_)),
            _ => false,
        };
        self.schema.insert(
            name.clone(),
            InputSchema {
                vars: p.domain_vars(),
                exact,
            },
        );
        AlgebraExpr::Input(name)
    }

    fn go(&mut self, p: &Pattern) -> AlgebraExpr {
        match p {
            Pattern::Triple(_) | Pattern::Unit | Pattern::Graph(..) | Pattern::NotExists(..) => {
                self.leaf(p)
            }
            Pattern::And(l, r) => AlgebraExpr::join(self.go(l), self.go(r)),
            Pattern::Union(l, r) => AlgebraExpr::union(self.go(l), self.go(r)),
            Pattern::Minus(l, r) => AlgebraExpr::minus(self.go(l), self.go(r)),
            Pattern::Diff(l, r) => AlgebraExpr::sdiff(self.go(l), self.go(r)),
            Pattern::Filter(q, c) => AlgebraExpr::select(c.to_formula(), self.go(q)),
            Pattern::Opt(l, r) => {
                let left = self.go(l);
                match r.as_ref() {
                    Pattern::Filter(inner, c) => {
                        AlgebraExpr::leftjoin(left, self.go(inner), c.to_formula())
                    }
                    _ => AlgebraExpr::leftjoin(left, self.go(r), Formula::truth()),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{eval_algebra, ErrorMode};
    use crate::formula::Atom;
    use crate::rewrite::rewrite_algebra_to_core;
    use crate::term::{Dataset, Graph, Triple};

    #[test]
    fn translated_core_agrees_with_pattern_evaluation() {
        let p = Pattern::opt(
            Pattern::minus(Pattern::triple("?X", ":p", "?Y"), Pattern::triple("?Y", ":q", ":a")),
            Pattern::filter(Pattern::triple("?X", ":q", "?Z"), Atom::eq_const("Z", ":b")),
        );
        let g: Graph = [
            (":a", ":p", ":b"),
            (":b", ":q", ":a"),
            (":a", ":q", ":b"),
            (":b", ":p", ":a"),
        ]
        .iter()
        .map(|(s, p, o)| Triple::named(s, p, o))
        .collect();
        let d = Dataset::new(g);
        let ctx = EvalContext::new(&d);
        let t = pattern_to_algebra(&p);
        assert_eq!(t.leaves.len(), 3);
        let env = leaf_env(&t, &ctx).unwrap();
        let expected = eval_pattern(&p, &ctx).unwrap();
        assert_eq!(eval_algebra(&t.expr, &env, ErrorMode::default()).unwrap(), expected);
        let core = rewrite_algebra_to_core(&t.expr, ErrorMode::default(), &t.schema);
        assert!(core.is_core());
        assert_eq!(eval_algebra(&core, &env, ErrorMode::default()).unwrap(), expected);
    }

    #[test]
    fn repeated_leaves_share_a_name() {
        let t1 = Pattern::triple("?X", ":p", "?Y");
        let t = pattern_to_algebra(&Pattern::union(t1.clone(), t1));
        assert_eq!(t.leaves.len(), 1);
        assert_eq!(t.expr.to_string(), "(union t0 t0)");
    }
}
