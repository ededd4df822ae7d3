//! Negation in SPARQL: bag-semantics evaluation, rewrites between the
//! negation operators, and an equivalence lab.

pub mod algebra;
pub mod formula;
pub mod lab;
pub mod pattern;
pub mod rewrite;
pub mod solution;
pub mod syntax;
pub mod term;

pub use algebra::{eval_algebra, AlgebraError, AlgebraExpr, ErrorMode};
pub use formula::{Atom, FilterConstraint, Formula, TruthValue};
pub use lab::{check_equiv, run_axiom_matrix, run_table2, EquivalenceReport, GraphSpace, Semantics};
pub use pattern::{
    eval_pattern, eval_set_semantics, in_fragment_ex, safe_vars, substitute, var_set, BinaryOp,
    EvalContext, EvalError, FragmentViolation, GraphName, Pattern, TriplePattern,
};
pub use solution::{compatible, merge, restrict, Mapping, MappingMultiset, SolutionRecord};
pub use term::{Dataset, Graph, Iri, Literal, ModelError, Term, TermPattern, Triple, Var};
