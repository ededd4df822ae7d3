//! Equivalence lab: a brute-force oracle over finite graph spaces, the
//! set-theoretic axiom matrix for DIFF and MINUS, and the comparison of
//! negation-as-failure encodings on corner cases.

mod axioms;
mod fixtures;
mod space;
mod table2;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::pattern::EvalError;

pub use axioms::{
    axiom_patterns, published_instances, run_axiom_matrix, spot_check, summarize, Axiom, AxiomCase,
    AxiomSummary, InstanceOutcome, NegOp, PublishedCount, PublishedInstance, PUBLISHED_COUNTS,
};
pub use fixtures::{fixture_dataset, fixture_graph, fixture_graph_name, fixture_multisets, Fixture};
pub use space::{
    check_equiv, check_equiv_with, space_budget, EquivalenceReport, Enumeration, GraphSpace,
    Verdict, Witness, DEFAULT_NAMED_GRAPH, DEFAULT_SPACE_BUDGET, SPACE_BUDGET_ENV,
};
pub use table2::{run_table2, table2_g0, Table2, Table2Cell, Table2Row, TABLE2_ROWS};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    #[default]
    Bag,
    Set,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Bag => "bag",
            Semantics::Set => "set",
        })
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bag" => Ok(Semantics::Bag),
            "set" => Ok(Semantics::Set),
            other => Err(format!("unknown semantics {other:?} (expected bag or set)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("graph space holds {size} datasets, over the budget of {budget}")]
    SpaceTooLarge { size: u64, budget: u64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("row {row}: fixture realization does not match ({detail})")]
    UnrealizableRow { row: usize, detail: String },
}
