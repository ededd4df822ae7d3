//! Rewrites between negation operators and from the W3C algebra into the
//! core algebra.

mod core;
mod fresh;
mod naf;
mod patterns;
mod translate;

use std::fmt;

use thiserror::Error;

use crate::pattern::{FragmentViolation, Pattern};
use crate::term::Var;

pub use self::core::{
    exact_domain, rewrite_algebra_to_core, rewrite_algebra_to_core_with, CoreRewrite,
    CoreStrategy, InputSchema, Schema,
};
pub use fresh::FreshVars;
pub use naf::{encode_naf, naive_witness, rewrite_diff_to_naf, NafScheme};
pub use patterns::{normalize, rewrite_minus_to_diff, rewrite_nex_to_diff, rewrite_opt_to_diff};
pub use translate::{leaf_env, pattern_to_algebra, Translation};

/// Which rewrite produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    OptToDiff,
    MinusToDiff,
    NexToDiff,
    /// All three of the above in a single bottom-up pass.
    Normalize,
    Naf(NafScheme),
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::OptToDiff => f.write_str("opt2diff"),
            Rule::MinusToDiff => f.write_str("minus2diff"),
            Rule::NexToDiff => f.write_str("nex2diff"),
            Rule::Normalize => f.write_str("normalize"),
            Rule::Naf(s) => write!(f, "naf:{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Applicability {
    Applied,
    /// The pattern has no node the rule applies to; the output is the input.
    Inapplicable,
    /// Some NOT-EXISTS occurrences fall outside the fragment where the
    /// translation is sound. They are left in place; every other applicable
    /// occurrence is still rewritten.
    Rejected(Vec<FragmentViolation>),
}

impl Applicability {
    pub fn is_applied(&self) -> bool {
        matches!(self, Applicability::Applied)
    }

    pub fn is_rejected(&self) -> bool {
        matches!(self, Applicability::Rejected(_))
    }
}

impl fmt::Display for Applicability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Applicability::Applied => f.write_str("applied"),
            Applicability::Inapplicable => f.write_str("inapplicable"),
            Applicability::Rejected(vs) => {
                f.write_str("rejected: ")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    v.fmt(f)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteResult {
    pub output: Pattern,
    pub rule: Rule,
    /// Variables introduced by the rewrite; disjoint from the input's.
    pub fresh_vars: Vec<Var>,
    pub applicability: Applicability,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("no witness variable: every variable of {0} also occurs on the left")]
    NoWitnessVariable(Pattern),
}
