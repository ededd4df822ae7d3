//! Fresh-variable generation.
//!
//! Fresh names carry [`FRESH_MARKER`], which the strict pattern parser
//! rejects, so they cannot clash with user-written variables.

use std::collections::BTreeSet;

use crate::term::{Var, FRESH_MARKER};

/// Mints variables `?X'`, `?X'1`, `?X'2`, ... that avoid a reserved set.
#[derive(Debug, Clone, Default)]
pub struct FreshVars {
    taken: BTreeSet<Var>,
    minted: Vec<Var>,
}

impl FreshVars {
    pub fn new(avoid: impl IntoIterator<Item = Var>) -> Self {
        FreshVars {
            taken: avoid.into_iter().collect(),
            minted: Vec::new(),
        }
    }

    /// A fresh variable derived from `base`.
    pub fn fresh(&mut self, base: &Var) -> Var {
        let stem = base.name().split(FRESH_MARKER).next().unwrap_or_default();
        let stem = if stem.is_empty() { "V" } else { stem };
        let mut candidate = Var::new(format!("{stem}{FRESH_MARKER}"));
        let mut n = 0u64;
        while self.taken.contains(&candidate) {
            n += 1;
            candidate = Var::new(format!("{stem}{FRESH_MARKER}{n}"));
        }
        self.taken.insert(candidate.clone());
        self.minted.push(candidate.clone());
        candidate
    }

    pub fn fresh_named(&mut self, stem: &str) -> Var {
        self.fresh(&Var::new(stem))
    }

    /// Variables minted so far, in order.
    pub fn minted(&self) -> &[Var] {
        &self.minted
    }

    pub fn into_minted(self) -> Vec<Var> {
        self.minted
    }
}
