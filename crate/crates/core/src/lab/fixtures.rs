//! Fixture multisets ∅, Ω0, Ω1, Ω2, Ω3 and patterns realizing them.
//!
//! Ω1 binds ?X and carries a duplicate, Ω2 binds ?X and ?Y (overlapping
//! Ω1), Ω3 binds ?Z (disjoint from both). Every fixture has a uniform
//! domain. The patterns read from the named graph `:fx`, so the default
//! graph stays free for the encodings that inspect it.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::pattern::{GraphName, Pattern};
use crate::solution::{Mapping, MappingMultiset};
use crate::term::{Dataset, Graph, Iri, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Fixture {
    Empty,
    Omega0,
    Omega1,
    Omega2,
    Omega3,
}

impl Fixture {
    pub const ALL: [Fixture; 5] = [
        Fixture::Empty,
        Fixture::Omega0,
        Fixture::Omega1,
        Fixture::Omega2,
        Fixture::Omega3,
    ];

    pub fn multiset(self) -> MappingMultiset {
        match self {
            Fixture::Empty => MappingMultiset::new(),
            Fixture::Omega0 => MappingMultiset::unit(),
            Fixture::Omega1 => MappingMultiset::from_entries([
                (Mapping::from_pairs(&[("X", ":a")]), 1),
                (Mapping::from_pairs(&[("X", ":b")]), 2),
            ]),
            Fixture::Omega2 => {
                MappingMultiset::from_iter([Mapping::from_pairs(&[("X", ":a"), ("Y", ":c")])])
            }
            Fixture::Omega3 => MappingMultiset::from_iter([Mapping::from_pairs(&[("Z", ":e")])]),
        }
    }

    /// A pattern whose evaluation over [`fixture_dataset`] is this fixture,
    /// whatever the default graph holds.
    pub fn pattern(self) -> Pattern {
        let fx = |p: Pattern| Pattern::graph(GraphName::Iri(fixture_graph_name()), p);
        match self {
            Fixture::Empty => fx(Pattern::triple("?X", ":none", ":o")),
            Fixture::Omega0 => Pattern::Unit,
            Fixture::Omega1 => Pattern::union(
                fx(Pattern::triple("?X", ":p1", ":o")),
                fx(Pattern::triple("?X", ":p1x", ":o")),
            ),
            Fixture::Omega2 => fx(Pattern::triple("?X", ":p2", "?Y")),
            Fixture::Omega3 => fx(Pattern::triple("?Z", ":p3", ":o")),
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fixture::Empty => "∅",
            Fixture::Omega0 => "Ω0",
            Fixture::Omega1 => "Ω1",
            Fixture::Omega2 => "Ω2",
            Fixture::Omega3 => "Ω3",
        })
    }
}

pub fn fixture_graph_name() -> Iri {
    Iri::new(":fx")
}

pub fn fixture_graph() -> Graph {
    [
        (":a", ":p1", ":o"),
        (":b", ":p1", ":o"),
        (":b", ":p1x", ":o"),
        (":a", ":p2", ":c"),
        (":e", ":p3", ":o"),
    ]
    .iter()
    .map(|(s, p, o)| Triple::named(s, p, o))
    .collect()
}

/// The fixture graph as `:fx` next to the given default graph.
pub fn fixture_dataset(default_graph: Graph) -> Dataset {
    Dataset::new(default_graph)
        .with_named(fixture_graph_name(), fixture_graph())
        .expect("a single named graph")
}

/// Name → multiset for every fixture.
pub fn fixture_multisets() -> BTreeMap<Fixture, MappingMultiset> {
    Fixture::ALL.iter().map(|f| (*f, f.multiset())).collect()
}
