//! Core library: exact deciders for hypercyclicity-style dynamical
//! properties of binary relations on finite topological spaces, their
//! strong and disjoint variants, plus the simple-graph, digraph and
//! tournament layers with exhaustive desk-scale verification suites.

pub mod digraphs;
pub mod dynamics;
pub mod family;
pub mod graphs;
pub mod natset;
pub mod nodes;
pub mod relations;
pub mod topology;
mod trail;
pub mod verify;

pub use digraphs::{Digraph, Tournament};
pub use dynamics::{Status, System, Verdict};
pub use family::{parse_family, FamilyKind, FamilySpec};
pub use graphs::SimpleGraph;
pub use natset::{EventuallyPeriodicSet, Rational};
pub use nodes::{node_name, NodeSet};
pub use relations::{BooleanRelation, PowerTrace, RelationSequence};
pub use topology::FiniteTopology;
