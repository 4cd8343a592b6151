//! Triangulation of graphical models that mix stochastic and deterministic
//! variables, scored by a state space in which a deterministic variable
//! costs nothing in any clique that also holds all of its parents.
//!
//! The crate covers the graph substrate ([`graph`], [`chordal`]),
//! elimination and its recognition problem ([`elimination`]), the
//! determinism-aware cost ([`statespace`]), ancestral-edge heuristics
//! ([`ancestral`]), heuristic pool search ([`search`]), exhaustive oracles
//! for small inputs ([`oracle`]), and a random benchmark harness
//! ([`bench`]).

pub mod ancestral;
pub mod bench;
pub mod chordal;
pub mod elimination;
pub mod fixtures;
pub mod graph;
pub mod model;
pub mod oracle;
pub mod search;
pub mod statespace;
pub mod trifile;

pub use elimination::{EliminationOrder, Triangulation};
pub use graph::{edge, Edge, EdgeSet, GraphError, UGraph};
pub use model::{moralize, parse_network, serialize_network, Network, Vertex};
pub use statespace::{Scoring, StateSpace};
