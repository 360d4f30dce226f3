//! Exact Myerson values for TU games restricted by directed hypergraphs.
//!
//! A directed hypergraph game `(N, v, E)` restricts the worth of a
//! coalition `S` to the sum of `v` over the components of the subgraph
//! induced by `S`. The Myerson value is the Shapley value of that
//! restricted game. This crate computes it exactly over arbitrary-precision
//! rationals, estimates it by permutation sampling, and checks component
//! efficiency, fairness, stability, safety, and the bridge/safety
//! correspondence on concrete instances, emitting re-verifiable
//! counterexamples.
//!
//! ```
//! use hypermyerson_core::{io, ConnectivitySemantics};
//!
//! let instance = io::parse_instance(r#"{
//!     "players": 3,
//!     "edges": [{"tail": [1], "head": [2]}, {"tail": [2], "head": [1]}],
//!     "game": {"type": "cardinality_power", "k": 2}
//! }"#).unwrap();
//! let mu = instance.myerson().unwrap();
//! assert_eq!(io::emit_allocation(&mu).lines().count(), 7);
//! assert_eq!(mu.total().to_string(), "5");
//! # let _ = ConnectivitySemantics::Strong;
//! ```

pub mod analysis;
pub mod coalition;
pub mod error;
pub mod game;
pub mod hypergraph;
pub mod io;
pub mod rational;
pub mod restriction;
pub mod values;

pub use analysis::{Instance, PropertyReport, Verdict, Witness};
pub use coalition::{Coalition, Partition, PlayerId};
pub use error::{Error, Result};
pub use game::{GameFamily, TUGame};
pub use hypergraph::{ConnectivitySemantics, DirectedHyperedge, DirectedHypergraph, EdgeId};
pub use rational::Rational;
pub use restriction::RestrictedGame;
pub use values::{myerson, shapley_exact, Allocation, McEstimate};
