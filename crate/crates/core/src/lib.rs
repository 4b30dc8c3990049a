//! Hub-based compact routing.
//!
//! The `H` highest-degree nodes act as hubs. Every node is renamed with the
//! shortest path to its closest hub (its *label*) and keeps a table with one
//! next-hop link per hub plus its neighbor list. A packet addressed with the
//! destination's label is forwarded by purely local decisions.
//!
//! Module map:
//!
//! * [`graph`]: immutable simple graphs, BFS, components, statistics and the
//!   edge-list file format.
//! * [`generators`]: power-law and Poisson degree sequences and the
//!   configuration model.
//! * [`scheme`]: hub selection, labels and routing tables.
//! * [`router`]: the per-node forwarding decision and route simulation.
//! * [`metrics`]: distance oracle, stretch reports, degree/distance buckets.
//! * [`experiments`]: seeded experiment runners producing CSV/JSON data.

pub mod error;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod metrics;
pub mod router;
pub mod scheme;
pub(crate) mod seed;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId};
pub use router::{route, RouteTrace, Rule};
pub use scheme::{build_scheme, Label, Scheme, SchemeConfig};
