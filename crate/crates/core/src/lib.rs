//! Simulated CONGEST-model constructions of distance sketches: Thorup–Zwick
//! labels, 3-stretch slack sketches, CDG sketches and gracefully degrading
//! sketches, together with exact oracles to check them against.

pub mod bounds;
pub mod codec;
pub mod eps;
pub mod gd;
pub mod generate;
pub mod graph;
pub mod hierarchy;
pub mod label;
pub mod oracle;
pub mod overlay;
pub mod protocol;
pub mod query;
pub mod rng;
pub mod sim;
pub mod slack;
pub mod tz;

pub use eps::Eps;
pub use graph::{load_edge_list, Dist, NodeId, WeightedGraph};
pub use protocol::{BuildError, Mode};
pub use rng::RngStream;
