//! Controllable subspaces of leader-follower networks on matrix-weighted
//! graphs, and equitable-partition upper bounds on the subspace that stays
//! controllable under every admissible weight choice.

pub mod analysis;
pub mod corpus;
pub mod error;
pub mod exec;
pub mod graph;
pub mod linalg;
pub mod partition;
pub mod rational;
pub mod report;

pub use error::{Error, Result};
