//! Classical and quantum walks on general graphs accessed through an
//! adjacency oracle.
//!
//! The crate covers exact and sampled classical walks, the oracle-based
//! coined quantum walk, the continuous-time quantum walk by spectral
//! exponentiation, and its product-formula realisation built from the same
//! oracle. Walk kinds are selected at runtime through [`EngineRegistry`].

pub mod classical;
pub mod coined;
pub mod continuous;
pub mod engine;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod observables;
pub mod oracle;
pub mod trotter;

pub use classical::ProbDist;
pub use coined::{Coin, CoinRegistry, CoinedState};
pub use continuous::{HamiltonianKind, QuantumState};
pub use engine::{EngineRegistry, InvariantSummary, RunOutput, Tolerances, WalkEngine, WalkParams};
pub use error::{Result, WalkError};
pub use graph::{Graph, GraphKind};
pub use oracle::OracleCounter;
pub use trotter::{TrotterOrdering, TrotterPlan};
