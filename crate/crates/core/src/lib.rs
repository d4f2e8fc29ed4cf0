//! Synchronizability of linear stochastic networks.
//!
//! Networks are dense connectivity matrices `C` acting on row state vectors,
//! `C[(j, i)]` being the weight of the edge j → i. The synchronization
//! quantity σ² is the expected spatial variance of the stationary state,
//! computed here by projected power series, fixed-point recurrences, a
//! doubling scheme, motif expansions, closed forms for symmetric networks and
//! direct simulation.

pub mod error;
pub mod experiment;
pub mod linalg;
pub mod motifs;
pub mod netgen;
pub mod rng;
pub mod simulate;
pub mod spectral;
pub mod synccore;

pub use error::{Error, Result};
pub use netgen::{ConnectivityMatrix, RingEnsembleParams};
pub use spectral::{classify, SpectralSummary};
pub use synccore::{sigma2, DynamicsKind, DynamicsParams, Method, SyncEstimate, Truncation};
