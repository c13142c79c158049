//! Graph classification with variational quantum circuits.
//!
//! Graphs are encoded as diagonal Pauli-Z Hamiltonians ([`encoder`]) whose
//! expectation in a trained circuit state gives a class probability
//! ([`vqc`]). A spectral-feature angle-encoding pipeline ([`pca`]) serves as
//! the baseline. Circuits run on an exact dense statevector simulator
//! ([`sim`]).

pub mod encoder;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod linalg;
pub mod pauli;
pub mod pca;
pub mod seed;
pub mod sim;
pub mod vqc;

pub use error::{Error, Result};

/// Largest register the simulator and the dense diagonal cache accept by default.
pub const DEFAULT_QUBIT_CAP: usize = 20;
