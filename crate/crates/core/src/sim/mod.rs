//! Noiseless and noisy circuit simulation.

pub mod dense;
pub mod fidelity;
pub mod noise;
pub mod shots;
pub mod sparse;

pub use dense::{run_statevector, MAX_DENSE_QUBITS};
pub use fidelity::{read_fidelity, FidelityReport, FidelityRequest, FULL_CONNECTIVITY};
pub use noise::{NoiseModel, DEFAULT_P2};
pub use shots::{derive_seed, outcome_distribution, run_shots, ShotResult, MAX_SHOT_QUBITS};
pub use sparse::SparseState;
