//! Quantum read-only memory circuits, a lowering/routing transpiler, and a
//! noisy shot simulator for comparing QROM designs.

pub mod circuit;
pub mod error;
pub mod linalg;
pub mod qrom;
pub mod sim;
pub mod transpile;
pub mod unitary;

pub use circuit::{Circuit, Gate, GateClass, GateCounts, GateKind, Register};
pub use error::{Error, Result};
pub use qrom::{
    build, enumerate_configs, parse_config, qubit_overhead, read_circuit, word_bits, BuilderKind,
    BuilderOptions, PartitionConfig, QromSpec, QubitOverhead, Uncompute,
};
pub use sim::{
    outcome_distribution, read_fidelity, run_shots, run_statevector, FidelityReport,
    FidelityRequest, NoiseModel, ShotResult,
};
pub use transpile::{
    compile, route, to_basis, CompilationReport, Compiled, CouplingMap, McxMode, McxStrategy,
};
pub use unitary::{unitary_of, DenseMatrix};
