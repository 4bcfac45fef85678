//! Basis lowering, routing and the compile pipeline.

pub mod basis;
pub mod compile;
pub mod coupling;
pub mod mcx;
pub mod route;

pub use basis::{is_basis_circuit, to_basis};
pub use compile::{compile, CompilationReport, Compiled};
pub use coupling::CouplingMap;
pub use mcx::{decompose_mcx, decompose_toffoli, max_mcx_controls, McxMode, McxStrategy};
pub use route::{identity_layout, respects_coupling, route, Routed};
