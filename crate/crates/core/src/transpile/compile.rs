//! The full lowering pipeline with metrics.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::Result;

use super::basis::to_basis;
use super::coupling::CouplingMap;
use super::mcx::{McxMode, McxStrategy};
use super::route::{identity_layout, route};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompilationReport {
    /// Seconds spent in the pipeline.
    pub wall_time: f64,
    pub depth: usize,
    pub basis_gate_counts: BTreeMap<String, usize>,
    pub total_gates: usize,
    pub num_qubits: usize,
    pub swaps_inserted: usize,
}

impl CompilationReport {
    fn from_circuit(circuit: &Circuit, wall: Duration, swaps_inserted: usize) -> Self {
        let counts = circuit.gate_counts();
        CompilationReport {
            wall_time: wall.max(Duration::from_nanos(1)).as_secs_f64(),
            depth: circuit.depth(),
            basis_gate_counts: counts.named(),
            total_gates: counts.total,
            num_qubits: circuit.num_qubits(),
            swaps_inserted,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Compiled {
    pub circuit: Circuit,
    pub report: CompilationReport,
    /// `final_layout[logical] = physical` when routed.
    pub final_layout: Option<Vec<usize>>,
}

/// Lowers to the hardware basis and, when a coupling map is given, routes with
/// the identity initial layout. Routing SWAPs are themselves lowered to three
/// CX each, so the output is entirely basis gates plus RESET/MEASURE.
pub fn compile(
    circuit: &Circuit,
    mode: McxMode,
    coupling: Option<&CouplingMap>,
) -> Result<Compiled> {
    let start = Instant::now();
    let (prepared, strategy) = McxStrategy::prepare(mode, circuit)?;
    let lowered = to_basis(&prepared, &strategy)?;
    let (circuit, final_layout, swaps) = match coupling {
        None => (lowered, None, 0),
        Some(map) => {
            let routed = route(&lowered, map, &identity_layout(lowered.num_qubits()))?;
            (
                lower_swaps(&routed.circuit),
                Some(routed.final_layout),
                routed.swaps,
            )
        }
    };
    let wall = start.elapsed();
    let report = CompilationReport::from_circuit(&circuit, wall, swaps);
    Ok(Compiled {
        circuit,
        report,
        final_layout,
    })
}

fn lower_swaps(circuit: &Circuit) -> Circuit {
    let mut out = circuit.empty_like();
    for g in circuit.gates() {
        if g.kind == GateKind::Swap {
            let (a, b) = (g.qubits[0], g.qubits[1]);
            for pair in [[a, b], [b, a], [a, b]] {
                out.push_trusted(Gate::new(GateKind::Cx, &pair));
            }
        } else {
            out.push_trusted(g.clone());
        }
    }
    out
}
