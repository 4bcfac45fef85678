//! Greedy SWAP insertion onto a coupling map.

use crate::circuit::{Circuit, Gate, GateKind, Register};
use crate::error::{Error, Result};

use super::coupling::CouplingMap;

pub const PHYSICAL_REGISTER: &str = "physical";

#[derive(Clone, Debug, PartialEq)]
pub struct Routed {
    /// Circuit over `coupling.num_physical()` qubits in one `physical` register.
    pub circuit: Circuit,
    /// `final_layout[logical] = physical` after the last gate.
    pub final_layout: Vec<usize>,
    pub swaps: usize,
}

/// Logical qubit `i` starts on physical qubit `i`.
pub fn identity_layout(num_logical: usize) -> Vec<usize> {
    (0..num_logical).collect()
}

/// Routes a circuit of at most two-qubit gates.
///
/// For each two-qubit gate whose operands are not coupled, the first operand
/// is swapped along a shortest path until it neighbours the second. MEASUREs
/// are deferred to the end of the routed circuit (on the final physical
/// positions, in their original order) so later SWAPs cannot move a measured
/// value away from where it is read out.
pub fn route(circuit: &Circuit, coupling: &CouplingMap, layout: &[usize]) -> Result<Routed> {
    let n_log = circuit.num_qubits();
    let n_phys = coupling.num_physical();
    if n_log > n_phys {
        return Err(Error::Routing(format!(
            "{n_log} logical qubits do not fit on {n_phys} physical qubits"
        )));
    }
    if layout.len() != n_log {
        return Err(Error::Routing(format!(
            "layout has {} entries for {n_log} logical qubits",
            layout.len()
        )));
    }
    let mut phys_to_log: Vec<Option<usize>> = vec![None; n_phys];
    for (l, &p) in layout.iter().enumerate() {
        if p >= n_phys {
            return Err(Error::Routing(format!(
                "layout maps {l} to missing physical {p}"
            )));
        }
        if phys_to_log[p].replace(l).is_some() {
            return Err(Error::Routing(format!(
                "layout maps two qubits onto physical {p}"
            )));
        }
    }

    let mut out = Circuit::new(vec![Register::new(PHYSICAL_REGISTER, 0, n_phys)])?;
    let mut l2p = layout.to_vec();
    let mut swaps = 0;
    let mut deferred = Vec::new();

    for g in circuit.gates() {
        match g.qubits.len() {
            1 if g.kind == GateKind::Measure => deferred.push(g.qubits[0]),
            1 => out.push_trusted(Gate::new(g.kind, &[l2p[g.qubits[0]]])),
            2 => {
                let (a, b) = (g.qubits[0], g.qubits[1]);
                let (pa, pb) = (l2p[a], l2p[b]);
                if !coupling.are_adjacent(pa, pb) {
                    let path = coupling.shortest_path(pa, pb);
                    for w in path[..path.len() - 1].windows(2) {
                        let (u, v) = (w[0], w[1]);
                        out.push_trusted(Gate::new(GateKind::Swap, &[u, v]));
                        swaps += 1;
                        let (lu, lv) = (phys_to_log[u], phys_to_log[v]);
                        phys_to_log[u] = lv;
                        phys_to_log[v] = lu;
                        if let Some(l) = lu {
                            l2p[l] = v;
                        }
                        if let Some(l) = lv {
                            l2p[l] = u;
                        }
                    }
                }
                out.push_trusted(Gate::new(g.kind, &[l2p[a], l2p[b]]));
            }
            k => {
                return Err(Error::Routing(format!(
                    "{} acts on {k} qubits; lower to the basis before routing",
                    g.kind
                )))
            }
        }
    }
    for l in deferred {
        out.push_trusted(Gate::new(GateKind::Measure, &[l2p[l]]));
    }
    Ok(Routed {
        circuit: out,
        final_layout: l2p,
        swaps,
    })
}

/// True when every two-qubit gate sits on a coupled pair.
pub fn respects_coupling(circuit: &Circuit, coupling: &CouplingMap) -> bool {
    circuit.num_qubits() <= coupling.num_physical()
        && circuit.gates().iter().all(|g| match g.qubits.as_slice() {
            [a, b] => coupling.are_adjacent(*a, *b),
            qs => qs.len() < 2,
        })
}
