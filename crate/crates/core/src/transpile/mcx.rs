//! Multi-controlled X decompositions.
//!
//! `Recursive` needs no ancilla. It expands `C^k X^t` into singly-controlled
//! roots `X^{±t/2^(k-1)}`, one per non-empty subset of the controls, where each
//! root is controlled by the parity of its subset. The parities are maintained
//! in place on the controls with CX gates walked in Gray-code order, giving
//! `2^k - 1` controlled roots and `2^k - 2` CX. Every extra control doubles
//! the gate count.
//!
//! `VChain` computes the AND of the controls down a chain of clean ancilla:
//! `2k - 3` Toffolis using `k - 2` ancilla.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, GateKind, Register};
use crate::error::{Error, Result};
use crate::qrom::roles;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum McxStrategy {
    Recursive,
    /// Clean ancilla available to every MCX in the circuit.
    VChain(Register),
}

/// Strategy selector without the ancilla binding, as chosen on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum McxMode {
    Recursive,
    Vchain,
}

impl McxMode {
    pub fn name(self) -> &'static str {
        match self {
            McxMode::Recursive => "recursive",
            McxMode::Vchain => "vchain",
        }
    }
}

impl std::fmt::Display for McxMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for McxMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "recursive" => Ok(McxMode::Recursive),
            "vchain" | "v_chain" | "v-chain" => Ok(McxMode::Vchain),
            other => Err(Error::InvalidGate(format!(
                "unknown MCX strategy {other:?}"
            ))),
        }
    }
}

/// Largest MCX control count in the circuit (0 if none).
pub fn max_mcx_controls(circuit: &Circuit) -> usize {
    circuit
        .gates()
        .iter()
        .filter_map(|g| match g.kind {
            GateKind::Mcx(k) => Some(k),
            GateKind::Ccx => Some(2),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

impl McxStrategy {
    /// Binds `mode` to `circuit`. For V-chain this appends a `decomp_anc`
    /// register sized for the widest MCX (no register when none is needed).
    pub fn prepare(mode: McxMode, circuit: &Circuit) -> Result<(Circuit, McxStrategy)> {
        match mode {
            McxMode::Recursive => Ok((circuit.clone(), McxStrategy::Recursive)),
            McxMode::Vchain => {
                let need = max_mcx_controls(circuit).saturating_sub(2);
                if need == 0 {
                    let empty = Register::new(roles::DECOMP_ANC, circuit.num_qubits(), 0);
                    return Ok((circuit.clone(), McxStrategy::VChain(empty)));
                }
                let wide = circuit.widened(roles::DECOMP_ANC, need)?;
                let anc = wide
                    .register(roles::DECOMP_ANC)
                    .expect("just added")
                    .clone();
                Ok((wide, McxStrategy::VChain(anc)))
            }
        }
    }
}

fn root_gate(root: u32, dagger: bool, control: usize, target: usize) -> Gate {
    Gate::new(
        GateKind::McxRoot {
            controls: 1,
            root,
            dagger,
        },
        &[control, target],
    )
}

/// `C^k X^{±1/2^base_root}` (base_root 0 is plain X) as parity-controlled roots.
fn gray_code(controls: &[usize], target: usize, base_root: u32, dagger: bool) -> Vec<Gate> {
    let k = controls.len();
    let root = base_root + k as u32 - 1;
    let mut out = Vec::with_capacity((1 << (k + 1)) - 3);
    for j in 0..k {
        for i in 0..1usize << j {
            if i > 0 {
                let changed = i.trailing_zeros() as usize;
                out.push(Gate::new(GateKind::Cx, &[controls[changed], controls[j]]));
            }
            let gray = i ^ (i >> 1);
            let subset_even = (1 + gray.count_ones()) % 2 == 0;
            out.push(root_gate(root, dagger ^ subset_even, controls[j], target));
        }
        if j > 0 {
            out.push(Gate::new(GateKind::Cx, &[controls[j - 1], controls[j]]));
        }
    }
    out
}

fn v_chain(controls: &[usize], target: usize, ancilla: &Register) -> Result<Vec<Gate>> {
    let k = controls.len();
    let needed = k - 2;
    if ancilla.len < needed {
        return Err(Error::InsufficientAncilla {
            controls: k,
            needed,
            available: ancilla.len,
        });
    }
    let anc: Vec<usize> = ancilla.qubits().take(needed).collect();
    if let Some(&q) = anc.iter().find(|q| controls.contains(q) || **q == target) {
        return Err(Error::InvalidGate(format!(
            "V-chain ancilla qubit {q} is an operand of the gate"
        )));
    }
    let mut compute = Vec::with_capacity(needed);
    compute.push(Gate::new(
        GateKind::Ccx,
        &[controls[0], controls[1], anc[0]],
    ));
    for i in 1..needed {
        compute.push(Gate::new(
            GateKind::Ccx,
            &[controls[i + 1], anc[i - 1], anc[i]],
        ));
    }
    let mut out = compute.clone();
    out.push(Gate::new(
        GateKind::Ccx,
        &[controls[k - 1], anc[needed - 1], target],
    ));
    out.extend(compute.into_iter().rev());
    Ok(out)
}

/// One decomposition step for a multi-controlled gate.
///
/// `MCX(1)`/`MCX(2)` normalise to CX/CCX and roots with at most one control
/// pass through unchanged. Under `VChain`, controlled roots with two or more
/// controls still use the ancilla-free expansion.
pub fn decompose_mcx(gate: &Gate, strategy: &McxStrategy) -> Result<Vec<Gate>> {
    let controls = gate.controls();
    let target = gate.target();
    match gate.kind {
        GateKind::Mcx(1) => Ok(vec![Gate::new(GateKind::Cx, &gate.qubits)]),
        GateKind::Mcx(2) => Ok(vec![Gate::new(GateKind::Ccx, &gate.qubits)]),
        GateKind::Mcx(_) => match strategy {
            McxStrategy::Recursive => Ok(gray_code(controls, target, 0, false)),
            McxStrategy::VChain(anc) => v_chain(controls, target, anc),
        },
        GateKind::McxRoot { controls: k, .. } if k <= 1 => Ok(vec![gate.clone()]),
        GateKind::McxRoot { root, dagger, .. } => Ok(gray_code(controls, target, root, dagger)),
        other => Err(Error::InvalidGate(format!(
            "{other} is not a multi-controlled X"
        ))),
    }
}

/// The 6-CX Toffoli network over `{CX, H, RZ}`; RZ(±π/4) stands in for T/T†.
pub fn decompose_toffoli(gate: &Gate) -> Result<Vec<Gate>> {
    if gate.kind != GateKind::Ccx && gate.kind != GateKind::Mcx(2) {
        return Err(Error::InvalidGate(format!(
            "{} is not a Toffoli",
            gate.kind
        )));
    }
    let (a, b, t) = (gate.qubits[0], gate.qubits[1], gate.qubits[2]);
    let t_gate = GateKind::Rz(FRAC_PI_4);
    let tdg = GateKind::Rz(-FRAC_PI_4);
    Ok(vec![
        Gate::new(GateKind::H, &[t]),
        Gate::new(GateKind::Cx, &[b, t]),
        Gate::new(tdg, &[t]),
        Gate::new(GateKind::Cx, &[a, t]),
        Gate::new(t_gate, &[t]),
        Gate::new(GateKind::Cx, &[b, t]),
        Gate::new(tdg, &[t]),
        Gate::new(GateKind::Cx, &[a, t]),
        Gate::new(t_gate, &[b]),
        Gate::new(t_gate, &[t]),
        Gate::new(GateKind::H, &[t]),
        Gate::new(GateKind::Cx, &[a, b]),
        Gate::new(t_gate, &[a]),
        Gate::new(tdg, &[b]),
        Gate::new(GateKind::Cx, &[a, b]),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateClass;
    use crate::sim::dense::apply_unitary;
    use crate::unitary::{unitary_of, DenseMatrix};

    fn circuit_of(n: usize, gates: &[Gate]) -> Circuit {
        let mut c = Circuit::with_layout(&[("q", n)]).unwrap();
        for g in gates {
            c.append(g.kind, &g.qubits).unwrap();
        }
        c
    }

    fn unitary(n: usize, gates: &[Gate]) -> DenseMatrix {
        unitary_of(&circuit_of(n, gates)).unwrap()
    }

    #[test]
    fn mcx3_recursive_matches() {
        let g = Gate::new(GateKind::Mcx(3), &[0, 1, 2, 3]);
        let out = decompose_mcx(&g, &McxStrategy::Recursive).unwrap();
        let c = circuit_of(4, &out);
        let counts = c.gate_counts();
        assert_eq!(counts.get(GateClass::Cx), 6);
        assert_eq!(
            counts
                .by_class
                .iter()
                .filter(|(k, _)| matches!(k, GateClass::McxRoot { .. }))
                .map(|(_, v)| v)
                .sum::<usize>(),
            7
        );
        assert!(unitary(4, &out).max_abs_diff(&unitary(4, &[g])) < 1e-9);
    }

    #[test]
    fn roots_with_many_controls_match() {
        for (k, root, dagger) in [(2, 1, false), (3, 2, true), (4, 1, true)] {
            let qubits: Vec<usize> = (0..=k).collect();
            let g = Gate::new(
                GateKind::McxRoot {
                    controls: k,
                    root,
                    dagger,
                },
                &qubits,
            );
            let out = decompose_mcx(&g, &McxStrategy::Recursive).unwrap();
            assert!(unitary(k + 1, &out).max_abs_diff(&unitary(k + 1, &[g])) < 1e-9);
        }
    }

    #[test]
    fn mcx2_passes_through() {
        let g = Gate::new(GateKind::Mcx(2), &[0, 1, 2]);
        let out = decompose_mcx(&g, &McxStrategy::Recursive).unwrap();
        assert_eq!(out, vec![Gate::new(GateKind::Ccx, &[0, 1, 2])]);
    }

    #[test]
    fn vchain_mcx5_restores_ancilla() {
        let g = Gate::new(GateKind::Mcx(5), &[0, 1, 2, 3, 4, 5]);
        let anc = Register::new("decomp_anc", 6, 3);
        let out = decompose_mcx(&g, &McxStrategy::VChain(anc)).unwrap();
        assert_eq!(out.len(), 7);
        assert!(out.iter().all(|g| g.kind == GateKind::Ccx));
        // every basis input with ancilla clean: output equals MCX(5) with ancilla clean
        let c = circuit_of(9, &out);
        for x in 0..1usize << 6 {
            let mut state = vec![crate::linalg::ZERO; 1 << 9];
            state[x] = crate::linalg::ONE;
            for gate in c.gates() {
                apply_unitary(&mut state, gate).unwrap();
            }
            let expected = if x & 0b11111 == 0b11111 {
                x ^ 0b100000
            } else {
                x
            };
            assert_eq!(state[expected], crate::linalg::ONE, "input {x:b}");
        }
    }

    #[test]
    fn vchain_insufficient_ancilla() {
        let g = Gate::new(GateKind::Mcx(5), &[0, 1, 2, 3, 4, 5]);
        let anc = Register::new("decomp_anc", 6, 2);
        assert!(matches!(
            decompose_mcx(&g, &McxStrategy::VChain(anc)),
            Err(Error::InsufficientAncilla {
                needed: 3,
                available: 2,
                ..
            })
        ));
    }

    #[test]
    fn toffoli_network() {
        let g = Gate::new(GateKind::Ccx, &[0, 1, 2]);
        let out = decompose_toffoli(&g).unwrap();
        assert_eq!(out.iter().filter(|g| g.kind == GateKind::Cx).count(), 6);
        assert!(out.iter().all(|g| g.qubits.len() <= 2));
        let u = unitary(3, &out);
        assert!(u.equal_up_to_phase(&unitary(3, &[g]), 1e-9));
        assert!(u
            .matmul(&u)
            .equal_up_to_phase(&DenseMatrix::identity(8), 1e-9));
    }
}
