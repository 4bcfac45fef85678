//! Dense statevector engine (noiseless, deterministic).

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::linalg::{self, C64, ONE, ZERO};

pub const MAX_DENSE_QUBITS: usize = 24;

/// Applies a unitary gate in place. `state.len()` must be `2^num_qubits`.
pub fn apply_unitary(state: &mut [C64], gate: &Gate) -> Result<()> {
    let q = &gate.qubits;
    match gate.kind {
        GateKind::Reset | GateKind::Measure => {
            return Err(Error::NonUnitary(gate.kind.to_string()))
        }
        GateKind::Swap => {
            let (a, b) = (1usize << q[0], 1usize << q[1]);
            for i in 0..state.len() {
                if i & a != 0 && i & b == 0 {
                    state.swap(i, i ^ a ^ b);
                }
            }
        }
        kind => {
            let m = linalg::target_matrix(&kind).expect("one-target unitary");
            let tb = 1usize << gate.target();
            let cm = gate.controls().iter().fold(0usize, |acc, &c| acc | 1 << c);
            let classical = kind.is_classical();
            for i in 0..state.len() {
                if i & tb != 0 || i & cm != cm {
                    continue;
                }
                let j = i | tb;
                if classical {
                    state.swap(i, j);
                } else {
                    let (a0, a1) = (state[i], state[j]);
                    state[i] = m[0][0] * a0 + m[0][1] * a1;
                    state[j] = m[1][0] * a0 + m[1][1] * a1;
                }
            }
        }
    }
    Ok(())
}

fn reset_deterministic(state: &mut [C64], qubit: usize) -> Result<()> {
    let bit = 1usize << qubit;
    let p1: f64 = state
        .iter()
        .enumerate()
        .filter(|(i, _)| i & bit != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    if p1 < 1e-12 {
        for (i, a) in state.iter_mut().enumerate() {
            if i & bit != 0 {
                *a = ZERO;
            }
        }
    } else if p1 > 1.0 - 1e-12 {
        for i in 0..state.len() {
            if i & bit != 0 {
                state[i ^ bit] = state[i];
                state[i] = ZERO;
            }
        }
    } else {
        return Err(Error::NondeterministicReset(qubit));
    }
    Ok(())
}

/// Runs `circuit` on `|0…0⟩` and returns all `2^n` amplitudes.
///
/// RESET is accepted only when the reset qubit is in a definite basis state;
/// anything else needs the stochastic collapse of [`run_shots`](super::run_shots).
pub fn run_statevector(circuit: &Circuit) -> Result<Vec<C64>> {
    let mut state = initial_state(circuit.num_qubits(), MAX_DENSE_QUBITS)?;
    run_on(&mut state, circuit)?;
    Ok(state)
}

pub(crate) fn initial_state(num_qubits: usize, limit: usize) -> Result<Vec<C64>> {
    if num_qubits > limit {
        return Err(Error::TooManyQubits {
            what: "dense statevector",
            limit,
            got: num_qubits,
        });
    }
    let mut state = vec![ZERO; 1 << num_qubits];
    state[0] = ONE;
    Ok(state)
}

pub(crate) fn run_on(state: &mut [C64], circuit: &Circuit) -> Result<()> {
    for (idx, gate) in circuit.gates().iter().enumerate() {
        match gate.kind {
            GateKind::Measure => {
                return Err(Error::Simulation(
                    "MEASURE requires shot-based simulation".into(),
                ))
            }
            GateKind::Reset => reset_deterministic(state, gate.qubits[0])?,
            _ => apply_unitary(state, gate)?,
        }
        if cfg!(debug_assertions) && idx % 256 == 255 {
            let norm: f64 = state.iter().map(|a| a.norm_sqr()).sum();
            debug_assert!((norm - 1.0).abs() < 1e-10, "norm drifted to {norm}");
        }
    }
    Ok(())
}
