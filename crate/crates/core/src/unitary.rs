//! Full-matrix oracle for small circuits.

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::linalg::{self, C64, ONE, ZERO};
use crate::sim::dense::apply_unitary;

pub const MAX_UNITARY_QUBITS: usize = 12;

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        DenseMatrix { dim, data }
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        DenseMatrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        DenseMatrix { dim: n, data }
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn equal_up_to_phase(&self, other: &DenseMatrix, tol: f64) -> bool {
        self.dim == other.dim && linalg::equal_up_to_phase(&self.data, &other.data, tol)
    }
}

/// Applies `circuit` to basis state `|index⟩` and returns the output amplitudes.
pub fn apply_to_basis(circuit: &Circuit, index: usize) -> Result<Vec<C64>> {
    let n = circuit.num_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::TooManyQubits {
            what: "unitary oracle",
            limit: MAX_UNITARY_QUBITS,
            got: n,
        });
    }
    let mut state = vec![ZERO; 1 << n];
    state[index] = ONE;
    for g in circuit.gates() {
        apply_unitary(&mut state, g)?;
    }
    Ok(state)
}

/// The circuit's `2^n × 2^n` matrix (gate matrices multiplied in order, qubit 0
/// least significant). Refuses RESET/MEASURE and circuits over 12 qubits.
pub fn unitary_of(circuit: &Circuit) -> Result<DenseMatrix> {
    if let Some(g) = circuit.gates().iter().find(|g| !g.kind.is_unitary()) {
        return Err(Error::NonUnitary(g.kind.to_string()));
    }
    if circuit.num_qubits() > MAX_UNITARY_QUBITS {
        return Err(Error::TooManyQubits {
            what: "unitary oracle",
            limit: MAX_UNITARY_QUBITS,
            got: circuit.num_qubits(),
        });
    }
    let dim = 1usize << circuit.num_qubits();
    let mut data = vec![ZERO; dim * dim];
    for col in 0..dim {
        let out = apply_to_basis(circuit, col)?;
        for (row, amp) in out.into_iter().enumerate() {
            data[row * dim + col] = amp;
        }
    }
    Ok(DenseMatrix { dim, data })
}
