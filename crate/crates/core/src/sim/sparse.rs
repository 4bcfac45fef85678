//! Sparse statevector: only non-zero amplitudes are stored.
//!
//! QROM reads start from a basis state and, gate by gate, stay within a
//! handful of basis states, so this engine handles wide circuits cheaply.

use rand::Rng;

use crate::circuit::{Gate, GateKind};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat2, C64, ONE, ZERO};

pub const MAX_SPARSE_QUBITS: usize = 64;

/// Amplitudes with squared magnitude below this are dropped.
const PRUNE_NORM_SQR: f64 = 1e-24;

#[derive(Clone, Debug, Default)]
pub struct SparseState {
    entries: Vec<(u64, C64)>,
    scratch: Vec<(u64, C64)>,
}

fn bit(q: usize) -> u64 {
    1u64 << q
}

fn mask(qubits: &[usize]) -> u64 {
    qubits.iter().fold(0, |m, &q| m | bit(q))
}

impl SparseState {
    /// `|0…0⟩`.
    pub fn zero() -> Self {
        SparseState {
            entries: vec![(0, ONE)],
            scratch: Vec::new(),
        }
    }

    pub fn support(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(u64, C64)] {
        &self.entries
    }

    pub fn amplitude(&self, index: u64) -> C64 {
        self.entries
            .iter()
            .filter(|(i, _)| *i == index)
            .map(|(_, a)| *a)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    /// Applies a unitary gate of any kind.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match gate.kind {
            GateKind::Reset | GateKind::Measure => Err(Error::NonUnitary(gate.kind.to_string())),
            GateKind::Swap => {
                let (a, b) = (bit(gate.qubits[0]), bit(gate.qubits[1]));
                for (i, _) in &mut self.entries {
                    if (*i & a == 0) != (*i & b == 0) {
                        *i ^= a | b;
                    }
                }
                Ok(())
            }
            kind => {
                let cm = mask(gate.controls());
                let tb = bit(gate.target());
                if kind.is_classical() {
                    self.flip(cm, tb);
                } else {
                    let m = linalg::target_matrix(&kind).expect("one-target unitary");
                    if linalg::is_diagonal(&m) {
                        self.phase(cm, tb, m[0][0], m[1][1]);
                    } else {
                        self.mix(cm, tb, &m);
                    }
                }
                Ok(())
            }
        }
    }

    fn flip(&mut self, cm: u64, tb: u64) {
        for (i, _) in &mut self.entries {
            if *i & cm == cm {
                *i ^= tb;
            }
        }
    }

    fn phase(&mut self, cm: u64, tb: u64, d0: C64, d1: C64) {
        for (i, a) in &mut self.entries {
            if *i & cm == cm {
                *a *= if *i & tb == 0 { d0 } else { d1 };
            }
        }
    }

    fn mix(&mut self, cm: u64, tb: u64, m: &Mat2) {
        let scratch = &mut self.scratch;
        scratch.clear();
        for &(i, a) in &self.entries {
            if i & cm != cm {
                scratch.push((i, a));
                continue;
            }
            let col = usize::from(i & tb != 0);
            let lo = i & !tb;
            scratch.push((lo, m[0][col] * a));
            scratch.push((lo | tb, m[1][col] * a));
        }
        scratch.sort_unstable_by_key(|&(i, _)| i);
        self.entries.clear();
        let mut iter = scratch.iter().copied();
        if let Some(mut cur) = iter.next() {
            for (i, a) in iter {
                if i == cur.0 {
                    cur.1 += a;
                } else {
                    if cur.1.norm_sqr() >= PRUNE_NORM_SQR {
                        self.entries.push(cur);
                    }
                    cur = (i, a);
                }
            }
            if cur.1.norm_sqr() >= PRUNE_NORM_SQR {
                self.entries.push(cur);
            }
        }
    }

    /// Applies Pauli `p` (0 = I, 1 = X, 2 = Y, 3 = Z) to `qubit`.
    pub fn apply_pauli(&mut self, qubit: usize, p: u8) {
        let b = bit(qubit);
        match p & 3 {
            0 => {}
            1 => self.flip(0, b),
            2 => {
                let i_unit = C64::new(0.0, 1.0);
                for (i, a) in &mut self.entries {
                    // Y|0> = i|1>, Y|1> = -i|0>
                    *a *= if *i & b == 0 { i_unit } else { -i_unit };
                    *i ^= b;
                }
            }
            _ => self.phase(0, b, ONE, -ONE),
        }
    }

    /// Probability that `qubit` reads 1.
    pub fn prob_one(&self, qubit: usize) -> f64 {
        let b = bit(qubit);
        let total = self.norm_sqr();
        let p1: f64 = self
            .entries
            .iter()
            .filter(|(i, _)| i & b != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        p1 / total
    }

    /// Resets `qubit` when it is already in a definite state; `Err` otherwise.
    pub fn reset_deterministic(&mut self, qubit: usize) -> Result<()> {
        let p1 = self.prob_one(qubit);
        if p1 < 1e-12 {
            self.collapse(qubit, false);
        } else if p1 > 1.0 - 1e-12 {
            self.collapse(qubit, true);
        } else {
            return Err(Error::NondeterministicReset(qubit));
        }
        Ok(())
    }

    /// Measures `qubit`, then flips it to `|0⟩`.
    pub fn reset<R: Rng + ?Sized>(&mut self, qubit: usize, rng: &mut R) {
        let p1 = self.prob_one(qubit);
        let one = rng.gen::<f64>() < p1;
        self.collapse(qubit, one);
    }

    /// Keeps the branch where `qubit == outcome`, moves it to `|0⟩`, renormalises.
    fn collapse(&mut self, qubit: usize, outcome: bool) {
        let b = bit(qubit);
        self.entries.retain(|(i, _)| (i & b != 0) == outcome);
        let norm = self.norm_sqr().sqrt();
        for (i, a) in &mut self.entries {
            *i &= !b;
            *a /= norm;
        }
        if self.entries.is_empty() {
            self.entries.push((0, ZERO));
        }
    }

    /// Draws one basis index with probability `|amplitude|^2`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let total = self.norm_sqr();
        let mut r = rng.gen::<f64>() * total;
        for &(i, a) in &self.entries {
            r -= a.norm_sqr();
            if r < 0.0 {
                return i;
            }
        }
        self.entries.last().map(|e| e.0).unwrap_or(0)
    }
}

/// Packs the bits at `qubits` into an integer (bit `k` from `qubits[k]`).
pub fn extract_bits(index: u64, qubits: &[usize]) -> u64 {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &q)| acc | ((index >> q) & 1) << k)
}
