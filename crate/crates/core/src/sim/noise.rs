use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-qubit error rate used when none is given.
pub const DEFAULT_P2: f64 = 0.001;

/// Depolarizing error probabilities per basis gate.
///
/// After a single-qubit gate, with probability `p1` one of X, Y, Z is applied
/// (uniformly). After a CX, with probability `p2` one of the 15 non-identity
/// two-qubit Paulis is applied (uniformly).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        for (name, p) in [("p1", p1), ("p2", p2)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Simulation(format!(
                    "{name} = {p} is not a probability"
                )));
            }
        }
        Ok(NoiseModel { p1, p2 })
    }

    pub fn ideal() -> Self {
        NoiseModel { p1: 0.0, p2: 0.0 }
    }

    pub fn two_qubit(p2: f64) -> Result<Self> {
        NoiseModel::new(0.0, p2)
    }

    pub fn is_ideal(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            p1: 0.0,
            p2: DEFAULT_P2,
        }
    }
}
