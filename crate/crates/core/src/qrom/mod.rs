//! QROM circuit families and their stored-data description.

mod builders;
pub mod config;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use builders::{build, build_naive, build_predecoded, build_sawtooth};
pub use config::{enumerate_configs, parse_config, Group, GroupMode, PartitionConfig};

use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};

pub const DEFAULT_DATA_WIDTH: usize = 4;
pub const MAX_ADDRESS_LINES: usize = 20;

/// Register names used by every builder.
pub mod roles {
    pub const READ: &str = "read";
    pub const ADDRESS: &str = "address";
    pub const LADDER_ANC: &str = "ladder_anc";
    pub const CNOT_CTRL: &str = "cnot_ctrl";
    pub const DATA: &str = "data";
    pub const DECOMP_ANC: &str = "decomp_anc";

    pub fn predecode_anc(group: usize) -> String {
        format!("predecode_anc[{group}]")
    }
}

/// `2^n` stored words of `d` bits each, addressed by `n` lines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QromSpec {
    pub n: usize,
    pub d: usize,
    pub data: Vec<u64>,
}

impl QromSpec {
    pub fn new(n: usize, d: usize, data: Vec<u64>) -> Result<Self> {
        let spec = QromSpec { n, d, data };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_ADDRESS_LINES).contains(&self.n) {
            return Err(Error::Spec(format!(
                "address width n={} outside 1..={MAX_ADDRESS_LINES}",
                self.n
            )));
        }
        if !(1..=63).contains(&self.d) {
            return Err(Error::Spec(format!(
                "data width d={} outside 1..=63",
                self.d
            )));
        }
        if self.data.len() != 1 << self.n {
            return Err(Error::Spec(format!(
                "expected {} words for n={}, got {}",
                1usize << self.n,
                self.n,
                self.data.len()
            )));
        }
        if let Some((a, w)) = self
            .data
            .iter()
            .enumerate()
            .find(|(_, &w)| w >> self.d != 0)
        {
            return Err(Error::Spec(format!(
                "word {w} at address {a} does not fit in {} bits",
                self.d
            )));
        }
        Ok(())
    }

    /// Uniform random table.
    pub fn random<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Self> {
        if !(1..=63).contains(&d) {
            return Err(Error::Spec(format!("data width d={d} outside 1..=63")));
        }
        if !(1..=MAX_ADDRESS_LINES).contains(&n) {
            return Err(Error::Spec(format!(
                "address width n={n} outside 1..={MAX_ADDRESS_LINES}"
            )));
        }
        let data = (0..1usize << n)
            .map(|_| rng.gen_range(0..1u64 << d))
            .collect();
        QromSpec::new(n, d, data)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: QromSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn word(&self, address: usize) -> u64 {
        self.data[address]
    }

    /// Qubit count of the naive layout: read + address + cnot control + data.
    pub fn naive_qubits(&self) -> usize {
        self.n + self.d + 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Uncompute {
    /// Replay the compute stage.
    Mirror,
    /// Reset the control line (and any per-address ancilla).
    Reset,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuilderKind {
    Naive,
    Sawtooth,
    Predecoded,
}

impl BuilderKind {
    pub const ALL: [BuilderKind; 3] = [
        BuilderKind::Naive,
        BuilderKind::Sawtooth,
        BuilderKind::Predecoded,
    ];

    pub fn default_uncompute(self) -> Uncompute {
        match self {
            BuilderKind::Naive | BuilderKind::Sawtooth => Uncompute::Mirror,
            BuilderKind::Predecoded => Uncompute::Reset,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BuilderKind::Naive => "naive",
            BuilderKind::Sawtooth => "sawtooth",
            BuilderKind::Predecoded => "predecoded",
        }
    }
}

impl fmt::Display for BuilderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuilderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "naive" => Ok(BuilderKind::Naive),
            "sawtooth" => Ok(BuilderKind::Sawtooth),
            "predecoded" => Ok(BuilderKind::Predecoded),
            other => Err(Error::Spec(format!("unknown builder {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuilderOptions {
    pub uncompute: Uncompute,
}

impl BuilderOptions {
    pub fn default_for(kind: BuilderKind) -> Self {
        BuilderOptions {
            uncompute: kind.default_uncompute(),
        }
    }

    pub fn mirror() -> Self {
        BuilderOptions {
            uncompute: Uncompute::Mirror,
        }
    }

    pub fn reset() -> Self {
        BuilderOptions {
            uncompute: Uncompute::Reset,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitOverhead {
    pub naive_qubits: usize,
    pub extra_qubits: usize,
    pub overhead_ratio: f64,
}

/// Extra pre-decoding ancilla relative to the naive `n + d + 2` qubits.
pub fn qubit_overhead(spec: &QromSpec, config: &PartitionConfig) -> Result<QubitOverhead> {
    if config.total_lines() != spec.n {
        return Err(Error::Config(format!(
            "config {config} covers {} lines, spec has n={}",
            config.total_lines(),
            spec.n
        )));
    }
    let naive_qubits = spec.naive_qubits();
    let extra_qubits = config.predecode_ancilla();
    Ok(QubitOverhead {
        naive_qubits,
        extra_qubits,
        overhead_ratio: extra_qubits as f64 / naive_qubits as f64,
    })
}

/// Bit string of a data word as rendered in shot counts (MSB first).
pub fn word_bits(word: u64, d: usize) -> String {
    (0..d)
        .rev()
        .map(|j| if word >> j & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Prepares `read = 1` and `address = a`, runs `qrom`, then measures the data
/// register (data qubit `j` becomes classical bit `j`).
pub fn read_circuit(qrom: &Circuit, address: usize) -> Result<Circuit> {
    let (read, addr, data) = match (
        qrom.register(roles::READ),
        qrom.register(roles::ADDRESS),
        qrom.register(roles::DATA),
    ) {
        (Some(r), Some(a), Some(d)) => (r.clone(), a.clone(), d.clone()),
        _ => {
            return Err(Error::Spec(
                "circuit lacks read/address/data registers".into(),
            ))
        }
    };
    if address >> addr.len != 0 {
        return Err(Error::Spec(format!(
            "address {address} out of range for {} lines",
            addr.len
        )));
    }
    let mut c = qrom.empty_like();
    c.append(GateKind::X, &[read.qubit(0)])?;
    for i in 0..addr.len {
        if address >> i & 1 == 1 {
            c.append(GateKind::X, &[addr.qubit(i)])?;
        }
    }
    c.extend_from(qrom)?;
    for q in data.qubits() {
        c.append(GateKind::Measure, &[q])?;
    }
    Ok(c)
}
