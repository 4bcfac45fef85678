//! Noisy QROM read-back fidelity.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::qrom::{self, roles, BuilderKind, BuilderOptions, PartitionConfig, QromSpec};
use crate::transpile::{compile, CouplingMap, McxMode};

use super::noise::NoiseModel;
use super::shots::{derive_seed, run_shots_uncapped, MAX_SHOT_QUBITS};

/// Connectivity label used when no coupling map is given.
pub const FULL_CONNECTIVITY: &str = "full";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub builder: BuilderKind,
    /// Canonical partition string, or `-` for builders without one.
    pub config: String,
    pub n: usize,
    pub strategy: McxMode,
    pub connectivity: String,
    pub noise: NoiseModel,
    pub shots: usize,
    pub seed: u64,
    /// Address to the fraction of shots that returned the stored word.
    pub per_address: BTreeMap<usize, f64>,
    pub mean_fidelity: f64,
}

#[derive(Clone, Debug)]
pub struct FidelityRequest<'a> {
    pub spec: &'a QromSpec,
    pub builder: BuilderKind,
    /// Required for the pre-decoded builder, ignored otherwise.
    pub config: Option<&'a PartitionConfig>,
    pub strategy: McxMode,
    /// `None` means all-to-all connectivity.
    pub coupling: Option<&'a CouplingMap>,
    pub noise: NoiseModel,
    pub shots: usize,
    pub seed: u64,
}

/// For every address: set `read` and the address bits, run the QROM, measure
/// the data register, and score the shots that return `data[address]`.
///
/// The QROM is compiled once; the address preparation is a layer of X gates
/// on unmoved qubits, identical to compiling each read circuit separately.
/// The qubit cap applies to the logical circuit; a routed device register may
/// be wider.
pub fn read_fidelity(req: &FidelityRequest<'_>) -> Result<FidelityReport> {
    req.spec.validate()?;
    if req.shots == 0 {
        return Err(Error::Simulation("shots must be positive".into()));
    }
    let options = BuilderOptions::default_for(req.builder);
    let config = match req.builder {
        BuilderKind::Predecoded => Some(req.config.ok_or_else(|| {
            Error::Config("the predecoded builder needs a partition config".into())
        })?),
        _ => None,
    };
    let qrom = qrom::build(req.builder, req.spec, config, &options)?;

    let mut measured = qrom.clone();
    let data = qrom
        .register(roles::DATA)
        .expect("builders emit data")
        .clone();
    for q in data.qubits() {
        measured.append(GateKind::Measure, &[q])?;
    }
    let compiled = compile(&measured, req.strategy, req.coupling)?;
    let logical = compiled
        .final_layout
        .as_ref()
        .map_or(compiled.circuit.num_qubits(), |l| l.len());
    if logical > MAX_SHOT_QUBITS {
        return Err(Error::TooManyQubits {
            what: "shot simulation",
            limit: MAX_SHOT_QUBITS,
            got: logical,
        });
    }

    let read = qrom
        .register(roles::READ)
        .expect("builders emit read")
        .qubit(0);
    let addr = qrom
        .register(roles::ADDRESS)
        .expect("builders emit address")
        .clone();
    let mut per_address = BTreeMap::new();
    for a in 0..1usize << req.spec.n {
        let mut prep = vec![read];
        prep.extend(
            (0..addr.len)
                .filter(|i| a >> i & 1 == 1)
                .map(|i| addr.qubit(i)),
        );
        let circuit = prepend_x(&compiled.circuit, &prep);
        let result = run_shots_uncapped(
            &circuit,
            &req.noise,
            req.shots,
            derive_seed(req.seed, a as u64),
        )?;
        let want = qrom::word_bits(req.spec.word(a), req.spec.d);
        per_address.insert(a, result.probability(&want));
    }
    let mean_fidelity = per_address.values().sum::<f64>() / per_address.len() as f64;
    Ok(FidelityReport {
        builder: req.builder,
        config: config.map_or_else(|| "-".to_string(), |c| c.to_string()),
        n: req.spec.n,
        strategy: req.strategy,
        connectivity: req
            .coupling
            .map_or_else(|| FULL_CONNECTIVITY.to_string(), |m| m.name().to_string()),
        noise: req.noise,
        shots: req.shots,
        seed: req.seed,
        per_address,
        mean_fidelity,
    })
}

fn prepend_x(circuit: &Circuit, qubits: &[usize]) -> Circuit {
    let mut out = circuit.empty_like();
    for &q in qubits {
        out.push_trusted(Gate::new(GateKind::X, &[q]));
    }
    for g in circuit.gates() {
        out.push_trusted(g.clone());
    }
    out
}
