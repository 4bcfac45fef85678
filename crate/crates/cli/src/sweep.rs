//! `qrom sweep`: compile metrics per (n, builder, config, strategy).

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use qrom_core::qrom::BuilderOptions;
use qrom_core::sim::{FidelityRequest, MAX_SHOT_QUBITS};
use qrom_core::{
    build, compile, enumerate_configs, parse_config, read_fidelity, BuilderKind, CouplingMap,
    Error, McxMode, NoiseModel, PartitionConfig,
};

use crate::{table_for, CliError, CliResult};

/// One CSV row. Column order is the field order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: usize,
    pub builder: BuilderKind,
    /// Canonical partition string, or `-`.
    pub config: String,
    pub strategy: McxMode,
    /// Seconds; 0 when timing is disabled.
    pub wall_time: f64,
    pub depth: usize,
    pub total_gates: usize,
    /// Qubits of the QROM circuit itself (before any decomposition ancilla).
    pub qubit_total: usize,
    /// `(qubit_total - (n + d + 2)) / (n + d + 2)`.
    pub overhead_ratio: f64,
    /// Empty unless fidelity was requested and the circuit fits the simulator.
    pub mean_fidelity: Option<f64>,
}

pub const SWEEP_HEADER: [&str; 10] = [
    "n",
    "builder",
    "config",
    "strategy",
    "wall_time",
    "depth",
    "total_gates",
    "qubit_total",
    "overhead_ratio",
    "mean_fidelity",
];

#[derive(Clone, Debug, PartialEq)]
pub enum ConfigSelection {
    /// `⌈n/2⌉P+⌊n/2⌋P`.
    Optimal,
    /// Every distinct partition of `n` lines.
    All,
    /// Explicit configs; each applies to the `n` it covers.
    List(Vec<PartitionConfig>),
}

impl std::str::FromStr for ConfigSelection {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "optimal" => Ok(ConfigSelection::Optimal),
            "all" => Ok(ConfigSelection::All),
            _ => {
                let configs = s
                    .split([',', ';'])
                    .map(str::trim)
                    .filter(|p| !p.is_empty())
                    .map(parse_config)
                    .collect::<Result<Vec<_>, _>>()?;
                if configs.is_empty() {
                    return Err(CliError::Usage("empty config list".into()));
                }
                Ok(ConfigSelection::List(configs))
            }
        }
    }
}

impl ConfigSelection {
    pub fn for_n(&self, n: usize) -> CliResult<Vec<PartitionConfig>> {
        Ok(match self {
            ConfigSelection::Optimal => vec![PartitionConfig::optimal(n)?],
            ConfigSelection::All => enumerate_configs(n)?,
            ConfigSelection::List(list) => list
                .iter()
                .filter(|c| c.total_lines() == n)
                .cloned()
                .collect(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FidelitySettings {
    pub shots: usize,
    pub noise: NoiseModel,
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub n: RangeInclusive<usize>,
    pub builders: Vec<BuilderKind>,
    pub configs: ConfigSelection,
    pub strategy: McxMode,
    pub coupling: Option<CouplingMap>,
    pub data_width: usize,
    pub seed: u64,
    pub fidelity: Option<FidelitySettings>,
    /// When false, `wall_time` is written as 0 so output is reproducible.
    pub timing: bool,
}

/// Rows in canonical order: n ascending, builders in the given order,
/// configs in selection order.
pub fn run_sweep(opts: &SweepOptions) -> CliResult<Vec<SweepRecord>> {
    if let Some(f) = &opts.fidelity {
        if f.shots == 0 {
            return Err(CliError::Usage("--shots must be positive".into()));
        }
    }
    let mut rows = Vec::new();
    for n in opts.n.clone() {
        let spec = table_for(n, opts.data_width, opts.seed)?;
        for &builder in &opts.builders {
            let configs: Vec<Option<PartitionConfig>> = match builder {
                BuilderKind::Predecoded => opts.configs.for_n(n)?.into_iter().map(Some).collect(),
                _ => vec![None],
            };
            for config in configs {
                let circuit = build(
                    builder,
                    &spec,
                    config.as_ref(),
                    &BuilderOptions::default_for(builder),
                )?;
                let compiled = compile(&circuit, opts.strategy, opts.coupling.as_ref())?;
                let naive = spec.naive_qubits();
                let mean_fidelity = match &opts.fidelity {
                    Some(f) if circuit.num_qubits() <= MAX_SHOT_QUBITS => {
                        let req = FidelityRequest {
                            spec: &spec,
                            builder,
                            config: config.as_ref(),
                            strategy: opts.strategy,
                            coupling: opts.coupling.as_ref(),
                            noise: f.noise,
                            shots: f.shots,
                            seed: opts.seed,
                        };
                        match read_fidelity(&req) {
                            Ok(r) => Some(r.mean_fidelity),
                            Err(Error::TooManyQubits { .. }) => None,
                            Err(e) => return Err(e.into()),
                        }
                    }
                    _ => None,
                };
                rows.push(SweepRecord {
                    n,
                    builder,
                    config: config.map_or_else(|| "-".to_string(), |c| c.to_string()),
                    strategy: opts.strategy,
                    wall_time: if opts.timing {
                        compiled.report.wall_time
                    } else {
                        0.0
                    },
                    depth: compiled.report.depth,
                    total_gates: compiled.report.total_gates,
                    qubit_total: circuit.num_qubits(),
                    overhead_ratio: (circuit.num_qubits() - naive) as f64 / naive as f64,
                    mean_fidelity,
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_csv<W: std::io::Write>(rows: &[SweepRecord], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(SWEEP_HEADER)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
