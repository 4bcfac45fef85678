//! `qrom fidelity`: noisy read-back fidelity per seed plus summaries.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use qrom_core::sim::{FidelityRequest, FULL_CONNECTIVITY};
use qrom_core::{
    read_fidelity, BuilderKind, CouplingMap, Error, FidelityReport, McxMode, NoiseModel,
    PartitionConfig,
};

use crate::{table_for, CliError, CliResult};

/// Largest address width accepted by the fidelity experiment.
pub const MAX_FIDELITY_LINES: usize = 5;

#[derive(Clone, Debug)]
pub struct FidelityOptions {
    pub n: RangeInclusive<usize>,
    pub builders: Vec<BuilderKind>,
    pub strategy: McxMode,
    pub coupling: Option<CouplingMap>,
    pub noise: NoiseModel,
    pub shots: usize,
    /// Seeds `seed, seed + 1, …, seed + repeats - 1`.
    pub seed: u64,
    pub repeats: usize,
    pub data_width: usize,
}

/// `kind` is `seed` for one run and `summary` for the mean ± sample standard
/// deviation over seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityRow {
    pub kind: String,
    pub n: usize,
    pub builder: BuilderKind,
    pub config: String,
    pub strategy: McxMode,
    pub connectivity: String,
    pub seed: String,
    pub shots: usize,
    pub p2: f64,
    pub fidelity: Option<f64>,
    pub std: Option<f64>,
    /// Why `fidelity` is empty, if it is.
    pub reason: String,
}

pub struct FidelityOutput {
    pub rows: Vec<FidelityRow>,
    pub reports: Vec<FidelityReport>,
}

pub fn validate(opts: &FidelityOptions) -> CliResult<()> {
    if opts.shots == 0 {
        return Err(CliError::Usage("--shots must be positive".into()));
    }
    if opts.repeats == 0 {
        return Err(CliError::Usage("--repeats must be positive".into()));
    }
    if *opts.n.end() > MAX_FIDELITY_LINES {
        return Err(CliError::Usage(format!(
            "fidelity runs support n <= {MAX_FIDELITY_LINES}"
        )));
    }
    Ok(())
}

/// Seeds pair across builders: for a given `(n, seed)` every builder reads the
/// same data table with the same simulation seed.
pub fn run_fidelity(opts: &FidelityOptions) -> CliResult<FidelityOutput> {
    validate(opts)?;
    let connectivity = opts
        .coupling
        .as_ref()
        .map_or_else(|| FULL_CONNECTIVITY.to_string(), |m| m.name().to_string());
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for n in opts.n.clone() {
        let config = PartitionConfig::optimal(n)?;
        for &builder in &opts.builders {
            let cfg = (builder == BuilderKind::Predecoded).then_some(&config);
            let row = |seed: String, fidelity, std, reason: String, kind: &str| FidelityRow {
                kind: kind.to_string(),
                n,
                builder,
                config: cfg.map_or_else(|| "-".to_string(), |c| c.to_string()),
                strategy: opts.strategy,
                connectivity: connectivity.clone(),
                seed,
                shots: opts.shots,
                p2: opts.noise.p2,
                fidelity,
                std,
                reason,
            };
            let mut values = Vec::new();
            let mut skipped = None;
            for i in 0..opts.repeats as u64 {
                let seed = opts.seed.wrapping_add(i);
                let spec = table_for(n, opts.data_width, seed)?;
                let req = FidelityRequest {
                    spec: &spec,
                    builder,
                    config: cfg,
                    strategy: opts.strategy,
                    coupling: opts.coupling.as_ref(),
                    noise: opts.noise,
                    shots: opts.shots,
                    seed,
                };
                match read_fidelity(&req) {
                    Ok(report) => {
                        values.push(report.mean_fidelity);
                        rows.push(row(
                            seed.to_string(),
                            Some(report.mean_fidelity),
                            None,
                            String::new(),
                            "seed",
                        ));
                        reports.push(report);
                    }
                    Err(e @ Error::TooManyQubits { .. }) => {
                        rows.push(row(seed.to_string(), None, None, e.to_string(), "seed"));
                        skipped = Some(e.to_string());
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            let summary = if values.is_empty() {
                row(
                    "-".into(),
                    None,
                    None,
                    skipped.unwrap_or_default(),
                    "summary",
                )
            } else {
                let (mean, std) = mean_std(&values);
                row("-".into(), Some(mean), std, String::new(), "summary")
            };
            rows.push(summary);
        }
    }
    Ok(FidelityOutput { rows, reports })
}

/// Mean and sample standard deviation (`None` for a single value).
pub fn mean_std(values: &[f64]) -> (f64, Option<f64>) {
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    if values.len() < 2 {
        return (mean, None);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, Some(var.sqrt()))
}

pub fn write_csv<W: std::io::Write>(rows: &[FidelityRow], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
