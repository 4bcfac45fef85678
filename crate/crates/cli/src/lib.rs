//! Library side of the `qrom` command: sweeps, fidelity experiments and report
//! rendering, kept separate from argument parsing so tests can drive them.

pub mod build;
pub mod fidelity;
pub mod report;
pub mod sweep;

use std::ops::RangeInclusive;
use std::path::Path;

use qrom_core::qrom::MAX_ADDRESS_LINES;
use qrom_core::sim::derive_seed;
use qrom_core::{BuilderKind, CouplingMap, QromSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use build::{run_build, BuildOptions};
pub use fidelity::{run_fidelity, FidelityOptions, FidelityRow};
pub use report::{load_sweep, render_json, render_table, summarize, Summary};
pub use sweep::{run_sweep, ConfigSelection, SweepOptions, SweepRecord};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qrom_core::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for anything the caller can fix by changing inputs, 1 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Parses `a..b` (inclusive), `a..=b`, or a single `a`.
pub fn parse_n_range(text: &str) -> CliResult<RangeInclusive<usize>> {
    let bad = || {
        CliError::Usage(format!(
            "bad n range {text:?}; expected a..b or a single value"
        ))
    };
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(text)?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi || hi > MAX_ADDRESS_LINES {
        return Err(CliError::Usage(format!(
            "n range {text:?} must satisfy 1 <= a <= b <= {MAX_ADDRESS_LINES}"
        )));
    }
    Ok(lo..=hi)
}

/// Comma-separated builder names; `all` selects every builder.
pub fn parse_builders(text: &str) -> CliResult<Vec<BuilderKind>> {
    if text.eq_ignore_ascii_case("all") {
        return Ok(BuilderKind::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let kind: BuilderKind = part.parse()?;
        if !out.contains(&kind) {
            out.push(kind);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("no builders selected".into()));
    }
    Ok(out)
}

/// `full` (or `none`) means all-to-all; `heavy_hex_27` selects the bundled map;
/// anything else is read as an edge-list file.
pub fn load_connectivity(text: &str) -> CliResult<Option<CouplingMap>> {
    match text {
        "full" | "none" => Ok(None),
        "heavy_hex_27" | "heavy-hex" => Ok(Some(CouplingMap::heavy_hex_27())),
        path => Ok(Some(CouplingMap::from_file(Path::new(path))?)),
    }
}

/// The data table used for `n` address lines under `seed`.
pub fn table_for(n: usize, d: usize, seed: u64) -> CliResult<QromSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, n as u64));
    Ok(QromSpec::random(n, d, &mut rng)?)
}
