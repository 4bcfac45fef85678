//! `qrom report`: growth and reduction ratios from a sweep CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use qrom_core::{BuilderKind, McxMode};

use crate::sweep::{SweepRecord, SWEEP_HEADER};
use crate::{CliError, CliResult};

/// Cost ratio between consecutive address widths of one series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub builder: BuilderKind,
    pub strategy: McxMode,
    pub from_n: usize,
    pub to_n: usize,
    pub gate_ratio: f64,
    pub depth_ratio: f64,
}

/// Naive cost divided by another design's cost at the same `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionRow {
    pub n: usize,
    pub strategy: McxMode,
    pub builder: BuilderKind,
    pub config: String,
    pub gate_reduction: f64,
    pub depth_reduction: f64,
    /// Absent when either wall time was not recorded.
    pub wall_time_reduction: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub records: Vec<SweepRecord>,
    pub growth: Vec<GrowthRow>,
    pub reductions: Vec<ReductionRow>,
}

/// Reads a sweep CSV, requiring the exact header and at least one row.
pub fn load_sweep<R: std::io::Read>(input: R) -> CliResult<Vec<SweepRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().ne(SWEEP_HEADER.iter().copied()) {
        return Err(CliError::Usage(format!(
            "CSV header {:?} does not match the sweep schema {:?}",
            header.iter().collect::<Vec<_>>(),
            SWEEP_HEADER
        )));
    }
    let mut records = Vec::new();
    for row in reader.deserialize() {
        let r: SweepRecord = row?;
        if !(r.wall_time >= 0.0 && r.overhead_ratio >= 0.0) {
            return Err(CliError::Usage(format!(
                "negative metric in row for n={}",
                r.n
            )));
        }
        records.push(r);
    }
    if records.is_empty() {
        return Err(CliError::Usage("sweep CSV has no rows".into()));
    }
    Ok(records)
}

/// Growth series: per (builder, strategy), widths that have exactly one row.
/// Reductions: every non-naive row against the naive row of the same n and
/// strategy.
pub fn summarize(records: Vec<SweepRecord>) -> Summary {
    let mut series: BTreeMap<(BuilderKind, &'static str), BTreeMap<usize, Vec<&SweepRecord>>> =
        BTreeMap::new();
    for r in &records {
        series
            .entry((r.builder, r.strategy.name()))
            .or_default()
            .entry(r.n)
            .or_default()
            .push(r);
    }
    let mut growth = Vec::new();
    for by_n in series.values() {
        let single: Vec<&SweepRecord> = by_n
            .values()
            .filter(|rows| rows.len() == 1)
            .map(|rows| rows[0])
            .collect();
        for pair in single.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if b.n != a.n + 1 {
                continue;
            }
            growth.push(GrowthRow {
                builder: a.builder,
                strategy: a.strategy,
                from_n: a.n,
                to_n: b.n,
                gate_ratio: ratio(b.total_gates as f64, a.total_gates as f64),
                depth_ratio: ratio(b.depth as f64, a.depth as f64),
            });
        }
    }

    let mut reductions = Vec::new();
    for r in &records {
        if r.builder == BuilderKind::Naive {
            continue;
        }
        let naive = records
            .iter()
            .find(|b| b.builder == BuilderKind::Naive && b.n == r.n && b.strategy == r.strategy);
        if let Some(b) = naive {
            reductions.push(ReductionRow {
                n: r.n,
                strategy: r.strategy,
                builder: r.builder,
                config: r.config.clone(),
                gate_reduction: ratio(b.total_gates as f64, r.total_gates as f64),
                depth_reduction: ratio(b.depth as f64, r.depth as f64),
                wall_time_reduction: (b.wall_time > 0.0 && r.wall_time > 0.0)
                    .then(|| b.wall_time / r.wall_time),
            });
        }
    }
    Summary {
        records,
        growth,
        reductions,
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

pub fn render_json(summary: &Summary) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(summary)?)
}

pub fn render_table(summary: &Summary) -> String {
    let mut out = String::new();
    let records: Vec<Vec<String>> = summary
        .records
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.builder.to_string(),
                r.config.clone(),
                r.strategy.to_string(),
                format!("{:.6}", r.wall_time),
                r.depth.to_string(),
                r.total_gates.to_string(),
                r.qubit_total.to_string(),
                format!("{:.4}", r.overhead_ratio),
                r.mean_fidelity
                    .map_or_else(String::new, |f| format!("{f:.4}")),
            ]
        })
        .collect();
    push_table(&mut out, &SWEEP_HEADER, &records);

    if !summary.growth.is_empty() {
        out.push_str("\ngrowth per added address line\n");
        let rows: Vec<Vec<String>> = summary
            .growth
            .iter()
            .map(|g| {
                vec![
                    g.builder.to_string(),
                    g.strategy.to_string(),
                    format!("{}->{}", g.from_n, g.to_n),
                    format!("{:.3}", g.gate_ratio),
                    format!("{:.3}", g.depth_ratio),
                ]
            })
            .collect();
        push_table(
            &mut out,
            &["builder", "strategy", "n", "gates", "depth"],
            &rows,
        );
    }

    if !summary.reductions.is_empty() {
        out.push_str("\nnaive / design\n");
        let rows: Vec<Vec<String>> = summary
            .reductions
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.strategy.to_string(),
                    r.builder.to_string(),
                    r.config.clone(),
                    format!("{:.3}", r.gate_reduction),
                    format!("{:.3}", r.depth_reduction),
                    r.wall_time_reduction
                        .map_or_else(|| "-".into(), |w| format!("{w:.3}")),
                ]
            })
            .collect();
        push_table(
            &mut out,
            &[
                "n",
                "strategy",
                "builder",
                "config",
                "gates",
                "depth",
                "wall_time",
            ],
            &rows,
        );
        out.push_str(
            "note: data tables are seeded random; CX fan-out (and so gate counts) varies with word popcount.\n",
        );
    }
    out
}

fn push_table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>, out: &mut String| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(header.to_vec(), out);
    for row in rows {
        line(row.iter().map(String::as_str).collect(), out);
    }
}
