//! `qrom build`: one QROM circuit as JSON.

use qrom_core::qrom::{BuilderOptions, Uncompute};
use qrom_core::{build, compile, parse_config, BuilderKind, CouplingMap, McxMode, QromSpec};

use crate::{CliError, CliResult};

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub builder: BuilderKind,
    pub config: Option<String>,
    pub uncompute: Option<Uncompute>,
    /// Lower (and route, when a map is given) before serialising.
    pub lower: Option<(McxMode, Option<CouplingMap>)>,
}

/// Returns the circuit JSON and, when lowering, the compilation report JSON.
pub fn run_build(spec_json: &str, opts: &BuildOptions) -> CliResult<(String, Option<String>)> {
    let spec = QromSpec::from_json(spec_json)?;
    let config = opts.config.as_deref().map(parse_config).transpose()?;
    if opts.builder == BuilderKind::Predecoded && config.is_none() {
        return Err(CliError::Usage(
            "--config is required for the predecoded builder".into(),
        ));
    }
    let mut options = BuilderOptions::default_for(opts.builder);
    if let Some(u) = opts.uncompute {
        options.uncompute = u;
    }
    let circuit = build(opts.builder, &spec, config.as_ref(), &options)?;
    match &opts.lower {
        None => Ok((circuit.to_json()?, None)),
        Some((mode, coupling)) => {
            let compiled = compile(&circuit, *mode, coupling.as_ref())?;
            let report = serde_json::to_string_pretty(&compiled.report)?;
            Ok((compiled.circuit.to_json()?, Some(report)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qrom_core::Circuit;

    const FIG2: &str = r#"{"n": 2, "d": 4, "data": [5, 7, 2, 1]}"#;

    fn opts(builder: BuilderKind, config: Option<&str>) -> BuildOptions {
        BuildOptions {
            builder,
            config: config.map(str::to_string),
            uncompute: None,
            lower: None,
        }
    }

    #[test]
    fn naive_fig2_has_eight_qubits() {
        let (json, report) = run_build(FIG2, &opts(BuilderKind::Naive, None)).unwrap();
        assert!(report.is_none());
        assert_eq!(Circuit::from_json(&json).unwrap().num_qubits(), 8);
    }

    #[test]
    fn predecoded_requires_config() {
        let err = run_build(FIG2, &opts(BuilderKind::Predecoded, None)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(run_build(FIG2, &opts(BuilderKind::Predecoded, Some("2P"))).is_ok());
    }

    #[test]
    fn oversized_word_rejected() {
        let bad = r#"{"n": 2, "d": 4, "data": [5, 16, 2, 1]}"#;
        assert_eq!(
            run_build(bad, &opts(BuilderKind::Naive, None))
                .unwrap_err()
                .exit_code(),
            2
        );
    }

    #[test]
    fn lowering_emits_report() {
        let mut o = opts(BuilderKind::Sawtooth, None);
        o.lower = Some((McxMode::Recursive, None));
        let (_, report) = run_build(FIG2, &o).unwrap();
        assert!(report.unwrap().contains("basis_gate_counts"));
    }
}
