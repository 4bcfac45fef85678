use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qrom_cli::fidelity::{self, FidelityOptions};
use qrom_cli::sweep::{self, FidelitySettings};
use qrom_cli::{
    load_connectivity, load_sweep, parse_builders, parse_n_range, render_json, render_table,
    run_build, run_fidelity, run_sweep, summarize, BuildOptions, CliResult, ConfigSelection,
    SweepOptions,
};
use qrom_core::qrom::{Uncompute, DEFAULT_DATA_WIDTH};
use qrom_core::{BuilderKind, McxMode, NoiseModel};

#[derive(Parser)]
#[command(
    name = "qrom",
    version,
    about = "QROM circuit builder, compiler sweeps and noisy read-fidelity experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mcx {
    Recursive,
    Vchain,
}

impl From<Mcx> for McxMode {
    fn from(m: Mcx) -> Self {
        match m {
            Mcx::Recursive => McxMode::Recursive,
            Mcx::Vchain => McxMode::Vchain,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum UncomputeArg {
    Mirror,
    Reset,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build one QROM circuit from a data-table JSON file ({"n", "d", "data"}).
    Build {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        builder: String,
        /// Partition such as 2P+2P (pre-decoded builder only).
        #[arg(long)]
        config: Option<String>,
        #[arg(long, value_enum)]
        uncompute: Option<UncomputeArg>,
        /// Emit the basis-lowered circuit instead of the high-level one.
        #[arg(long)]
        lower: bool,
        #[arg(long, value_enum, default_value = "recursive")]
        mcx: Mcx,
        /// Edge-list file or `heavy_hex_27`; implies routing when lowering.
        #[arg(long)]
        coupling: Option<String>,
        /// Write the circuit here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile every (n, builder, config) and write one CSV row each.
    Sweep {
        /// Inclusive address-width range, e.g. 2..8.
        #[arg(long, default_value = "2..8")]
        n: String,
        /// Comma-separated builders or `all`.
        #[arg(long, default_value = "all")]
        builders: String,
        /// `optimal`, `all`, or a comma-separated list of partitions.
        #[arg(long, default_value = "optimal")]
        configs: String,
        #[arg(long, value_enum, default_value = "recursive")]
        mcx: Mcx,
        #[arg(long)]
        coupling: Option<String>,
        #[arg(long, default_value_t = DEFAULT_DATA_WIDTH)]
        data_width: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also fill mean_fidelity (circuits within the simulator cap only).
        #[arg(long)]
        fidelity: bool,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
        #[arg(long, default_value_t = qrom_core::sim::DEFAULT_P2)]
        p2: f64,
        #[arg(long, default_value_t = 0.0)]
        p1: f64,
        /// Record wall_time as 0 so repeated runs are byte-identical.
        #[arg(long)]
        no_timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Noisy read-back fidelity averaged over all addresses.
    Fidelity {
        #[arg(long, default_value = "2..5")]
        n: String,
        #[arg(long, default_value = "sawtooth,predecoded")]
        builders: String,
        /// `full`, `heavy_hex_27`, or an edge-list file.
        #[arg(long, default_value = "full")]
        connectivity: String,
        #[arg(long, value_enum, default_value = "recursive")]
        mcx: Mcx,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
        #[arg(long, default_value_t = qrom_core::sim::DEFAULT_P2)]
        p2: f64,
        #[arg(long, default_value_t = 0.0)]
        p1: f64,
        /// First seed; runs use seed, seed+1, … for --repeats runs.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, default_value_t = DEFAULT_DATA_WIDTH)]
        data_width: usize,
        /// Also write the per-address reports as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarise a sweep CSV: growth per address line and naive/design ratios.
    Report {
        #[arg(long = "in", value_name = "CSV")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Build {
            spec,
            builder,
            config,
            uncompute,
            lower,
            mcx,
            coupling,
            out,
        } => {
            let text = fs::read_to_string(&spec)?;
            let builder: BuilderKind = builder.parse()?;
            let coupling = coupling
                .as_deref()
                .map(load_connectivity)
                .transpose()?
                .flatten();
            let opts = BuildOptions {
                builder,
                config,
                uncompute: uncompute.map(|u| match u {
                    UncomputeArg::Mirror => Uncompute::Mirror,
                    UncomputeArg::Reset => Uncompute::Reset,
                }),
                lower: lower.then(|| (mcx.into(), coupling)),
            };
            let (circuit, report) = run_build(&text, &opts)?;
            let mut w = output(out.as_deref())?;
            writeln!(w, "{circuit}")?;
            w.flush()?;
            if let Some(r) = report {
                eprintln!("{r}");
            }
        }
        Command::Sweep {
            n,
            builders,
            configs,
            mcx,
            coupling,
            data_width,
            seed,
            fidelity,
            shots,
            p2,
            p1,
            no_timing,
            out,
        } => {
            let opts = SweepOptions {
                n: parse_n_range(&n)?,
                builders: parse_builders(&builders)?,
                configs: configs.parse::<ConfigSelection>()?,
                strategy: mcx.into(),
                coupling: coupling
                    .as_deref()
                    .map(load_connectivity)
                    .transpose()?
                    .flatten(),
                data_width,
                seed,
                fidelity: if fidelity {
                    Some(FidelitySettings {
                        shots,
                        noise: NoiseModel::new(p1, p2)?,
                    })
                } else {
                    None
                },
                timing: !no_timing,
            };
            let rows = run_sweep(&opts)?;
            sweep::write_csv(&rows, output(out.as_deref())?)?;
        }
        Command::Fidelity {
            n,
            builders,
            connectivity,
            mcx,
            shots,
            p2,
            p1,
            seed,
            repeats,
            data_width,
            json,
            out,
        } => {
            let opts = FidelityOptions {
                n: parse_n_range(&n)?,
                builders: parse_builders(&builders)?,
                strategy: mcx.into(),
                coupling: load_connectivity(&connectivity)?,
                noise: NoiseModel::new(p1, p2)?,
                shots,
                seed,
                repeats,
                data_width,
            };
            let result = run_fidelity(&opts)?;
            fidelity::write_csv(&result.rows, output(out.as_deref())?)?;
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&result.reports)?;
                fs::write(path, text + "\n")?;
            }
        }
        Command::Report { input, format, out } => {
            let records = load_sweep(File::open(&input)?)?;
            let summary = summarize(records);
            let text = match format {
                Format::Table => render_table(&summary),
                Format::Json => render_json(&summary)? + "\n",
            };
            let mut w = output(out.as_deref())?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
