use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ptls::sweep::{evaluate_point, presets, run_sweep_with_workers, write_csv, ModelChoice, Output, SweepSpec};
use ptls::{Error, SystemParams};

#[derive(Parser)]
#[command(name = "ptls", about = "Light transport through two emitters in a waveguide")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = default_workers())]
    workers: usize,
    /// fq, sc or both; overrides the config.
    #[arg(long, global = true)]
    model: Option<String>,
    /// Background decay rate; overrides the config.
    #[arg(long = "gamma-bg", global = true)]
    gamma_bg: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every observable at a single point.
    Run {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        delta1: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        delta2: f64,
        #[arg(long, default_value_t = 1.0)]
        distance: f64,
        #[arg(long = "p-inc", default_value_t = 0.1)]
        p_inc: f64,
    },
    /// Run the sweep described by a TOML config and write CSV.
    Sweep { config: PathBuf },
    /// Write the CSV of a named figure preset.
    Preset { name: String },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

enum Failure {
    Config(String),
    Solver(String),
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn apply_overrides(cli: &Cli, spec: &mut SweepSpec) -> Result<(), Failure> {
    if let Some(m) = &cli.model {
        spec.model = ModelChoice::parse(m).map_err(|e| Failure::Config(e.to_string()))?;
    }
    if let Some(g) = cli.gamma_bg {
        spec.fixed.gamma_bg = g;
    }
    spec.validate().map_err(|e| Failure::Config(e.to_string()))
}

fn sweep(cli: &Cli, mut spec: SweepSpec) -> Result<(), Failure> {
    apply_overrides(cli, &mut spec)?;
    let rows = run_sweep_with_workers(&spec, cli.workers).map_err(|e| Failure::Config(e.to_string()))?;
    let mut out = sink(&cli.output)?;
    write_csv(&spec, &rows, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| Failure::Config(format!("write failed: {e}")))?;
    if !rows.is_empty() && rows.iter().all(|r| r.outcome.is_err()) {
        return Err(Failure::Solver("every grid point failed".into()));
    }
    Ok(())
}

fn run_point(cli: &Cli, params: SystemParams) -> Result<(), Failure> {
    let mut spec = SweepSpec {
        fixed: params,
        outputs: Output::ALL.to_vec(),
        ..SweepSpec::default()
    };
    apply_overrides(cli, &mut spec)?;
    let mut out = sink(&cli.output)?;
    let mut failures = 0;
    for &model in spec.model.models() {
        let text = match evaluate_point(&spec.fixed, model, &spec.outputs, None) {
            Ok(values) => {
                let mut lines = format!("[{}]\n", model.tag());
                for (o, v) in &values.values {
                    for (name, x) in o.columns().iter().zip(v) {
                        lines += &format!("{name} = {x:.16e}\n");
                    }
                }
                lines + &format!("residual = {:.3e}\n", values.residual)
            }
            Err(e) => {
                failures += 1;
                format!("[{}]\nerror = {e}\n", model.tag())
            }
        };
        out.write_all(text.as_bytes())
            .map_err(|e| Failure::Config(format!("write failed: {e}")))?;
    }
    out.flush().map_err(|e| Failure::Config(format!("write failed: {e}")))?;
    if failures == spec.model.models().len() {
        return Err(Failure::Solver("solver failed".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run {
            delta1,
            delta2,
            distance,
            p_inc,
        } => run_point(&cli, SystemParams::new(*delta1, *delta2, *distance, *p_inc)),
        Command::Sweep { config } => std::fs::read_to_string(config)
            .map_err(|e| Failure::Config(format!("{}: {e}", config.display())))
            .and_then(|text| SweepSpec::from_toml(&text).map_err(|e: Error| Failure::Config(e.to_string())))
            .and_then(|spec| sweep(&cli, spec)),
        Command::Preset { name } => match presets().remove(name.as_str()) {
            Some(spec) => sweep(&cli, spec),
            None => Err(Failure::Config(format!(
                "unknown preset `{name}` (available: {})",
                presets().keys().copied().collect::<Vec<_>>().join(", ")
            ))),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
