//! `qmplab`: seeded measurement-model experiments from the command line.
//!
//! Exit status is 0 when the verdict is pass, 1 when it is fail and 2 for
//! usage, validation or I/O errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmplab_core::experiments::{
    experiment_model, grid_csv, run_grid, run_impure_qmp_with, run_pure_qmp_with, sweep_csv, verify_all,
    ExperimentConfig, SweepRun, Verdict,
};
use qmplab_core::io::{density_from_json, model_from_json, model_to_json, num17};
use qmplab_core::measurement::make_regions;
use qmplab_core::par::Execution;
use qmplab_core::LabError;

#[derive(Parser, Debug)]
#[command(name = "qmplab", version, about = "Seeded verification suites for finite-dimensional measurement models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Automorphism, orthogonality, pure and impure suites in one report.
    Verify(RunArgs),
    /// Neighborhood sweep with a pure ready state, computed with vectors.
    QmpPure(ModelRunArgs),
    /// Neighborhood sweep with a mixed ready state.
    QmpImpure(ModelRunArgs),
    /// Impure (and pure, for rank 1) sweeps over the dimension grid.
    Sweep(RunArgs),
    /// Classify one state against the regions of a saved model.
    Classify(ClassifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value_t = 2)]
    ds: usize,
    #[arg(long, default_value_t = 4)]
    de: usize,
    /// Rank of the ready state.
    #[arg(long, default_value_t = 1)]
    rank: usize,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Neighborhood radius; derived from epsilon when omitted.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Evaluate samples on the calling thread only.
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ModelRunArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Also write the generated measurement model as JSON.
    #[arg(long)]
    save_model: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    /// Model JSON, as written by `--save-model`.
    #[arg(long)]
    model: PathBuf,
    /// Density operator JSON on the total space, or on the microsystem (it
    /// is then paired with the ready state and evolved first).
    #[arg(long)]
    state: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[command(flatten)]
    out: OutputArgs,
}

impl RunArgs {
    fn config(&self) -> Result<ExperimentConfig, LabError> {
        let config = ExperimentConfig {
            d_s: self.ds,
            d_e: self.de,
            epsilon: self.epsilon,
            ready_rank: self.rank,
            samples: self.samples,
            seed: self.seed,
            delta: self.delta,
        };
        config.validate()?;
        Ok(config)
    }

    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

#[derive(Debug)]
enum CliError {
    Lab(LabError),
    Io(String),
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        CliError::Lab(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lab(e) => write!(f, "{e}"),
            CliError::Io(msg) => f.write_str(msg),
        }
    }
}

/// Writes through a temporary file in the target directory, so a failed run
/// never leaves a partial file behind.
fn emit(out: &OutputArgs, body: &str) -> Result<(), CliError> {
    let Some(path) = &out.output else {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(body.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::Io(format!("writing to standard output: {e}")));
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(body.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn save_model(args: &ModelRunArgs, config: &ExperimentConfig) -> Result<(), CliError> {
    if let Some(path) = &args.save_model {
        let model = experiment_model(config)?;
        let out = OutputArgs { format: Format::Json, output: Some(path.clone()) };
        emit(&out, &with_newline(model_to_json(&model)))?;
    }
    Ok(())
}

fn run_sweep(
    args: &ModelRunArgs,
    f: fn(&ExperimentConfig, Execution) -> qmplab_core::Result<SweepRun>,
) -> Result<Verdict, CliError> {
    let config = args.run.config()?;
    save_model(args, &config)?;
    let run = f(&config, args.run.execution())?;
    let body = match args.run.out.format {
        Format::Json => with_newline(run.report.to_json()),
        Format::Csv => sweep_csv(&run.records),
    };
    emit(&args.run.out, &body)?;
    Ok(run.report.verdict)
}

fn run(cli: Cli) -> Result<Verdict, CliError> {
    match cli.command {
        Command::Verify(args) => {
            let config = args.config()?;
            let outcome = verify_all(&config, args.execution())?;
            let body = match args.out.format {
                Format::Json => with_newline(outcome.to_json()),
                Format::Csv => sweep_csv(&outcome.impure_records),
            };
            emit(&args.out, &body)?;
            Ok(outcome.verdict)
        }
        Command::QmpPure(args) => run_sweep(&args, run_pure_qmp_with),
        Command::QmpImpure(args) => run_sweep(&args, run_impure_qmp_with),
        Command::Sweep(args) => {
            let config = args.config()?;
            let reports = run_grid(&config, args.execution())?;
            let body = match args.out.format {
                Format::Json => {
                    with_newline(serde_json::to_string_pretty(&reports).map_err(|e| CliError::Io(e.to_string()))?)
                }
                Format::Csv => grid_csv(&reports),
            };
            emit(&args.out, &body)?;
            Ok(Verdict::from_bool(reports.iter().all(|r| r.verdict.passed())))
        }
        Command::Classify(args) => {
            let model = model_from_json(&read(&args.model)?)?;
            let state = density_from_json(&read(&args.state)?)?;
            let regions = make_regions(&model, args.epsilon)?;
            let total = if state.dim() == model.d_s() && model.d_s() != model.dim() {
                model.postmeasurement(&state)?
            } else {
                state
            };
            let c = regions.classify(&total)?;
            let body = match args.out.format {
                Format::Json => {
                    with_newline(serde_json::to_string_pretty(&c).map_err(|e| CliError::Io(e.to_string()))?)
                }
                Format::Csv => format!(
                    "label,overlap1,overlap2,distance1,distance2\n{},{},{},{},{}\n",
                    c.label.as_str(),
                    num17::format(c.overlap1),
                    num17::format(c.overlap2),
                    num17::format(c.distance1),
                    num17::format(c.distance2)
                ),
            };
            emit(&args.out, &body)?;
            Ok(Verdict::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qmplab: {e}");
            ExitCode::from(2)
        }
    }
}
