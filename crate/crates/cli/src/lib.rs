//! Command-line front door: argument parsing, dispatch, exit-code policy and
//! the run manifest.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 engine
//! failure. Log level comes from the `FLOQUET_PT_LOG` environment variable.

mod commands;
pub mod config;
mod output;
mod parallel;
mod reports;

pub use parallel::{build_context, coverage_parallel, make_pool, scan_parallel};

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};

#[derive(Debug)]
pub enum RunError {
    /// Malformed config or invalid arguments (exit 2).
    Input(String),
    /// Engine failure (exit 3).
    Engine(String),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CommandName {
    Validate,
    Structure,
    Unperturbed,
    Bloch,
    Trace,
    Scan,
    Gaps,
    Coverage,
    Verify,
}

impl CommandName {
    fn as_str(&self) -> &'static str {
        match self {
            CommandName::Validate => "validate",
            CommandName::Structure => "structure",
            CommandName::Unperturbed => "unperturbed",
            CommandName::Bloch => "bloch",
            CommandName::Trace => "trace",
            CommandName::Scan => "scan",
            CommandName::Gaps => "gaps",
            CommandName::Coverage => "coverage",
            CommandName::Verify => "verify",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    Galerkin,
    Monodromy,
    Both,
}

#[derive(Parser, Debug)]
#[command(
    name = "floquet-pt",
    version,
    about = "Bloch spectra of PT-symmetric higher-order periodic operators"
)]
struct Cli {
    /// Command to run.
    #[arg(value_enum)]
    command: CommandName,

    /// Path to the JSON config document.
    #[arg(long)]
    config: PathBuf,

    /// Output directory for reports and CSV files.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Worker-pool size for scans (default: number of processors).
    #[arg(long)]
    jobs: Option<usize>,

    /// Override the homotopy weight from the config.
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<f64>,

    /// Scan engine.
    #[arg(long, value_enum, default_value_t = EngineChoice::Monodromy)]
    engine: EngineChoice,

    #[arg(long, allow_hyphen_values = true)]
    lambda_lo: Option<f64>,

    #[arg(long, allow_hyphen_values = true)]
    lambda_hi: Option<f64>,

    #[arg(long)]
    step: Option<f64>,

    /// Quasimomentum for `bloch` and trace center for `trace`.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,

    /// Fourier band index.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<i64>,

    /// Index into the spectral structure.
    #[arg(long)]
    j: Option<usize>,
}

fn init_logging() {
    let env = env_logger::Env::new().filter("FLOQUET_PT_LOG");
    let _ = env_logger::Builder::from_env(env).is_test(false).try_init();
}

/// Runs the CLI; returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success-style errors
            if e.use_stderr() {
                eprintln!("{e}");
                return 2;
            }
            print!("{e}");
            return 0;
        }
    };
    let started = Instant::now();

    let (spec, settings) = match config::load_config(&cli.config) {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("input error: {e:#}");
            return 2;
        }
    };
    let spec = match cli.epsilon {
        Some(eps) => match spec.with_epsilon(eps) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("input error: {e}");
                return 2;
            }
        },
        None => spec,
    };

    if let Err(e) = std::fs::create_dir_all(&cli.out) {
        eprintln!("input error: cannot create output directory: {e}");
        return 2;
    }
    let jobs = cli
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let pool = match parallel::make_pool(jobs) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("engine failure: {e}");
            return 3;
        }
    };
    let io = commands::CommandIo { out_dir: &cli.out, pool: &pool };

    let outcome: Result<u32, RunError> = match cli.command {
        CommandName::Validate => commands::validate(&spec, &settings).map(|()| 0),
        CommandName::Structure => commands::structure(&spec, &settings, &io).map(|()| 0),
        CommandName::Unperturbed => {
            commands::unperturbed(&spec, &settings, &io, cli.k, cli.j, cli.step).map(|()| 0)
        }
        CommandName::Bloch => {
            commands::bloch(&spec, &settings, &io, cli.t, cli.lambda_lo, cli.lambda_hi)
                .map(|()| 0)
        }
        CommandName::Trace => {
            commands::trace(&spec, &settings, &io, cli.t, cli.k, cli.j).map(|()| 0)
        }
        CommandName::Scan => commands::scan(
            &spec,
            &settings,
            &io,
            cli.engine,
            cli.lambda_lo,
            cli.lambda_hi,
            cli.step,
            false,
        )
        .map(|()| 0),
        CommandName::Gaps => commands::scan(
            &spec,
            &settings,
            &io,
            cli.engine,
            cli.lambda_lo,
            cli.lambda_hi,
            cli.step,
            true,
        )
        .map(|()| 0),
        CommandName::Coverage => commands::coverage(
            &spec,
            &settings,
            &io,
            cli.engine,
            cli.lambda_lo,
            cli.lambda_hi,
            cli.step,
        )
        .map(|()| 0),
        CommandName::Verify => commands::verify(&spec, &settings),
    };

    match outcome {
        Ok(failures) => {
            let manifest = build_manifest(&cli, jobs, started.elapsed().as_secs_f64());
            if let Err(e) = output::write_json_atomic(&cli.out.join("manifest.json"), &manifest) {
                eprintln!("engine failure: {e:#}");
                return 3;
            }
            if failures > 0 {
                eprintln!("verification failed: {failures} check(s)");
                1
            } else {
                0
            }
        }
        Err(RunError::Input(msg)) => {
            eprintln!("input error: {msg}");
            2
        }
        Err(RunError::Engine(msg)) => {
            eprintln!("engine failure: {msg}");
            3
        }
    }
}

fn build_manifest(cli: &Cli, jobs: usize, total_seconds: f64) -> reports::Manifest {
    let mut overrides = BTreeMap::new();
    if let Some(x) = cli.epsilon {
        overrides.insert("epsilon".into(), serde_json::json!(x));
    }
    if let Some(x) = cli.lambda_lo {
        overrides.insert("lambda_lo".into(), serde_json::json!(x));
    }
    if let Some(x) = cli.lambda_hi {
        overrides.insert("lambda_hi".into(), serde_json::json!(x));
    }
    if let Some(x) = cli.step {
        overrides.insert("step".into(), serde_json::json!(x));
    }
    if let Some(x) = cli.t {
        overrides.insert("t".into(), serde_json::json!(x));
    }
    if let Some(x) = cli.k {
        overrides.insert("k".into(), serde_json::json!(x));
    }
    if let Some(x) = cli.j {
        overrides.insert("j".into(), serde_json::json!(x));
    }
    overrides.insert(
        "engine".into(),
        serde_json::json!(match cli.engine {
            EngineChoice::Galerkin => "galerkin",
            EngineChoice::Monodromy => "monodromy",
            EngineChoice::Both => "both",
        }),
    );
    reports::Manifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: cli.command.as_str().to_string(),
        config_path: cli.config.display().to_string(),
        out_dir: cli.out.display().to_string(),
        jobs,
        overrides,
        timings: reports::Timings { total_seconds },
    }
}
