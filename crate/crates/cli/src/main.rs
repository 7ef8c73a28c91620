use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use qprobe::oracle::Fixture;
use qprobe_cli::presets::FigureId;
use qprobe_cli::scenario::Scenario;
use qprobe_cli::{output_dir, run, write_output, Overrides, OUT_DIR_ENV};

#[derive(Parser)]
#[command(name = "qprobe", version, about = "Dephasing probes of bosonic baths: factors, Fisher information, oracle checks")]
struct Cli {
    /// Scenario file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Replace the scenario's optimization window.
    #[arg(long, global = true)]
    t_max: Option<f64>,
    /// Replace the scenario's optimization grid size.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Replace the scenario's quadrature relative tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dephasing factors along the sampled times.
    Factors,
    /// Time-optimized QFI of all four probe variants along the sweep.
    QfiSweep,
    /// Optimal-angle CFI against QFI along the sampled times.
    Cfi,
    /// Time-optimized QFI of all four variants at the scenario's parameters.
    Optimize,
    /// Every output of a figure preset.
    Figure {
        /// fig1 to fig9
        id: FigureId,
    },
    /// Exact-diagonalization check of a discrete fixture; exits nonzero on failure.
    OracleValidate {
        /// one-mode, three-mode, uncoupled or truncated
        fixture: String,
    },
}

fn env_dir() -> Option<PathBuf> {
    std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn scenario(cli: &Cli, overrides: &Overrides) -> anyhow::Result<Scenario> {
    let Some(path) = &cli.config else {
        bail!("this subcommand needs --config <path>");
    };
    let mut s = Scenario::load(path)?;
    overrides.apply(&mut s)?;
    Ok(s)
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot configure the thread pool")?;
    }
    let overrides = Overrides {
        t_max: cli.t_max,
        grid: cli.grid,
        tol: cli.tol,
    };
    let mut written = Vec::new();
    let mut code = ExitCode::SUCCESS;
    match &cli.command {
        Command::Factors | Command::QfiSweep | Command::Cfi | Command::Optimize => {
            let s = scenario(&cli, &overrides)?;
            let dir = output_dir(cli.out.as_deref(), Some(&s), env_dir());
            let stem = &s.output.stem;
            let (file, body) = match cli.command {
                Command::Factors => ("factors", run::factors_csv(&s, &run::run_factors(&s)?)),
                Command::QfiSweep => ("qfi_sweep", run::qfi_sweep_csv(&s, &run::run_qfi_sweep(&s)?)),
                Command::Cfi => ("cfi", run::cfi_csv(&s, &run::run_cfi(&s)?)),
                _ => ("optimize", run::qfi_sweep_csv(&s, &run::run_optimize(&s)?)),
            };
            written.push(write_output(&dir, &format!("{stem}_{file}.csv"), &body)?);
        }
        Command::Figure { id } => {
            let dir = output_dir(cli.out.as_deref(), None, env_dir());
            for (name, body) in qprobe_cli::render_figure(*id, &overrides)? {
                written.push(write_output(&dir, &name, &body)?);
            }
        }
        Command::OracleValidate { fixture } => {
            let Some(f) = Fixture::parse(fixture) else {
                bail!("unknown fixture `{fixture}` (one-mode, three-mode, uncoupled, truncated)");
            };
            let v = run::run_oracle_validation(f)?;
            let dir = output_dir(cli.out.as_deref(), None, env_dir());
            written.push(write_output(&dir, &format!("oracle_{}.json", f.id()), &run::validation_json(&v)?)?);
            let r = &v.report;
            eprintln!(
                "{}: {} (max abs discrepancy {:.3e})",
                r.fixture,
                if r.pass { "pass" } else { "FAIL" },
                r.max_abs_discrepancy
            );
            for s in &v.suggested {
                eprintln!("truncation flagged at T = {}: try n_max = {}", s.temperature, s.n_max);
            }
            if !r.pass {
                code = ExitCode::from(1);
            }
        }
    }
    for p in written {
        println!("{}", p.display());
    }
    Ok(code)
}
