use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use rtstokes::harness::{self, ExperimentResult, SimConfig};

/// Rayleigh-Taylor interface between two Stokes fluids in the periodic strip.
#[derive(Parser)]
#[command(name = "rtstokes", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a configuration; writes norms.csv and snapshot files to out_dir.
    Run { config: PathBuf },
    /// Fit per-mode exponential rates against (drho/4)/|k|.
    DecayFit {
        config: PathBuf,
        /// Relative tolerance on each fitted rate.
        #[arg(long, default_value_t = 0.01)]
        rel_tol: f64,
    },
    /// Forward stable leg to tau, then the density-swapped leg back.
    Reversal {
        config: PathBuf,
        #[arg(long)]
        tau: f64,
    },
    /// Spatial and temporal self-convergence study.
    Converge { config: PathBuf },
    /// Closed-form kernels against their Fourier series.
    KernelCheck {
        /// Directory for result.json.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn load(path: &Path) -> Result<SimConfig> {
    SimConfig::load(path).with_context(|| format!("loading {}", path.display()))
}

fn report(result: &ExperimentResult, dir: &Path) -> Result<ExitCode> {
    fs::create_dir_all(dir)?;
    let path = dir.join("result.json");
    result.write_json(&path)?;
    for (key, m) in &result.measured {
        let ok = result.relation[key].holds(*m, result.expected[key], result.tolerance[key]);
        println!(
            "{} {key}: measured {m:.6e}, expected {:.6e} ({:?}, tol {:.1e})",
            if ok { "ok  " } else { "FAIL" },
            result.expected[key],
            result.relation[key],
            result.tolerance[key]
        );
    }
    for (key, v) in &result.info {
        println!("     {key}: {v:.6e}");
    }
    println!(
        "{}: {} in {:.2} s, wrote {}",
        result.name,
        if result.pass { "pass" } else { "FAIL" },
        result.runtime_seconds,
        path.display()
    );
    Ok(if result.pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn run(config: &Path) -> Result<ExitCode> {
    let cfg = load(config)?;
    let summary = harness::run(&cfg)?;
    let last = summary.reports.last();
    println!("{} reports, {} snapshots in {}", summary.reports.len(), summary.snapshots_written, cfg.out_dir.display());
    if let Some(r) = last {
        println!("t = {:.6}, l2 = {:.6e}, h3 = {:.6e}, maxF = {:.4}", r.t, r.l2, r.h3, r.max_f);
    }
    match summary.abort {
        None => Ok(ExitCode::SUCCESS),
        Some(e) => {
            eprintln!("run aborted at t = {:.6}: {e}", summary.final_state.t());
            Ok(ExitCode::FAILURE)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config } => run(&config),
        Command::DecayFit { config, rel_tol } => load(&config).and_then(|cfg| {
            let r = harness::experiment_decay_fit(&cfg, rel_tol)?;
            report(&r, &cfg.out_dir)
        }),
        Command::Reversal { config, tau } => load(&config).and_then(|cfg| {
            let r = harness::experiment_reversal(&cfg, tau)?;
            report(&r, &cfg.out_dir)
        }),
        Command::Converge { config } => load(&config).and_then(|cfg| {
            let r = harness::experiment_convergence(&cfg)?;
            report(&r, &cfg.out_dir)
        }),
        Command::KernelCheck { out } => {
            harness::experiment_kernel_check().map_err(anyhow::Error::from).and_then(|r| report(&r, &out))
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
