//! `hodgelab`: runs the model verification suites and writes JSON/CSV reports.
//!
//! Settings are resolved in order: built-in defaults, the `--config` TOML
//! file, then command-line flags.

mod cmd_bergman;
mod cmd_flag;
mod cmd_heat;
mod cmd_signature;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use report::{CmdResult, Failure, Outcome, EXIT_CHECKS_FAILED, EXIT_OK, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "hodgelab", version, about = "Model checks for Bergman-Hodge kernels of line-bundle powers")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for reports.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance override, e.g. `--tol heat.route=1e-7`; repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE", global = true)]
    tol: Vec<String>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Levi signature and subprincipal spectra of a weight function.
    Signature(SignatureArgs),
    /// Riccati phase flow, stable manifolds and the kernel phase.
    Heat(HeatArgs),
    /// Bergman kernels of the model bundles by two routes.
    Bergman(BergmanArgs),
    /// Borel-Weil-Bott dimensions, the K⁻ twist and Riemann-Roch integrals.
    Flag(FlagArgs),
    /// Every suite with the configured parameters.
    All,
}

#[derive(Args, Debug)]
struct SignatureArgs {
    /// JSON weight-function file.
    #[arg(long)]
    phi: Option<PathBuf>,
    /// Diagonal weight `Σ μ_j |z_j|²` instead of a file.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    mu: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
struct HeatArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    mu: Option<Vec<f64>>,
    #[arg(long)]
    t_max: Option<f64>,
    /// Number of grid times in `(0, t_max]`.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    step: Option<f64>,
    /// Rerun at half the step and report the rate change.
    #[arg(long)]
    halve_step: bool,
}

#[derive(Args, Debug)]
struct BergmanArgs {
    /// fock, fock_mixed or p1_oK.
    #[arg(long)]
    model: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambda: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<u32>>,
    /// Form degree for fock_mixed.
    #[arg(long)]
    q: Option<usize>,
}

#[derive(Args, Debug)]
struct FlagArgs {
    #[arg(long)]
    root_system: Option<String>,
    /// Fundamental-weight coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    weight: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    k: Option<Vec<i64>>,
}

fn resolve(cli: &Cli) -> CmdResult<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p).map_err(Failure::usage)?,
        None => RunConfig::default(),
    };
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.jobs.is_some() {
        cfg.jobs = cli.jobs;
    }
    for t in &cli.tol {
        cfg.set_tolerance(t).map_err(Failure::usage)?;
    }
    match &cli.command {
        Command::Signature(a) => {
            if let Some(p) = &a.phi {
                cfg.signature.phi = Some(p.clone());
            }
            if let Some(m) = &a.mu {
                cfg.signature.mu = m.clone();
                cfg.signature.phi = None;
            }
        }
        Command::Heat(a) => {
            if let Some(m) = &a.mu {
                cfg.heat.mu = m.clone();
            }
            if let Some(t) = a.t_max {
                cfg.heat.t_max = t;
            }
            if let Some(s) = a.samples {
                cfg.heat.samples = s;
            }
            if let Some(s) = a.step {
                cfg.heat.step = s;
            }
            cfg.heat.halve_step |= a.halve_step;
        }
        Command::Bergman(a) => {
            if let Some(m) = &a.model {
                cfg.bergman.model = m.clone();
            }
            if let Some(l) = &a.lambda {
                cfg.bergman.lambda = l.clone();
            }
            if let Some(k) = &a.k {
                cfg.bergman.k = k.clone();
            }
            if let Some(q) = a.q {
                cfg.bergman.q = q;
            }
        }
        Command::Flag(a) => {
            if let Some(r) = &a.root_system {
                cfg.flag.root_system = r.clone();
            }
            if let Some(w) = &a.weight {
                cfg.flag.weight = w.clone();
            }
            if let Some(k) = &a.k {
                cfg.flag.k = k.clone();
            }
        }
        Command::All => {}
    }
    cfg.validate().map_err(Failure::usage)?;
    Ok(cfg)
}

fn run(cli: &Cli) -> CmdResult<Vec<Outcome>> {
    let cfg = resolve(cli)?;
    if let Some(j) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Failure::usage(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Signature(_) => Ok(vec![cmd_signature::run(&cfg)?]),
        Command::Heat(_) => Ok(vec![cmd_heat::run(&cfg)?]),
        Command::Bergman(_) => Ok(vec![cmd_bergman::run(&cfg)?]),
        Command::Flag(_) => Ok(vec![cmd_flag::run(&cfg)?]),
        Command::All => {
            let mut out = Vec::new();
            let mut first_err = None;
            let suites: [fn(&RunConfig) -> CmdResult<Outcome>; 4] =
                [cmd_signature::run, cmd_heat::run, cmd_bergman::run, cmd_flag::run];
            for suite in suites {
                match suite(&cfg) {
                    Ok(o) => out.push(o),
                    Err(e) => {
                        eprintln!("error: {}", e.message);
                        first_err.get_or_insert(e);
                    }
                }
            }
            for o in &out {
                o.print();
            }
            match first_err {
                Some(e) => Err(e),
                None => Ok(out),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let all = matches!(cli.command, Command::All);
    let code = match run(&cli) {
        Ok(outcomes) => {
            if !all {
                outcomes.iter().for_each(Outcome::print);
            }
            if outcomes.iter().all(Outcome::passed) {
                EXIT_OK
            } else {
                EXIT_CHECKS_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            if e.code == EXIT_USAGE {
                eprintln!("run `hodgelab --help` for usage");
            }
            e.code
        }
    };
    ExitCode::from(code as u8)
}
