//! Scenario runner for the phase-space toolkit.

mod commands;
mod config;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Command, ConfigError};

#[derive(Parser)]
#[command(name = "ptphase", version, about = "Phase-space portraits of Poschl-Teller two-level systems")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form classical trajectories (tau, s, q, H)
    Classical(ScenarioArgs),
    /// Wigner function on a grid
    Wigner(ScenarioArgs),
    /// Wigner current, continuity residual and stagnation points
    Flow(ScenarioArgs),
    /// Non-Liouvillian quantifier arctan(div u)
    Liouvillian(ScenarioArgs),
    /// Moments, kurtosis and entropic non-Gaussianity per lambda
    Infoprofile(ScenarioArgs),
    /// Two-mode covariance and separability criteria per lambda
    Bipartite(ScenarioArgs),
    /// Cross-check closed forms against their oracles
    Validate(ScenarioArgs),
}

#[derive(Args, Debug, Default)]
struct ScenarioArgs {
    /// Flat key = value file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Well parameter, or lo:hi for sweeps
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Time, or the step of a sweep when --tau-steps > 0
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    #[arg(long)]
    tau_steps: Option<String>,
    /// smin:smax:ns,qmin:qmax:nq
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long = "truncation-K")]
    truncation_k: Option<String>,
    /// Incoherent mixture instead of a pure superposition
    #[arg(long)]
    mixed: bool,
    #[arg(long)]
    out: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// bound, separatrix, unbound or all
    #[arg(long)]
    regime: Option<String>,
    /// 00, 11, 10re, 10im or total
    #[arg(long)]
    component: Option<String>,
}

impl ScenarioArgs {
    fn flags(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let pairs = [
            ("lambda", &self.lambda),
            ("theta", &self.theta),
            ("phi", &self.phi),
            ("tau", &self.tau),
            ("tau_steps", &self.tau_steps),
            ("grid", &self.grid),
            ("truncation_k", &self.truncation_k),
            ("out", &self.out),
            ("format", &self.format),
            ("regime", &self.regime),
            ("component", &self.component),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                m.insert(k.to_string(), v.clone());
            }
        }
        if self.mixed {
            m.insert("mixed".into(), "true".into());
        }
        m
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<ConfigError>() {
            return 2;
        }
        if let Some(core) = cause.downcast_ref::<ptphase::Error>() {
            return if core.is_numerical() { 3 } else { 2 };
        }
    }
    1
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let (command, args) = match cli.command {
        Cmd::Classical(a) => (Command::Classical, a),
        Cmd::Wigner(a) => (Command::Wigner, a),
        Cmd::Flow(a) => (Command::Flow, a),
        Cmd::Liouvillian(a) => (Command::Liouvillian, a),
        Cmd::Infoprofile(a) => (Command::Infoprofile, a),
        Cmd::Bipartite(a) => (Command::Bipartite, a),
        Cmd::Validate(a) => (Command::Validate, a),
    };
    let file = match &args.config {
        Some(p) => config::read_config_file(p)?,
        None => BTreeMap::new(),
    };
    let cfg = config::resolve(command, file, args.flags())?;
    commands::run(&cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: validation checks failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
