use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cftp_lab::experiment::{exit_code, run_and_write, Experiment, RunConfig};
use cftp_lab::Result;

/// Exact sampling experiments for monotone spin systems.
#[derive(Parser)]
#[command(name = "cftp-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact samples on a ball around the box centre.
    Sample(Common),
    /// Survival of the coding radius.
    Radius(Common),
    /// Survival of the diagonal coalescence time.
    Diagonal(Common),
    /// Space-time coding time with digit order labels and the finite update.
    Spacetime(Common),
    /// Disagreement probability of the coupled chains.
    Mixing(Common),
    /// Edwards-Sokal colouring of a vertex block.
    Potts(Common),
    /// Exact-enumeration checks on a small box.
    Validate(Common),
}

#[derive(Args)]
struct Common {
    /// File of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicas: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Side lengths of the base box, e.g. `41x41`.
    #[arg(long)]
    extents: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// Output path; the JSON envelope goes next to it.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl Command {
    fn split(self) -> (Experiment, Common) {
        match self {
            Command::Sample(c) => (Experiment::Sample, c),
            Command::Radius(c) => (Experiment::Radius, c),
            Command::Diagonal(c) => (Experiment::Diagonal, c),
            Command::Spacetime(c) => (Experiment::Spacetime, c),
            Command::Mixing(c) => (Experiment::Mixing, c),
            Command::Potts(c) => (Experiment::Potts, c),
            Command::Validate(c) => (Experiment::Validate, c),
        }
    }
}

fn config(experiment: Experiment, args: Common) -> Result<RunConfig> {
    let mut cfg = RunConfig::from_env(experiment)?;
    if experiment == Experiment::Validate {
        cfg.extents = vec![2, 2];
    }
    if let Some(path) = &args.config {
        cfg.apply_file(path)?;
    }
    for kv in &args.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| cftp_lab::Error::Config(format!("`--set {kv}`: expected key=value")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    let flags = [
        ("seed", args.seed.map(|x| x.to_string())),
        ("replicas", args.replicas.map(|x| x.to_string())),
        ("workers", args.workers.map(|x| x.to_string())),
        ("extents", args.extents),
        ("p", args.p.map(|x| x.to_string())),
        ("q", args.q.map(|x| x.to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, &v)?;
        }
    }
    if args.output.is_some() {
        cfg.output = args.output;
    }
    cfg.experiment = experiment;
    Ok(cfg)
}

fn main() -> ExitCode {
    let (experiment, args) = Cli::parse().command.split();
    let result = config(experiment, args).and_then(|cfg| {
        let (out, env) = run_and_write(&cfg)?;
        if cfg.output.is_none() {
            print!("{}", out.csv);
        }
        eprintln!("{}", serde_json::to_string_pretty(&env).expect("envelope serialises"));
        Ok(out.failed_checks)
    });
    match result {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failed) => {
            eprintln!("error: {failed} check(s) failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
