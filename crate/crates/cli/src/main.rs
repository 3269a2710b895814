use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tractor_holo::report::config::{resolve, SEED_ENV};
use tractor_holo::report::{cmd_holonomy, cmd_tensors, cmd_verify_all, RunConfig, VerificationReport};
use tractor_holo::Error;

/// Fisher-Rao geometry, tractor connection and conformal holonomy of the
/// bivariate Gaussian manifold and its independence submanifold.
#[derive(Parser)]
#[command(name = "tractor-holo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form tensors against exact and numerical oracles.
    Tensors {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
    /// Conformal holonomy algebra estimate.
    Holonomy {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        loops: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Every suite for both manifolds.
    VerifyAll {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Target {
    /// bivariate or independence
    #[arg(long)]
    manifold: Option<String>,
    /// base point in source parameters, comma separated
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
}

#[derive(Args)]
struct Common {
    /// flat key = value config file
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<String>,
    /// json or text
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// override any config key, e.g. --set tolerance=0
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn overrides(common: &Common, extra: Vec<(&str, String)>) -> Result<Vec<(String, String)>, Error> {
    let mut out: Vec<(String, String)> = extra.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    for (k, v) in [("seed", &common.seed), ("format", &common.format)] {
        if let Some(v) = v {
            out.push((k.into(), v.clone()));
        }
    }
    if let Some(p) = &common.out {
        out.push(("out".into(), p.display().to_string()));
    }
    for kv in &common.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got '{kv}'")))?;
        out.push((k.trim().into(), v.into()));
    }
    Ok(out)
}

fn target_pairs(t: &Target) -> Vec<(&'static str, String)> {
    let mut v = Vec::new();
    if let Some(m) = &t.manifold {
        v.push(("manifold", m.clone()));
    }
    if let Some(p) = &t.point {
        v.push(("point", p.clone()));
    }
    v
}

type Cmd = fn(&RunConfig) -> tractor_holo::Result<VerificationReport>;

fn run(cli: Cli) -> Result<VerificationReport, Error> {
    let (common, pairs, cmd): (&Common, _, Cmd) = match &cli.command {
        Command::Tensors { target, common } => (common, target_pairs(target), cmd_tensors),
        Command::Holonomy { target, loops, common } => {
            let mut p = target_pairs(target);
            if let Some(n) = loops {
                p.push(("loops", n.to_string()));
            }
            (common, p, cmd_holonomy)
        }
        Command::VerifyAll { common } => (common, Vec::new(), cmd_verify_all),
    };
    let file = match &common.config {
        Some(path) => {
            Some(std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?)
        }
        None => None,
    };
    let cli_pairs = overrides(common, pairs)?;
    let env_seed = std::env::var(SEED_ENV).ok();
    let cfg = resolve(file.as_deref(), env_seed.as_deref(), &cli_pairs)?;
    let report = cmd(&cfg)?;
    let text = report.render(cfg.format);
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(r) if r.passed() => ExitCode::SUCCESS,
        Ok(r) => {
            for rec in r.records.iter().filter(|rec| !rec.pass) {
                eprintln!("FAIL {}", rec.name);
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::RejectedInput(_) | Error::Domain(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
