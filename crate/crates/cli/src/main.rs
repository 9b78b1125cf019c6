use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use disklab_cli::commands::{emit, run_command};
use disklab_cli::{CliError, ExperimentConfig};

#[derive(Parser)]
#[command(name = "disklab", version, about = "Weighted mixed-norm and tent space experiments on the unit disc")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<String>,
    /// csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Extra `key=value` settings (quadrature overrides and the like).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Mixed or tent norm of one function.
    Norm {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, default_value = "const:c=1")]
        weight: String,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value = "mixed")]
        space: String,
        #[command(flatten)]
        common: Common,
    },
    /// Doubling-class diagnostics of a weight.
    ClassifyWeight {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value = "2,4,8")]
        ks: String,
        #[command(flatten)]
        common: Common,
    },
    /// The radii with tail ratio `K^{-n}`.
    RhoTable {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 2.0)]
        k: f64,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[command(flatten)]
        common: Common,
    },
    /// `D_p` or `B_p` for a projection and weight.
    Condition {
        #[arg(long, default_value = "Dp")]
        which: String,
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Reproduction of seeded polynomials by the projection.
    ProjectionCheck {
        #[arg(long, default_value = "0,1")]
        gamma: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Cell labels of a cone partition on a grid.
    PartitionDemo {
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[command(flatten)]
        common: Common,
    },
    /// A named experiment driven by a config file.
    Run {
        experiment: String,
        #[arg(long)]
        config: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn build(pairs: Vec<(&str, String)>, common: &Common, base: ExperimentConfig) -> Result<ExperimentConfig, CliError> {
    let mut cfg = base;
    let bad = |msg| CliError::Config { line: 0, msg };
    for (k, v) in pairs {
        cfg.set(k, &v).map_err(bad)?;
    }
    for kv in &common.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| bad(format!("expected key=value, got '{kv}'")))?;
        cfg.set(k.trim(), v.trim()).map_err(bad)?;
    }
    cfg.set("format", &common.format).map_err(bad)?;
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<Option<String>, CliError> {
    let empty = ExperimentConfig::default();
    let (name, cfg, common) = match &cli.cmd {
        Cmd::Norm { function, weight, p, q, space, common } => (
            "norm".to_string(),
            build(
                vec![("fn", function.clone()), ("weight", weight.clone()), ("p", p.to_string()), ("q", q.to_string()), ("space", space.clone())],
                common,
                empty,
            )?,
            common,
        ),
        Cmd::ClassifyWeight { weight, ks, common } => {
            ("classify-weight".into(), build(vec![("weight", weight.clone()), ("ks", ks.clone())], common, empty)?, common)
        }
        Cmd::RhoTable { weight, k, n_max, common } => (
            "rho-table".into(),
            build(vec![("weight", weight.clone()), ("k", k.to_string()), ("n_max", n_max.to_string())], common, empty)?,
            common,
        ),
        Cmd::Condition { which, weight, gamma, p, common } => (
            "condition".into(),
            build(
                vec![("which", which.clone()), ("weight", weight.clone()), ("gamma", gamma.to_string()), ("p", p.to_string())],
                common,
                empty,
            )?,
            common,
        ),
        Cmd::ProjectionCheck { gamma, seed, common } => {
            ("projection-check".into(), build(vec![("gamma", gamma.clone()), ("seed", seed.to_string())], common, empty)?, common)
        }
        Cmd::PartitionDemo { m, levels, common } => {
            ("partition-demo".into(), build(vec![("m", m.to_string()), ("levels", levels.to_string())], common, empty)?, common)
        }
        Cmd::Run { experiment, config, common } => {
            let base = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
                    ExperimentConfig::parse(&text)?
                }
                None => empty,
            };
            (experiment.clone(), build(vec![], common, base)?, common)
        }
    };
    let rep = run_command(&name, &cfg)?;
    emit(&rep, &cfg, common.output.as_deref())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(Some(text)) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
