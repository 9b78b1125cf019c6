//! Subcommands other than `run`: each fills an [`ExperimentConfig`] from flags and
//! produces a [`Report`].

use disklab::norms::{norm, SpaceKind, SpaceSpec};

use crate::config::ExperimentConfig;
use crate::experiments::run_experiment;
use crate::report::Report;
use crate::CliError;

/// One norm of one function, with its convergence report.
pub fn norm_report(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let f = cfg
        .function("fn")?
        .ok_or_else(|| CliError::Config { line: 0, msg: "missing 'fn'".into() })?;
    let w = cfg.weight_or("weight", "const:c=1")?;
    let kind = match cfg.str_or("space", "mixed") {
        "mixed" => SpaceKind::Mixed,
        "tent" => SpaceKind::Tent,
        other => return Err(CliError::Config { line: 0, msg: format!("unknown space '{other}'") }),
    };
    let spec = SpaceSpec::new(cfg.f64_or("p", 2.0)?, cfg.f64_or("q", 2.0)?, w, kind)?;
    let quad = cfg.quad()?;
    let r = norm(&f, &spec, &quad)?;
    let mut rep = Report::new("norm", cfg.echo(), &["value", "est_rel_err", "rounds", "converged"]);
    rep.push(vec![r.value.into(), r.est_rel_err.into(), r.rounds.into(), r.converged.into()]);
    rep.set("value", r.value);
    rep.set("converged", r.converged);
    Ok(rep)
}

/// Dispatch a subcommand name to its report builder.
pub fn run_command(name: &str, cfg: &ExperimentConfig) -> Result<Report, CliError> {
    match name {
        "norm" => norm_report(cfg),
        "classify-weight" => run_experiment("classify", cfg),
        "rho-table" => run_experiment("rho-table", cfg),
        "condition" => run_experiment("conditions", cfg),
        "projection-check" => run_experiment("projection", cfg),
        "partition-demo" => run_experiment("partition-demo", cfg),
        other => run_experiment(other, cfg),
    }
}

/// Render a report and write it to `output`, or return it for stdout when `output` is `None`.
pub fn emit(rep: &Report, cfg: &ExperimentConfig, output: Option<&str>) -> Result<Option<String>, CliError> {
    let text = rep.render(cfg.format()?)?;
    match output.or(cfg.get("output")) {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
