use std::fmt;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use entangler_core::io::{to_json_string, FormatError, UnitaryFile};
use entangler_core::report::{find_witness, schmidt_report, CommandEcho, ReportFile, ReportPayload};
use entangler_core::search::SearchError;
use entangler_core::{
    certify, exists_universal_entangler, haar_study, search_entangler, BipartiteDims, HaarStudyResult,
    OptimizerConfig, SearchBudget, Verdict,
};

use crate::{Cli, Command, Format, OptimizerArgs, OutputArgs};

/// Error caused by the user's arguments or input files (exit code 2).
#[derive(Debug)]
pub struct BadInput(pub String);

impl fmt::Display for BadInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadInput {}

fn bad(msg: impl Into<String>) -> anyhow::Error {
    BadInput(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Yes,
    No,
    Inconclusive,
}

impl Outcome {
    pub const BAD_INPUT: u8 = 2;

    pub fn code(self) -> u8 {
        match self {
            Outcome::Yes => 0,
            Outcome::No => 3,
            Outcome::Inconclusive => 4,
        }
    }

    fn of_verdict(v: Verdict) -> Self {
        match v {
            Verdict::UniversalEntanglerNumerical => Outcome::Yes,
            Verdict::NotUniversalWitnessFound => Outcome::No,
            Verdict::Inconclusive => Outcome::Inconclusive,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let timing = !cli.no_timing;
    match &cli.command {
        Command::Exists { m, n, output } => {
            require_json(output, "exists")?;
            let verdict = exists_universal_entangler(dims(*m, *n)?);
            let outcome = if verdict.exists { Outcome::Yes } else { Outcome::No };
            let report = ReportFile::new(echo("exists", [m.to_string(), n.to_string()]), ReportPayload::Exists(verdict));
            emit_json(&report, output)?;
            Ok(outcome)
        }
        Command::Certify { file, optimizer, output } | Command::Witness { file, optimizer, output } => {
            let witness_mode = matches!(cli.command, Command::Witness { .. });
            let name = if witness_mode { "witness" } else { "certify" };
            require_json(output, name)?;
            let gate = load_file(file)?.to_gate().map_err(|e| input_error(file, e))?;
            let cfg = optimizer_config(optimizer)?;
            let mut args = vec![file.display().to_string()];
            args.extend(optimizer_echo(&cfg));
            let start = Instant::now();
            let (payload, outcome) = if witness_mode {
                let w = find_witness(&gate, &cfg)?;
                let outcome = if w.witness_found { Outcome::Yes } else { Outcome::No };
                (ReportPayload::Witness(w), outcome)
            } else {
                let r = certify(&gate, &cfg)?;
                let outcome = Outcome::of_verdict(r.verdict);
                (ReportPayload::Certify(r), outcome)
            };
            let mut report = ReportFile::new(echo(name, args), payload);
            report.seed = Some(cfg.seed);
            report.config = Some(cfg);
            report.wall_time_ms = elapsed(start, timing);
            emit_json(&report, output)?;
            Ok(outcome)
        }
        Command::Search {
            m,
            n,
            candidates,
            hill_steps,
            step_scale,
            search_restarts,
            final_restarts,
            seed,
            unitary_out,
            output,
        } => {
            require_json(output, "search")?;
            let d = dims(*m, *n)?;
            let seed = resolve_seed(*seed);
            let budget = SearchBudget {
                candidates: *candidates,
                hill_steps: *hill_steps,
                step_scale: *step_scale,
                search_restarts: *search_restarts,
                final_restarts: *final_restarts,
            };
            let cfg = OptimizerConfig::default().with_seed(seed);
            let start = Instant::now();
            let result = match search_entangler(d, &cfg, &budget, seed) {
                Ok(r) => r,
                Err(SearchError::DimsNotEligible(v)) => {
                    eprintln!(
                        "no universal entangler exists on {}: need min(m,n) >= 3 and (m,n) != (3,3); \
                         1-(m-2)(n-2) = {} >= 0",
                        v.dims, v.intersection_excess
                    );
                    return Ok(Outcome::No);
                }
                Err(SearchError::InvalidBudget(msg)) => return Err(bad(msg)),
                Err(e) => return Err(e.into()),
            };
            if let Some(path) = unitary_out {
                UnitaryFile::from_gate(&result.best_unitary)
                    .save(path)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let args = search_echo(d, &budget, seed);
            let mut report = ReportFile::new(echo("search", args), ReportPayload::Search(result));
            report.seed = Some(seed);
            report.config = Some(cfg);
            report.wall_time_ms = elapsed(start, timing);
            emit_json(&report, output)?;
            Ok(Outcome::Yes)
        }
        Command::HaarStudy { m, n, samples, optimizer, output } => {
            let d = dims(*m, *n)?;
            let cfg = optimizer_config(optimizer)?;
            if *samples == 0 {
                return Err(bad("--samples must be at least 1"));
            }
            let start = Instant::now();
            let study = haar_study(d, *samples, &cfg, cfg.seed)?;
            let wall = elapsed(start, timing);
            match output.format {
                Format::Csv => emit(&haar_csv(&study)?, output)?,
                Format::Json => {
                    let mut args = vec![m.to_string(), n.to_string(), "--samples".into(), samples.to_string()];
                    args.extend(optimizer_echo(&cfg));
                    let mut report = ReportFile::new(echo("haar-study", args), ReportPayload::HaarStudy(study));
                    report.seed = Some(cfg.seed);
                    report.config = Some(cfg);
                    report.wall_time_ms = wall;
                    emit_json(&report, output)?;
                }
            }
            Ok(Outcome::Yes)
        }
        Command::Schmidt { statefile, m, n, output } => {
            require_json(output, "schmidt")?;
            let file = load_file(statefile)?;
            if (file.m as u64, file.n as u64) != (*m, *n) {
                return Err(bad(format!(
                    "{} declares dims {}x{} but {}x{} was requested",
                    statefile.display(),
                    file.m,
                    file.n,
                    m,
                    n
                )));
            }
            let state = file.to_state().map_err(|e| input_error(statefile, e))?;
            let report = schmidt_report(&state).map_err(|e| bad(e.to_string()))?;
            let args = [statefile.display().to_string(), m.to_string(), n.to_string()];
            emit_json(&ReportFile::new(echo("schmidt", args), ReportPayload::Schmidt(report)), output)?;
            Ok(Outcome::Yes)
        }
    }
}

fn dims(m: u64, n: u64) -> Result<BipartiteDims> {
    BipartiteDims::new(m as usize, n as usize).map_err(|e| bad(e.to_string()))
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

fn optimizer_config(args: &OptimizerArgs) -> Result<OptimizerConfig> {
    let cfg = OptimizerConfig {
        restarts: args.restarts,
        max_iters: args.max_iters,
        witness_tol: args.tol,
        gap_tol: args.gap_tol,
        seed: resolve_seed(args.seed),
        ..OptimizerConfig::default()
    };
    cfg.validate().map_err(|e| bad(e.to_string()))?;
    Ok(cfg)
}

fn load_file(path: &Path) -> Result<UnitaryFile> {
    UnitaryFile::load(path).map_err(|e| input_error(path, e))
}

fn input_error(path: &Path, e: FormatError) -> anyhow::Error {
    bad(format!("{}: {e}", path.display()))
}

fn require_json(output: &OutputArgs, command: &str) -> Result<()> {
    match output.format {
        Format::Json => Ok(()),
        Format::Csv => Err(bad(format!("{command} reports are JSON only; CSV is available for haar-study"))),
    }
}

fn echo<I: IntoIterator<Item = String>>(name: &str, args: I) -> CommandEcho {
    CommandEcho {
        name: name.to_string(),
        args: args.into_iter().collect(),
    }
}

/// Flags that reproduce `cfg` on a re-run.
fn optimizer_echo(cfg: &OptimizerConfig) -> Vec<String> {
    vec![
        "--restarts".into(),
        cfg.restarts.to_string(),
        "--tol".into(),
        cfg.witness_tol.to_string(),
        "--gap-tol".into(),
        cfg.gap_tol.to_string(),
        "--max-iters".into(),
        cfg.max_iters.to_string(),
        "--seed".into(),
        cfg.seed.to_string(),
    ]
}

fn search_echo(d: BipartiteDims, budget: &SearchBudget, seed: u64) -> Vec<String> {
    vec![
        d.m().to_string(),
        d.n().to_string(),
        "--candidates".into(),
        budget.candidates.to_string(),
        "--hill-steps".into(),
        budget.hill_steps.to_string(),
        "--step-scale".into(),
        budget.step_scale.to_string(),
        "--search-restarts".into(),
        budget.search_restarts.to_string(),
        "--final-restarts".into(),
        budget.final_restarts.to_string(),
        "--seed".into(),
        seed.to_string(),
    ]
}

fn elapsed(start: Instant, timing: bool) -> Option<u64> {
    timing.then(|| start.elapsed().as_millis() as u64)
}

/// Header of the haar-study CSV output.
pub const HAAR_CSV_HEADER: [&str; 4] = ["index", "sub_seed", "lambda", "verdict"];

fn haar_csv(study: &HaarStudyResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HAAR_CSV_HEADER)?;
    for (i, ((seed, lambda), verdict)) in study
        .sub_seeds
        .iter()
        .zip(&study.lambda_values)
        .zip(&study.verdicts)
        .enumerate()
    {
        w.write_record([i.to_string(), seed.to_string(), format!("{lambda:.16e}"), verdict.to_string()])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn emit_json(report: &ReportFile, output: &OutputArgs) -> Result<()> {
    emit(&to_json_string(report)?, output)
}

fn emit(text: &str, output: &OutputArgs) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}
