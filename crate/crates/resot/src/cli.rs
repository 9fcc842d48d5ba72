//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input or usage, 2 I/O failure, 3 no
//! convergence under `--strict`, 4 a failed self-test check.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use resot_core::network::{preset, PRESET_NAMES};
use resot_core::{
    centralized_best_response, compare_runs, run_with, OracleError, PhaseExecutor, RunError, Scenario, Sequential,
    SolveResult,
};

use crate::parallel::RayonExecutor;
use crate::report::{self, aligned, comparison_rows, oracle_rows, ReportError, RunSummary};
use crate::scenario_file::{load_scenario, save_scenario, scenario_to_json, ScenarioFileError};
use crate::selftest::run_selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_SELFTEST: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "resot", version, about = "Resilient distributed transport planning under a deceptive adversary")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the distributed solver; prints a summary and writes the requested CSV files
    Run(RunArgs),
    /// Write a scenario (usually a preset) as a JSON file
    Gen(GenArgs),
    /// Solve with the centralized best-response oracle
    Oracle(OracleArgs),
    /// Compare the distributed solution with the oracle or with an attack-free run
    Compare(CompareArgs),
    /// Run the built-in property checks
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Scenario JSON file (this or --preset is required)
    #[arg(long, value_name = "PATH")]
    pub scenario: Option<PathBuf>,
    /// Built-in scenario (this or --scenario is required)
    #[arg(long, value_name = "NAME", value_parser = PRESET_NAMES)]
    pub preset: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

/// Overrides of the scenario's options. Unset flags keep the scenario's
/// values; the preset defaults are listed with each flag.
#[derive(Debug, Args)]
pub struct Overrides {
    /// Generator seed of the case2 preset, also stored as the scenario seed [preset default: 0]
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// ADMM penalty [preset default: 1]
    #[arg(long, value_name = "R")]
    pub eta: Option<f64>,
    /// Iteration limit [preset default: 10000]
    #[arg(long, value_name = "N")]
    pub max_iters: Option<usize>,
    /// Sets both the residual and the attack-change tolerance [preset default: 1e-6]
    #[arg(long, value_name = "R")]
    pub tol: Option<f64>,
    /// `off` removes the adversary
    #[arg(long, value_enum, default_value_t = Switch::On)]
    pub attack: Switch,
    /// The attacker moves every N iterations [preset default: 1]
    #[arg(long, value_name = "N")]
    pub attacker_period: Option<usize>,
    /// Weight kept on the previous attack, in [0, 1] [preset default: 0]
    #[arg(long, value_name = "R")]
    pub damping: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, s: &mut Scenario) {
        let o = &mut s.options;
        if let Some(v) = self.seed {
            o.rng_seed = v;
        }
        if let Some(v) = self.eta {
            o.eta = v;
        }
        if let Some(v) = self.max_iters {
            o.max_iters = v;
        }
        if let Some(v) = self.tol {
            o.tol_primal = v;
            o.tol_xi = v;
        }
        if let Some(v) = self.attacker_period {
            o.attacker_period = v;
        }
        if let Some(v) = self.damping {
            o.attacker_damping = v;
        }
        if self.attack == Switch::Off {
            *s = s.without_attack();
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Per-iteration trace CSV [default: not written]
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,
    /// Final plan CSV [default: not written]
    #[arg(long, value_name = "PATH")]
    pub plan: Option<PathBuf>,
    /// Plan snapshots CSV (iter,x,y,pi); needs a snapshot stride [default: not written]
    #[arg(long, value_name = "PATH")]
    pub snapshots: Option<PathBuf>,
    /// Record a plan snapshot every N iterations, 0 = never [preset default: 0]
    #[arg(long, value_name = "N")]
    pub snapshot_stride: Option<usize>,
    /// Exit with status 3 unless the run converges [default: off]
    #[arg(long)]
    pub strict: bool,
    /// Worker threads per phase; 1 runs sequentially, 0 uses all cores
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Output file [default: standard output]
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Plan CSV of the oracle solution [default: not written]
    #[arg(long, value_name = "PATH")]
    pub plan: Option<PathBuf>,
    /// Exit with status 3 unless the oracle closes its gap [default: off]
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Baseline {
    /// Centralized best-response oracle on the same scenario
    Oracle,
    /// Distributed run with the adversary removed
    NoAttack,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub overrides: Overrides,
    /// What the distributed run is compared with
    #[arg(long, value_enum, default_value_t = Baseline::Oracle)]
    pub against: Baseline,
    /// Exit with status 3 unless both solutions converge [default: off]
    #[arg(long)]
    pub strict: bool,
    /// Worker threads per phase; 1 runs sequentially, 0 uses all cores
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Seed of the random cases
    #[arg(long, value_name = "N", default_value_t = 0)]
    pub seed: u64,
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<ScenarioFileError> for Failure {
    fn from(e: ScenarioFileError) -> Self {
        let code = if e.is_io() { EXIT_IO } else { EXIT_INVALID };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        let code = if e.is_io() { EXIT_IO } else { EXIT_INVALID };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        Self::invalid(e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Self::invalid(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_INVALID
            } else {
                // --help and --version
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Run(a) => cmd_run(a, out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
        Command::Compare(a) => cmd_compare(a, out),
        Command::Selftest(a) => cmd_selftest(a, out),
    }
}

fn load(source: &Source, overrides: &Overrides) -> Result<Scenario, Failure> {
    let mut s = match (&source.scenario, &source.preset) {
        (Some(path), _) => load_scenario(path)?,
        (None, Some(name)) => preset(name, overrides.seed.unwrap_or(0))
            .ok_or_else(|| Failure::invalid(format!("unknown preset {name:?}")))?,
        (None, None) => return Err(Failure::invalid("give --scenario or --preset")),
    };
    overrides.apply(&mut s);
    let problems = s.validate();
    if !problems.is_empty() {
        let list: Vec<String> = problems.iter().map(|p| format!("  - {p}")).collect();
        return Err(Failure::invalid(format!("invalid scenario {}:\n{}", s.name, list.join("\n"))));
    }
    Ok(s)
}

fn executor(threads: usize) -> Result<Box<dyn PhaseExecutor>, Failure> {
    if threads == 1 {
        return Ok(Box::new(Sequential));
    }
    RayonExecutor::with_threads(threads)
        .map(|e| Box::new(e) as Box<dyn PhaseExecutor>)
        .map_err(|e| Failure::invalid(format!("cannot start worker threads: {e}")))
}

fn solve(s: &Scenario, threads: usize) -> Result<SolveResult, Failure> {
    let exec = executor(threads)?;
    Ok(run_with(s, exec.as_ref())?)
}

fn print(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("cannot write to standard output: {e}"),
    })
}

fn maybe<F>(path: &Option<PathBuf>, write: F) -> Result<(), Failure>
where
    F: FnOnce(&Path) -> Result<(), ReportError>,
{
    match path {
        Some(p) => Ok(write(p)?),
        None => Ok(()),
    }
}

fn cmd_run(a: RunArgs, out: &mut dyn Write) -> Outcome {
    let mut s = load(&a.source, &a.overrides)?;
    if let Some(stride) = a.snapshot_stride {
        s.options.snapshot_stride = stride;
    }
    let start = Instant::now();
    let r = solve(&s, a.threads)?;
    let summary = RunSummary::new(&s, &r, start.elapsed());
    maybe(&a.trace, |p| report::save_trace(&r.trace, p))?;
    maybe(&a.plan, |p| report::save_plan(&s, &r.plan, p))?;
    maybe(&a.snapshots, |p| report::save_snapshots(&s, &r.trace, p))?;
    print(out, &summary.to_string())?;
    Ok(if a.strict && !r.converged() { EXIT_NOT_CONVERGED } else { EXIT_OK })
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> Outcome {
    let s = load(&a.source, &a.overrides)?;
    match &a.out {
        Some(path) => save_scenario(&s, path)?,
        None => print(out, &scenario_to_json(&s))?,
    }
    Ok(EXIT_OK)
}

fn cmd_oracle(a: OracleArgs, out: &mut dyn Write) -> Outcome {
    let s = load(&a.source, &a.overrides)?;
    let start = Instant::now();
    let o = centralized_best_response(&s)?;
    let rows = oracle_rows(&s, &o, start.elapsed());
    maybe(&a.plan, |p| report::save_plan(&s, &o.plan, p))?;
    print(out, &aligned(&rows))?;
    Ok(if a.strict && !o.converged { EXIT_NOT_CONVERGED } else { EXIT_OK })
}

fn cmd_compare(a: CompareArgs, out: &mut dyn Write) -> Outcome {
    let s = load(&a.source, &a.overrides)?;
    let r = solve(&s, a.threads)?;
    let label_a = format!("distributed ({}, {} iterations)", r.termination, r.iterations);
    let (cmp, label_b, converged_b) = match a.against {
        Baseline::Oracle => {
            let o = centralized_best_response(&s)?;
            let label = format!(
                "oracle ({}, {} sweeps)",
                if o.converged { "converged" } else { "gap open" },
                o.sweeps
            );
            (compare_runs(&s, &r, &o), label, o.converged)
        }
        Baseline::NoAttack => {
            let b = solve(&s.without_attack(), a.threads)?;
            let label = format!("no attack ({}, {} iterations)", b.termination, b.iterations);
            (compare_runs(&s, &r, &b), label, b.converged())
        }
    };
    let cmp = cmp.map_err(|e| Failure::invalid(e.to_string()))?;
    let mut rows = vec![("scenario".to_string(), s.name.clone())];
    rows.extend(comparison_rows(&label_a, &label_b, &cmp));
    print(out, &aligned(&rows))?;
    let converged = r.converged() && converged_b;
    Ok(if a.strict && !converged { EXIT_NOT_CONVERGED } else { EXIT_OK })
}

fn cmd_selftest(a: SelftestArgs, out: &mut dyn Write) -> Outcome {
    let results = run_selftest(a.seed);
    let width = results.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut text = String::new();
    for c in &results {
        let status = if c.passed { "PASS" } else { "FAIL" };
        text.push_str(&format!("{status}  {:<width$}  {}\n", c.name, c.detail));
    }
    print(out, &text)?;
    Ok(if results.iter().all(|c| c.passed) { EXIT_OK } else { EXIT_SELFTEST })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn overrides_set_both_tolerances() {
        let cli = Cli::try_parse_from(["resot", "run", "--preset", "case1", "--tol", "1e-4", "--attack", "off"]).unwrap();
        let Command::Run(a) = cli.command else { panic!() };
        let mut s = resot_core::network::case1();
        a.overrides.apply(&mut s);
        assert_eq!((s.options.tol_primal, s.options.tol_xi), (1e-4, 1e-4));
        assert!(s.adversary.is_empty());
    }
}
