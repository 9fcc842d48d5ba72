//! CSV exports of traces and plans, and console summaries.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), which parse
//! back to the same `f64`. Node numbers are 1-based.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use resot_core::engine::attack_norms;
use resot_core::{Edge, OracleResult, RunComparison, Scenario, SolveResult, Termination, Trace, TraceRecord};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Format(String),
}

impl ReportError {
    pub fn is_io(&self) -> bool {
        match self {
            Self::Io { .. } => true,
            Self::Csv(e) => e.is_io_error(),
            Self::Format(_) => false,
        }
    }
}

fn format_err(msg: impl Into<String>) -> ReportError {
    ReportError::Format(msg.into())
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_f64(field: &str) -> Result<f64, ReportError> {
    field
        .trim()
        .parse()
        .map_err(|_| format_err(format!("not a number: {field:?}")))
}

fn parse_usize(field: &str) -> Result<usize, ReportError> {
    field
        .trim()
        .parse()
        .map_err(|_| format_err(format!("not an integer: {field:?}")))
}

fn create(path: &Path) -> Result<BufWriter<File>, ReportError> {
    File::create(path).map(BufWriter::new).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn open(path: &Path) -> Result<File, ReportError> {
    File::open(path).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn finish<W: Write>(w: csv::Writer<W>) -> Result<(), ReportError> {
    let mut inner = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    inner.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `iter,utility,primal_residual,xi_norm_<x>...`, one row per record. The
/// norm columns follow `trace.compromised`.
pub fn write_trace<W: Write>(trace: &Trace, out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["iter".to_string(), "utility".to_string(), "primal_residual".to_string()];
    header.extend(trace.compromised.iter().map(|x| format!("xi_norm_{}", x + 1)));
    w.write_record(&header)?;
    for r in &trace.records {
        if r.xi_norms.len() != trace.compromised.len() {
            return Err(format_err(format!(
                "trace record {} has {} attack norms for {} compromised targets",
                r.iter,
                r.xi_norms.len(),
                trace.compromised.len()
            )));
        }
        let mut row = vec![r.iter.to_string(), fmt_f64(r.utility), fmt_f64(r.primal_residual)];
        row.extend(r.xi_norms.iter().map(|&v| fmt_f64(v)));
        w.write_record(&row)?;
    }
    finish(w)
}

/// Parses a trace written by [`write_trace`]. Plan snapshots are not part of
/// the file and come back as `None`.
pub fn read_trace<R: Read>(input: R) -> Result<Trace, ReportError> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    let fixed = ["iter", "utility", "primal_residual"];
    if header.len() < 3 || header.iter().zip(fixed).any(|(h, f)| h != f) {
        return Err(format_err("trace header must start with iter,utility,primal_residual"));
    }
    let compromised = header
        .iter()
        .skip(3)
        .map(|h| {
            h.strip_prefix("xi_norm_")
                .and_then(|n| n.parse::<usize>().ok())
                .and_then(|n| n.checked_sub(1))
                .ok_or_else(|| format_err(format!("bad trace column {h:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut records = Vec::new();
    for row in r.records() {
        let row = row?;
        records.push(TraceRecord {
            iter: parse_usize(&row[0])?,
            utility: parse_f64(&row[1])?,
            primal_residual: parse_f64(&row[2])?,
            xi_norms: row.iter().skip(3).map(parse_f64).collect::<Result<_, _>>()?,
            plan: None,
        });
    }
    Ok(Trace { compromised, records })
}

pub fn save_trace(trace: &Trace, path: &Path) -> Result<(), ReportError> {
    write_trace(trace, create(path)?)
}

pub fn load_trace(path: &Path) -> Result<Trace, ReportError> {
    read_trace(open(path)?)
}

/// `x,y,pi` for every edge, in the scenario's edge order.
pub fn write_plan<W: Write>(scenario: &Scenario, plan: &[f64], out: W) -> Result<(), ReportError> {
    if plan.len() != scenario.num_edges() {
        return Err(format_err(format!(
            "plan has {} entries for {} edges",
            plan.len(),
            scenario.num_edges()
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "pi"])?;
    for (e, &v) in scenario.edges().iter().zip(plan) {
        w.write_record([(e.target + 1).to_string(), (e.source + 1).to_string(), fmt_f64(v)])?;
    }
    finish(w)
}

/// Rows of a plan file as `(edge, pi)` with 0-based nodes, in file order.
pub fn read_plan<R: Read>(input: R) -> Result<Vec<(Edge, f64)>, ReportError> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().ne(["x", "y", "pi"]) {
        return Err(format_err("plan header must be x,y,pi"));
    }
    let node = |f: &str| {
        parse_usize(f)?
            .checked_sub(1)
            .ok_or_else(|| format_err("nodes are numbered from 1"))
    };
    r.records()
        .map(|row| {
            let row = row?;
            Ok((Edge::new(node(&row[0])?, node(&row[1])?), parse_f64(&row[2])?))
        })
        .collect()
}

pub fn save_plan(scenario: &Scenario, plan: &[f64], path: &Path) -> Result<(), ReportError> {
    write_plan(scenario, plan, create(path)?)
}

pub fn load_plan(path: &Path) -> Result<Vec<(Edge, f64)>, ReportError> {
    read_plan(open(path)?)
}

/// `iter,x,y,pi` for every plan snapshot recorded in the trace.
pub fn write_snapshots<W: Write>(scenario: &Scenario, trace: &Trace, out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iter", "x", "y", "pi"])?;
    for r in &trace.records {
        let Some(plan) = &r.plan else { continue };
        for (e, &v) in scenario.edges().iter().zip(plan) {
            w.write_record([
                r.iter.to_string(),
                (e.target + 1).to_string(),
                (e.source + 1).to_string(),
                fmt_f64(v),
            ])?;
        }
    }
    finish(w)
}

/// Rows of a snapshot file as `(iter, edge, pi)` with 0-based nodes.
pub fn read_snapshots<R: Read>(input: R) -> Result<Vec<(usize, Edge, f64)>, ReportError> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().ne(["iter", "x", "y", "pi"]) {
        return Err(format_err("snapshot header must be iter,x,y,pi"));
    }
    let node = |f: &str| {
        parse_usize(f)?
            .checked_sub(1)
            .ok_or_else(|| format_err("nodes are numbered from 1"))
    };
    r.records()
        .map(|row| {
            let row = row?;
            let edge = Edge::new(node(&row[1])?, node(&row[2])?);
            Ok((parse_usize(&row[0])?, edge, parse_f64(&row[3])?))
        })
        .collect()
}

pub fn save_snapshots(scenario: &Scenario, trace: &Trace, path: &Path) -> Result<(), ReportError> {
    write_snapshots(scenario, trace, create(path)?)
}

/// Key-value lines with the values aligned in one column.
pub fn aligned(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn row(k: impl Into<String>, v: impl ToString) -> (String, String) {
    (k.into(), v.to_string())
}

/// Shortest round-trip form, in exponent notation when tiny or huge.
pub fn fmt_value(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e9).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

fn num(k: impl Into<String>, v: f64) -> (String, String) {
    (k.into(), fmt_value(v))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeNorms {
    /// 0-based target index.
    pub target: usize,
    pub l1: f64,
    pub l2: f64,
}

fn node_norms(scenario: &Scenario, xi: &[f64]) -> Vec<NodeNorms> {
    attack_norms(scenario, xi)
        .into_iter()
        .map(|(target, l1, l2)| NodeNorms { target, l1, l2 })
        .collect()
}

fn norm_rows(norms: &[NodeNorms]) -> Vec<(String, String)> {
    norms
        .iter()
        .flat_map(|n| {
            [
                num(format!("xi_l1[{}]", n.target + 1), n.l1),
                num(format!("xi_l2[{}]", n.target + 1), n.l2),
            ]
        })
        .collect()
}

/// Console summary of one distributed run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub scenario: String,
    /// Whether any target can be attacked.
    pub attack: bool,
    pub termination: Termination,
    pub iterations: usize,
    pub utility: f64,
    pub residual: f64,
    pub attacks: Vec<NodeNorms>,
    pub duration_secs: f64,
}

impl RunSummary {
    pub fn new(scenario: &Scenario, result: &SolveResult, duration: Duration) -> Self {
        Self {
            scenario: scenario.name.clone(),
            attack: !scenario.active_attack_targets().is_empty(),
            termination: result.termination,
            iterations: result.iterations,
            utility: result.utility,
            residual: result.residual,
            attacks: node_norms(scenario, &result.attack),
            duration_secs: duration.as_secs_f64(),
        }
    }

    pub fn rows(&self) -> Vec<(String, String)> {
        let mut rows = vec![
            row("scenario", &self.scenario),
            row("attack", if self.attack { "on" } else { "off" }),
            row("termination", self.termination),
            row("iterations", self.iterations),
            num("utility", self.utility),
            num("residual", self.residual),
        ];
        rows.extend(norm_rows(&self.attacks));
        rows.push(row("duration_s", format!("{:.3}", self.duration_secs)));
        rows
    }
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&aligned(&self.rows()))
    }
}

pub fn oracle_rows(scenario: &Scenario, result: &OracleResult, duration: Duration) -> Vec<(String, String)> {
    let mut rows = vec![
        row("scenario", &scenario.name),
        row("attack", if scenario.active_attack_targets().is_empty() { "off" } else { "on" }),
        row("converged", result.converged),
        row("sweeps", result.sweeps),
        num("utility", result.utility),
        num("upper_bound", result.upper_bound),
        num("lower_bound", result.lower_bound),
    ];
    rows.extend(norm_rows(&node_norms(scenario, &result.attack)));
    rows.push(row("duration_s", format!("{:.3}", duration.as_secs_f64())));
    rows
}

/// Rows for a comparison of run `a` against run `b`; per-node attack norms
/// are printed as `a | b`.
pub fn comparison_rows(label_a: &str, label_b: &str, cmp: &RunComparison) -> Vec<(String, String)> {
    let mut rows = vec![
        row("a", label_a),
        row("b", label_b),
        num("utility_a", cmp.utility_a),
        num("utility_b", cmp.utility_b),
        num("delta_utility", cmp.delta_utility),
        num("relative_gap", cmp.relative_gap),
        num("max_plan_gap", cmp.max_plan_gap),
    ];
    for n in &cmp.attacks {
        rows.push(row(format!("xi_l1[{}]", n.target + 1), format!("{} | {}", fmt_value(n.l1_a), fmt_value(n.l1_b))));
        rows.push(row(format!("xi_l2[{}]", n.target + 1), format!("{} | {}", fmt_value(n.l2_a), fmt_value(n.l2_b))));
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 199.96150099999, f64::MAX, 0.0, -0.0] {
            let back: f64 = fmt_f64(v).parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits());
        }
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn aligned_pads_keys() {
        let text = aligned(&[row("a", 1), row("long_key", "x")]);
        assert_eq!(text, "a         1\nlong_key  x\n");
    }

    #[test]
    fn malformed_trace_is_rejected() {
        assert!(read_trace("iter,u\n".as_bytes()).is_err());
        assert!(read_trace("iter,utility,primal_residual,xi_norm_0\n".as_bytes()).is_err());
        assert!(read_trace("iter,utility,primal_residual\n1,x,2\n".as_bytes()).is_err());
        assert!(read_plan("x,y,p\n".as_bytes()).is_err());
    }
}
