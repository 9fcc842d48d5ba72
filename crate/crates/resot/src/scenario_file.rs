//! Scenario JSON documents.
//!
//! Node numbers in files are 1-based. Coefficients are either a dense matrix
//! with one row per source and one column per target, or a list of
//! `[x, y, value]` triples. A table shaped `sources x targets` is always read
//! as dense. When `edges` is absent the network is complete.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use resot_core::{AdversaryConfig, Edge, EdgeData, NodeBounds, Scenario, ScenarioError, SolveOptions};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioFileError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("malformed scenario JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("scenario file: {0}")]
    Schema(String),
    #[error("scenario file: {0}")]
    Structure(ScenarioError),
}

impl ScenarioFileError {
    pub fn is_io(&self) -> bool {
        matches!(self, Self::Read { .. } | Self::Write { .. })
    }
}

/// On-disk form of a [`Scenario`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub targets: usize,
    pub sources: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[usize; 2]>>,
    pub delta: Vec<Vec<f64>>,
    pub gamma: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_lower: Option<Vec<f64>>,
    pub p_upper: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_lower: Option<Vec<f64>>,
    pub q_upper: Vec<f64>,
    #[serde(default)]
    pub adversary: AdversaryDoc,
    #[serde(default)]
    pub options: OptionsDoc,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdversaryDoc {
    #[serde(default)]
    pub compromised: Vec<usize>,
    #[serde(default)]
    pub c_a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<KappaDoc>,
}

/// One budget for every compromised target, or a budget per target keyed by
/// the 1-based target number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KappaDoc {
    Scalar(f64),
    Map(BTreeMap<String, f64>),
}

/// Solver options; absent keys take the library defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_primal: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_xi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attacker_period: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attacker_damping: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attacker_prox: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attacker_extrapolation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_stride: Option<usize>,
}

impl OptionsDoc {
    fn from_options(o: &SolveOptions) -> Self {
        Self {
            eta: Some(o.eta),
            max_iters: Some(o.max_iters),
            tol_primal: Some(o.tol_primal),
            tol_xi: Some(o.tol_xi),
            attacker_period: Some(o.attacker_period),
            attacker_damping: Some(o.attacker_damping),
            attacker_prox: Some(o.attacker_prox),
            attacker_extrapolation: Some(o.attacker_extrapolation),
            seed: Some(o.rng_seed),
            snapshot_stride: Some(o.snapshot_stride),
        }
    }

    fn to_options(&self) -> SolveOptions {
        let d = SolveOptions::default();
        SolveOptions {
            eta: self.eta.unwrap_or(d.eta),
            max_iters: self.max_iters.unwrap_or(d.max_iters),
            tol_primal: self.tol_primal.unwrap_or(d.tol_primal),
            tol_xi: self.tol_xi.unwrap_or(d.tol_xi),
            attacker_period: self.attacker_period.unwrap_or(d.attacker_period),
            attacker_damping: self.attacker_damping.unwrap_or(d.attacker_damping),
            attacker_prox: self.attacker_prox.unwrap_or(d.attacker_prox),
            attacker_extrapolation: self.attacker_extrapolation.unwrap_or(d.attacker_extrapolation),
            rng_seed: self.seed.unwrap_or(d.rng_seed),
            snapshot_stride: self.snapshot_stride.unwrap_or(d.snapshot_stride),
        }
    }
}

fn schema(msg: impl Into<String>) -> ScenarioFileError {
    ScenarioFileError::Schema(msg.into())
}

/// 1-based node number to 0-based index.
fn index(what: &str, n: usize) -> Result<usize, ScenarioFileError> {
    n.checked_sub(1)
        .ok_or_else(|| schema(format!("{what}: nodes are numbered from 1, found 0")))
}

enum Table {
    Dense(Vec<Vec<f64>>),
    List(HashMap<(usize, usize), f64>),
}

impl Table {
    fn parse(what: &str, rows: Vec<Vec<f64>>, targets: usize, sources: usize) -> Result<Self, ScenarioFileError> {
        if rows.len() == sources && rows.iter().all(|r| r.len() == targets) {
            return Ok(Self::Dense(rows));
        }
        if rows.iter().all(|r| r.len() == 3) {
            let mut map = HashMap::new();
            for r in rows {
                let node = |v: f64| {
                    if v.fract() == 0.0 && v >= 1.0 && v <= u32::MAX as f64 {
                        Ok(v as usize - 1)
                    } else {
                        Err(schema(format!("{what}: {v} is not a node number")))
                    }
                };
                let key = (node(r[0])?, node(r[1])?);
                if map.insert(key, r[2]).is_some() {
                    return Err(schema(format!("{what}: edge ({}, {}) listed twice", key.0 + 1, key.1 + 1)));
                }
            }
            return Ok(Self::List(map));
        }
        Err(schema(format!(
            "{what}: expected a {sources}x{targets} matrix (row = source) or [[x, y, value], ...]"
        )))
    }

    fn take(&mut self, what: &str, e: Edge) -> Result<f64, ScenarioFileError> {
        let found = match self {
            Self::Dense(rows) => Some(rows[e.source][e.target]),
            Self::List(map) => map.remove(&(e.target, e.source)),
        };
        found.ok_or_else(|| schema(format!("{what}: no value for edge ({}, {})", e.target + 1, e.source + 1)))
    }

    /// List entries that were not consumed by any edge.
    fn check_unused(&self, what: &str) -> Result<(), ScenarioFileError> {
        if let Self::List(map) = self {
            if let Some(&(x, y)) = map.keys().min() {
                return Err(schema(format!("{what}: edge ({}, {}) is not in the network", x + 1, y + 1)));
            }
        }
        Ok(())
    }
}

impl ScenarioDoc {
    pub fn from_scenario(s: &Scenario) -> Self {
        let (t, n) = (s.num_targets(), s.num_sources());
        let mut delta = vec![vec![0.0; t]; n];
        let mut gamma = vec![vec![0.0; t]; n];
        for d in s.edge_data() {
            delta[d.edge.source][d.edge.target] = d.delta;
            gamma[d.edge.source][d.edge.target] = d.gamma;
        }
        let edges = (!s.is_complete())
            .then(|| s.edges().iter().map(|e| [e.target + 1, e.source + 1]).collect());
        let adv = &s.adversary;
        let uniform = adv.compromised.first().and_then(|first| {
            let k = *adv.kappa.get(first)?;
            let same_keys = adv.kappa.keys().all(|x| adv.compromised.contains(x))
                && adv.compromised.iter().all(|x| adv.kappa.contains_key(x));
            let same_values = adv.kappa.values().all(|v| v.to_bits() == k.to_bits());
            (same_keys && same_values).then_some(k)
        });
        let kappa = match uniform {
            Some(k) => Some(KappaDoc::Scalar(k)),
            None if adv.kappa.is_empty() => None,
            None => Some(KappaDoc::Map(adv.kappa.iter().map(|(&x, &k)| ((x + 1).to_string(), k)).collect())),
        };
        Self {
            name: Some(s.name.clone()),
            targets: t,
            sources: n,
            edges,
            delta,
            gamma,
            p_lower: Some(s.bounds.p_lower.clone()),
            p_upper: s.bounds.p_upper.clone(),
            q_lower: Some(s.bounds.q_lower.clone()),
            q_upper: s.bounds.q_upper.clone(),
            adversary: AdversaryDoc {
                compromised: adv.compromised.iter().map(|x| x + 1).collect(),
                c_a: adv.c_a,
                kappa,
            },
            options: OptionsDoc::from_options(&s.options),
        }
    }

    /// Builds the scenario; `default_name` is used when the document has no
    /// `name`. Only the structure is checked here, see [`Scenario::validate`].
    pub fn into_scenario(self, default_name: &str) -> Result<Scenario, ScenarioFileError> {
        let (targets, sources) = (self.targets, self.sources);
        let edges: Vec<Edge> = match &self.edges {
            None => (0..sources)
                .flat_map(|y| (0..targets).map(move |x| Edge::new(x, y)))
                .collect(),
            Some(list) => list
                .iter()
                .map(|&[x, y]| Ok(Edge::new(index("edges", x)?, index("edges", y)?)))
                .collect::<Result<_, ScenarioFileError>>()?,
        };
        if let Some(e) = edges.iter().find(|e| e.target >= targets || e.source >= sources) {
            return Err(ScenarioFileError::Structure(ScenarioError::EdgeOutOfRange(*e)));
        }
        let mut delta = Table::parse("delta", self.delta, targets, sources)?;
        let mut gamma = Table::parse("gamma", self.gamma, targets, sources)?;
        let data = edges
            .iter()
            .map(|&edge| {
                Ok(EdgeData {
                    edge,
                    delta: delta.take("delta", edge)?,
                    gamma: gamma.take("gamma", edge)?,
                })
            })
            .collect::<Result<Vec<_>, ScenarioFileError>>()?;
        delta.check_unused("delta")?;
        gamma.check_unused("gamma")?;

        let bounds = NodeBounds {
            p_lower: self.p_lower.unwrap_or_else(|| vec![0.0; targets]),
            p_upper: self.p_upper,
            q_lower: self.q_lower.unwrap_or_else(|| vec![0.0; sources]),
            q_upper: self.q_upper,
        };
        let compromised = self
            .adversary
            .compromised
            .iter()
            .map(|&x| index("adversary.compromised", x))
            .collect::<Result<Vec<_>, _>>()?;
        let kappa = match self.adversary.kappa {
            None => BTreeMap::new(),
            Some(KappaDoc::Scalar(k)) => compromised.iter().map(|&x| (x, k)).collect(),
            Some(KappaDoc::Map(m)) => m
                .into_iter()
                .map(|(key, k)| {
                    let x = key
                        .trim()
                        .parse()
                        .map_err(|_| schema(format!("adversary.kappa: {key:?} is not a node number")))?;
                    Ok((index("adversary.kappa", x)?, k))
                })
                .collect::<Result<_, ScenarioFileError>>()?,
        };
        let adversary = AdversaryConfig {
            compromised,
            c_a: self.adversary.c_a,
            kappa,
        };
        Scenario::new(
            self.name.unwrap_or_else(|| default_name.to_string()),
            targets,
            sources,
            data,
            bounds,
            adversary,
            self.options.to_options(),
        )
        .map_err(ScenarioFileError::Structure)
    }
}

pub fn scenario_from_json(text: &str, default_name: &str) -> Result<Scenario, ScenarioFileError> {
    let doc: ScenarioDoc = serde_json::from_str(text)?;
    doc.into_scenario(default_name)
}

/// Pretty JSON with arrays of numbers kept on one line, so a coefficient
/// matrix reads as one row per source.
pub fn scenario_to_json(s: &Scenario) -> String {
    let value = serde_json::to_value(ScenarioDoc::from_scenario(s)).expect("scenario documents always serialize");
    let mut text = String::new();
    layout(&value, 0, &mut text);
    text.push('\n');
    text
}

fn layout(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    let flat = |v: &Value| !matches!(v, Value::Array(_) | Value::Object(_));
    match v {
        Value::Array(items) if !items.iter().all(flat) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                layout(item, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                layout(item, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        _ => out.push_str(&v.to_string()),
    }
}

/// Reads a scenario file. A document without `name` is named after the file
/// stem.
pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioFileError> {
    let text = fs::read_to_string(path).map_err(|source| ScenarioFileError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    scenario_from_json(&text, stem)
}

pub fn save_scenario(s: &Scenario, path: &Path) -> Result<(), ScenarioFileError> {
    fs::write(path, scenario_to_json(s)).map_err(|source| ScenarioFileError::Write {
        path: path.to_path_buf(),
        source,
    })
}
