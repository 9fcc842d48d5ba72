//! Bipartite transport network: scenario data, validation and presets.
//!
//! Node and edge indices are zero-based everywhere in this crate. Human-facing
//! output (`Display`, file formats) uses the 1-based numbering of the case
//! studies, so target index `1` prints as `target 2`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Target,
    Source,
}

/// Zero-based reference to a node on one side of the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId {
    pub side: Side,
    pub index: usize,
}

impl NodeId {
    pub fn target(index: usize) -> Self {
        Self {
            side: Side::Target,
            index,
        }
    }

    pub fn source(index: usize) -> Self {
        Self {
            side: Side::Source,
            index,
        }
    }

    /// 1-based node number as used in scenario files.
    pub fn number(&self) -> usize {
        self.index + 1
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Target => write!(f, "target {}", self.number()),
            Side::Source => write!(f, "source {}", self.number()),
        }
    }
}

/// A transport path from `source` to `target` (both zero-based).
///
/// Edges order source-major: by source first, then by target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub target: usize,
    pub source: usize,
}

impl Edge {
    pub fn new(target: usize, source: usize) -> Self {
        Self { target, source }
    }
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.source, self.target).cmp(&(other.source, other.target))
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(x={}, y={})", self.target + 1, self.source + 1)
    }
}

/// An edge together with its utility rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeData {
    pub edge: Edge,
    /// Target utility per unit of resource.
    pub delta: f64,
    /// Source utility per unit of resource.
    pub gamma: f64,
}

/// Per-node bounds on the total resource a node requests (targets, `p`) or
/// ships (sources, `q`).
#[derive(Debug, Clone, PartialEq)]
pub struct NodeBounds {
    pub p_lower: Vec<f64>,
    pub p_upper: Vec<f64>,
    pub q_lower: Vec<f64>,
    pub q_upper: Vec<f64>,
}

impl NodeBounds {
    /// Bounds with every lower bound at zero.
    pub fn upper_only(p_upper: Vec<f64>, q_upper: Vec<f64>) -> Self {
        Self {
            p_lower: vec![0.0; p_upper.len()],
            q_lower: vec![0.0; q_upper.len()],
            p_upper,
            q_upper,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AdversaryConfig {
    /// Compromised targets, zero-based, kept sorted.
    pub compromised: Vec<usize>,
    /// Weight of the l1 attack cost.
    pub c_a: f64,
    /// Squared-norm budget per compromised target.
    pub kappa: BTreeMap<usize, f64>,
}

impl AdversaryConfig {
    pub fn none() -> Self {
        Self::default()
    }

    /// Every compromised target gets the same budget.
    pub fn uniform(mut compromised: Vec<usize>, c_a: f64, kappa: f64) -> Self {
        compromised.sort_unstable();
        compromised.dedup();
        let kappa = compromised.iter().map(|&x| (x, kappa)).collect();
        Self {
            compromised,
            c_a,
            kappa,
        }
    }

    pub fn is_compromised(&self, target: usize) -> bool {
        self.compromised.binary_search(&target).is_ok()
    }

    /// Budget of a target; zero when none is configured.
    pub fn kappa_of(&self, target: usize) -> f64 {
        self.kappa.get(&target).copied().unwrap_or(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.compromised.is_empty()
    }
}

/// Knobs of the distributed solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// ADMM penalty.
    pub eta: f64,
    pub max_iters: usize,
    /// Threshold on `max |pi_t - pi_s|`.
    pub tol_primal: f64,
    /// Threshold on the per-iteration change of the attack vector.
    pub tol_xi: f64,
    /// The attacker moves on iterations `k` with `k % attacker_period == 0`.
    pub attacker_period: usize,
    /// Weight kept on the previous attack vector, in `[0, 1]`.
    pub attacker_damping: f64,
    /// Proximal weight `rho` of the attacker step; `0` is a plain best response.
    pub attacker_prox: f64,
    /// Extrapolation `theta` of the plan the attacker responds to,
    /// `pi(k) + theta * (pi(k) - pi(k-1))`, in `[0, 1]`.
    pub attacker_extrapolation: f64,
    pub rng_seed: u64,
    /// Record a plan snapshot in the trace every this many iterations (0 = never).
    pub snapshot_stride: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            eta: 1.0,
            max_iters: 10_000,
            tol_primal: 1e-6,
            tol_xi: 1e-6,
            attacker_period: 1,
            attacker_damping: 0.0,
            attacker_prox: 1.0,
            attacker_extrapolation: 1.0,
            rng_seed: 0,
            snapshot_stride: 0,
        }
    }
}

/// Structural problems that prevent building a [`Scenario`] at all.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioError {
    NoNodes,
    EdgeOutOfRange(Edge),
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    InvalidRange {
        what: &'static str,
        lo: f64,
        hi: f64,
    },
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoNodes => f.write_str("network needs at least one target and one source"),
            Self::EdgeOutOfRange(e) => write!(f, "edge {e} references a node that does not exist"),
            Self::LengthMismatch {
                what,
                expected,
                found,
            } => write!(f, "{what}: expected {expected} entries, found {found}"),
            Self::InvalidRange { what, lo, hi } => {
                write!(f, "{what}: invalid uniform range [{lo}, {hi}]")
            }
        }
    }
}

/// A transport network with utilities, node bounds, adversary and options.
///
/// Edges are stored source-major and never change after construction; the
/// per-node adjacency is derived from them. The numeric fields are public;
/// [`Scenario::validate`] checks them before any solve.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    num_targets: usize,
    num_sources: usize,
    edges: Vec<Edge>,
    /// Indexed like [`Scenario::edges`].
    pub delta: Vec<f64>,
    /// Indexed like [`Scenario::edges`].
    pub gamma: Vec<f64>,
    pub bounds: NodeBounds,
    pub adversary: AdversaryConfig,
    pub options: SolveOptions,
    target_edges: Vec<Vec<usize>>,
    source_edges: Vec<Vec<usize>>,
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        num_targets: usize,
        num_sources: usize,
        mut edges: Vec<EdgeData>,
        bounds: NodeBounds,
        adversary: AdversaryConfig,
        options: SolveOptions,
    ) -> Result<Self, ScenarioError> {
        if num_targets == 0 || num_sources == 0 {
            return Err(ScenarioError::NoNodes);
        }
        if let Some(bad) = edges
            .iter()
            .find(|d| d.edge.target >= num_targets || d.edge.source >= num_sources)
        {
            return Err(ScenarioError::EdgeOutOfRange(bad.edge));
        }
        let lengths = [
            ("p_lower", num_targets, bounds.p_lower.len()),
            ("p_upper", num_targets, bounds.p_upper.len()),
            ("q_lower", num_sources, bounds.q_lower.len()),
            ("q_upper", num_sources, bounds.q_upper.len()),
        ];
        for (what, expected, found) in lengths {
            if expected != found {
                return Err(ScenarioError::LengthMismatch {
                    what,
                    expected,
                    found,
                });
            }
        }
        edges.sort_by_key(|d| d.edge);

        let mut target_edges = vec![Vec::new(); num_targets];
        let mut source_edges = vec![Vec::new(); num_sources];
        for (e, d) in edges.iter().enumerate() {
            target_edges[d.edge.target].push(e);
            source_edges[d.edge.source].push(e);
        }
        Ok(Self {
            name: name.into(),
            num_targets,
            num_sources,
            delta: edges.iter().map(|d| d.delta).collect(),
            gamma: edges.iter().map(|d| d.gamma).collect(),
            edges: edges.into_iter().map(|d| d.edge).collect(),
            bounds,
            adversary,
            options,
            target_edges,
            source_edges,
        })
    }

    pub fn num_targets(&self) -> usize {
        self.num_targets
    }

    pub fn num_sources(&self) -> usize {
        self.num_sources
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edge indices incident to target `x`, ordered by source.
    pub fn target_edges(&self, x: usize) -> &[usize] {
        &self.target_edges[x]
    }

    /// Edge indices incident to source `y`, ordered by target.
    pub fn source_edges(&self, y: usize) -> &[usize] {
        &self.source_edges[y]
    }

    pub fn edge_index(&self, edge: Edge) -> Option<usize> {
        self.edges.binary_search(&edge).ok()
    }

    pub fn edge_data(&self) -> impl Iterator<Item = EdgeData> + '_ {
        self.edges.iter().enumerate().map(|(e, &edge)| EdgeData {
            edge,
            delta: self.delta[e],
            gamma: self.gamma[e],
        })
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.num_targets * self.num_sources
            && self.edges.windows(2).all(|w| w[0] != w[1])
    }

    /// The same network with the adversary removed.
    pub fn without_attack(&self) -> Self {
        let mut s = self.clone();
        s.adversary.compromised.clear();
        s.adversary.kappa.clear();
        s
    }

    /// Targets the attacker can actually move: compromised, in range, and
    /// with a positive budget.
    pub fn active_attack_targets(&self) -> Vec<usize> {
        self.adversary
            .compromised
            .iter()
            .copied()
            .filter(|&x| x < self.num_targets && self.adversary.kappa_of(x) > 0.0)
            .collect()
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficient {
    Delta,
    Gamma,
}

/// A broken invariant reported by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    EmptyEdgeSet,
    DuplicateEdge(Edge),
    IsolatedNode(NodeId),
    InvalidCoefficient {
        edge: Edge,
        which: Coefficient,
        value: f64,
    },
    InvalidBound {
        node: NodeId,
        value: f64,
    },
    BoundOrder {
        node: NodeId,
        lower: f64,
        upper: f64,
    },
    CompromisedOutOfRange(usize),
    InvalidAttackCost(f64),
    MissingKappa(usize),
    InvalidKappa {
        target: usize,
        value: f64,
    },
    InvalidOption {
        name: &'static str,
        reason: &'static str,
    },
    /// Targets must take more than all sources can ship.
    DemandExceedsSupply {
        required: f64,
        available: f64,
    },
    /// Sources must ship more than all targets can take.
    SupplyExceedsDemand {
        required: f64,
        available: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LengthMismatch {
                what,
                expected,
                found,
            } => write!(f, "{what}: expected {expected} entries, found {found}"),
            Self::EmptyEdgeSet => f.write_str("edge set is empty"),
            Self::DuplicateEdge(e) => write!(f, "duplicate edge {e}"),
            Self::IsolatedNode(n) => write!(f, "isolated node: {n} has no incident edge"),
            Self::InvalidCoefficient { edge, which, value } => {
                let name = match which {
                    Coefficient::Delta => "delta",
                    Coefficient::Gamma => "gamma",
                };
                write!(f, "{name} on edge {edge} must be finite and >= 0, got {value}")
            }
            Self::InvalidBound { node, value } => {
                write!(f, "bound of {node} must be finite and >= 0, got {value}")
            }
            Self::BoundOrder { node, lower, upper } => {
                write!(f, "bounds of {node} out of order: lower {lower} > upper {upper}")
            }
            Self::CompromisedOutOfRange(x) => {
                write!(f, "compromised target {} does not exist", x + 1)
            }
            Self::InvalidAttackCost(c) => write!(f, "c_a must be finite and >= 0, got {c}"),
            Self::MissingKappa(x) => write!(f, "no kappa for compromised target {}", x + 1),
            Self::InvalidKappa { target, value } => write!(
                f,
                "kappa of target {} must be finite and >= 0, got {value}",
                target + 1
            ),
            Self::InvalidOption { name, reason } => write!(f, "option {name}: {reason}"),
            Self::DemandExceedsSupply {
                required,
                available,
            } => write!(
                f,
                "aggregate infeasibility: targets require {required} but sources offer at most {available}"
            ),
            Self::SupplyExceedsDemand {
                required,
                available,
            } => write!(
                f,
                "aggregate infeasibility: sources must ship {required} but targets accept at most {available}"
            ),
        }
    }
}

fn valid_nonneg(v: f64) -> bool {
    v.is_finite() && v >= 0.0
}

fn check_bounds(out: &mut Vec<Violation>, lower: &[f64], upper: &[f64], node: fn(usize) -> NodeId) {
    for (i, (&lo, &hi)) in lower.iter().zip(upper).enumerate() {
        let mut ok = true;
        for v in [lo, hi] {
            if !valid_nonneg(v) {
                out.push(Violation::InvalidBound {
                    node: node(i),
                    value: v,
                });
                ok = false;
            }
        }
        if ok && lo > hi {
            out.push(Violation::BoundOrder {
                node: node(i),
                lower: lo,
                upper: hi,
            });
        }
    }
}

fn check_options(out: &mut Vec<Violation>, o: &SolveOptions) {
    let mut bad = |name, reason| out.push(Violation::InvalidOption { name, reason });
    if !(o.eta.is_finite() && o.eta > 0.0) {
        bad("eta", "must be finite and > 0");
    }
    if o.max_iters == 0 {
        bad("max_iters", "must be > 0");
    }
    if !(o.tol_primal.is_finite() && o.tol_primal > 0.0) {
        bad("tol_primal", "must be finite and > 0");
    }
    if !(o.tol_xi.is_finite() && o.tol_xi > 0.0) {
        bad("tol_xi", "must be finite and > 0");
    }
    if o.attacker_period == 0 {
        bad("attacker_period", "must be > 0");
    }
    if !(0.0..=1.0).contains(&o.attacker_damping) {
        bad("attacker_damping", "must lie in [0, 1]");
    }
    if !valid_nonneg(o.attacker_prox) {
        bad("attacker_prox", "must be finite and >= 0");
    }
    if !(0.0..=1.0).contains(&o.attacker_extrapolation) {
        bad("attacker_extrapolation", "must lie in [0, 1]");
    }
}

/// Reports every violated invariant of `s`. An empty list means the scenario
/// can be solved.
pub fn validate(s: &Scenario) -> Vec<Violation> {
    let mut out = Vec::new();
    let m = s.edges.len();
    let lengths = [
        ("delta", m, s.delta.len()),
        ("gamma", m, s.gamma.len()),
        ("p_lower", s.num_targets, s.bounds.p_lower.len()),
        ("p_upper", s.num_targets, s.bounds.p_upper.len()),
        ("q_lower", s.num_sources, s.bounds.q_lower.len()),
        ("q_upper", s.num_sources, s.bounds.q_upper.len()),
    ];
    let mut lengths_ok = true;
    for (what, expected, found) in lengths {
        if expected != found {
            out.push(Violation::LengthMismatch {
                what,
                expected,
                found,
            });
            lengths_ok = false;
        }
    }

    if s.edges.is_empty() {
        out.push(Violation::EmptyEdgeSet);
    }
    for w in s.edges.windows(2) {
        if w[0] == w[1] {
            out.push(Violation::DuplicateEdge(w[0]));
        }
    }
    for x in 0..s.num_targets {
        if s.target_edges[x].is_empty() {
            out.push(Violation::IsolatedNode(NodeId::target(x)));
        }
    }
    for y in 0..s.num_sources {
        if s.source_edges[y].is_empty() {
            out.push(Violation::IsolatedNode(NodeId::source(y)));
        }
    }

    if !lengths_ok {
        // The remaining checks index the per-edge and per-node vectors.
        check_options(&mut out, &s.options);
        return out;
    }

    for (e, &edge) in s.edges.iter().enumerate() {
        for (which, value) in [
            (Coefficient::Delta, s.delta[e]),
            (Coefficient::Gamma, s.gamma[e]),
        ] {
            if !valid_nonneg(value) {
                out.push(Violation::InvalidCoefficient { edge, which, value });
            }
        }
    }
    check_bounds(&mut out, &s.bounds.p_lower, &s.bounds.p_upper, NodeId::target);
    check_bounds(&mut out, &s.bounds.q_lower, &s.bounds.q_upper, NodeId::source);

    let adv = &s.adversary;
    for &x in &adv.compromised {
        if x >= s.num_targets {
            out.push(Violation::CompromisedOutOfRange(x));
            continue;
        }
        match adv.kappa.get(&x) {
            None => out.push(Violation::MissingKappa(x)),
            Some(&k) if !valid_nonneg(k) => out.push(Violation::InvalidKappa {
                target: x,
                value: k,
            }),
            Some(_) => {}
        }
    }
    if !adv.compromised.is_empty() && !valid_nonneg(adv.c_a) {
        out.push(Violation::InvalidAttackCost(adv.c_a));
    }
    check_options(&mut out, &s.options);

    let sum = |v: &[f64]| v.iter().sum::<f64>();
    let (p_lo, p_hi) = (sum(&s.bounds.p_lower), sum(&s.bounds.p_upper));
    let (q_lo, q_hi) = (sum(&s.bounds.q_lower), sum(&s.bounds.q_upper));
    if p_lo > q_hi {
        out.push(Violation::DemandExceedsSupply {
            required: p_lo,
            available: q_hi,
        });
    }
    if q_lo > p_hi {
        out.push(Violation::SupplyExceedsDemand {
            required: q_lo,
            available: p_hi,
        });
    }
    out
}

/// Recipe for a complete bipartite network with uniformly drawn parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpec {
    pub name: String,
    pub num_targets: usize,
    pub num_sources: usize,
    pub delta_range: (f64, f64),
    pub gamma_range: (f64, f64),
    pub p_upper_range: (f64, f64),
    pub q_upper_range: (f64, f64),
    /// Zero-based.
    pub compromised: Vec<usize>,
    pub c_a: f64,
    pub kappa: f64,
    pub options: SolveOptions,
}

impl RandomSpec {
    /// 30 targets, 3 sources; targets 8, 15 and 25 compromised.
    pub fn case2() -> Self {
        Self {
            name: "case2".to_string(),
            num_targets: 30,
            num_sources: 3,
            delta_range: (6.0, 11.0),
            gamma_range: (7.0, 12.0),
            p_upper_range: (5.0, 10.0),
            q_upper_range: (67.0, 75.0),
            compromised: vec![7, 14, 24],
            c_a: 0.5,
            kappa: 40.0,
            options: SolveOptions::default(),
        }
    }
}

/// Uniform draw on `[lo, hi)` from the top 53 bits of one `u64`.
fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let unit = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    lo + (hi - lo) * unit
}

/// Builds a complete bipartite scenario from `spec`, deterministically in
/// `(spec, seed)`.
///
/// The generator is ChaCha8 seeded with `seed_from_u64(seed)`. Draws happen in
/// a fixed order: `delta` for every edge (source-major), then `gamma` for
/// every edge, then `p_upper` per target, then `q_upper` per source. Each draw
/// consumes one `u64`. Lower bounds are zero.
pub fn generate_random_scenario(spec: &RandomSpec, seed: u64) -> Result<Scenario, ScenarioError> {
    for (what, (lo, hi)) in [
        ("delta", spec.delta_range),
        ("gamma", spec.gamma_range),
        ("p_upper", spec.p_upper_range),
        ("q_upper", spec.q_upper_range),
    ] {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(ScenarioError::InvalidRange { what, lo, hi });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<Edge> = (0..spec.num_sources)
        .flat_map(|y| (0..spec.num_targets).map(move |x| Edge::new(x, y)))
        .collect();
    let delta: Vec<f64> = edges
        .iter()
        .map(|_| uniform(&mut rng, spec.delta_range.0, spec.delta_range.1))
        .collect();
    let gamma: Vec<f64> = edges
        .iter()
        .map(|_| uniform(&mut rng, spec.gamma_range.0, spec.gamma_range.1))
        .collect();
    let p_upper = (0..spec.num_targets)
        .map(|_| uniform(&mut rng, spec.p_upper_range.0, spec.p_upper_range.1))
        .collect();
    let q_upper = (0..spec.num_sources)
        .map(|_| uniform(&mut rng, spec.q_upper_range.0, spec.q_upper_range.1))
        .collect();
    let data = edges
        .iter()
        .zip(delta.iter().zip(&gamma))
        .map(|(&edge, (&delta, &gamma))| EdgeData { edge, delta, gamma })
        .collect();
    let options = SolveOptions {
        rng_seed: seed,
        ..spec.options
    };
    Scenario::new(
        spec.name.clone(),
        spec.num_targets,
        spec.num_sources,
        data,
        NodeBounds::upper_only(p_upper, q_upper),
        AdversaryConfig::uniform(spec.compromised.clone(), spec.c_a, spec.kappa),
        options,
    )
}

/// Complete network from dense `[source][target]` coefficient tables.
pub fn complete_from_tables(
    name: &str,
    delta: &[&[f64]],
    gamma: &[&[f64]],
    bounds: NodeBounds,
    adversary: AdversaryConfig,
    options: SolveOptions,
) -> Result<Scenario, ScenarioError> {
    let num_sources = delta.len();
    let num_targets = delta.first().map_or(0, |r| r.len());
    let mut edges = Vec::with_capacity(num_sources * num_targets);
    for y in 0..num_sources {
        for x in 0..num_targets {
            edges.push(EdgeData {
                edge: Edge::new(x, y),
                delta: delta[y][x],
                gamma: gamma[y][x],
            });
        }
    }
    Scenario::new(
        name,
        num_targets,
        num_sources,
        edges,
        bounds,
        adversary,
        options,
    )
}

/// Five targets, two sources, complete network; targets 2 and 5 compromised.
///
/// Coefficient tables are printed with one row per source and one column per
/// target.
pub fn case1() -> Scenario {
    let delta: [&[f64]; 2] = [&[4.0, 12.0, 4.0, 12.0, 8.0], &[8.0, 8.0, 16.0, 4.0, 4.0]];
    let gamma: [&[f64]; 2] = [&[6.0, 4.5, 12.0, 6.0, 9.0], &[3.0, 6.0, 7.5, 9.0, 12.0]];
    complete_from_tables(
        "case1",
        &delta,
        &gamma,
        NodeBounds::upper_only(vec![2.0, 3.0, 4.0, 3.0, 2.0], vec![5.0, 5.5]),
        AdversaryConfig::uniform(vec![1, 4], 0.5, 15.0),
        SolveOptions::default(),
    )
    .expect("case1 preset is well formed")
}

pub fn case2(seed: u64) -> Scenario {
    generate_random_scenario(&RandomSpec::case2(), seed).expect("case2 preset ranges are valid")
}

/// Built-in presets by name (`case1`, `case2`). `seed` only affects `case2`.
pub fn preset(name: &str, seed: u64) -> Option<Scenario> {
    match name {
        "case1" => Some(case1()),
        "case2" => Some(case2(seed)),
        _ => None,
    }
}

pub const PRESET_NAMES: [&str; 2] = ["case1", "case2"];
