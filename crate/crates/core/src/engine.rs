//! The distributed solve loop.
//!
//! Every iteration runs, in order: the attacker step at each compromised
//! target, the proximal update at each target, the proximal update at each
//! source, the consensus average and the dual step. Node updates within a
//! phase only read the snapshot left by the previous phase, so a
//! [`PhaseExecutor`] may run them in any order or in parallel.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math::{l1_norm, l2_norm, max_abs_diff};
use crate::network::{Scenario, Violation};
use crate::subsolvers::{
    project_box_sum_interval, solve_attacker_node_prox, AttackerNode, ProjectionSet, SubsolverError,
};

/// Runs the independent node updates of one phase.
///
/// `f(i)` computes the new row of node `i`; implementations must return the
/// rows in index order. Results must not depend on how the calls are
/// scheduled, which holds as long as `f` is pure.
pub trait PhaseExecutor {
    fn map_nodes(&self, n: usize, f: &(dyn Fn(usize) -> Vec<f64> + Sync)) -> Vec<Vec<f64>>;
}

/// Runs every node update on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl PhaseExecutor for Sequential {
    fn map_nodes(&self, n: usize, f: &(dyn Fn(usize) -> Vec<f64> + Sync)) -> Vec<Vec<f64>> {
        (0..n).map(f).collect()
    }
}

/// Full algorithm state. Every vector is indexed like [`Scenario::edges`];
/// `xi` is zero on edges of benign targets.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateState {
    pub k: usize,
    pub pi: Vec<f64>,
    pub pi_t: Vec<f64>,
    pub pi_s: Vec<f64>,
    pub alpha: Vec<f64>,
    pub xi: Vec<f64>,
    /// Consensus plan of the previous iteration.
    pub pi_prev: Vec<f64>,
}

impl IterateState {
    /// Zero duals and attack; the local copies start at the projection of
    /// zero onto their node sets, which is zero whenever lower bounds are.
    pub fn initial(scenario: &Scenario) -> Result<Self, RunError> {
        let m = scenario.num_edges();
        let mut pi_t = vec![0.0; m];
        let mut pi_s = vec![0.0; m];
        for x in 0..scenario.num_targets() {
            let idx = scenario.target_edges(x);
            let row = project_box_sum_interval(&vec![0.0; idx.len()], target_set(scenario, x)?)?;
            scatter(&mut pi_t, idx, &row);
        }
        for y in 0..scenario.num_sources() {
            let idx = scenario.source_edges(y);
            let row = project_box_sum_interval(&vec![0.0; idx.len()], source_set(scenario, y)?)?;
            scatter(&mut pi_s, idx, &row);
        }
        let pi: Vec<f64> = pi_t.iter().zip(&pi_s).map(|(a, b)| 0.5 * (a + b)).collect();
        Ok(Self {
            k: 0,
            pi_prev: pi.clone(),
            pi,
            pi_t,
            pi_s,
            alpha: vec![0.0; m],
            xi: vec![0.0; m],
        })
    }

    pub fn primal_residual(&self) -> f64 {
        max_abs_diff(&self.pi_t, &self.pi_s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxIters,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Converged => "converged",
            Self::MaxIters => "max-iters",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub iter: usize,
    pub utility: f64,
    pub primal_residual: f64,
    /// `|xi_x|_2`, one entry per target in [`Trace::compromised`].
    pub xi_norms: Vec<f64>,
    /// Consensus plan, recorded every `snapshot_stride` iterations.
    pub plan: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    /// Compromised targets (0-based), the columns of `xi_norms`.
    pub compromised: Vec<usize>,
    pub records: Vec<TraceRecord>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub plan: Vec<f64>,
    pub attack: Vec<f64>,
    pub utility: f64,
    pub termination: Termination,
    pub iterations: usize,
    /// Primal residual of the last iteration.
    pub residual: f64,
    /// Plan change of the last iteration.
    pub plan_change: f64,
    /// Attack change of the last iteration in which the attacker moved.
    pub xi_change: f64,
    pub trace: Trace,
}

impl SolveResult {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    Invalid(Vec<Violation>),
    Subsolver(SubsolverError),
    /// The iterate stopped being finite (e.g. an extreme penalty).
    NonFinite { iter: usize },
}

impl From<SubsolverError> for RunError {
    fn from(e: SubsolverError) -> Self {
        Self::Subsolver(e)
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Invalid(v) => {
                write!(f, "invalid scenario ({} problem(s))", v.len())?;
                for item in v {
                    write!(f, "\n  - {item}")?;
                }
                Ok(())
            }
            Self::Subsolver(e) => write!(f, "subproblem failed: {e}"),
            Self::NonFinite { iter } => write!(f, "iterate became non-finite at iteration {iter}"),
        }
    }
}

/// Per-iteration diagnostics returned by [`step`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats {
    pub residual: f64,
    /// `max |pi(k+1) - pi(k)|`.
    pub plan_change: f64,
    pub xi_change: f64,
    pub attacker_moved: bool,
}

fn target_set(s: &Scenario, x: usize) -> Result<ProjectionSet, SubsolverError> {
    ProjectionSet::new(s.bounds.p_lower[x], s.bounds.p_upper[x])
}

fn source_set(s: &Scenario, y: usize) -> Result<ProjectionSet, SubsolverError> {
    ProjectionSet::new(s.bounds.q_lower[y], s.bounds.q_upper[y])
}

fn scatter(dst: &mut [f64], idx: &[usize], row: &[f64]) {
    for (&e, &v) in idx.iter().zip(row) {
        dst[e] = v;
    }
}

/// `sum (delta + gamma + xi) pi + c_a |xi|_1`, with `xi` only counted on
/// compromised targets.
pub fn social_utility(pi: &[f64], xi: &[f64], scenario: &Scenario) -> f64 {
    let adv = &scenario.adversary;
    let mut u = 0.0;
    for (e, edge) in scenario.edges().iter().enumerate() {
        let mut rate = scenario.delta[e] + scenario.gamma[e];
        if adv.is_compromised(edge.target) {
            rate += xi[e];
            u += adv.c_a * crate::math::abs(xi[e]);
        }
        u += rate * pi[e];
    }
    u
}

/// New `pi_t` row of target `x`: the projection of
/// `pi(k) + (d - alpha) / eta` onto the target's set, where `d = delta + xi`.
/// Reads the attack already stored in `state`.
pub fn target_update(x: usize, state: &IterateState, scenario: &Scenario) -> Result<Vec<f64>, SubsolverError> {
    let eta = scenario.options.eta;
    let v: Vec<f64> = scenario
        .target_edges(x)
        .iter()
        .map(|&e| state.pi[e] + (scenario.delta[e] + state.xi[e] - state.alpha[e]) / eta)
        .collect();
    project_box_sum_interval(&v, target_set(scenario, x)?)
}

/// New `pi_s` row of source `y`: the projection of
/// `pi(k) + (gamma + alpha) / eta` onto the source's set.
pub fn source_update(y: usize, state: &IterateState, scenario: &Scenario) -> Result<Vec<f64>, SubsolverError> {
    let eta = scenario.options.eta;
    let v: Vec<f64> = scenario
        .source_edges(y)
        .iter()
        .map(|&e| state.pi[e] + (scenario.gamma[e] + state.alpha[e]) / eta)
        .collect();
    project_box_sum_interval(&v, source_set(scenario, y)?)
}

pub fn consensus_update(pi_t: &[f64], pi_s: &[f64]) -> Vec<f64> {
    pi_t.iter().zip(pi_s).map(|(a, b)| 0.5 * (a + b)).collect()
}

pub fn dual_update(alpha: &[f64], pi_t: &[f64], pi_s: &[f64], eta: f64) -> Vec<f64> {
    alpha
        .iter()
        .zip(pi_t.iter().zip(pi_s))
        .map(|(a, (t, s))| a + 0.5 * eta * (t - s))
        .collect()
}

/// Attack row of compromised target `x` for iteration `k + 1`.
///
/// The attacker answers the extrapolated plan
/// `max(pi(k) + theta (pi(k) - pi(k-1)), 0)` with a proximal step of weight
/// `rho` around its current row, and the result is blended with the current
/// row by the damping weight. With `rho = theta = damping = 0` this is a plain
/// best response to `pi(k)`.
fn attacker_row(x: usize, scenario: &Scenario, pi: &[f64], pi_prev: &[f64], xi: &[f64]) -> Vec<f64> {
    let opts = &scenario.options;
    let idx = scenario.target_edges(x);
    let theta = opts.attacker_extrapolation;
    let pi_bar: Vec<f64> = idx
        .iter()
        .map(|&e| (pi[e] + theta * (pi[e] - pi_prev[e])).max(0.0))
        .collect();
    let delta: Vec<f64> = idx.iter().map(|&e| scenario.delta[e]).collect();
    let anchor: Vec<f64> = idx.iter().map(|&e| xi[e]).collect();
    let node = AttackerNode {
        delta: &delta,
        kappa: scenario.adversary.kappa_of(x),
        c_a: scenario.adversary.c_a,
    };
    let mut row = solve_attacker_node_prox(&pi_bar, &node, &anchor, opts.attacker_prox);
    let w = opts.attacker_damping;
    if w > 0.0 {
        for (r, a) in row.iter_mut().zip(&anchor) {
            *r = (1.0 - w) * *r + w * a;
        }
    }
    row
}

fn attacker_phase<E: PhaseExecutor + ?Sized>(
    scenario: &Scenario,
    k: usize,
    pi: &[f64],
    pi_prev: &[f64],
    xi: &[f64],
    exec: &E,
) -> (Vec<f64>, bool) {
    let period = scenario.options.attacker_period.max(1);
    let mut out = vec![0.0; xi.len()];
    for &x in &scenario.adversary.compromised {
        if x < scenario.num_targets() {
            for &e in scenario.target_edges(x) {
                out[e] = xi[e];
            }
        }
    }
    if !k.is_multiple_of(period) {
        return (out, false);
    }
    let active = scenario.active_attack_targets();
    let rows = exec.map_nodes(active.len(), &|i| attacker_row(active[i], scenario, pi, pi_prev, xi));
    for (&x, row) in active.iter().zip(&rows) {
        scatter(&mut out, scenario.target_edges(x), row);
    }
    (out, true)
}

/// The attack for the next iteration at every compromised target. Leaves the
/// attack unchanged on iterations where the attacker does not move.
pub fn attacker_update(state: &IterateState, scenario: &Scenario) -> Vec<f64> {
    attacker_phase(scenario, state.k, &state.pi, &state.pi_prev, &state.xi, &Sequential).0
}

/// Advances `state` by one iteration.
pub fn step<E: PhaseExecutor + ?Sized>(
    scenario: &Scenario,
    state: &mut IterateState,
    exec: &E,
) -> Result<StepStats, RunError> {
    let (xi, attacker_moved) = attacker_phase(scenario, state.k, &state.pi, &state.pi_prev, &state.xi, exec);
    let xi_change = max_abs_diff(&xi, &state.xi);
    state.xi = xi;

    let snapshot: &IterateState = state;
    let mut failed = false;
    let run_rows = |n: usize, f: &(dyn Fn(usize) -> Result<Vec<f64>, SubsolverError> + Sync)| {
        exec.map_nodes(n, &|i| f(i).unwrap_or_default())
    };
    let target_rows = run_rows(scenario.num_targets(), &|x| target_update(x, snapshot, scenario));
    let source_rows = run_rows(scenario.num_sources(), &|y| source_update(y, snapshot, scenario));
    let mut pi_t = vec![0.0; scenario.num_edges()];
    let mut pi_s = vec![0.0; scenario.num_edges()];
    for (x, row) in target_rows.iter().enumerate() {
        let idx = scenario.target_edges(x);
        if row.len() != idx.len() {
            failed = true;
        }
        scatter(&mut pi_t, idx, row);
    }
    for (y, row) in source_rows.iter().enumerate() {
        let idx = scenario.source_edges(y);
        if row.len() != idx.len() {
            failed = true;
        }
        scatter(&mut pi_s, idx, row);
    }
    if failed {
        return Err(RunError::NonFinite { iter: state.k + 1 });
    }

    let pi = consensus_update(&pi_t, &pi_s);
    state.alpha = dual_update(&state.alpha, &pi_t, &pi_s, scenario.options.eta);
    state.pi_prev = core::mem::replace(&mut state.pi, pi);
    state.pi_t = pi_t;
    state.pi_s = pi_s;
    state.k += 1;
    Ok(StepStats {
        residual: state.primal_residual(),
        plan_change: max_abs_diff(&state.pi, &state.pi_prev),
        xi_change,
        attacker_moved,
    })
}

fn record(scenario: &Scenario, state: &IterateState, compromised: &[usize]) -> TraceRecord {
    let stride = scenario.options.snapshot_stride;
    TraceRecord {
        iter: state.k,
        utility: social_utility(&state.pi, &state.xi, scenario),
        primal_residual: state.primal_residual(),
        xi_norms: compromised
            .iter()
            .map(|&x| {
                let row: Vec<f64> = scenario.target_edges(x).iter().map(|&e| state.xi[e]).collect();
                l2_norm(&row)
            })
            .collect(),
        plan: (stride > 0 && state.k.is_multiple_of(stride)).then(|| state.pi.clone()),
    }
}

/// [`run_with`] on the calling thread.
pub fn run(scenario: &Scenario) -> Result<SolveResult, RunError> {
    run_with(scenario, &Sequential)
}

/// Solves `scenario` from the zero state. Stops once the primal residual
/// `max |pi_t - pi_s|` and the plan change `max |pi(k+1) - pi(k)|` are both
/// below `tol_primal` and, in an iteration where the attacker moved, the
/// attack changed by less than `tol_xi`; otherwise after `max_iters`.
///
/// The plan change is the usual dual residual of ADMM (up to the factor
/// `eta`); the primal residual alone can dip below tolerance while the plan is
/// still drifting.
pub fn run_with<E: PhaseExecutor + ?Sized>(scenario: &Scenario, exec: &E) -> Result<SolveResult, RunError> {
    let violations = scenario.validate();
    if !violations.is_empty() {
        return Err(RunError::Invalid(violations));
    }
    let opts = scenario.options;
    let compromised: Vec<usize> = scenario.adversary.compromised.clone();
    let mut state = IterateState::initial(scenario)?;
    let mut trace = Trace {
        compromised: compromised.clone(),
        records: vec![record(scenario, &state, &compromised)],
    };
    let attack_possible = !scenario.active_attack_targets().is_empty();
    let mut termination = Termination::MaxIters;
    let mut last = StepStats {
        residual: state.primal_residual(),
        plan_change: 0.0,
        xi_change: 0.0,
        attacker_moved: false,
    };
    let mut xi_change = 0.0;
    while state.k < opts.max_iters {
        last = step(scenario, &mut state, exec)?;
        if last.attacker_moved {
            xi_change = last.xi_change;
        }
        let rec = record(scenario, &state, &compromised);
        if !rec.utility.is_finite() || !last.residual.is_finite() {
            return Err(RunError::NonFinite { iter: state.k });
        }
        trace.records.push(rec);
        let xi_settled = !attack_possible || (last.attacker_moved && last.xi_change < opts.tol_xi);
        if last.residual < opts.tol_primal && last.plan_change < opts.tol_primal && xi_settled {
            termination = Termination::Converged;
            break;
        }
    }
    Ok(SolveResult {
        utility: social_utility(&state.pi, &state.xi, scenario),
        plan: state.pi,
        attack: state.xi,
        termination,
        iterations: state.k,
        residual: last.residual,
        plan_change: last.plan_change,
        xi_change,
        trace,
    })
}

/// Per-target attack norms `(target, |xi_x|_1, |xi_x|_2)` for every
/// compromised target.
pub fn attack_norms(scenario: &Scenario, xi: &[f64]) -> Vec<(usize, f64, f64)> {
    scenario
        .adversary
        .compromised
        .iter()
        .filter(|&&x| x < scenario.num_targets())
        .map(|&x| {
            let row: Vec<f64> = scenario.target_edges(x).iter().map(|&e| xi[e]).collect();
            (x, l1_norm(&row), l2_norm(&row))
        })
        .collect()
}

/// The iteration before the two dual copies are merged: targets and sources
/// keep their own multipliers and the consensus plan comes from its
/// first-order condition. Only used to check the merged updates.
#[cfg(any(test, feature = "reference"))]
pub mod reference {
    use super::*;

    #[derive(Debug, Clone, PartialEq)]
    pub struct UnsimplifiedState {
        pub k: usize,
        pub pi: Vec<f64>,
        pub pi_t: Vec<f64>,
        pub pi_s: Vec<f64>,
        pub alpha_t: Vec<f64>,
        pub alpha_s: Vec<f64>,
        pub xi: Vec<f64>,
        pub pi_prev: Vec<f64>,
    }

    impl UnsimplifiedState {
        pub fn from_state(s: &IterateState) -> Self {
            Self {
                k: s.k,
                pi: s.pi.clone(),
                pi_t: s.pi_t.clone(),
                pi_s: s.pi_s.clone(),
                alpha_t: s.alpha.clone(),
                alpha_s: s.alpha.clone(),
                xi: s.xi.clone(),
                pi_prev: s.pi_prev.clone(),
            }
        }

        /// `(alpha_t + alpha_s) / 2`.
        pub fn alpha(&self) -> Vec<f64> {
            self.alpha_t
                .iter()
                .zip(&self.alpha_s)
                .map(|(a, b)| 0.5 * (a + b))
                .collect()
        }
    }

    pub fn run_unsimplified_step(state: &UnsimplifiedState, scenario: &Scenario) -> Result<UnsimplifiedState, RunError> {
        let eta = scenario.options.eta;
        let (xi, _) = attacker_phase(scenario, state.k, &state.pi, &state.pi_prev, &state.xi, &Sequential);

        let m = scenario.num_edges();
        let mut pi_t = vec![0.0; m];
        for x in 0..scenario.num_targets() {
            let idx = scenario.target_edges(x);
            let v: Vec<f64> = idx
                .iter()
                .map(|&e| state.pi[e] + (scenario.delta[e] + xi[e] - state.alpha_t[e]) / eta)
                .collect();
            scatter(&mut pi_t, idx, &project_box_sum_interval(&v, target_set(scenario, x)?)?);
        }
        let mut pi_s = vec![0.0; m];
        for y in 0..scenario.num_sources() {
            let idx = scenario.source_edges(y);
            let v: Vec<f64> = idx
                .iter()
                .map(|&e| state.pi[e] + (scenario.gamma[e] + state.alpha_s[e]) / eta)
                .collect();
            scatter(&mut pi_s, idx, &project_box_sum_interval(&v, source_set(scenario, y)?)?);
        }
        // d/dpi [ -a_t pi + a_s pi + eta/2 (pi_t - pi)^2 + eta/2 (pi - pi_s)^2 ] = 0
        let pi: Vec<f64> = (0..m)
            .map(|e| 0.5 * (pi_t[e] + pi_s[e]) + (state.alpha_t[e] - state.alpha_s[e]) / (2.0 * eta))
            .collect();
        let alpha_t = (0..m).map(|e| state.alpha_t[e] + eta * (pi_t[e] - pi[e])).collect();
        let alpha_s = (0..m).map(|e| state.alpha_s[e] + eta * (pi[e] - pi_s[e])).collect();
        Ok(UnsimplifiedState {
            k: state.k + 1,
            pi_prev: state.pi.clone(),
            pi,
            pi_t,
            pi_s,
            alpha_t,
            alpha_s,
            xi,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{case1, AdversaryConfig, Edge, EdgeData, NodeBounds, SolveOptions};
    use alloc::string::String;

    fn single_edge(compromised: bool) -> Scenario {
        let adversary = if compromised {
            AdversaryConfig::uniform(vec![0], 0.5, 15.0)
        } else {
            AdversaryConfig::none()
        };
        Scenario::new(
            String::from("one"),
            1,
            1,
            vec![EdgeData {
                edge: Edge::new(0, 0),
                delta: 4.0,
                gamma: 6.0,
            }],
            NodeBounds::upper_only(vec![2.0], vec![5.0]),
            adversary,
            SolveOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn utility_examples() {
        let s = single_edge(false);
        assert_eq!(social_utility(&[0.0], &[0.0], &s), 0.0);
        assert_eq!(social_utility(&[2.0], &[0.0], &s), 20.0);
        let a = single_edge(true);
        // (4 - 1 + 6) * 2 + 0.5 * 1
        assert_eq!(social_utility(&[2.0], &[-1.0], &a), 18.5);
    }

    #[test]
    fn target_update_projects_to_cap() {
        let s = case1();
        let st = IterateState::initial(&s).unwrap();
        // target 1 has delta [4, 8] and p_upper 2: unconstrained [4, 8] -> [0, 2]
        assert_eq!(target_update(0, &st, &s).unwrap(), vec![0.0, 2.0]);
    }

    #[test]
    fn fully_nulled_target_stays_at_zero() {
        let s = case1();
        let mut st = IterateState::initial(&s).unwrap();
        for &e in s.target_edges(1) {
            st.xi[e] = -s.delta[e];
        }
        assert_eq!(target_update(1, &st, &s).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn source_update_shift() {
        // source 1 restricted to targets 1 and 2 has gamma [6, 4.5]; use a
        // 2x1 network with gamma [6, 3] and q_upper 5 -> [4, 1]
        let s = Scenario::new(
            String::from("src"),
            2,
            1,
            vec![
                EdgeData { edge: Edge::new(0, 0), delta: 1.0, gamma: 6.0 },
                EdgeData { edge: Edge::new(1, 0), delta: 1.0, gamma: 3.0 },
            ],
            NodeBounds::upper_only(vec![9.0, 9.0], vec![5.0]),
            AdversaryConfig::none(),
            SolveOptions::default(),
        )
        .unwrap();
        let st = IterateState::initial(&s).unwrap();
        let row = source_update(0, &st, &s).unwrap();
        assert!((row[0] - 4.0).abs() < 1e-12 && (row[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn consensus_and_dual_arithmetic() {
        assert_eq!(consensus_update(&[2.0, 1.0], &[4.0, 1.0]), vec![3.0, 1.0]);
        assert_eq!(dual_update(&[0.0, 0.5], &[2.0, 1.0], &[1.0, 1.0], 2.0), vec![1.0, 0.5]);
    }

    #[test]
    fn attacker_update_examples() {
        let mut s = single_edge(true);
        let mut st = IterateState::initial(&s).unwrap();
        assert_eq!(attacker_update(&st, &s), vec![0.0]);

        s.options.attacker_prox = 0.0;
        s.options.attacker_extrapolation = 0.0;
        st.pi = vec![2.0];
        st.pi_prev = vec![2.0];
        let xi = attacker_update(&st, &s);
        assert!((xi[0] + 15f64.sqrt()).abs() < 1e-12);

        s.options.attacker_damping = 1.0;
        st.xi = vec![-1.25];
        assert_eq!(attacker_update(&st, &s), vec![-1.25]);

        s.options.attacker_damping = 0.0;
        s.options.attacker_period = 2;
        st.k = 1;
        assert_eq!(attacker_update(&st, &s), vec![-1.25]);
    }

    #[test]
    fn trace_length_and_single_edge_solution() {
        let s = single_edge(false);
        let r = run(&s).unwrap();
        assert!(r.converged());
        assert_eq!(r.trace.len(), r.iterations + 1);
        assert!((r.plan[0] - 2.0).abs() < 1e-5);
        assert!((r.utility - 20.0).abs() < 1e-4);
    }

    #[test]
    fn invalid_scenario_rejected() {
        let mut s = single_edge(false);
        s.bounds.p_lower[0] = 3.0;
        assert!(matches!(run(&s), Err(RunError::Invalid(_))));
    }

    #[test]
    fn merged_and_split_duals_agree() {
        let s = case1();
        let mut a = IterateState::initial(&s).unwrap();
        let mut b = reference::UnsimplifiedState::from_state(&a);
        for _ in 0..20 {
            step(&s, &mut a, &Sequential).unwrap();
            b = reference::run_unsimplified_step(&b, &s).unwrap();
            assert!(max_abs_diff(&b.alpha_t, &b.alpha_s) < 1e-12);
            assert!(max_abs_diff(&a.pi, &b.pi) < 1e-9);
            assert!(max_abs_diff(&a.alpha, &b.alpha()) < 1e-9);
        }
    }
}
