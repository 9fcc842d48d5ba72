//! Centralized reference solutions: the planner's LP, the saddle point of the
//! full game, and an exhaustive grid search for tiny networks.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::engine::social_utility;
use crate::lp::{maximize, LinearProgram, LpError};
use crate::math::{abs, l1_norm, sqrt};
use crate::network::{Scenario, Violation};
use crate::subsolvers::{solve_attacker_node, AttackerNode};

/// Sweep cap of [`centralized_best_response`].
pub const MAX_SWEEPS: usize = 500;
/// Relative gap at which [`centralized_best_response`] stops.
pub const GAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    Invalid(Vec<Violation>),
    /// The node bounds admit no plan even though the aggregate checks pass
    /// (possible on incomplete networks).
    Infeasible { residual: f64 },
    Lp(LpError),
    TooLarge { what: &'static str, found: usize, max: usize },
    Unsupported(&'static str),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Invalid(v) => {
                write!(f, "invalid scenario ({} problem(s))", v.len())?;
                for item in v {
                    write!(f, "\n  - {item}")?;
                }
                Ok(())
            }
            Self::Infeasible { residual } => {
                write!(f, "no plan satisfies the node bounds (phase-one residual {residual:e})")
            }
            Self::Lp(e) => write!(f, "{e}"),
            Self::TooLarge { what, found, max } => {
                write!(f, "grid search supports at most {max} {what}, found {found}")
            }
            Self::Unsupported(why) => write!(f, "grid search: {why}"),
        }
    }
}

impl From<LpError> for OracleError {
    fn from(e: LpError) -> Self {
        match e {
            LpError::Infeasible { infeasibility } => Self::Infeasible {
                residual: infeasibility,
            },
            other => Self::Lp(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerSolution {
    pub plan: Vec<f64>,
    /// Social utility of `plan` against the fixed attack.
    pub utility: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub plan: Vec<f64>,
    pub attack: Vec<f64>,
    pub utility: f64,
    /// Value of the planner's LP against the best mixture of the attacks seen.
    pub upper_bound: f64,
    /// Best value the planner has guaranteed against a best-responding
    /// attacker.
    pub lower_bound: f64,
    pub sweeps: usize,
    pub converged: bool,
}

fn check(scenario: &Scenario) -> Result<(), OracleError> {
    let v = scenario.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(OracleError::Invalid(v))
    }
}

/// Per-edge rate `delta + gamma + xi` (attack only on compromised targets).
fn edge_rates(scenario: &Scenario, xi: &[f64]) -> Vec<f64> {
    scenario
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let a = if scenario.adversary.is_compromised(edge.target) {
                xi[e]
            } else {
                0.0
            };
            scenario.delta[e] + scenario.gamma[e] + a
        })
        .collect()
}

/// Largest amount edge `e` can carry on its own.
fn edge_cap(scenario: &Scenario, e: usize) -> f64 {
    let edge = scenario.edges()[e];
    scenario.bounds.p_upper[edge.target].min(scenario.bounds.q_upper[edge.source])
}

/// Planner LP: one column per edge, one sum row per target then per source.
fn node_lp(scenario: &Scenario, objective: Vec<f64>) -> LinearProgram {
    let m = scenario.num_edges();
    let mut lp = LinearProgram::default();
    for (e, c) in objective.into_iter().enumerate().take(m) {
        lp.add_col(c, 0.0, edge_cap(scenario, e));
    }
    let b = &scenario.bounds;
    for x in 0..scenario.num_targets() {
        let coeffs = scenario.target_edges(x).iter().map(|&e| (e, 1.0)).collect();
        lp.add_row(coeffs, b.p_lower[x], b.p_upper[x]);
    }
    for y in 0..scenario.num_sources() {
        let coeffs = scenario.source_edges(y).iter().map(|&e| (e, 1.0)).collect();
        lp.add_row(coeffs, b.q_lower[y], b.q_upper[y]);
    }
    lp
}

/// Exact best plan against the fixed attack `xi` (indexed like the edges).
pub fn solve_planner_lp(scenario: &Scenario, xi: &[f64]) -> Result<PlannerSolution, OracleError> {
    check(scenario)?;
    let sol = maximize(&node_lp(scenario, edge_rates(scenario, xi)))?;
    Ok(PlannerSolution {
        utility: social_utility(&sol.x, xi, scenario),
        plan: sol.x,
    })
}

/// Best attack against the fixed plan, node by node.
pub fn best_attack(scenario: &Scenario, pi: &[f64]) -> Vec<f64> {
    let mut xi = vec![0.0; scenario.num_edges()];
    for x in scenario.active_attack_targets() {
        let idx = scenario.target_edges(x);
        let pi_row: Vec<f64> = idx.iter().map(|&e| pi[e]).collect();
        let delta: Vec<f64> = idx.iter().map(|&e| scenario.delta[e]).collect();
        let node = AttackerNode {
            delta: &delta,
            kappa: scenario.adversary.kappa_of(x),
            c_a: scenario.adversary.c_a,
        };
        for (&e, v) in idx.iter().zip(solve_attacker_node(&pi_row, &node)) {
            xi[e] = v;
        }
    }
    xi
}

/// Saddle point of the game by best response with memory.
///
/// The planner best-responds (exact LP) to the worst of all attacks seen so
/// far, which bounds the game value from above; the attacker best-responds to
/// each new plan, which bounds it from below. Starts from the zero attack and
/// stops when the bounds agree to `GAP_TOL * (1 + |U|)` or after
/// [`MAX_SWEEPS`]. The returned attack mixes the stored responses with the
/// LP's cut multipliers; the returned plan is the one with the best lower
/// bound.
pub fn centralized_best_response(scenario: &Scenario) -> Result<OracleResult, OracleError> {
    check(scenario)?;
    let m = scenario.num_edges();
    if scenario.active_attack_targets().is_empty() {
        let zero = vec![0.0; m];
        let sol = solve_planner_lp(scenario, &zero)?;
        return Ok(OracleResult {
            upper_bound: sol.utility,
            lower_bound: sol.utility,
            utility: sol.utility,
            plan: sol.plan,
            attack: zero,
            sweeps: 1,
            converged: true,
        });
    }

    let c_a = scenario.adversary.c_a;
    let mut base = node_lp(scenario, vec![0.0; m]);
    let t = base.add_col(1.0, f64::NEG_INFINITY, f64::INFINITY);
    let first_cut = base.rows.len();
    // t <= sum rate_j pi + c_a |xi_j|_1  for every stored attack xi_j
    let add_cut = |lp: &mut LinearProgram, xi: &[f64]| {
        let rates = edge_rates(scenario, xi);
        let mut coeffs: Vec<(usize, f64)> = rates.iter().enumerate().map(|(e, &r)| (e, -r)).collect();
        coeffs.push((t, 1.0));
        lp.add_row(coeffs, f64::NEG_INFINITY, c_a * l1_norm(xi));
    };

    let mut attacks: Vec<Vec<f64>> = vec![vec![0.0; m]];
    add_cut(&mut base, &attacks[0]);
    let mut best_plan = Vec::new();
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    let mut weights = vec![1.0];
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let sol = maximize(&base)?;
        upper = sol.objective;
        weights = sol.row_duals[first_cut..].iter().map(|&y| y.max(0.0)).collect();
        let plan = sol.x[..m].to_vec();
        let response = best_attack(scenario, &plan);
        let value = social_utility(&plan, &response, scenario);
        if value > lower {
            lower = value;
            best_plan = plan;
        }
        if upper - lower <= GAP_TOL * (1.0 + abs(upper)) {
            converged = true;
            break;
        }
        add_cut(&mut base, &response);
        attacks.push(response);
    }

    let total: f64 = weights.iter().sum();
    let mut attack = vec![0.0; m];
    if total > 0.0 {
        for (w, xi) in weights.iter().zip(&attacks) {
            for (a, v) in attack.iter_mut().zip(xi) {
                *a += w / total * v;
            }
        }
    }
    Ok(OracleResult {
        utility: social_utility(&best_plan, &attack, scenario),
        plan: best_plan,
        attack,
        upper_bound: upper,
        lower_bound: lower,
        sweeps,
        converged,
    })
}

pub const GRID_MAX_EDGES: usize = 3;
pub const GRID_MAX_ATTACK_COORDS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSaddle {
    /// `max` over grid plans of `min` over grid attacks.
    pub maxmin: f64,
    /// `min` over grid attacks of `max` over grid plans.
    pub minmax: f64,
    /// Both values lie within this distance of the continuous game value
    /// (one-sided: below by the plan part, above by the attack part), so
    /// `minmax - maxmin <= bound`.
    pub bound: f64,
    /// Part of `bound` from the plan grid: both values are at least the game
    /// value minus this.
    pub plan_part: f64,
    /// Part of `bound` from the attack grid: both values are at most the game
    /// value plus this.
    pub attack_part: f64,
    pub plan_points: usize,
    pub attack_points: usize,
}

fn odometer(lens: &[usize], idx: &mut [usize]) -> bool {
    for (i, &len) in idx.iter_mut().zip(lens) {
        *i += 1;
        if *i < len {
            return true;
        }
        *i = 0;
    }
    false
}

/// Exhaustive search on a tiny network (at most [`GRID_MAX_EDGES`] edges and
/// [`GRID_MAX_ATTACK_COORDS`] attacked edges, zero lower bounds).
///
/// Each edge amount takes `steps + 1` values `i * cap / steps` and each attacked
/// coordinate takes `steps + 1` values `-i * r / steps` with
/// `r = min(delta, sqrt(kappa))`; infeasible combinations are dropped. Rounding
/// any feasible point toward zero onto this grid keeps it feasible, which
/// gives [`GridSaddle::bound`].
pub fn grid_saddle_search(scenario: &Scenario, steps: usize) -> Result<GridSaddle, OracleError> {
    check(scenario)?;
    let m = scenario.num_edges();
    if m > GRID_MAX_EDGES {
        return Err(OracleError::TooLarge {
            what: "edges",
            found: m,
            max: GRID_MAX_EDGES,
        });
    }
    if steps == 0 {
        return Err(OracleError::Unsupported("steps must be positive"));
    }
    let b = &scenario.bounds;
    if b.p_lower.iter().chain(&b.q_lower).any(|&v| v != 0.0) {
        return Err(OracleError::Unsupported("lower bounds must be zero"));
    }
    let active = scenario.active_attack_targets();
    let adv: Vec<usize> = active
        .iter()
        .flat_map(|&x| scenario.target_edges(x).iter().copied())
        .collect();
    if adv.len() > GRID_MAX_ATTACK_COORDS {
        return Err(OracleError::TooLarge {
            what: "attacked edges",
            found: adv.len(),
            max: GRID_MAX_ATTACK_COORDS,
        });
    }
    let n = steps as f64;
    let c_a = scenario.adversary.c_a;
    const FEAS: f64 = 1e-12;

    let caps: Vec<f64> = (0..m).map(|e| edge_cap(scenario, e)).collect();
    let mut plans: Vec<Vec<f64>> = Vec::new();
    let lens = vec![steps + 1; m];
    let mut idx = vec![0usize; m];
    loop {
        let pi: Vec<f64> = (0..m).map(|e| idx[e] as f64 * caps[e] / n).collect();
        let fits = (0..scenario.num_targets())
            .all(|x| scenario.target_edges(x).iter().map(|&e| pi[e]).sum::<f64>() <= b.p_upper[x] + FEAS)
            && (0..scenario.num_sources())
                .all(|y| scenario.source_edges(y).iter().map(|&e| pi[e]).sum::<f64>() <= b.q_upper[y] + FEAS);
        if fits {
            plans.push(pi);
        }
        if !odometer(&lens, &mut idx) {
            break;
        }
    }

    let reach: Vec<f64> = adv
        .iter()
        .map(|&e| {
            let x = scenario.edges()[e].target;
            scenario.delta[e].min(sqrt(scenario.adversary.kappa_of(x)))
        })
        .collect();
    let mut attacks: Vec<Vec<f64>> = Vec::new();
    let lens = vec![steps + 1; adv.len()];
    let mut idx = vec![0usize; adv.len()];
    loop {
        let xi: Vec<f64> = (0..adv.len()).map(|i| -(idx[i] as f64) * reach[i] / n).collect();
        let fits = active.iter().all(|&x| {
            let sq: f64 = adv
                .iter()
                .zip(&xi)
                .filter(|(&e, _)| scenario.edges()[e].target == x)
                .map(|(_, v)| v * v)
                .sum();
            sq <= scenario.adversary.kappa_of(x) + FEAS
        });
        if fits {
            attacks.push(xi);
        }
        if !odometer(&lens, &mut idx) {
            break;
        }
    }

    let base_rate: Vec<f64> = (0..m).map(|e| scenario.delta[e] + scenario.gamma[e]).collect();
    let mut col_max = vec![f64::NEG_INFINITY; attacks.len()];
    let mut maxmin = f64::NEG_INFINITY;
    for pi in &plans {
        let base: f64 = base_rate.iter().zip(pi).map(|(r, p)| r * p).sum();
        let mut row_min = f64::INFINITY;
        for (j, xi) in attacks.iter().enumerate() {
            let u = base
                + adv
                    .iter()
                    .zip(xi)
                    .map(|(&e, &v)| v * pi[e] - c_a * v)
                    .sum::<f64>();
            row_min = row_min.min(u);
            col_max[j] = col_max[j].max(u);
        }
        maxmin = maxmin.max(row_min);
    }
    let minmax = col_max.iter().copied().fold(f64::INFINITY, f64::min);

    let plan_part: f64 = (0..m).map(|e| base_rate[e] * caps[e] / n).sum();
    let attack_part: f64 = adv
        .iter()
        .zip(&reach)
        .map(|(&e, r)| (caps[e] + c_a) * r / n)
        .sum();
    Ok(GridSaddle {
        maxmin,
        minmax,
        bound: plan_part + attack_part,
        plan_part,
        attack_part,
        plan_points: plans.len(),
        attack_points: attacks.len(),
    })
}
