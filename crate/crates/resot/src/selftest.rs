//! Property checks on built-in instances, run by `resot selftest`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resot_core::engine::reference::{run_unsimplified_step, UnsimplifiedState};
use resot_core::engine::step;
use resot_core::network::case1;
use resot_core::oracle::solve_planner_lp;
use resot_core::subsolvers::brute::{brute_force_attacker_node, brute_force_projection};
use resot_core::subsolvers::{attacker_objective, project_box_sum_interval, solve_attacker_node, AttackerNode, ProjectionSet};
use resot_core::{
    centralized_best_response, compare_runs, grid_saddle_search, run, AdversaryConfig, Edge, EdgeData, IterateState,
    NodeBounds, Scenario, Sequential, SolveOptions,
};

use crate::report::{read_trace, write_trace};
use crate::scenario_file::{scenario_from_json, scenario_to_json};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&mut ChaCha8Rng) -> Result<String, String>;

const CHECKS: [(&str, Check); 8] = [
    ("projection", projection),
    ("attacker", attacker),
    ("planner-lp", planner_lp),
    ("case1-equilibrium", case1_equilibrium),
    ("merged-duals", merged_duals),
    ("grid-minimax", grid_minimax),
    ("scenario-json", scenario_json),
    ("trace-csv", trace_csv),
];

/// Runs every check; each one gets its own generator derived from `seed`.
pub fn run_selftest(seed: u64) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .enumerate()
        .map(|(i, &(name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let (passed, detail) = match check(&mut rng) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckOutcome { name, passed, detail }
        })
        .collect()
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let unit = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    lo + (hi - lo) * unit
}

fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn projection(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let cases = 2000;
    for _ in 0..cases {
        let n = 1 + below(rng, 6);
        let v: Vec<f64> = (0..n).map(|_| uniform(rng, -10.0, 10.0)).collect();
        let (a, b) = (uniform(rng, 0.0, 10.0), uniform(rng, 0.0, 10.0));
        let set = ProjectionSet::new(a.min(b), a.max(b)).map_err(|e| e.to_string())?;
        let p = project_box_sum_interval(&v, set).map_err(|e| e.to_string())?;
        ensure(set.contains(&p, 1e-9), || format!("{v:?} -> infeasible {p:?}"))?;
        let slow = brute_force_projection(&v, set).map_err(|e| e.to_string())?;
        let gap = p.iter().zip(&slow).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        ensure(gap <= 1e-8, || format!("{v:?}: differs from enumeration by {gap:e}"))?;
    }
    Ok(format!("{cases} random projections match enumeration"))
}

fn attacker(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let cases = 200;
    let h = 1e-2;
    for _ in 0..cases {
        let n = 1 + below(rng, 2);
        let pi: Vec<f64> = (0..n).map(|_| uniform(rng, 0.0, 3.0)).collect();
        let delta: Vec<f64> = (0..n).map(|_| uniform(rng, 0.0, 4.0)).collect();
        let node = AttackerNode {
            delta: &delta,
            kappa: uniform(rng, 0.0, 4.0),
            c_a: uniform(rng, 0.0, 1.0),
        };
        let exact = solve_attacker_node(&pi, &node);
        ensure(node.contains(&exact, 1e-9), || format!("infeasible attack {exact:?}"))?;
        let grid = brute_force_attacker_node(&pi, &node, h).map_err(|e| e.to_string())?;
        let fe = attacker_objective(&pi, &exact, node.c_a);
        let fg = attacker_objective(&pi, &grid, node.c_a);
        let bound = h * (pi.iter().sum::<f64>() + node.c_a * n as f64);
        ensure(fe <= fg + 1e-12 && fg - fe <= bound, || {
            format!("pi {pi:?}, delta {delta:?}: exact {fe} vs grid {fg}")
        })?;
    }
    Ok(format!("{cases} attacker nodes within the grid bound"))
}

fn planner_lp(_: &mut ChaCha8Rng) -> Result<String, String> {
    let s = case1().without_attack();
    let lp = solve_planner_lp(&s, &vec![0.0; s.num_edges()]).map_err(|e| e.to_string())?;
    let r = run(&s).map_err(|e| e.to_string())?;
    let gap = rel_gap(r.utility, lp.utility);
    ensure(r.converged() && gap <= 1e-3, || {
        format!("{} after {} iterations vs LP {}", r.utility, r.iterations, lp.utility)
    })?;
    Ok(format!("attack-free run within {gap:.1e} of the LP optimum"))
}

fn case1_equilibrium(_: &mut ChaCha8Rng) -> Result<String, String> {
    let s = case1();
    let r = run(&s).map_err(|e| e.to_string())?;
    let o = centralized_best_response(&s).map_err(|e| e.to_string())?;
    let gap = rel_gap(r.utility, o.utility);
    ensure(r.converged() && gap <= 1e-3, || format!("distributed {} vs oracle {}", r.utility, o.utility))?;
    let clean = run(&s.without_attack()).map_err(|e| e.to_string())?;
    let cmp = compare_runs(&s, &r, &clean).map_err(|e| e.to_string())?;
    ensure(cmp.delta_utility < 0.0, || format!("attack did not lower utility: {}", cmp.delta_utility))?;
    ensure(cmp.attacks.iter().all(|a| a.l2_a > 0.0), || "an attacked target has a zero attack".into())?;
    Ok(format!("gap to oracle {gap:.1e}, attack costs {:.4}", -cmp.delta_utility))
}

fn merged_duals(_: &mut ChaCha8Rng) -> Result<String, String> {
    let s = case1();
    let mut a = IterateState::initial(&s).map_err(|e| e.to_string())?;
    let mut b = UnsimplifiedState::from_state(&a);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        step(&s, &mut a, &Sequential).map_err(|e| e.to_string())?;
        b = run_unsimplified_step(&b, &s).map_err(|e| e.to_string())?;
        for e in 0..s.num_edges() {
            worst = worst.max((a.pi[e] - b.pi[e]).abs()).max((a.xi[e] - b.xi[e]).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("iterates drift apart by {worst:e}"))?;
    Ok(format!("100 steps, max difference {worst:.1e}"))
}

fn grid_minimax(_: &mut ChaCha8Rng) -> Result<String, String> {
    let edge = |x, y, delta, gamma| EdgeData {
        edge: Edge::new(x, y),
        delta,
        gamma,
    };
    let s = Scenario::new(
        "tiny",
        2,
        2,
        vec![edge(0, 0, 5.0, 2.0), edge(1, 0, 9.0, 1.0), edge(1, 1, 3.0, 4.0)],
        NodeBounds::upper_only(vec![3.0, 3.0], vec![3.0, 2.0]),
        AdversaryConfig::uniform(vec![1], 0.3, 30.0),
        SolveOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let v = centralized_best_response(&s).map_err(|e| e.to_string())?.utility;
    let g = grid_saddle_search(&s, 16).map_err(|e| e.to_string())?;
    ensure(g.maxmin <= g.minmax + 1e-12, || format!("maxmin {} above minmax {}", g.maxmin, g.minmax))?;
    ensure(
        g.maxmin >= v - g.plan_part - 1e-9 && g.minmax <= v + g.attack_part + 1e-9,
        || format!("grid [{}, {}] does not bracket {v}", g.maxmin, g.minmax),
    )?;
    Ok(format!("grid gap {:.3e} within bound {:.3e}", g.minmax - g.maxmin, g.bound))
}

fn scenario_json(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let seed = rng.next_u64();
    for s in [case1(), resot_core::network::case2(seed)] {
        let back = scenario_from_json(&scenario_to_json(&s), "x").map_err(|e| e.to_string())?;
        ensure(back == s, || format!("{} changed in a JSON round trip", s.name))?;
    }
    Ok("presets survive a JSON round trip bit for bit".into())
}

fn trace_csv(_: &mut ChaCha8Rng) -> Result<String, String> {
    let mut s = case1();
    s.options.max_iters = 25;
    let r = run(&s).map_err(|e| e.to_string())?;
    let mut buf = Vec::new();
    write_trace(&r.trace, &mut buf).map_err(|e| e.to_string())?;
    let back = read_trace(buf.as_slice()).map_err(|e| e.to_string())?;
    ensure(back == r.trace, || "trace changed in a CSV round trip".into())?;
    Ok(format!("{} rows survive a CSV round trip", back.len()))
}
