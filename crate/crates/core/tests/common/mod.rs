//! Helpers shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use resot_core::network::{generate_random_scenario, RandomSpec};
use resot_core::lp::{maximize, LinearProgram};
use resot_core::{AdversaryConfig, Edge, EdgeData, NodeBounds, Scenario, SolveOptions};

pub fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Random complete network with one compromised target and small budgets.
pub fn random_small(rng: &mut ChaCha8Rng, targets: usize, sources: usize) -> Scenario {
    let seed: u64 = rng.random();
    let spec = RandomSpec {
        name: format!("rand{targets}x{sources}"),
        num_targets: targets,
        num_sources: sources,
        delta_range: (1.0, 10.0),
        gamma_range: (1.0, 10.0),
        p_upper_range: (1.0, 5.0),
        q_upper_range: (2.0, 8.0),
        compromised: vec![rng.random_range(0..targets)],
        c_a: rng.random_range(0.0..1.0),
        kappa: rng.random_range(0.5..10.0),
        options: SolveOptions::default(),
    };
    generate_random_scenario(&spec, seed).unwrap()
}

/// Planner LP of `s` with an arbitrary objective.
pub fn plan_lp(s: &Scenario, objective: &[f64]) -> LinearProgram {
    let mut lp = LinearProgram::default();
    for (e, &c) in objective.iter().enumerate() {
        let edge = s.edges()[e];
        lp.add_col(c, 0.0, s.bounds.p_upper[edge.target].min(s.bounds.q_upper[edge.source]));
    }
    for x in 0..s.num_targets() {
        let row = s.target_edges(x).iter().map(|&e| (e, 1.0)).collect();
        lp.add_row(row, s.bounds.p_lower[x], s.bounds.p_upper[x]);
    }
    for y in 0..s.num_sources() {
        let row = s.source_edges(y).iter().map(|&e| (e, 1.0)).collect();
        lp.add_row(row, s.bounds.q_lower[y], s.bounds.q_upper[y]);
    }
    lp
}

/// Feasible plan: the vertex maximizing random signed rates, pulled toward
/// `center` by a random convex weight. Node sets are convex, so this stays
/// feasible.
pub fn random_plan(rng: &mut ChaCha8Rng, s: &Scenario, center: &[f64]) -> Vec<f64> {
    let objective: Vec<f64> = (0..s.num_edges()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let vertex = maximize(&plan_lp(s, &objective)).unwrap().x;
    let t: f64 = if rng.random_bool(0.3) { 1.0 } else { rng.random_range(0.0..1.0) };
    vertex
        .iter()
        .zip(center)
        .map(|(v, c)| (1.0 - t) * c + t * v)
        .collect()
}

/// Feasible attack: a random box point scaled into the ball at every
/// compromised target, pulled toward `center`.
pub fn random_attack(rng: &mut ChaCha8Rng, s: &Scenario, center: &[f64]) -> Vec<f64> {
    let mut xi = vec![0.0; s.num_edges()];
    for &x in &s.adversary.compromised {
        let idx = s.target_edges(x);
        let mut row: Vec<f64> = idx.iter().map(|&e| -rng.random_range(0.0..1.0) * s.delta[e]).collect();
        if rng.random_bool(0.3) {
            // push to the ball boundary when it is reachable inside the box
            let n2: f64 = row.iter().map(|a| a * a).sum();
            if n2 > 0.0 {
                let scale = (s.adversary.kappa_of(x) / n2).sqrt();
                row.iter_mut().zip(idx).for_each(|(a, &e)| *a = (*a * scale).max(-s.delta[e]));
            }
        }
        let n2: f64 = row.iter().map(|a| a * a).sum();
        let kappa = s.adversary.kappa_of(x);
        if n2 > kappa {
            let scale = (kappa / n2).sqrt();
            row.iter_mut().for_each(|a| *a *= scale);
        }
        for (&e, v) in idx.iter().zip(row) {
            xi[e] = v;
        }
    }
    let t: f64 = if rng.random_bool(0.3) { 1.0 } else { rng.random_range(0.0..1.0) };
    xi.iter().zip(center).map(|(v, c)| (1.0 - t) * c + t * v).collect()
}

fn edge(x: usize, y: usize, delta: f64, gamma: f64) -> EdgeData {
    EdgeData {
        edge: Edge::new(x, y),
        delta,
        gamma,
    }
}

/// The three grid-search instances: one edge without attacker, one edge with
/// an attacker, and three edges with two attacked coordinates. The last one
/// has a mixed equilibrium (the contested edge carries exactly `c_a`) that no
/// grid contains, so its grid values differ.
pub fn tiny_instances() -> Vec<Scenario> {
    let opts = SolveOptions::default();
    vec![
        Scenario::new(
            "tiny-clean",
            1,
            1,
            vec![edge(0, 0, 4.0, 6.0)],
            NodeBounds::upper_only(vec![2.0], vec![5.0]),
            AdversaryConfig::none(),
            opts,
        )
        .unwrap(),
        Scenario::new(
            "tiny-one",
            1,
            1,
            vec![edge(0, 0, 4.0, 6.0)],
            NodeBounds::upper_only(vec![2.0], vec![5.0]),
            AdversaryConfig::uniform(vec![0], 0.5, 15.0),
            opts,
        )
        .unwrap(),
        Scenario::new(
            "tiny-three",
            2,
            2,
            vec![edge(0, 0, 5.0, 2.0), edge(1, 0, 9.0, 1.0), edge(1, 1, 3.0, 4.0)],
            NodeBounds::upper_only(vec![3.0, 3.0], vec![3.0, 2.0]),
            AdversaryConfig::uniform(vec![1], 0.3, 30.0),
            opts,
        )
        .unwrap(),
    ]
}
