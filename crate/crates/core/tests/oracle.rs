mod common;

use common::{plan_lp, random_attack, random_plan, random_small, rel_gap, tiny_instances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resot_core::lp::{maximize, LinearProgram};
use resot_core::network::case1;
use resot_core::oracle::{best_attack, solve_planner_lp};
use resot_core::{centralized_best_response, grid_saddle_search, social_utility, OracleError, Scenario};

/// Optimality certificate: sign conditions on row duals and reduced costs,
/// `d = c - A^T y`, and equal primal and dual objectives.
fn check_certificate(lp: &LinearProgram) {
    let sol = maximize(lp).unwrap();
    let tol = 1e-8;
    let n = lp.num_cols();
    let mut d = lp.objective.clone();
    for (r, row) in lp.rows.iter().enumerate() {
        for &(j, a) in &row.coeffs {
            d[j] -= sol.row_duals[r] * a;
        }
    }
    for j in 0..n {
        assert!((d[j] - sol.reduced_costs[j]).abs() <= tol, "reduced cost {j}");
        let x = sol.x[j];
        let (lo, hi) = (lp.col_lower[j], lp.col_upper[j]);
        if x > lo + tol && x < hi - tol {
            assert!(d[j].abs() <= tol, "interior column {j} has d {}", d[j]);
        } else if x <= lo + tol && x < hi - tol {
            assert!(d[j] <= tol);
        } else if x >= hi - tol && x > lo + tol {
            assert!(d[j] >= -tol);
        }
    }
    let mut dual = 0.0;
    for (r, row) in lp.rows.iter().enumerate() {
        let (y, act) = (sol.row_duals[r], sol.row_activity[r]);
        assert!(act >= row.lower - tol && act <= row.upper + tol);
        if act > row.lower + tol && act < row.upper - tol {
            assert!(y.abs() <= tol, "slack row {r} has dual {y}");
        }
        if y > tol {
            assert!((act - row.upper).abs() <= tol);
        }
        if y < -tol {
            assert!((act - row.lower).abs() <= tol);
        }
        dual += if y > 0.0 { y * row.upper } else if y < 0.0 { y * row.lower } else { 0.0 };
    }
    for j in 0..n {
        dual += if d[j] > 0.0 {
            d[j] * lp.col_upper[j]
        } else if d[j] < 0.0 {
            d[j] * lp.col_lower[j]
        } else {
            0.0
        };
    }
    assert!((dual - sol.objective).abs() <= 1e-8 * (1.0 + sol.objective.abs()));
}

fn with_random_lower_bounds(rng: &mut ChaCha8Rng, s: &mut Scenario) {
    // fractions small enough to keep the aggregate checks satisfiable
    for x in 0..s.num_targets() {
        s.bounds.p_lower[x] = rng.random_range(0.0..0.3) * s.bounds.p_upper[x];
    }
    for y in 0..s.num_sources() {
        s.bounds.q_lower[y] = rng.random_range(0.0..0.3) * s.bounds.q_upper[y];
    }
}

#[test]
fn lp_certificates_on_random_networks() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut checked = 0;
    while checked < 200 {
        let targets = rng.random_range(1..=4);
        let sources = rng.random_range(1..=3);
        let mut s = random_small(&mut rng, targets, sources);
        with_random_lower_bounds(&mut rng, &mut s);
        if !s.validate().is_empty() || maximize(&plan_lp(&s, &vec![0.0; s.num_edges()])).is_err() {
            continue;
        }
        let objective: Vec<f64> = (0..s.num_edges()).map(|_| rng.random_range(-5.0..10.0)).collect();
        check_certificate(&plan_lp(&s, &objective));
        checked += 1;
    }
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting; `None` when singular.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-10 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
                b[r] -= f * b[c];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Maximum over all vertices, found by making every choice of `n` bound
/// hyperplanes active.
fn vertex_enumeration(lp: &LinearProgram) -> Option<f64> {
    let n = lp.num_cols();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        planes.push((e.clone(), lp.col_lower[j]));
        planes.push((e, lp.col_upper[j]));
    }
    for row in &lp.rows {
        let mut a = vec![0.0; n];
        for &(j, v) in &row.coeffs {
            a[j] += v;
        }
        planes.push((a.clone(), row.lower));
        planes.push((a, row.upper));
    }
    let feasible = |x: &[f64]| {
        (0..n).all(|j| x[j] >= lp.col_lower[j] - 1e-9 && x[j] <= lp.col_upper[j] + 1e-9)
            && lp.activity(x).iter().zip(&lp.rows).all(|(a, r)| *a >= r.lower - 1e-9 && *a <= r.upper + 1e-9)
    };
    let mut best: Option<f64> = None;
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        let a: Vec<Vec<f64>> = pick.iter().map(|&i| planes[i].0.clone()).collect();
        let b: Vec<f64> = pick.iter().map(|&i| planes[i].1).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) {
                let v = lp.value(&x);
                best = Some(best.map_or(v, |bv: f64| bv.max(v)));
            }
        }
        // next combination
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] < planes.len() - n + i {
                pick[i] += 1;
                for k in i + 1..n {
                    pick[k] = pick[k - 1] + 1;
                }
                break;
            }
        }
    }
}

#[test]
fn lp_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let shapes = [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (4, 1), (1, 3)];
    for case in 0..120 {
        let (t, y) = shapes[case % shapes.len()];
        let mut s = random_small(&mut rng, t, y);
        with_random_lower_bounds(&mut rng, &mut s);
        let objective: Vec<f64> = (0..s.num_edges()).map(|_| rng.random_range(-5.0..10.0)).collect();
        let lp = plan_lp(&s, &objective);
        match (maximize(&lp), vertex_enumeration(&lp)) {
            (Ok(sol), Some(v)) => {
                assert!((sol.objective - v).abs() <= 1e-9 * (1.0 + v.abs()), "case {case}: {} vs {v}", sol.objective)
            }
            (Err(_), None) => {}
            (a, b) => panic!("case {case}: simplex {a:?} vs enumeration {b:?}"),
        }
    }
}

#[test]
fn planner_lp_rejects_aggregate_infeasibility() {
    let mut s = case1().without_attack();
    s.bounds.p_lower = vec![2.0, 3.0, 4.0, 1.5, 0.5];
    match solve_planner_lp(&s, &[0.0; 10]) {
        Err(OracleError::Invalid(v)) => {
            assert!(v.iter().any(|x| x.to_string().contains("11")), "{v:?}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn oracle_result_is_a_saddle_point() {
    let s = case1();
    let o = centralized_best_response(&s).unwrap();
    assert!(o.converged);
    let u = social_utility(&o.plan, &o.attack, &s);
    assert!((u - o.utility).abs() < 1e-9);
    assert!(o.lower_bound <= o.utility + 1e-9 && o.utility <= o.upper_bound + 1e-9);
    let tol = 1e-4 * (1.0 + u.abs());
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..1000 {
        let p = random_plan(&mut rng, &s, &o.plan);
        assert!(social_utility(&p, &o.attack, &s) <= u + tol);
        let a = random_attack(&mut rng, &s, &o.attack);
        assert!(social_utility(&o.plan, &a, &s) >= u - tol);
    }
    let br = best_attack(&s, &o.plan);
    assert!(social_utility(&o.plan, &br, &s) >= u - tol);
    let bp = solve_planner_lp(&s, &o.attack).unwrap();
    assert!(bp.utility <= u + tol);
}

#[test]
fn oracle_on_random_networks_brackets_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..20 {
        let s = random_small(&mut rng, 4, 2);
        let o = centralized_best_response(&s).unwrap();
        assert!(o.converged);
        assert!(o.upper_bound - o.lower_bound <= 1e-8 * (1.0 + o.upper_bound.abs()));
        let clean = centralized_best_response(&s.without_attack()).unwrap();
        assert!(o.utility <= clean.utility + 1e-9);
    }
}

#[test]
fn grid_values_bracket_the_game_value() {
    for s in tiny_instances() {
        let v = centralized_best_response(&s).unwrap().utility;
        let g = grid_saddle_search(&s, 20).unwrap();
        assert!(g.maxmin <= g.minmax + 1e-12);
        assert!(g.maxmin >= v - g.plan_part - 1e-9 && g.minmax <= v + g.attack_part + 1e-9);
        if s.adversary.is_empty() {
            let lp = solve_planner_lp(&s, &[0.0]).unwrap().utility;
            assert!(rel_gap(g.maxmin, lp) * lp.abs().max(1.0) <= g.bound);
        }
    }
}

#[test]
fn grid_rejects_large_instances() {
    let mut s = tiny_instances().pop().unwrap();
    s.bounds.p_lower[0] = 0.5;
    assert!(matches!(grid_saddle_search(&s, 4), Err(OracleError::Unsupported(_))));
    assert!(matches!(grid_saddle_search(&case1(), 4), Err(OracleError::TooLarge { .. })));
}
