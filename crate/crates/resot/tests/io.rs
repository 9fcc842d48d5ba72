use std::collections::BTreeMap;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resot::report::{read_snapshots, write_snapshots};
use resot::{
    load_plan, load_scenario, load_trace, read_trace, save_plan, save_scenario, save_trace, scenario_from_json,
    scenario_to_json, write_trace, RayonExecutor, RunSummary,
};
use resot_core::network::{case1, case2};
use resot_core::{
    run, run_with, AdversaryConfig, Edge, EdgeData, NodeBounds, Scenario, Sequential, SolveOptions, Trace,
};

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

/// Arbitrary scenario: random sparse edge set, awkward floats, per-target
/// budgets and non-default options. Only the structure has to be valid.
fn arbitrary_scenario(rng: &mut ChaCha8Rng) -> Scenario {
    let targets = 1 + below(rng, 6);
    let sources = 1 + below(rng, 4);
    let mut edges = Vec::new();
    for y in 0..sources {
        for x in 0..targets {
            if !rng.next_u64().is_multiple_of(3) {
                edges.push(EdgeData {
                    edge: Edge::new(x, y),
                    delta: unit(rng) * 10.0,
                    gamma: (unit(rng) - 0.1) * 1e-3,
                });
            }
        }
    }
    let vec = |rng: &mut ChaCha8Rng, n: usize, scale: f64| (0..n).map(|_| unit(rng) * scale).collect::<Vec<_>>();
    let bounds = NodeBounds {
        p_lower: vec(rng, targets, 0.1),
        p_upper: vec(rng, targets, 7.0),
        q_lower: vec(rng, sources, 1e-9),
        q_upper: vec(rng, sources, 1e6),
    };
    let compromised: Vec<usize> = (0..targets).filter(|_| rng.next_u64().is_multiple_of(2)).collect();
    let kappa: BTreeMap<usize, f64> = if rng.next_u64().is_multiple_of(2) {
        let k = unit(rng) * 40.0;
        compromised.iter().map(|&x| (x, k)).collect()
    } else {
        compromised.iter().map(|&x| (x, unit(rng) * 40.0)).collect()
    };
    let options = SolveOptions {
        eta: 0.1 + unit(rng),
        max_iters: below(rng, 50_000),
        tol_primal: unit(rng) * 1e-5,
        tol_xi: unit(rng) * 1e-7,
        attacker_period: 1 + below(rng, 4),
        attacker_damping: unit(rng),
        attacker_prox: unit(rng) * 3.0,
        attacker_extrapolation: unit(rng),
        rng_seed: rng.next_u64(),
        snapshot_stride: below(rng, 5),
    };
    Scenario::new(
        format!("arbitrary, \"quoted\" {}", rng.next_u64()),
        targets,
        sources,
        edges,
        bounds,
        AdversaryConfig {
            compromised,
            c_a: unit(rng),
            kappa,
        },
        options,
    )
    .unwrap()
}

#[test]
fn scenario_json_round_trip_is_bit_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let s = arbitrary_scenario(&mut rng);
        let text = scenario_to_json(&s);
        let back = scenario_from_json(&text, "unused").unwrap();
        assert_eq!(back, s, "{text}");
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&back.delta), bits(&s.delta));
        assert_eq!(bits(&back.gamma), bits(&s.gamma));
        assert_eq!(scenario_to_json(&back), text);
    }
}

#[test]
fn scenario_files_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.json");
    let s = case2(11);
    save_scenario(&s, &path).unwrap();
    assert_eq!(load_scenario(&path).unwrap(), s);

    // a nameless document is named after its file
    let text = scenario_to_json(&case1()).replace("\"name\": \"case1\",\n", "");
    let other = dir.path().join("renamed.json");
    std::fs::write(&other, text).unwrap();
    assert_eq!(load_scenario(&other).unwrap().name, "renamed");

    let missing = load_scenario(&dir.path().join("nope.json")).unwrap_err();
    assert!(missing.is_io());
    std::fs::write(&other, "{ not json").unwrap();
    assert!(!load_scenario(&other).unwrap_err().is_io());
}

#[test]
fn dense_and_list_coefficients_agree() {
    let dense = r#"{"targets": 2, "sources": 2,
        "delta": [[1.5, 2.5], [3.5, 4.5]], "gamma": [[1, 2], [3, 4]],
        "p_upper": [1, 1], "q_upper": [1, 1]}"#;
    let list = r#"{"targets": 2, "sources": 2,
        "delta": [[1, 1, 1.5], [2, 1, 2.5], [1, 2, 3.5], [2, 2, 4.5]],
        "gamma": [[2, 2, 4], [1, 2, 3], [2, 1, 2], [1, 1, 1]],
        "p_upper": [1, 1], "q_upper": [1, 1]}"#;
    let a = scenario_from_json(dense, "n").unwrap();
    let b = scenario_from_json(list, "n").unwrap();
    assert_eq!(a, b);
    // row = source, column = target
    let e = a.edge_index(Edge::new(1, 0)).unwrap();
    assert_eq!(a.delta[e], 2.5);
}

#[test]
fn trace_csv_round_trip_is_bit_exact() {
    for s in [case1(), case2(2), case1().without_attack()] {
        let r = run(&s).unwrap();
        let mut buf = Vec::new();
        write_trace(&r.trace, &mut buf).unwrap();
        let back = read_trace(buf.as_slice()).unwrap();
        assert_eq!(back, r.trace);
        for (a, b) in back.records.iter().zip(&r.trace.records) {
            assert_eq!(a.utility.to_bits(), b.utility.to_bits());
            assert_eq!(a.primal_residual.to_bits(), b.primal_residual.to_bits());
        }
    }
}

#[test]
fn three_iterations_give_four_rows() {
    let mut s = case1();
    s.options.max_iters = 3;
    let r = run(&s).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    save_trace(&r.trace, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 4);
    assert_eq!(lines[0], "iter,utility,primal_residual,xi_norm_2,xi_norm_5");
    assert!(lines[1].starts_with("0,"));
    assert_eq!(load_trace(&path).unwrap(), r.trace);
}

#[test]
fn empty_trace_is_header_only() {
    let trace = Trace {
        compromised: vec![0, 3],
        records: Vec::new(),
    };
    let mut buf = Vec::new();
    write_trace(&trace, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf.clone()).unwrap(), "iter,utility,primal_residual,xi_norm_1,xi_norm_4\n");
    assert_eq!(read_trace(buf.as_slice()).unwrap(), trace);
}

#[test]
fn plan_csv_round_trip() {
    let s = case1();
    let r = run(&s).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    save_plan(&s, &r.plan, &path).unwrap();
    let rows = load_plan(&path).unwrap();
    assert_eq!(rows.len(), s.num_edges());
    for ((edge, v), (e, want)) in rows.iter().zip(s.edges().iter().zip(&r.plan)) {
        assert_eq!(edge, e);
        assert_eq!(v.to_bits(), want.to_bits());
    }
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("x,y,pi\n1,1,"));
    assert!(save_plan(&s, &r.plan[1..], &path).is_err());
}

#[test]
fn snapshots_follow_the_stride() {
    let mut s = case1();
    s.options.max_iters = 10;
    s.options.snapshot_stride = 4;
    let r = run(&s).unwrap();
    let mut buf = Vec::new();
    write_snapshots(&s, &r.trace, &mut buf).unwrap();
    let rows = read_snapshots(buf.as_slice()).unwrap();
    let iters: Vec<usize> = rows.iter().map(|r| r.0).step_by(s.num_edges()).collect();
    assert_eq!(iters, vec![0, 4, 8]);
    assert_eq!(rows.len(), 3 * s.num_edges());
}

#[test]
fn rayon_schedule_matches_sequential() {
    let mut big = case2(4);
    big.options.max_iters = 400;
    for s in [case1(), big] {
        let seq = run_with(&s, &Sequential).unwrap();
        for exec in [RayonExecutor::global(), RayonExecutor::with_threads(3).unwrap()] {
            assert_eq!(run_with(&s, &exec).unwrap(), seq);
        }
    }
}

#[test]
fn summary_fields() {
    let s = case1();
    let r = run(&s).unwrap();
    let summary = RunSummary::new(&s, &r, std::time::Duration::from_millis(1500));
    assert!(summary.attack);
    assert_eq!(summary.duration_secs, 1.5);
    assert_eq!(summary.attacks.iter().map(|a| a.target).collect::<Vec<_>>(), vec![1, 4]);
    assert!(summary.attacks.iter().all(|a| a.l1 >= a.l2 && a.l2 > 0.0));
    let text = summary.to_string();
    let keys: Vec<&str> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(
        keys,
        ["scenario", "attack", "termination", "iterations", "utility", "residual", "xi_l1[2]", "xi_l2[2]", "xi_l1[5]", "xi_l2[5]", "duration_s"]
    );
    // values start in one column
    let cols: Vec<usize> = text.lines().map(|l| l.len() - l[l.find(' ').unwrap()..].trim_start().len()).collect();
    assert!(cols.windows(2).all(|w| w[0] == w[1]), "{text}");
    let clean = case1().without_attack();
    assert!(!RunSummary::new(&clean, &run(&clean).unwrap(), Default::default()).attack);
}
