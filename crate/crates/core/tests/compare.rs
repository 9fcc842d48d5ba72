use resot_core::network::{case1, case2};
use resot_core::{centralized_best_response, compare_runs, run, CompareError};

#[test]
fn identical_runs_have_zero_deltas() {
    let s = case1();
    let r = run(&s).unwrap();
    let cmp = compare_runs(&s, &r, &r.clone()).unwrap();
    assert_eq!(cmp.delta_utility, 0.0);
    assert_eq!(cmp.relative_gap, 0.0);
    assert_eq!(cmp.max_plan_gap, 0.0);
    assert_eq!(cmp.attacks.len(), 2);
    for a in &cmp.attacks {
        assert_eq!((a.l1_a, a.l2_a), (a.l1_b, a.l2_b));
    }
}

#[test]
fn utility_delta_is_antisymmetric() {
    let s = case1();
    let attacked = run(&s).unwrap();
    let clean = run(&s.without_attack()).unwrap();
    let ab = compare_runs(&s, &attacked, &clean).unwrap();
    let ba = compare_runs(&s, &clean, &attacked).unwrap();
    assert_eq!(ab.delta_utility, -ba.delta_utility);
    assert_eq!(ab.max_plan_gap, ba.max_plan_gap);
    // the attack lowers the social utility
    assert!(ab.delta_utility < 0.0);
    for (a, b) in ab.attacks.iter().zip(&ba.attacks) {
        assert!(a.l2_a > 0.0 && a.l2_b == 0.0);
        assert_eq!((a.l1_a, a.l2_a, a.l1_b, a.l2_b), (b.l1_b, b.l2_b, b.l1_a, b.l2_a));
    }
}

#[test]
fn distributed_and_oracle_agree_on_case1() {
    for s in [case1(), case1().without_attack()] {
        let r = run(&s).unwrap();
        let o = centralized_best_response(&s).unwrap();
        let cmp = compare_runs(&s, &r, &o).unwrap();
        assert!(cmp.relative_gap <= 1e-3, "{cmp:?}");
        // plans need not be unique; the gap is informational but small here
        assert!(cmp.max_plan_gap <= 1e-2, "{cmp:?}");
    }
}

#[test]
fn results_from_other_networks_are_rejected() {
    let s = case1();
    let r = run(&s).unwrap();
    let mut other = case2(1);
    other.options.max_iters = 2;
    let o = run(&other).unwrap();
    assert_eq!(
        compare_runs(&s, &r, &o),
        Err(CompareError::EdgeCountMismatch {
            expected: 10,
            found: 90
        })
    );
}
