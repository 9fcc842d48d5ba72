//! Side-by-side comparison of two solutions of the same network.

use alloc::vec::Vec;
use core::fmt;

use crate::engine::{attack_norms, SolveResult};
use crate::math::{abs, max_abs_diff};
use crate::network::Scenario;
use crate::oracle::OracleResult;

/// Anything that carries a plan, an attack and a utility.
pub trait Outcome {
    fn plan(&self) -> &[f64];
    fn attack(&self) -> &[f64];
    fn utility(&self) -> f64;
}

impl Outcome for SolveResult {
    fn plan(&self) -> &[f64] {
        &self.plan
    }
    fn attack(&self) -> &[f64] {
        &self.attack
    }
    fn utility(&self) -> f64 {
        self.utility
    }
}

impl Outcome for OracleResult {
    fn plan(&self) -> &[f64] {
        &self.plan
    }
    fn attack(&self) -> &[f64] {
        &self.attack
    }
    fn utility(&self) -> f64 {
        self.utility
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeAttack {
    pub target: usize,
    pub l1_a: f64,
    pub l2_a: f64,
    pub l1_b: f64,
    pub l2_b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunComparison {
    pub utility_a: f64,
    pub utility_b: f64,
    /// `utility_a - utility_b`.
    pub delta_utility: f64,
    /// `|delta_utility| / max(1, |utility_b|)`.
    pub relative_gap: f64,
    /// `max_e |pi_a - pi_b|`.
    pub max_plan_gap: f64,
    pub attacks: Vec<NodeAttack>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompareError {
    /// A plan or attack does not have one entry per edge of the scenario.
    EdgeCountMismatch { expected: usize, found: usize },
}

impl fmt::Display for CompareError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EdgeCountMismatch { expected, found } => write!(
                f,
                "results belong to different networks: expected {expected} edges, found {found}"
            ),
        }
    }
}

/// Compares `a` against `b`. Both must be solutions on the edge set of
/// `scenario`, whose compromised targets list the attack rows.
pub fn compare_runs<A: Outcome + ?Sized, B: Outcome + ?Sized>(
    scenario: &Scenario,
    a: &A,
    b: &B,
) -> Result<RunComparison, CompareError> {
    let expected = scenario.num_edges();
    for len in [a.plan().len(), b.plan().len(), a.attack().len(), b.attack().len()] {
        if len != expected {
            return Err(CompareError::EdgeCountMismatch { expected, found: len });
        }
    }
    let na = attack_norms(scenario, a.attack());
    let nb = attack_norms(scenario, b.attack());
    let delta = a.utility() - b.utility();
    Ok(RunComparison {
        utility_a: a.utility(),
        utility_b: b.utility(),
        delta_utility: delta,
        relative_gap: abs(delta) / abs(b.utility()).max(1.0),
        max_plan_gap: max_abs_diff(a.plan(), b.plan()),
        attacks: na
            .iter()
            .zip(&nb)
            .map(|(&(target, l1_a, l2_a), &(_, l1_b, l2_b))| NodeAttack {
                target,
                l1_a,
                l2_a,
                l1_b,
                l2_b,
            })
            .collect(),
    })
}
