//! Exact solvers for the two convex subproblems each iteration calls, and
//! brute-force oracles used to check them.

mod attacker;
pub mod brute;
mod projection;

pub use attacker::{attacker_objective, solve_attacker_node, solve_attacker_node_prox, AttackerNode};
pub use projection::{project_box_sum_interval, project_into, ProjectionSet};

use core::fmt;

/// Bisection iteration cap shared by both scalar searches.
pub(crate) const BISECTION_CAP: usize = 200;
/// Residual tolerance of the scalar equations.
pub(crate) const BISECTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum SubsolverError {
    NonFinite,
    /// `lower > upper`, a negative bound, or a positive lower bound on an
    /// empty vector.
    EmptySet { lower: f64, upper: f64 },
    DimensionTooLarge { dim: usize, max: usize },
    LengthMismatch,
    InvalidStep(f64),
}

impl fmt::Display for SubsolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonFinite => f.write_str("input contains a non-finite value"),
            Self::EmptySet { lower, upper } => {
                write!(f, "set with sum bounds [{lower}, {upper}] is empty")
            }
            Self::DimensionTooLarge { dim, max } => {
                write!(f, "dimension {dim} exceeds the brute-force limit {max}")
            }
            Self::LengthMismatch => f.write_str("input vectors differ in length"),
            Self::InvalidStep(h) => write!(f, "grid step must be finite and > 0, got {h}"),
        }
    }
}
