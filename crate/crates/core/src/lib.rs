//! Resilient optimal transport over a bipartite source/target network when a
//! subset of targets is controlled by a deceptive adversary.
//!
//! The transport planner maximizes social utility while the attacker perturbs
//! the utility rates reported by the targets it controls. The crate provides:
//!
//! - [`network`]: scenario data, validation, built-in case presets and seeded
//!   random scenario generation.
//! - [`subsolvers`]: exact solvers for the two per-node subproblems (projection
//!   onto a box-plus-sum-interval set, attacker linear minimization over a
//!   box intersected with a Euclidean ball) and brute-force oracles for them.
//! - [`engine`]: the distributed consensus-ADMM solve loop interleaved with
//!   attacker best responses.
//! - [`lp`]: a dense bounded-variable primal simplex (Bland's rule).
//! - [`oracle`]: centralized reference solutions built on the simplex.
//! - [`compare`]: side-by-side comparison of two solutions.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! parallel execution live in the `resot` companion crate.
#![no_std]

extern crate alloc;

pub mod compare;
pub mod engine;
pub mod lp;
pub mod network;
pub mod oracle;
pub mod subsolvers;

mod math;

pub use compare::{compare_runs, CompareError, NodeAttack, Outcome, RunComparison};
pub use engine::{
    run, run_with, social_utility, IterateState, PhaseExecutor, RunError, Sequential,
    SolveResult, Termination, Trace, TraceRecord,
};
pub use network::{
    AdversaryConfig, Edge, EdgeData, NodeBounds, NodeId, RandomSpec, Scenario, ScenarioError,
    Side, SolveOptions, Violation,
};
pub use oracle::{
    centralized_best_response, grid_saddle_search, solve_planner_lp, GridSaddle, OracleError,
    OracleResult,
};
