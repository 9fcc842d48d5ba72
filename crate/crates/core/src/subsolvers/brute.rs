//! Exhaustive reference solvers for the two subproblems. They share no code
//! with the exact solvers and are only meant for small dimensions.

use alloc::vec;
use alloc::vec::Vec;

use super::{attacker_objective, AttackerNode, ProjectionSet, SubsolverError};

pub const MAX_ATTACKER_DIM: usize = 3;
pub const MAX_PROJECTION_DIM: usize = 6;

/// Grid values `0, -h, -2h, ...` down to `-delta`, always including `-delta`.
fn axis(delta: f64, h: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    let mut i = 0usize;
    loop {
        let v = -(i as f64) * h;
        if v <= -delta {
            break;
        }
        pts.push(v);
        i += 1;
    }
    pts.push(-delta.max(0.0));
    pts.dedup();
    pts
}

/// Most negative value of `axis` (as built by [`axis`]) whose square is at
/// most `room`.
fn deepest_within(axis: &[f64], h: f64, room: f64) -> f64 {
    let end = axis[axis.len() - 1];
    if end * end <= room {
        return end;
    }
    let mut i = ((crate::math::sqrt(room) / h) as usize).min(axis.len() - 1);
    while i > 0 && axis[i] * axis[i] > room {
        i -= 1;
    }
    axis[i]
}

/// Best point of the grid with step `grid_step` over `[-delta_y, 0]` per
/// coordinate, restricted to the ball. Ties keep the first point found, and
/// enumeration starts at the origin.
///
/// The last coordinate is not enumerated point by point: for fixed leading
/// coordinates the objective is linear along it on `[-delta, 0]`, so the best
/// grid value is either `0` or the most negative grid value still inside the
/// ball.
pub fn brute_force_attacker_node(
    pi_row: &[f64],
    node: &AttackerNode<'_>,
    grid_step: f64,
) -> Result<Vec<f64>, SubsolverError> {
    let n = pi_row.len();
    if n > MAX_ATTACKER_DIM {
        return Err(SubsolverError::DimensionTooLarge {
            dim: n,
            max: MAX_ATTACKER_DIM,
        });
    }
    if node.delta.len() != n {
        return Err(SubsolverError::LengthMismatch);
    }
    if !(grid_step.is_finite() && grid_step > 0.0) {
        return Err(SubsolverError::InvalidStep(grid_step));
    }
    if n == 0 || !(node.kappa > 0.0) {
        return Ok(vec![0.0; n]);
    }
    let axes: Vec<Vec<f64>> = node.delta.iter().map(|&d| axis(d, grid_step)).collect();
    let last = n - 1;

    let mut best = vec![0.0; n];
    let mut best_val = attacker_objective(pi_row, &best, node.c_a);
    let mut point = vec![0.0; n];
    let mut idx = vec![0usize; last];
    loop {
        for (k, &i) in idx.iter().enumerate() {
            point[k] = axes[k][i];
        }
        let used: f64 = point[..last].iter().map(|a| a * a).sum();
        if used <= node.kappa {
            let room = node.kappa - used;
            let deepest = deepest_within(&axes[last], grid_step, room);
            for cand in [0.0, deepest] {
                point[last] = cand;
                let val = attacker_objective(pi_row, &point, node.c_a);
                if val < best_val {
                    best_val = val;
                    best.copy_from_slice(&point);
                }
            }
        }
        // odometer over the leading coordinates
        let mut k = 0;
        while k < last {
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == last {
            break;
        }
    }
    Ok(best)
}

/// Exact projection by enumerating KKT patterns: each coordinate is either
/// pinned at zero or free, and the sum constraint is inactive, at `lower`, or
/// at `upper`. The feasible candidate closest to `v` wins.
pub fn brute_force_projection(v: &[f64], set: ProjectionSet) -> Result<Vec<f64>, SubsolverError> {
    let n = v.len();
    if n > MAX_PROJECTION_DIM {
        return Err(SubsolverError::DimensionTooLarge {
            dim: n,
            max: MAX_PROJECTION_DIM,
        });
    }
    if v.iter().any(|a| !a.is_finite()) {
        return Err(SubsolverError::NonFinite);
    }
    const FEAS_TOL: f64 = 1e-12;
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut cand = vec![0.0; n];
    for mask in 0u32..(1 << n) {
        let free: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        for sum_mode in 0..3 {
            cand.fill(0.0);
            match sum_mode {
                0 => {
                    for &i in &free {
                        cand[i] = v[i];
                    }
                }
                _ => {
                    let target = if sum_mode == 1 { set.lower } else { set.upper };
                    if free.is_empty() {
                        if target != 0.0 {
                            continue;
                        }
                    } else {
                        let s: f64 = free.iter().map(|&i| v[i]).sum();
                        let tau = (s - target) / free.len() as f64;
                        for &i in &free {
                            cand[i] = v[i] - tau;
                        }
                    }
                }
            }
            let sum: f64 = cand.iter().sum();
            let feasible = cand.iter().all(|&a| a >= -FEAS_TOL)
                && sum >= set.lower - FEAS_TOL
                && sum <= set.upper + FEAS_TOL;
            if !feasible {
                continue;
            }
            let dist: f64 = cand.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
            if best.as_ref().is_none_or(|(d, _)| dist < *d) {
                best = Some((dist, cand.iter().map(|a| a.max(0.0)).collect()));
            }
        }
    }
    best.map(|(_, p)| p).ok_or(SubsolverError::EmptySet {
        lower: set.lower,
        upper: set.upper,
    })
}
