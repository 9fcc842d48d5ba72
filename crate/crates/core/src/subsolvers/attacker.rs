use alloc::vec;
use alloc::vec::Vec;

use super::{BISECTION_CAP, BISECTION_TOL};
use crate::math::sqrt;

/// Attacker geometry at one compromised target: the feasible set is
/// `{xi : sum(xi^2) <= kappa, xi >= -delta}` and the l1 cost weight is `c_a`.
#[derive(Debug, Clone, Copy)]
pub struct AttackerNode<'a> {
    pub delta: &'a [f64],
    pub kappa: f64,
    pub c_a: f64,
}

impl AttackerNode<'_> {
    pub fn contains(&self, xi: &[f64], tol: f64) -> bool {
        let sq: f64 = xi.iter().map(|a| a * a).sum();
        sq <= self.kappa + tol && xi.iter().zip(self.delta).all(|(&a, &d)| a + d >= -tol)
    }
}

/// `sum(xi * pi) + c_a * |xi|_1`, the attacker's cost at one node.
pub fn attacker_objective(pi_row: &[f64], xi: &[f64], c_a: f64) -> f64 {
    pi_row
        .iter()
        .zip(xi)
        .map(|(&p, &x)| x * p + c_a * x.abs())
        .sum()
}

/// Best response of the attacker at one node:
/// `argmin sum(xi * pi) + c_a |xi|_1` over the node's feasible set.
///
/// With `pi, c_a >= 0` no positive coordinate can help, so the problem reduces
/// to minimizing `sum(c * xi)` with `c = pi - c_a` over
/// `{-delta <= xi <= 0, |xi|^2 <= kappa}`. Coordinates with `c <= 0` stay at
/// zero. The others sit at `-delta` unless the ball binds, in which case
/// `xi = clip(-c / (2 lambda), -delta, 0)` with the ball multiplier `lambda`
/// found by bisection.
pub fn solve_attacker_node(pi_row: &[f64], node: &AttackerNode<'_>) -> Vec<f64> {
    let mut out = vec![0.0; pi_row.len()];
    attacker_step_into(pi_row, node, None, 0.0, &mut out);
    out
}

/// Proximal best response:
/// `argmin sum(xi * pi) + c_a |xi|_1 + rho/2 |xi - anchor|^2` over the node's
/// feasible set. `anchor` must itself be feasible (in particular `<= 0`).
/// With `rho = 0` this is [`solve_attacker_node`].
pub fn solve_attacker_node_prox(
    pi_row: &[f64],
    node: &AttackerNode<'_>,
    anchor: &[f64],
    rho: f64,
) -> Vec<f64> {
    let mut out = vec![0.0; pi_row.len()];
    attacker_step_into(pi_row, node, Some(anchor), rho, &mut out);
    out
}

/// Shared kernel. Writing `m = rho * anchor - c` and `s = rho + 2 lambda`,
/// each coordinate is `max(m / s, -delta)` when `m < 0` and zero otherwise.
/// The smallest admissible `s >= rho` that satisfies the ball is found by
/// bisection; once no clipping breakpoint `-m / delta` lies inside the
/// bracket, `s` follows in closed form.
pub(crate) fn attacker_step_into(
    pi_row: &[f64],
    node: &AttackerNode<'_>,
    anchor: Option<&[f64]>,
    rho: f64,
    out: &mut [f64],
) {
    debug_assert_eq!(pi_row.len(), node.delta.len());
    debug_assert_eq!(out.len(), pi_row.len());
    out.fill(0.0);
    if !(node.kappa > 0.0) {
        return;
    }
    let rho = if anchor.is_some() { rho.max(0.0) } else { 0.0 };
    let m_of = |i: usize| {
        let c = pi_row[i] - node.c_a;
        match anchor {
            Some(a) if rho > 0.0 => rho * a[i] - c,
            _ => -c,
        }
    };
    let coord = |i: usize, s: f64| -> f64 {
        let m = m_of(i);
        let d = node.delta[i];
        if m >= 0.0 || d <= 0.0 {
            0.0
        } else if s <= 0.0 {
            -d
        } else {
            (m / s).max(-d)
        }
    };
    let sq_norm = |s: f64| -> f64 {
        (0..pi_row.len())
            .map(|i| {
                let v = coord(i, s);
                v * v
            })
            .sum()
    };

    if sq_norm(rho) <= node.kappa {
        for (i, o) in out.iter_mut().enumerate() {
            *o = coord(i, rho);
        }
        return;
    }

    // At s_hi the unclipped point already has norm sqrt(kappa).
    let m_neg_sq: f64 = (0..pi_row.len())
        .map(|i| {
            let m = m_of(i);
            if m < 0.0 && node.delta[i] > 0.0 {
                m * m
            } else {
                0.0
            }
        })
        .sum();
    let mut lo = rho;
    let mut hi = sqrt(m_neg_sq / node.kappa).max(rho);
    let breakpoint = |i: usize| -> Option<f64> {
        let m = m_of(i);
        let d = node.delta[i];
        (m < 0.0 && d > 0.0).then(|| -m / d)
    };

    let mut s = hi;
    let mut exact = false;
    for _ in 0..BISECTION_CAP {
        let open = (0..pi_row.len()).any(|i| matches!(breakpoint(i), Some(b) if b > lo && b < hi));
        if !open {
            exact = true;
            break;
        }
        let mid = 0.5 * (lo + hi);
        let g = sq_norm(mid);
        if (g - node.kappa).abs() <= BISECTION_TOL * (1.0 + node.kappa) {
            s = mid;
            break;
        }
        if g > node.kappa {
            lo = mid;
        } else {
            hi = mid;
        }
        s = hi;
    }
    if exact {
        // Clipped coordinates (breakpoint >= hi) contribute delta^2, free ones
        // m^2 / s^2.
        let (mut clipped, mut free) = (0.0, 0.0);
        for i in 0..pi_row.len() {
            if let Some(b) = breakpoint(i) {
                let m = m_of(i);
                if b >= hi {
                    clipped += node.delta[i] * node.delta[i];
                } else {
                    free += m * m;
                }
            }
        }
        let room = node.kappa - clipped;
        s = if free > 0.0 && room > 0.0 {
            sqrt(free / room).clamp(lo, hi)
        } else {
            hi
        };
    }
    for (i, o) in out.iter_mut().enumerate() {
        *o = coord(i, s);
    }
    // Guard the ball against rounding in the closed form.
    let sq: f64 = out.iter().map(|a| a * a).sum();
    if sq > node.kappa {
        let scale = sqrt(node.kappa / sq);
        for o in out.iter_mut() {
            *o *= scale;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_plan_gives_zero_attack() {
        let node = AttackerNode {
            delta: &[4.0, 8.0],
            kappa: 15.0,
            c_a: 0.5,
        };
        assert_eq!(solve_attacker_node(&[0.0, 0.0], &node), vec![0.0, 0.0]);
    }

    #[test]
    fn single_edge_hits_ball() {
        // coefficient 2 - 0.5 > 0 and sqrt(15) < 4, so xi = -sqrt(15)
        let node = AttackerNode {
            delta: &[4.0],
            kappa: 15.0,
            c_a: 0.5,
        };
        let xi = solve_attacker_node(&[2.0], &node);
        assert!((xi[0] + 15f64.sqrt()).abs() < 1e-12, "{xi:?}");
    }

    #[test]
    fn box_binds_before_ball() {
        let node = AttackerNode {
            delta: &[1.0, 1.0],
            kappa: 15.0,
            c_a: 0.5,
        };
        assert_eq!(solve_attacker_node(&[3.0, 1.0], &node), vec![-1.0, -1.0]);
    }

    #[test]
    fn expensive_attack_is_zero() {
        let node = AttackerNode {
            delta: &[4.0, 8.0, 2.0],
            kappa: 10.0,
            c_a: 3.0,
        };
        assert_eq!(solve_attacker_node(&[3.0, 1.0, 2.5], &node), vec![0.0; 3]);
    }

    #[test]
    fn zero_budget() {
        let node = AttackerNode {
            delta: &[4.0, 8.0],
            kappa: 0.0,
            c_a: 0.5,
        };
        assert_eq!(solve_attacker_node(&[3.0, 9.0], &node), vec![0.0, 0.0]);
    }

    #[test]
    fn ball_direction_follows_coefficients() {
        // c = (1.5, 3.5): both free, xi proportional to -c with norm sqrt(kappa)
        let node = AttackerNode {
            delta: &[10.0, 10.0],
            kappa: 4.0,
            c_a: 0.5,
        };
        let xi = solve_attacker_node(&[2.0, 4.0], &node);
        let n = (1.5f64 * 1.5 + 3.5 * 3.5).sqrt();
        assert!((xi[0] + 2.0 * 1.5 / n).abs() < 1e-12);
        assert!((xi[1] + 2.0 * 3.5 / n).abs() < 1e-12);
    }

    #[test]
    fn mixed_clip_and_ball() {
        // second coordinate clips at -1, first takes the rest of the ball
        let node = AttackerNode {
            delta: &[10.0, 1.0],
            kappa: 5.0,
            c_a: 0.0,
        };
        let xi = solve_attacker_node(&[1.0, 5.0], &node);
        assert!((xi[1] + 1.0).abs() < 1e-12);
        assert!((xi[0] + 2.0).abs() < 1e-12, "{xi:?}");
    }

    #[test]
    fn prox_with_zero_weight_is_best_response() {
        let node = AttackerNode {
            delta: &[4.0, 8.0],
            kappa: 15.0,
            c_a: 0.5,
        };
        let pi = [1.3, 0.7];
        assert_eq!(
            solve_attacker_node_prox(&pi, &node, &[0.0, 0.0], 0.0),
            solve_attacker_node(&pi, &node)
        );
    }

    #[test]
    fn prox_unconstrained_step() {
        // small step stays inside the set: xi = anchor - c / rho
        let node = AttackerNode {
            delta: &[4.0],
            kappa: 15.0,
            c_a: 0.5,
        };
        let xi = solve_attacker_node_prox(&[1.5], &node, &[-1.0], 2.0);
        assert!((xi[0] + 1.5).abs() < 1e-12);
    }
}
