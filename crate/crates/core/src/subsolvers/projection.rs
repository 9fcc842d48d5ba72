use alloc::vec;
use alloc::vec::Vec;

use super::{SubsolverError, BISECTION_CAP, BISECTION_TOL};

/// The set `{v : v >= 0, lower <= sum(v) <= upper}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionSet {
    pub lower: f64,
    pub upper: f64,
}

impl ProjectionSet {
    pub fn new(lower: f64, upper: f64) -> Result<Self, SubsolverError> {
        if !(lower.is_finite() && upper.is_finite()) {
            return Err(SubsolverError::NonFinite);
        }
        if lower < 0.0 || lower > upper {
            return Err(SubsolverError::EmptySet { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        let s: f64 = v.iter().sum();
        v.iter().all(|&a| a >= -tol) && s >= self.lower - tol && s <= self.upper + tol
    }
}

fn clamped_sum(v: &[f64], tau: f64) -> f64 {
    v.iter().map(|&a| (a - tau).max(0.0)).sum()
}

/// Euclidean projection of `v` onto `set`.
pub fn project_box_sum_interval(v: &[f64], set: ProjectionSet) -> Result<Vec<f64>, SubsolverError> {
    let mut out = vec![0.0; v.len()];
    project_into(v, set, &mut out)?;
    Ok(out)
}

/// [`project_box_sum_interval`] writing into `out`.
///
/// The projection is `max(v - tau, 0)` for a scalar shift `tau`: zero when
/// the clamped sum already lies in `[lower, upper]`, otherwise the root of
/// `sum(max(v - tau, 0)) = bound` for the violated bound. The root is
/// bracketed and bisected until no entry of `v` lies strictly inside the
/// bracket; the active set is then fixed and `tau` follows in closed form.
pub fn project_into(v: &[f64], set: ProjectionSet, out: &mut [f64]) -> Result<(), SubsolverError> {
    if out.len() != v.len() {
        return Err(SubsolverError::LengthMismatch);
    }
    if v.iter().any(|a| !a.is_finite()) {
        return Err(SubsolverError::NonFinite);
    }
    if v.is_empty() {
        return if set.lower > 0.0 {
            Err(SubsolverError::EmptySet {
                lower: set.lower,
                upper: set.upper,
            })
        } else {
            Ok(())
        };
    }

    let s0 = clamped_sum(v, 0.0);
    let (target, mut lo, mut hi) = if s0 > set.upper {
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (set.upper, 0.0, max)
    } else if s0 < set.lower {
        // At tau = (sum(v) - L) / n every entry is active and the clamped sum
        // is at least L.
        let n = v.len() as f64;
        let total: f64 = v.iter().sum();
        (set.lower, ((total - set.lower) / n).min(0.0), 0.0)
    } else {
        for (o, &a) in out.iter_mut().zip(v) {
            *o = a.max(0.0);
        }
        return Ok(());
    };

    let tau = shift_for_sum(v, target, &mut lo, &mut hi);
    for (o, &a) in out.iter_mut().zip(v) {
        *o = (a - tau).max(0.0);
    }
    Ok(())
}

/// Root of `sum(max(v - tau, 0)) = target` inside `[lo, hi]`, where the
/// clamped sum is `>= target` at `lo` and `<= target` at `hi`.
fn shift_for_sum(v: &[f64], target: f64, lo: &mut f64, hi: &mut f64) -> f64 {
    for _ in 0..BISECTION_CAP {
        if !v.iter().any(|&a| a > *lo && a < *hi) {
            break;
        }
        let mid = 0.5 * (*lo + *hi);
        let f = clamped_sum(v, mid);
        if (f - target).abs() <= BISECTION_TOL * (1.0 + target) {
            return mid;
        }
        if f > target {
            *lo = mid;
        } else {
            *hi = mid;
        }
    }
    // Entries >= hi stay active over the whole bracket.
    let (mut sum, mut count) = (0.0, 0usize);
    for &a in v {
        if a >= *hi {
            sum += a;
            count += 1;
        }
    }
    if count == 0 {
        return *hi;
    }
    let tau = (sum - target) / count as f64;
    tau.clamp(*lo, *hi)
}
