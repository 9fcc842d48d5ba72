// Float helpers that `core` does not provide without `std`.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

pub(crate) fn l2_norm(v: &[f64]) -> f64 {
    sqrt(v.iter().map(|a| a * a).sum())
}

pub(crate) fn l1_norm(v: &[f64]) -> f64 {
    v.iter().map(|a| abs(*a)).sum()
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| abs(x - y))
        .fold(0.0, f64::max)
}
