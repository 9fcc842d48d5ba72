//! Dense bounded-variable primal simplex with Bland's rule.
//!
//! Solves `max c.x` subject to `row_lo <= A x <= row_hi` and
//! `col_lo <= x <= col_hi`. Each row gets a bounded slack `s = A x`, and rows
//! whose initial activity violates their bounds get an artificial variable
//! driven to zero in phase one. The tableau is kept in full (`B^-1 A` for every
//! column), which is fine for the node-incidence programs this crate builds.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    /// Sparse `(column, coefficient)` pairs.
    pub coeffs: Vec<(usize, f64)>,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearProgram {
    /// Maximized.
    pub objective: Vec<f64>,
    pub col_lower: Vec<f64>,
    pub col_upper: Vec<f64>,
    pub rows: Vec<LpRow>,
}

impl LinearProgram {
    pub fn num_cols(&self) -> usize {
        self.objective.len()
    }

    /// Adds a column and returns its index.
    pub fn add_col(&mut self, cost: f64, lower: f64, upper: f64) -> usize {
        self.objective.push(cost);
        self.col_lower.push(lower);
        self.col_upper.push(upper);
        self.objective.len() - 1
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, lower: f64, upper: f64) -> usize {
        self.rows.push(LpRow {
            coeffs,
            lower,
            upper,
        });
        self.rows.len() - 1
    }

    pub fn activity(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.coeffs.iter().map(|&(j, a)| a * x[j]).sum())
            .collect()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub row_activity: Vec<f64>,
    /// `y` with `c_j - y.A_j` equal to the structural reduced costs. At an
    /// optimum `y_r >= 0` when row `r` sits at its upper bound and `<= 0` at
    /// its lower bound.
    pub row_duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpError {
    Malformed(&'static str),
    Infeasible { infeasibility: f64 },
    Unbounded,
    IterationLimit,
}

impl fmt::Display for LpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Malformed(why) => write!(f, "malformed linear program: {why}"),
            Self::Infeasible { infeasibility } => {
                write!(f, "linear program is infeasible (residual {infeasibility:e})")
            }
            Self::Unbounded => f.write_str("linear program is unbounded"),
            Self::IterationLimit => f.write_str("simplex iteration limit reached"),
        }
    }
}

const PIVOT_TOL: f64 = 1e-9;
const OPT_TOL: f64 = 1e-9;

struct Tableau {
    rows: usize,
    cols: usize,
    t: Vec<f64>,
    basis: Vec<usize>,
    basic_row: Vec<Option<usize>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    value: Vec<f64>,
    iterations: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
    IterationLimit,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, j: usize) -> f64 {
        self.t[r * self.cols + j]
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.t[r * self.cols..(r + 1) * self.cols];
                for (dj, &a) in d.iter_mut().zip(row) {
                    *dj -= cb * a;
                }
            }
        }
        d
    }

    /// Basic values from the nonbasic ones: row `r` of `B^-1 A z = 0` reads
    /// `z_B[r] + sum_nonbasic T[r][j] z_j = 0`.
    fn refresh_basic_values(&mut self) {
        for r in 0..self.rows {
            let mut v = 0.0;
            let row = &self.t[r * self.cols..(r + 1) * self.cols];
            for (j, &a) in row.iter().enumerate() {
                if self.basic_row[j].is_none() && a != 0.0 {
                    v -= a * self.value[j];
                }
            }
            self.value[self.basis[r]] = v;
        }
    }

    fn pivot(&mut self, r: usize, j: usize, d: &mut [f64]) {
        let cols = self.cols;
        let p = self.at(r, j);
        for a in &mut self.t[r * cols..(r + 1) * cols] {
            *a /= p;
        }
        let (before, rest) = self.t.split_at_mut(r * cols);
        let (prow, after) = rest.split_at_mut(cols);
        for other in before.chunks_mut(cols).chain(after.chunks_mut(cols)) {
            let f = other[j];
            if f != 0.0 {
                for (o, &a) in other.iter_mut().zip(prow.iter()) {
                    *o -= f * a;
                }
                other[j] = 0.0;
            }
        }
        let f = d[j];
        if f != 0.0 {
            for (dk, &a) in d.iter_mut().zip(prow.iter()) {
                *dk -= f * a;
            }
            d[j] = 0.0;
        }
        let leaving = self.basis[r];
        self.basic_row[leaving] = None;
        self.basis[r] = j;
        self.basic_row[j] = Some(r);
    }

    /// Primal simplex on `cost` with Bland's rule for both the entering and
    /// the leaving variable.
    fn optimize(&mut self, cost: &[f64], max_iters: usize) -> Outcome {
        let mut d = self.reduced_costs(cost);
        let mut col = vec![0.0; self.rows];
        loop {
            if self.iterations >= max_iters {
                return Outcome::IterationLimit;
            }
            // entering: lowest index with an improving direction
            let mut entering = None;
            for j in 0..self.cols {
                if self.basic_row[j].is_some() || self.lower[j] == self.upper[j] {
                    continue;
                }
                if d[j] > OPT_TOL && self.value[j] < self.upper[j] {
                    entering = Some((j, 1.0));
                    break;
                }
                if d[j] < -OPT_TOL && self.value[j] > self.lower[j] {
                    entering = Some((j, -1.0));
                    break;
                }
            }
            let Some((j, dir)) = entering else {
                return Outcome::Optimal;
            };
            self.iterations += 1;
            for (r, c) in col.iter_mut().enumerate() {
                *c = self.at(r, j);
            }

            // leaving: smallest ratio, ties to the lowest variable index
            let mut best: Option<(f64, usize, usize, bool)> = None;
            for r in 0..self.rows {
                let rate = -dir * col[r];
                if rate.abs() <= PIVOT_TOL {
                    continue;
                }
                let b = self.basis[r];
                let (limit, to_lower) = if rate < 0.0 {
                    if !self.lower[b].is_finite() {
                        continue;
                    }
                    ((self.value[b] - self.lower[b]) / -rate, true)
                } else {
                    if !self.upper[b].is_finite() {
                        continue;
                    }
                    ((self.upper[b] - self.value[b]) / rate, false)
                };
                let limit = limit.max(0.0);
                let better = match best {
                    None => true,
                    Some((bl, _, bb, _)) => {
                        let tie = (limit - bl).abs() <= 1e-12 * (1.0 + bl.abs());
                        (limit < bl && !tie) || (tie && b < bb)
                    }
                };
                if better {
                    best = Some((limit, r, b, to_lower));
                }
            }
            let flip = self.upper[j] - self.lower[j];
            let flip_wins = flip.is_finite() && best.is_none_or(|(bl, ..)| flip <= bl);
            if flip_wins {
                for (r, &c) in col.iter().enumerate() {
                    let b = self.basis[r];
                    self.value[b] -= dir * flip * c;
                }
                self.value[j] = if dir > 0.0 { self.upper[j] } else { self.lower[j] };
                continue;
            }
            let Some((step, r, b, to_lower)) = best else {
                return Outcome::Unbounded;
            };
            for (rr, &c) in col.iter().enumerate() {
                let bb = self.basis[rr];
                self.value[bb] -= dir * step * c;
            }
            self.value[j] += dir * step;
            self.value[b] = if to_lower { self.lower[b] } else { self.upper[b] };
            self.pivot(r, j, &mut d);
        }
    }
}

fn check(lp: &LinearProgram) -> Result<(), LpError> {
    let n = lp.objective.len();
    if lp.col_lower.len() != n || lp.col_upper.len() != n {
        return Err(LpError::Malformed("column bound lengths differ from objective"));
    }
    for j in 0..n {
        if lp.objective[j].is_nan() || !lp.objective[j].is_finite() {
            return Err(LpError::Malformed("non-finite objective coefficient"));
        }
        if lp.col_lower[j].is_nan() || lp.col_upper[j].is_nan() || lp.col_lower[j] > lp.col_upper[j] {
            return Err(LpError::Malformed("column bounds out of order"));
        }
    }
    for row in &lp.rows {
        if row.lower.is_nan() || row.upper.is_nan() || row.lower > row.upper {
            return Err(LpError::Malformed("row bounds out of order"));
        }
        if row.coeffs.iter().any(|&(j, a)| j >= n || !a.is_finite()) {
            return Err(LpError::Malformed("row references a missing column"));
        }
    }
    Ok(())
}

/// Solves `lp` (maximization). The returned vertex is deterministic for a
/// given program.
pub fn maximize(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    check(lp)?;
    let n = lp.objective.len();
    let m = lp.rows.len();
    let cols = n + 2 * m;
    let slack = |r: usize| n + r;
    let art = |r: usize| n + m + r;

    let mut lower = Vec::with_capacity(cols);
    let mut upper = Vec::with_capacity(cols);
    lower.extend_from_slice(&lp.col_lower);
    upper.extend_from_slice(&lp.col_upper);
    for row in &lp.rows {
        lower.push(row.lower);
        upper.push(row.upper);
    }
    lower.extend(core::iter::repeat_n(0.0, m));
    upper.extend(core::iter::repeat_n(0.0, m));

    let mut value = vec![0.0; cols];
    for j in 0..n {
        value[j] = if lower[j].is_finite() {
            lower[j]
        } else if upper[j].is_finite() {
            upper[j]
        } else {
            0.0
        };
    }
    let activity = lp.activity(&value[..n]);

    // Row r of the full matrix: a_r.x - s_r + sign_r * art_r = 0.
    let mut t = vec![0.0; m * cols];
    let mut basis = vec![0; m];
    let mut basic_row = vec![None; cols];
    let mut phase_one = vec![0.0; cols];
    let mut needs_phase_one = false;
    for (r, row) in lp.rows.iter().enumerate() {
        let act = activity[r];
        let (basic, basic_coef, art_sign) = if act >= row.lower && act <= row.upper {
            value[slack(r)] = act;
            (slack(r), -1.0, 1.0)
        } else {
            let bound = if act < row.lower { row.lower } else { row.upper };
            value[slack(r)] = bound;
            let residual = act - bound;
            let sign = if residual > 0.0 { -1.0 } else { 1.0 };
            value[art(r)] = residual.abs();
            upper[art(r)] = f64::INFINITY;
            phase_one[art(r)] = -1.0;
            needs_phase_one = true;
            (art(r), sign, sign)
        };
        let base = r * cols;
        for &(j, a) in &row.coeffs {
            t[base + j] += a / basic_coef;
        }
        t[base + slack(r)] = -1.0 / basic_coef;
        t[base + art(r)] = art_sign / basic_coef;
        basis[r] = basic;
        basic_row[basic] = Some(r);
    }

    let mut tab = Tableau {
        rows: m,
        cols,
        t,
        basis,
        basic_row,
        lower,
        upper,
        value,
        iterations: 0,
    };
    let max_iters = 20_000 + 50 * cols;

    if needs_phase_one {
        match tab.optimize(&phase_one, max_iters) {
            Outcome::Optimal => {}
            Outcome::Unbounded => return Err(LpError::Malformed("phase one unbounded")),
            Outcome::IterationLimit => return Err(LpError::IterationLimit),
        }
        tab.refresh_basic_values();
        let infeasibility: f64 = (0..m).map(|r| tab.value[art(r)].abs()).sum();
        let scale = 1.0
            + lp.rows
                .iter()
                .flat_map(|r| [r.lower, r.upper])
                .filter(|v| v.is_finite())
                .fold(0.0, |a: f64, b| a.max(b.abs()));
        if infeasibility > 1e-7 * scale {
            return Err(LpError::Infeasible { infeasibility });
        }
        for r in 0..m {
            let a = art(r);
            tab.upper[a] = 0.0;
            if tab.basic_row[a].is_none() {
                tab.value[a] = 0.0;
            }
        }
    }

    let mut cost = vec![0.0; cols];
    cost[..n].copy_from_slice(&lp.objective);
    match tab.optimize(&cost, max_iters) {
        Outcome::Optimal => {}
        Outcome::Unbounded => return Err(LpError::Unbounded),
        Outcome::IterationLimit => return Err(LpError::IterationLimit),
    }
    tab.refresh_basic_values();
    let d = tab.reduced_costs(&cost);

    let mut x: Vec<f64> = tab.value[..n].to_vec();
    for (j, v) in x.iter_mut().enumerate() {
        *v = v.clamp(lp.col_lower[j], lp.col_upper[j]);
    }
    let row_activity = lp.activity(&x);
    Ok(LpSolution {
        objective: lp.value(&x),
        row_duals: (0..m).map(|r| d[slack(r)]).collect(),
        reduced_costs: d[..n].to_vec(),
        row_activity,
        x,
        iterations: tab.iterations,
    })
}
