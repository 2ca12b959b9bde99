//! Two-phase bounded-variable primal simplex on a dense tableau.
//!
//! Every solve starts from an all-artificial basis. Dantzig pricing is used
//! throughout; a streak of degenerate pivots triggers a tiny bound
//! perturbation, and Bland's rule takes over if stalls keep recurring. The
//! final basis is refactored with a dense LU so that primal values and duals
//! do not carry tableau drift.

use nalgebra::{DMatrix, DVector};

use super::{LinearProgram, LpSolution, LpStatus, Sense, FEAS_TOL};
use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const DEGENERATE_STREAK: usize = 30;
const PERTURB: f64 = 1e-9;
/// Perturbation rounds per phase before falling back to Bland's rule.
const MAX_PERTURBATIONS: usize = 50;

/// How an original variable maps onto nonnegative tableau columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// `x = lo + x'`
    Shift { col: usize, lo: f64 },
    /// `x = up - x'`
    Mirror { col: usize, up: f64 },
    /// `x = x'+ - x'-`
    Free { pos: usize, neg: usize },
}

struct Tableau {
    m: usize,
    ncols: usize,
    /// `B^-1 A`, row-major.
    a: Vec<f64>,
    /// Standardized constraint matrix, kept for the final refactorization.
    orig: Vec<f64>,
    rhs: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    at_upper: Vec<bool>,
    ub: Vec<f64>,
    iterations: usize,
    max_iterations: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

impl Tableau {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.ncols + j]
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        if self.at_upper[j] {
            self.ub[j]
        } else {
            0.0
        }
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for i in 0..self.m {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.a[i * self.ncols..(i + 1) * self.ncols];
                for (dj, &aij) in d.iter_mut().zip(row) {
                    *dj -= cb * aij;
                }
            }
        }
        d
    }

    fn pivot(&mut self, r: usize, q: usize, d: &mut [f64]) {
        let n = self.ncols;
        let piv = self.a[r * n + q];
        {
            let row = &mut self.a[r * n..(r + 1) * n];
            for v in row.iter_mut() {
                *v /= piv;
            }
            row[q] = 1.0;
        }
        let (before, rest) = self.a.split_at_mut(r * n);
        let (prow, after) = rest.split_at_mut(n);
        for other in before.chunks_exact_mut(n).chain(after.chunks_exact_mut(n)) {
            let f = other[q];
            if f != 0.0 {
                for (v, &p) in other.iter_mut().zip(prow.iter()) {
                    *v -= f * p;
                }
                other[q] = 0.0;
            }
        }
        let f = d[q];
        if f != 0.0 {
            for (v, &p) in d.iter_mut().zip(prow.iter()) {
                *v -= f * p;
            }
            d[q] = 0.0;
        }
        let leaving = self.basis[r];
        self.in_basis[leaving] = false;
        self.in_basis[q] = true;
        self.basis[r] = q;
    }

    /// Runs primal simplex iterations for `cost` until optimal or unbounded.
    fn optimize(&mut self, cost: &[f64]) -> Result<PhaseEnd> {
        let mut d = self.reduced_costs(cost);
        let mut streak = 0usize;
        let mut since_refresh = 0usize;
        let mut perturbations = 0usize;
        loop {
            if self.iterations >= self.max_iterations {
                return Err(Error::IterationLimit(self.max_iterations));
            }
            if since_refresh >= 100 {
                d = self.reduced_costs(cost);
                since_refresh = 0;
            }
            if streak >= DEGENERATE_STREAK && perturbations < MAX_PERTURBATIONS {
                perturbations += 1;
                self.perturb(perturbations);
                streak = 0;
            }
            let bland = streak >= DEGENERATE_STREAK;

            // Entering column.
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..self.ncols {
                if self.in_basis[j] || self.ub[j] <= 0.0 {
                    continue;
                }
                let score = if self.at_upper[j] { d[j] } else { -d[j] };
                if score > COST_TOL {
                    if bland {
                        entering = Some((j, score));
                        break;
                    }
                    if entering.is_none_or(|(_, s)| score > s) {
                        entering = Some((j, score));
                    }
                }
            }
            let Some((q, _)) = entering else {
                return Ok(PhaseEnd::Optimal);
            };
            let dir = if self.at_upper[q] { -1.0 } else { 1.0 };

            // Ratio test: basic value i changes by -dir * theta * a[i][q].
            let mut theta = self.ub[q];
            let mut leave: Option<(usize, bool)> = None;
            let mut leave_alpha = 0.0;
            for i in 0..self.m {
                let alpha = dir * self.at(i, q);
                let (ratio, to_upper) = if alpha > PIVOT_TOL {
                    (self.beta[i].max(0.0) / alpha, false)
                } else if alpha < -PIVOT_TOL {
                    let ubi = self.ub[self.basis[i]];
                    if ubi.is_infinite() {
                        continue;
                    }
                    (((ubi - self.beta[i]).max(0.0)) / -alpha, true)
                } else {
                    continue;
                };
                let take = match leave {
                    None => ratio < theta,
                    Some(_) if ratio < theta - 1e-12 => true,
                    Some((li, _)) if ratio <= theta + 1e-12 => {
                        if bland {
                            self.basis[i] < self.basis[li]
                        } else {
                            alpha.abs() > leave_alpha
                        }
                    }
                    Some(_) => false,
                };
                if take {
                    theta = theta.min(ratio);
                    leave = Some((i, to_upper));
                    leave_alpha = alpha.abs();
                }
            }
            if theta.is_infinite() {
                return Ok(PhaseEnd::Unbounded);
            }

            self.iterations += 1;
            since_refresh += 1;
            if theta < 1e-12 {
                streak += 1;
            } else {
                streak = 0;
            }

            if theta != 0.0 {
                for i in 0..self.m {
                    let aiq = self.a[i * self.ncols + q];
                    if aiq != 0.0 {
                        self.beta[i] -= dir * theta * aiq;
                    }
                }
            }
            match leave {
                None => {
                    // Bound flip.
                    self.at_upper[q] = !self.at_upper[q];
                }
                Some((r, to_upper)) => {
                    let leaving = self.basis[r];
                    let entering_value = if dir > 0.0 { theta } else { self.ub[q] - theta };
                    self.at_upper[leaving] = to_upper;
                    self.at_upper[q] = false;
                    self.pivot(r, q, &mut d);
                    self.beta[r] = entering_value;
                }
            }
        }
    }

    /// Moves basic values sitting on a bound slightly inside it. This is a
    /// tiny right-hand-side perturbation that breaks degenerate stalls; the
    /// final refactorization recomputes values from the true data.
    fn perturb(&mut self, round: usize) {
        for i in 0..self.m {
            let delta = PERTURB * (1.0 + ((i * 7919 + round * 104_729) % 1000) as f64 / 1000.0);
            let ub = self.ub[self.basis[i]];
            if self.beta[i] < delta {
                if ub >= 2.0 * delta {
                    self.beta[i] = self.beta[i].max(0.0) + delta;
                }
            } else if ub - self.beta[i] < delta && ub >= 2.0 * delta {
                self.beta[i] = ub - delta;
            }
        }
    }

    fn column_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = (0..self.ncols).map(|j| self.nonbasic_value(j)).collect();
        for (i, &b) in self.basis.iter().enumerate() {
            v[b] = self.beta[i];
        }
        v
    }

    /// Recomputes basic values and duals from the standardized data.
    fn refactor(&self, cost: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        let m = self.m;
        if m == 0 {
            return Some((self.column_values(), Vec::new()));
        }
        let n = self.ncols;
        let bmat = DMatrix::from_fn(m, m, |i, k| self.orig[i * n + self.basis[k]]);
        let mut rhs = DVector::from_column_slice(&self.rhs);
        for j in 0..n {
            if !self.in_basis[j] && self.at_upper[j] && self.ub[j] != 0.0 {
                for i in 0..m {
                    rhs[i] -= self.orig[i * n + j] * self.ub[j];
                }
            }
        }
        let lu = bmat.clone().lu();
        let xb = lu.solve(&rhs)?;
        let cb = DVector::from_iterator(m, self.basis.iter().map(|&b| cost[b]));
        let y = bmat.transpose().lu().solve(&cb)?;
        let mut values = self.column_values();
        for (i, &b) in self.basis.iter().enumerate() {
            let v = xb[i];
            if !v.is_finite() || (v - self.beta[i]).abs() > 1e-5 * (1.0 + self.beta[i].abs()) {
                return None;
            }
            values[b] = v.clamp(0.0, self.ub[b]);
        }
        Some((values, y.iter().copied().collect()))
    }
}

/// Solves `lp` to optimality, or reports it infeasible or unbounded.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let nvars = lp.num_vars();
    let m = lp.rows.len();

    // Map variables onto nonnegative columns.
    let mut maps = Vec::with_capacity(nvars);
    let mut ub = Vec::new();
    for j in 0..nvars {
        let (l, u) = (lp.lower[j], lp.upper[j]);
        if l.is_finite() {
            maps.push(VarMap::Shift {
                col: ub.len(),
                lo: l,
            });
            ub.push(u - l);
        } else if u.is_finite() {
            maps.push(VarMap::Mirror {
                col: ub.len(),
                up: u,
            });
            ub.push(f64::INFINITY);
        } else {
            maps.push(VarMap::Free {
                pos: ub.len(),
                neg: ub.len() + 1,
            });
            ub.push(f64::INFINITY);
            ub.push(f64::INFINITY);
        }
    }
    let nstruct = ub.len();
    let slack_rows: Vec<usize> = (0..m).filter(|&i| lp.rows[i].sense != Sense::Eq).collect();
    let nslack = slack_rows.len();
    let first_art = nstruct + nslack;
    let ncols = first_art + m;
    ub.extend(std::iter::repeat_n(f64::INFINITY, nslack + m));

    let mut cost = vec![0.0; ncols];
    let mut constant = 0.0;
    for (j, map) in maps.iter().enumerate() {
        let c = lp.objective[j];
        match *map {
            VarMap::Shift { col, lo } => {
                cost[col] = c;
                constant += c * lo;
            }
            VarMap::Mirror { col, up } => {
                cost[col] = -c;
                constant += c * up;
            }
            VarMap::Free { pos, neg } => {
                cost[pos] = c;
                cost[neg] = -c;
            }
        }
    }

    let mut orig = vec![0.0; m * ncols];
    let mut rhs = vec![0.0; m];
    let mut flip = vec![1.0; m];
    let mut slack_of_row = vec![usize::MAX; m];
    for (k, &i) in slack_rows.iter().enumerate() {
        slack_of_row[i] = nstruct + k;
    }
    for (i, row) in lp.rows.iter().enumerate() {
        let base = i * ncols;
        let mut b = row.rhs;
        for &(j, a) in &row.coeffs {
            match maps[j] {
                VarMap::Shift { col, lo } => {
                    orig[base + col] += a;
                    b -= a * lo;
                }
                VarMap::Mirror { col, up } => {
                    orig[base + col] -= a;
                    b -= a * up;
                }
                VarMap::Free { pos, neg } => {
                    orig[base + pos] += a;
                    orig[base + neg] -= a;
                }
            }
        }
        match row.sense {
            Sense::Ge => orig[base + slack_of_row[i]] = -1.0,
            Sense::Le => orig[base + slack_of_row[i]] = 1.0,
            Sense::Eq => {}
        }
        if b < 0.0 {
            flip[i] = -1.0;
            b = -b;
            for v in &mut orig[base..base + first_art] {
                *v = -*v;
            }
        }
        orig[base + first_art + i] = 1.0;
        rhs[i] = b;
    }

    let mut in_basis = vec![false; ncols];
    for i in 0..m {
        in_basis[first_art + i] = true;
    }
    let mut tab = Tableau {
        m,
        ncols,
        a: orig.clone(),
        orig,
        rhs: rhs.clone(),
        beta: rhs.clone(),
        basis: (first_art..ncols).collect(),
        in_basis,
        at_upper: vec![false; ncols],
        ub,
        iterations: 0,
        max_iterations: 50_000 + 50 * (m + ncols),
    };

    // Phase 1: minimize the artificial sum.
    let mut phase1 = vec![0.0; ncols];
    for c in &mut phase1[first_art..] {
        *c = 1.0;
    }
    tab.optimize(&phase1)?;
    let infeasibility: f64 = tab
        .basis
        .iter()
        .zip(&tab.beta)
        .filter(|(&b, _)| b >= first_art)
        .map(|(_, &v)| v)
        .sum();
    let scale = 1.0 + rhs.iter().fold(0.0f64, |a, &b| a.max(b));
    if infeasibility > FEAS_TOL * scale {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            x: vec![0.0; nvars],
            objective: f64::NAN,
            duals: vec![0.0; m],
            reduced_costs: vec![0.0; nvars],
            iterations: tab.iterations,
        });
    }

    // Drive remaining artificials out of the basis where possible.
    let mut scratch = vec![0.0; ncols];
    for r in 0..m {
        if tab.basis[r] < first_art {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for j in 0..first_art {
            let v = tab.at(r, j).abs();
            if !tab.in_basis[j] && v > 1e-7 && best.is_none_or(|(_, b)| v > b) {
                best = Some((j, v));
            }
        }
        if let Some((j, _)) = best {
            let value = tab.nonbasic_value(j);
            tab.at_upper[j] = false;
            tab.pivot(r, j, &mut scratch);
            tab.beta[r] = value;
        }
    }
    for j in first_art..ncols {
        tab.ub[j] = 0.0;
        tab.at_upper[j] = false;
    }

    // Phase 2.
    let status = match tab.optimize(&cost)? {
        PhaseEnd::Optimal => LpStatus::Optimal,
        PhaseEnd::Unbounded => LpStatus::Unbounded,
    };
    if status == LpStatus::Unbounded {
        return Ok(LpSolution {
            status,
            x: vec![0.0; nvars],
            objective: f64::NEG_INFINITY,
            duals: vec![0.0; m],
            reduced_costs: vec![0.0; nvars],
            iterations: tab.iterations,
        });
    }

    let (values, ystd) = match tab.refactor(&cost) {
        Some(v) => v,
        None => {
            // Fall back to tableau values; duals from artificial reduced costs.
            let d = tab.reduced_costs(&cost);
            let y = (0..m).map(|i| -d[first_art + i]).collect();
            (tab.column_values(), y)
        }
    };

    let x: Vec<f64> = maps
        .iter()
        .map(|map| match *map {
            VarMap::Shift { col, lo } => lo + values[col],
            VarMap::Mirror { col, up } => up - values[col],
            VarMap::Free { pos, neg } => values[pos] - values[neg],
        })
        .collect();
    let duals: Vec<f64> = ystd.iter().zip(&flip).map(|(y, f)| y * f).collect();
    let mut reduced_costs = lp.objective.clone();
    for (row, &y) in lp.rows.iter().zip(&duals) {
        for &(j, a) in &row.coeffs {
            reduced_costs[j] -= y * a;
        }
    }
    let objective = lp.objective_value(&x);
    debug_assert!(
        (objective - (tab_objective(&cost, &values) + constant)).abs()
            < 1e-4 * (1.0 + objective.abs())
    );
    Ok(LpSolution {
        status,
        x,
        objective,
        duals,
        reduced_costs,
        iterations: tab.iterations,
    })
}

fn tab_objective(cost: &[f64], values: &[f64]) -> f64 {
    cost.iter().zip(values).map(|(c, v)| c * v).sum()
}
