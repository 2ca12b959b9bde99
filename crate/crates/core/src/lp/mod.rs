//! Small dense linear and integer programming.
//!
//! The simplex works on a dense tableau, which is adequate for the master
//! problems and pricing models at the sizes this crate targets.

mod branch;
mod simplex;

pub use branch::{solve_ip, IpCallback, IpOptions, IpSolution, IpStatus};
pub use simplex::solve_lp;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Primal feasibility tolerance.
pub const FEAS_TOL: f64 = 1e-7;
/// Tolerance for comparing objective values.
pub const OBJ_TOL: f64 = 1e-6;
/// Integrality tolerance for branch-and-bound.
pub const INT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

/// A sparse constraint row `sum coeffs * x  (sense)  rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<(usize, f64)>, sense: Sense, rhs: f64) -> Self {
        Row { coeffs, sense, rhs }
    }

    /// Builds a row from a dense coefficient vector, dropping zeros.
    pub fn dense(coeffs: &[f64], sense: Sense, rhs: f64) -> Self {
        let coeffs = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0.0)
            .map(|(j, &a)| (j, a))
            .collect();
        Row { coeffs, sense, rhs }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Amount by which `x` violates the row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.activity(x);
        match self.sense {
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// `min objective * x` subject to `rows` and `lower <= x <= upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    /// Variables default to `[0, +inf)`.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            rows: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, row: Row) -> usize {
        self.rows.push(row);
        self.rows.len() - 1
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::Dimension(format!(
                "{} variables but {} lower / {} upper bounds",
                n,
                self.lower.len(),
                self.upper.len()
            )));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(
                "objective has a non-finite entry".into(),
            ));
        }
        for (j, (&l, &u)) in self.lower.iter().zip(&self.upper).enumerate() {
            if l.is_nan() || u.is_nan() || l > u || l == f64::INFINITY || u == f64::NEG_INFINITY {
                return Err(Error::InvalidArgument(format!(
                    "bad bounds [{l}, {u}] on variable {j}"
                )));
            }
        }
        for (i, row) in self.rows.iter().enumerate() {
            if !row.rhs.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has a non-finite rhs"
                )));
            }
            for &(j, a) in &row.coeffs {
                if j >= n {
                    return Err(Error::Dimension(format!(
                        "row {i} references variable {j} of {n}"
                    )));
                }
                if !a.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "row {i} has a non-finite coefficient"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest row or bound violation of `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self.rows.iter().map(|r| r.violation(x)).fold(0.0, f64::max);
        let bounds = x
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&v, (&l, &u))| (l - v).max(v - u).max(0.0))
            .fold(0.0, f64::max);
        rows.max(bounds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal values; meaningful only when optimal.
    pub x: Vec<f64>,
    pub objective: f64,
    /// One dual per row. Nonnegative on `>=` rows, nonpositive on `<=` rows.
    pub duals: Vec<f64>,
    /// `c_j - duals * A_j`, the multipliers of the bound constraints.
    pub reduced_costs: Vec<f64>,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Objective of the dual problem at the reported multipliers.
    pub fn dual_objective(&self, lp: &LinearProgram) -> f64 {
        let rows: f64 = self
            .duals
            .iter()
            .zip(&lp.rows)
            .map(|(y, r)| y * r.rhs)
            .sum();
        let bounds: f64 = self
            .reduced_costs
            .iter()
            .enumerate()
            .map(|(j, &d)| {
                let bound = if d > 0.0 { lp.lower[j] } else { lp.upper[j] };
                if d.abs() <= FEAS_TOL || !bound.is_finite() {
                    0.0
                } else {
                    d * bound
                }
            })
            .sum();
        rows + bounds
    }
}
