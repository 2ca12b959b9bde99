//! LP-based branch-and-bound with lazy constraint rows.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{solve_lp, LinearProgram, LpStatus, Row, INT_TOL};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct IpOptions {
    /// Maximum number of processed nodes; `None` means unlimited.
    pub node_budget: Option<usize>,
    pub int_tol: f64,
    /// Separation rounds allowed at a fractional node before branching.
    pub max_fractional_rounds: usize,
}

impl Default for IpOptions {
    fn default() -> Self {
        IpOptions {
            node_budget: None,
            int_tol: INT_TOL,
            max_fractional_rounds: 20,
        }
    }
}

/// Hooks invoked during the search.
pub trait IpCallback {
    /// Rows violated by `x`. Rows returned for an integral `x` must cut it off.
    fn separate(&mut self, _x: &[f64], _integral: bool) -> Vec<Row> {
        Vec::new()
    }

    /// Called for every integral LP solution that survives separation.
    fn on_integral(&mut self, _x: &[f64], _objective: f64) {}
}

impl IpCallback for () {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// The node budget ran out; `x` holds the best incumbent if any.
    BudgetExhausted,
}

#[derive(Debug, Clone)]
pub struct IpSolution {
    pub status: IpStatus,
    pub x: Option<Vec<f64>>,
    pub objective: f64,
    /// True when the search tree was fully explored.
    pub proven: bool,
    pub nodes: usize,
    /// Incumbent objective after each improvement.
    pub incumbent_trace: Vec<f64>,
    /// Lazy rows appended during the search.
    pub lazy_rows: Vec<Row>,
}

struct Node {
    lower: Vec<f64>,
    upper: Vec<f64>,
    bound: f64,
    depth: usize,
    seq: usize,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // Max-heap order: deepest first, then smallest bound, then oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        self.depth
            .cmp(&other.depth)
            .then_with(|| other.bound.total_cmp(&self.bound))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Minimizes `lp` with the variables in `integer_vars` restricted to integers.
///
/// Branches on the most fractional variable and explores depth-first, breaking
/// ties by the best bound.
pub fn solve_ip(
    lp: &LinearProgram,
    integer_vars: &[usize],
    opts: &IpOptions,
    callback: &mut dyn IpCallback,
) -> Result<IpSolution> {
    lp.validate()?;
    let mut work = lp.clone();
    let base_rows = work.rows.len();
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    heap.push(Node {
        lower: lp.lower.clone(),
        upper: lp.upper.clone(),
        bound: f64::NEG_INFINITY,
        depth: 0,
        seq,
    });

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut trace = Vec::new();
    let mut nodes = 0usize;
    let mut exhausted = false;
    let mut unbounded = false;

    let cutoff = |best: &Option<(Vec<f64>, f64)>, value: f64| match best {
        Some((_, inc)) => value >= inc - 1e-9 * (1.0 + inc.abs()),
        None => false,
    };

    while let Some(node) = heap.pop() {
        if cutoff(&best, node.bound) {
            continue;
        }
        if opts.node_budget.is_some_and(|b| nodes >= b) {
            exhausted = true;
            break;
        }
        nodes += 1;
        work.lower.clone_from(&node.lower);
        work.upper.clone_from(&node.upper);

        let mut rounds = 0;
        loop {
            let sol = solve_lp(&work)?;
            match sol.status {
                LpStatus::Infeasible => break,
                LpStatus::Unbounded => {
                    unbounded = true;
                    break;
                }
                LpStatus::Optimal => {}
            }
            if cutoff(&best, sol.objective) {
                break;
            }
            let frac = most_fractional(&sol.x, integer_vars, opts.int_tol);
            let integral = frac.is_none();
            if integral || rounds < opts.max_fractional_rounds {
                let rows = callback.separate(&sol.x, integral);
                if !rows.is_empty() {
                    work.rows.extend(rows);
                    rounds += 1;
                    continue;
                }
            }
            match frac {
                None => {
                    let mut x = sol.x;
                    for &j in integer_vars {
                        x[j] = x[j].round();
                    }
                    callback.on_integral(&x, sol.objective);
                    if best.as_ref().is_none_or(|(_, inc)| sol.objective < *inc) {
                        trace.push(sol.objective);
                        best = Some((x, sol.objective));
                    }
                }
                Some((j, value)) => {
                    let down_first = value - value.floor() < 0.5;
                    let mut down = Node {
                        lower: node.lower.clone(),
                        upper: node.upper.clone(),
                        bound: sol.objective,
                        depth: node.depth + 1,
                        seq: 0,
                    };
                    down.upper[j] = value.floor();
                    let mut up = Node {
                        lower: node.lower.clone(),
                        upper: node.upper.clone(),
                        bound: sol.objective,
                        depth: node.depth + 1,
                        seq: 0,
                    };
                    up.lower[j] = value.ceil();
                    let (first, second) = if down_first { (down, up) } else { (up, down) };
                    for mut child in [first, second] {
                        seq += 1;
                        child.seq = seq;
                        heap.push(child);
                    }
                }
            }
            break;
        }
        if unbounded {
            break;
        }
    }

    let lazy_rows = work.rows.split_off(base_rows);
    let (status, x, objective) = match (best, unbounded, exhausted) {
        (_, true, _) => (IpStatus::Unbounded, None, f64::NEG_INFINITY),
        (best, false, true) => {
            let objective = best.as_ref().map_or(f64::INFINITY, |b| b.1);
            (IpStatus::BudgetExhausted, best.map(|b| b.0), objective)
        }
        (Some((x, obj)), false, false) => (IpStatus::Optimal, Some(x), obj),
        (None, false, false) => (IpStatus::Infeasible, None, f64::INFINITY),
    };
    Ok(IpSolution {
        status,
        x,
        objective,
        proven: !exhausted && !unbounded,
        nodes,
        incumbent_trace: trace,
        lazy_rows,
    })
}

fn most_fractional(x: &[f64], integer_vars: &[usize], tol: f64) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64, f64)> = None;
    for &j in integer_vars {
        let f = x[j] - x[j].floor();
        let dist = f.min(1.0 - f);
        if dist > tol && best.is_none_or(|(_, _, d)| dist > d + 1e-12) {
            best = Some((j, x[j], dist));
        }
    }
    best.map(|(j, v, _)| (j, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Sense;

    #[test]
    fn integral_relaxation_needs_one_node() {
        let mut lp = LinearProgram::new(vec![1.0, 1.0]);
        lp.add_row(Row::dense(&[1.0, 0.0], Sense::Ge, 1.0));
        lp.add_row(Row::dense(&[0.0, 1.0], Sense::Ge, 2.0));
        let s = solve_ip(&lp, &[0, 1], &IpOptions::default(), &mut ()).unwrap();
        assert_eq!(s.status, IpStatus::Optimal);
        assert_eq!(s.nodes, 1);
        assert!((s.objective - 3.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_integer_system() {
        let mut lp = LinearProgram::new(vec![1.0, 1.0]);
        lp.set_bounds(0, 0.0, 1.0);
        lp.set_bounds(1, 0.0, 1.0);
        lp.add_row(Row::dense(&[1.0, 1.0], Sense::Eq, 1.5));
        let s = solve_ip(&lp, &[0, 1], &IpOptions::default(), &mut ()).unwrap();
        assert_eq!(s.status, IpStatus::Infeasible);
        assert!(s.x.is_none());
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        // max sum x_i with 2 x_i pairs summing to at most 1.5 forces branching.
        let mut lp = LinearProgram::new(vec![-1.0, -1.0, -1.0]);
        for j in 0..3 {
            lp.set_bounds(j, 0.0, 1.0);
        }
        lp.add_row(Row::dense(&[1.0, 1.0, 1.0], Sense::Le, 1.5));
        let opts = IpOptions {
            node_budget: Some(1),
            ..IpOptions::default()
        };
        let s = solve_ip(&lp, &[0, 1, 2], &opts, &mut ()).unwrap();
        assert_eq!(s.status, IpStatus::BudgetExhausted);
        assert!(!s.proven);

        let s = solve_ip(&lp, &[0, 1, 2], &IpOptions::default(), &mut ()).unwrap();
        assert_eq!(s.status, IpStatus::Optimal);
        assert!((s.objective + 1.0).abs() < 1e-9);
    }

    struct CapAtOne;
    impl IpCallback for CapAtOne {
        fn separate(&mut self, x: &[f64], integral: bool) -> Vec<Row> {
            if integral && x[0] + x[1] > 1.5 {
                vec![Row::dense(&[1.0, 1.0], Sense::Le, 1.0)]
            } else {
                Vec::new()
            }
        }
    }

    #[test]
    fn lazy_rows_cut_off_integral_points() {
        let mut lp = LinearProgram::new(vec![-2.0, -1.0]);
        lp.set_bounds(0, 0.0, 1.0);
        lp.set_bounds(1, 0.0, 1.0);
        let s = solve_ip(&lp, &[0, 1], &IpOptions::default(), &mut CapAtOne).unwrap();
        assert_eq!(s.status, IpStatus::Optimal);
        assert!((s.objective + 2.0).abs() < 1e-9);
        assert_eq!(s.lazy_rows.len(), 1);
    }
}
