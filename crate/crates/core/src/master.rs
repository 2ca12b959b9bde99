//! The set-cover master problem with rounded capacity cuts.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Instance, Route};
use crate::lp::{self, IpOptions, IpStatus, LinearProgram, LpStatus, Row, Sense};

/// Reduced costs below this value count as improving.
pub const NEGATIVE_RC: f64 = -1e-6;

/// Rounded capacity cut: at least `ceil(D(S)/K)` routes must touch `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RccCut {
    set: Vec<usize>,
    rhs: u64,
    #[serde(skip)]
    member: Vec<bool>,
}

impl RccCut {
    pub fn new(inst: &Instance, set: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set: Vec<usize> = set.into_iter().collect();
        set.sort_unstable();
        set.dedup();
        if set.is_empty() {
            return Err(Error::InvalidArgument(
                "a capacity cut needs a nonempty customer set".into(),
            ));
        }
        if let Some(&bad) = set.iter().find(|&&i| i == 0 || i > inst.n()) {
            return Err(Error::InvalidArgument(format!("cut references node {bad}")));
        }
        let rhs = inst.vehicles_needed(&set);
        let mut member = vec![false; inst.n() + 1];
        for &i in &set {
            member[i] = true;
        }
        Ok(RccCut { set, rhs, member })
    }

    pub fn set(&self) -> &[usize] {
        &self.set
    }

    pub fn rhs(&self) -> u64 {
        self.rhs
    }

    pub fn contains(&self, customer: usize) -> bool {
        self.member.get(customer).copied().unwrap_or(false)
    }

    pub fn intersects(&self, route: &Route) -> bool {
        route.customers().iter().any(|&v| self.contains(v))
    }

    pub fn intersects_seq(&self, seq: &[usize]) -> bool {
        seq.iter().any(|&v| self.contains(v))
    }
}

/// Dual prices of the master rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Duals {
    /// Indexed by node; entry 0 (the depot) is always zero.
    pub pi: Vec<f64>,
    /// One entry per cut, in cut order.
    pub beta: Vec<f64>,
}

impl Duals {
    pub fn zero(n: usize, cuts: usize) -> Self {
        Duals {
            pi: vec![0.0; n + 1],
            beta: vec![0.0; cuts],
        }
    }
}

/// `c_r - sum_{v in r} pi_v - sum_{S : S meets r} beta_S`.
pub fn reduced_cost(route: &Route, duals: &Duals, cuts: &[RccCut]) -> f64 {
    reduced_cost_of(route.customers(), route.cost(), duals, cuts)
}

pub(crate) fn reduced_cost_of(seq: &[usize], cost: f64, duals: &Duals, cuts: &[RccCut]) -> f64 {
    let prices: f64 = seq.iter().map(|&v| duals.pi[v]).sum();
    let cut_prices: f64 = cuts
        .iter()
        .zip(&duals.beta)
        .filter(|(cut, _)| cut.intersects_seq(seq))
        .map(|(_, b)| b)
        .sum();
    cost - prices - cut_prices
}

#[derive(Debug, Clone, PartialEq)]
pub struct MasterSolution {
    /// Primal value per pool column.
    pub y: Vec<f64>,
    pub objective: f64,
    pub duals: Duals,
}

/// Column pool, cut pool and the most recent LP solution.
#[derive(Debug, Clone)]
pub struct MasterState {
    n: usize,
    columns: Vec<Route>,
    keys: HashSet<Vec<usize>>,
    cuts: Vec<RccCut>,
    last: Option<MasterSolution>,
}

#[derive(Debug, Clone)]
pub struct PriceAndBranch {
    pub routes: Vec<Route>,
    pub cost: f64,
    pub proven: bool,
    pub nodes: usize,
}

impl MasterState {
    /// Pool of the `n` single-customer routes.
    pub fn init_singletons(inst: &Instance) -> Self {
        let mut state = MasterState {
            n: inst.n(),
            columns: Vec::new(),
            keys: HashSet::new(),
            cuts: Vec::new(),
            last: None,
        };
        let singletons = inst
            .customers()
            .map(|v| Route::new(inst, vec![v]).expect("every demand fits the capacity"));
        for r in singletons {
            state.insert(r);
        }
        state
    }

    fn insert(&mut self, route: Route) -> bool {
        if self.keys.insert(route.canonical_key()) {
            self.columns.push(route);
            true
        } else {
            false
        }
    }

    pub fn columns(&self) -> &[Route] {
        &self.columns
    }

    pub fn cuts(&self) -> &[RccCut] {
        &self.cuts
    }

    pub fn last_solution(&self) -> Option<&MasterSolution> {
        self.last.as_ref()
    }

    pub fn contains(&self, route: &Route) -> bool {
        self.keys.contains(&route.canonical_key())
    }

    /// Adds feasible routes, dropping duplicates. Returns how many were new.
    pub fn add_columns(
        &mut self,
        inst: &Instance,
        routes: impl IntoIterator<Item = Route>,
    ) -> Result<usize> {
        let mut added = 0;
        for route in routes {
            // Re-validate against the instance; routes may come from decoders.
            let checked = Route::new(inst, route.customers().to_vec())?;
            if (checked.cost() - route.cost()).abs() > 1e-9 * (1.0 + checked.cost().abs()) {
                return Err(Error::InvalidRoute(format!(
                    "route cost {} disagrees with the instance ({})",
                    route.cost(),
                    checked.cost()
                )));
            }
            if self.insert(checked) {
                added += 1;
            }
        }
        if added > 0 {
            self.last = None;
        }
        Ok(added)
    }

    /// Appends a cut unless one with the same customer set exists.
    pub fn add_cut(&mut self, cut: RccCut) -> bool {
        if self.cuts.iter().any(|c| c.set() == cut.set()) {
            return false;
        }
        self.cuts.push(cut);
        self.last = None;
        true
    }

    /// The master LP: one `[0,1]` variable per column, a covering row per
    /// customer and a `>= rhs` row per cut.
    pub fn build_lp(&self) -> LinearProgram {
        let mut lp = LinearProgram::new(self.columns.iter().map(Route::cost).collect());
        for j in 0..self.columns.len() {
            lp.set_bounds(j, 0.0, 1.0);
        }
        let mut cover: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.n + 1];
        for (j, r) in self.columns.iter().enumerate() {
            for &v in r.customers() {
                cover[v].push((j, 1.0));
            }
        }
        for coeffs in cover.into_iter().skip(1) {
            lp.add_row(Row::new(coeffs, Sense::Ge, 1.0));
        }
        for cut in &self.cuts {
            let coeffs = self
                .columns
                .iter()
                .enumerate()
                .filter(|(_, r)| cut.intersects(r))
                .map(|(j, _)| (j, 1.0))
                .collect();
            lp.add_row(Row::new(coeffs, Sense::Ge, cut.rhs() as f64));
        }
        lp
    }

    /// Solves the master LP and stores primal values and duals.
    ///
    /// A column resting on its upper bound can carry a bound dual that the
    /// row prices alone do not see, and pricing would then keep returning it.
    /// So the LP is first solved without upper bounds: when that optimum
    /// already has every `y <= 1` it is optimal for the bounded LP too, and its
    /// row duals price every route correctly. Otherwise the bounded LP is used.
    pub fn solve(&mut self) -> Result<&MasterSolution> {
        let lp = self.build_lp();
        let mut relaxed = lp.clone();
        relaxed.upper.iter_mut().for_each(|u| *u = f64::INFINITY);
        let free = lp::solve_lp(&relaxed)?;
        let sol = if free.status == LpStatus::Optimal && free.x.iter().all(|&y| y <= 1.0 + 1e-9) {
            let mut free = free;
            free.x.iter_mut().for_each(|y| *y = y.min(1.0));
            free
        } else {
            lp::solve_lp(&lp)?
        };
        if sol.status != LpStatus::Optimal {
            return Err(Error::InvalidArgument(format!(
                "master LP is {:?}",
                sol.status
            )));
        }
        let mut pi = vec![0.0];
        pi.extend(sol.duals[..self.n].iter().map(|&v| v.max(0.0)));
        let beta = sol.duals[self.n..].iter().map(|&v| v.max(0.0)).collect();
        self.last = Some(MasterSolution {
            y: sol.x,
            objective: sol.objective,
            duals: Duals { pi, beta },
        });
        Ok(self.last.as_ref().expect("just stored"))
    }

    /// `(column, y*)` for every column with a positive LP value.
    pub fn support(&self) -> Vec<(&Route, f64)> {
        match &self.last {
            Some(sol) => self
                .columns
                .iter()
                .zip(&sol.y)
                .filter(|(_, &y)| y > 1e-9)
                .map(|(r, &y)| (r, y))
                .collect(),
            None => Vec::new(),
        }
    }

    /// `rhs - sum_{r meets S} y*_r`; positive means the cut is violated.
    pub fn rcc_violation(&self, cut: &RccCut) -> Result<f64> {
        let sol = self
            .last
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("master has not been solved".into()))?;
        let lhs: f64 = self
            .columns
            .iter()
            .zip(&sol.y)
            .filter(|(r, _)| cut.intersects(r))
            .map(|(_, y)| y)
            .sum();
        Ok(cut.rhs() as f64 - lhs)
    }

    /// Solves the set-cover IP restricted to the current pool.
    pub fn price_and_branch(&self, node_budget: Option<usize>) -> Result<PriceAndBranch> {
        let lp = self.build_lp();
        let vars: Vec<usize> = (0..self.columns.len()).collect();
        let opts = IpOptions {
            node_budget,
            ..IpOptions::default()
        };
        let sol = lp::solve_ip(&lp, &vars, &opts, &mut ())?;
        let x = match (sol.status, sol.x) {
            (IpStatus::Infeasible, _) | (IpStatus::Unbounded, _) | (_, None) => {
                return Err(Error::InvalidArgument(format!(
                    "restricted IP ended as {:?}",
                    sol.status
                )))
            }
            (_, Some(x)) => x,
        };
        let routes: Vec<Route> = self
            .columns
            .iter()
            .zip(&x)
            .filter(|(_, &v)| v > 0.5)
            .map(|(r, _)| r.clone())
            .collect();
        let cost = routes.iter().map(Route::cost).sum();
        Ok(PriceAndBranch {
            routes,
            cost,
            proven: sol.proven,
            nodes: sol.nodes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::random_euclidean;

    #[test]
    fn singleton_master() {
        let inst = random_euclidean(5, 10, 4, 3);
        let mut st = MasterState::init_singletons(&inst);
        assert_eq!(st.columns().len(), 5);
        let sol = st.solve().unwrap().clone();
        let expected: f64 = inst.customers().map(|v| 2.0 * inst.dist(0, v)).sum();
        assert!((sol.objective - expected).abs() < 1e-6);
        for v in inst.customers() {
            assert!((sol.y[v - 1] - 1.0).abs() < 1e-9);
            assert!((sol.duals.pi[v] - 2.0 * inst.dist(0, v)).abs() < 1e-6);
            let r = Route::new(&inst, vec![v]).unwrap();
            assert!(reduced_cost(&r, &sol.duals, st.cuts()).abs() < 1e-6);
        }
        let pb = st.price_and_branch(None).unwrap();
        assert!((pb.cost - expected).abs() < 1e-6);
    }

    #[test]
    fn one_customer_instance() {
        let inst = random_euclidean(1, 5, 5, 9);
        let mut st = MasterState::init_singletons(&inst);
        let obj = st.solve().unwrap().objective;
        assert!((obj - 2.0 * inst.dist(0, 1)).abs() < 1e-9);
    }

    #[test]
    fn duplicate_columns_dropped() {
        let inst = random_euclidean(4, 10, 3, 1);
        let mut st = MasterState::init_singletons(&inst);
        let again = Route::new(&inst, vec![2]).unwrap();
        assert_eq!(st.add_columns(&inst, [again]).unwrap(), 0);
        let a = Route::new(&inst, vec![1, 2]).unwrap();
        let a_rev = Route::new(&inst, vec![2, 1]).unwrap();
        let b = Route::new(&inst, vec![3, 4]).unwrap();
        assert_eq!(st.add_columns(&inst, [a, a_rev, b]).unwrap(), 2);
        assert_eq!(st.columns().len(), 6);
    }

    #[test]
    fn reduced_cost_without_prices_is_cost() {
        let inst = random_euclidean(4, 10, 3, 2);
        let r = Route::new(&inst, vec![1, 3]).unwrap();
        let d = Duals::zero(4, 0);
        assert_eq!(reduced_cost(&r, &d, &[]), r.cost());
    }

    #[test]
    fn cut_rhs_and_violation() {
        let inst = random_euclidean(4, 10, 4, 5);
        let mut st = MasterState::init_singletons(&inst);
        st.solve().unwrap();
        let cut = RccCut::new(&inst, [2]).unwrap();
        assert_eq!(cut.rhs(), 1);
        assert!(st.rcc_violation(&cut).unwrap().abs() < 1e-9);
        let all = RccCut::new(&inst, inst.customers()).unwrap();
        assert_eq!(all.rhs(), inst.total_demand().div_ceil(10));
        assert!(st.rcc_violation(&all).unwrap() <= 1e-9);
        assert!(RccCut::new(&inst, []).is_err());
    }
}
