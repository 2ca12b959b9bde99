//! Exact pricing: a subset dynamic program and an edge-model branch-and-cut.

mod bc;
mod dp;
mod mincut;

pub use bc::price_bc;
pub use dp::{dp_applicable, dp_state_count, price_dp};
pub use mincut::{min_cut, separate_sec, MinCut, SecViolation};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::instance::{Instance, Route};
use crate::master::{reduced_cost, Duals, RccCut, NEGATIVE_RC};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PricingOptions {
    /// Largest customer count always handled by the dynamic program.
    pub dp_limit: usize,
    /// Larger instances still use the dynamic program when their count of
    /// capacity-feasible `(subset, last customer)` states is at most this.
    pub dp_state_budget: usize,
    /// Most negative routes returned per call; `0` keeps all of them.
    pub max_negatives: usize,
    /// Node budget of the branch-and-cut pricer.
    pub node_budget: Option<usize>,
    /// Separate subtour rows at fractional nodes as well as integral ones.
    pub fractional_sec: bool,
}

impl Default for PricingOptions {
    fn default() -> Self {
        PricingOptions {
            dp_limit: 20,
            dp_state_budget: 1 << 24,
            max_negatives: 25,
            node_budget: None,
            fractional_sec: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PricingResult {
    pub best_route: Route,
    pub min_reduced_cost: f64,
    /// Distinct routes with reduced cost below the acceptance threshold,
    /// most negative first.
    pub negatives: Vec<Route>,
    /// False when a node budget cut the search short.
    pub proven: bool,
}

/// Runs the dynamic program when it applies, branch-and-cut otherwise.
pub fn price_exact(
    inst: &Instance,
    duals: &Duals,
    cuts: &[RccCut],
    opts: &PricingOptions,
) -> Result<PricingResult> {
    if dp_applicable(inst, opts) {
        price_dp(inst, duals, cuts, opts)
    } else {
        price_bc(inst, duals, cuts, opts)
    }
}

/// Collects routes keyed by orientation-independent identity.
#[derive(Default)]
pub(crate) struct RoutePool {
    routes: BTreeMap<Vec<usize>, (f64, Route)>,
}

impl RoutePool {
    pub(crate) fn offer(&mut self, route: Route, rc: f64) {
        self.routes
            .entry(route.canonical_key())
            .or_insert((rc, route));
    }

    pub(crate) fn offer_seq(
        &mut self,
        inst: &Instance,
        seq: Vec<usize>,
        duals: &Duals,
        cuts: &[RccCut],
    ) {
        if let Ok(route) = Route::new(inst, seq) {
            let rc = reduced_cost(&route, duals, cuts);
            self.offer(route, rc);
        }
    }

    pub(crate) fn best(&self) -> Option<(f64, &Route)> {
        self.routes
            .values()
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(rc, r)| (*rc, r))
    }

    /// Negative routes sorted by reduced cost, truncated to `limit` (0 = all).
    pub(crate) fn negatives(&self, limit: usize) -> Vec<Route> {
        let mut neg: Vec<&(f64, Route)> = self
            .routes
            .values()
            .filter(|(rc, _)| *rc < NEGATIVE_RC)
            .collect();
        neg.sort_by(|a, b| a.0.total_cmp(&b.0));
        if limit > 0 {
            neg.truncate(limit);
        }
        neg.into_iter().map(|(_, r)| r.clone()).collect()
    }
}
