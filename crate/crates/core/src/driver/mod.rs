//! Column generation with heuristic-then-exact pricing, the capacity-cut
//! loop, and benchmark output.

mod bench;
mod reference;
mod separation;
mod solve;

pub use bench::{
    run_benchmark, write_csv, BenchJob, BenchRow, BenchmarkConfig, PricerKind, SeparatorKind,
};
pub use reference::{reference, ReferenceEntry, REFERENCE};
pub use separation::{
    run_cut_loop, separate_rcc_bruteforce, separate_rcc_greedy, separate_rcc_qubo, CutLoopConfig,
    RoundRecord, SeparationReport, Separator, BRUTE_FORCE_SEPARATION_LIMIT,
};
pub use solve::{solve, PrimalSolution, SolveOptions, SolveReport, Times};

use std::time::Instant;

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Instance, Route};
use crate::master::{reduced_cost, Duals, MasterState, NEGATIVE_RC};
use crate::pricing_exact::{price_exact, PricingOptions};
use crate::qubo::{build_pricing_qubo, decode_pricing_sample, pricing_penalty_bound, VarLayout};
use crate::sampler::{Sampler, SamplerConfig};

/// `(c* - c_lp) / c*`.
pub fn integrality_gap(c_star: f64, c_lp: f64) -> f64 {
    (c_star - c_lp) / c_star
}

/// How pricing problems are attacked before the exact pricer is consulted.
#[derive(Clone, Copy)]
pub enum PricingBackend<'a> {
    /// Every pricing problem goes straight to the exact pricer.
    Exact,
    /// Sample the pricing QUBO first; fall back to exact pricing only when no
    /// sample decodes to a negative route.
    Qubo(&'a dyn Sampler),
}

impl PricingBackend<'_> {
    pub fn id(&self) -> String {
        match self {
            PricingBackend::Exact => "exact-only".into(),
            PricingBackend::Qubo(s) => format!("qubo/{}", s.name()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColgenConfig {
    pub pricing: PricingOptions,
    /// Sampler settings for the QUBO backend. Call `k` uses `seed + k`.
    pub sampler: SamplerConfig,
    pub max_iterations: usize,
    /// Record wall-clock times. Off by default so reports are reproducible
    /// byte for byte.
    pub record_times: bool,
}

impl Default for ColgenConfig {
    fn default() -> Self {
        ColgenConfig {
            pricing: PricingOptions::default(),
            sampler: SamplerConfig::default(),
            max_iterations: 10_000,
            record_times: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CallKind {
    Heuristic,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PricingCall {
    pub kind: CallKind,
    /// New columns that entered the master.
    pub added: usize,
    /// Smallest reduced cost seen; `None` when no sample decoded to a route.
    pub min_reduced_cost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seconds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sampler_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColgenReport {
    pub backend: String,
    pub c_mp: f64,
    /// Master solves.
    pub iterations: usize,
    pub heuristic_calls: usize,
    pub exact_calls: usize,
    pub calls: Vec<PricingCall>,
    pub objective_trace: Vec<f64>,
    /// The last exact pricing call proved that no negative route exists.
    pub certified: bool,
    pub columns: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagnostic: Option<String>,
}

impl ColgenReport {
    pub fn total_pricing_seconds(&self) -> Option<f64> {
        self.calls.iter().map(|c| c.seconds).sum()
    }

    pub fn total_sampler_seconds(&self) -> Option<f64> {
        let sampled: Vec<f64> = self
            .calls
            .iter()
            .filter_map(|c| c.sampler_seconds)
            .collect();
        (!sampled.is_empty()).then(|| sampled.iter().sum())
    }
}

/// Drives pricing on a master state. Heuristic seeds keep counting across
/// runs, so re-optimizing after cuts does not replay earlier samples.
pub struct ColumnGenerator<'a> {
    inst: &'a Instance,
    backend: PricingBackend<'a>,
    cfg: ColgenConfig,
    heuristic_seq: u64,
}

impl<'a> ColumnGenerator<'a> {
    pub fn new(inst: &'a Instance, backend: PricingBackend<'a>, cfg: ColgenConfig) -> Self {
        ColumnGenerator {
            inst,
            backend,
            cfg,
            heuristic_seq: 0,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn config(&self) -> &ColgenConfig {
        &self.cfg
    }

    pub fn backend_id(&self) -> String {
        self.backend.id()
    }

    /// Prices until exact pricing finds no negative route, leaving `state`
    /// solved at its LP optimum.
    pub fn run(&mut self, state: &mut MasterState) -> Result<ColgenReport> {
        let mut report = ColgenReport {
            backend: self.backend.id(),
            c_mp: f64::NAN,
            iterations: 0,
            heuristic_calls: 0,
            exact_calls: 0,
            calls: Vec::new(),
            objective_trace: Vec::new(),
            certified: false,
            columns: 0,
            diagnostic: None,
        };
        loop {
            let sol = state.solve()?.clone();
            report.iterations += 1;
            report.c_mp = sol.objective;
            report.objective_trace.push(sol.objective);
            if report.iterations > self.cfg.max_iterations {
                report.diagnostic = Some(format!(
                    "stopped after {} iterations",
                    self.cfg.max_iterations
                ));
                break;
            }

            if let PricingBackend::Qubo(sampler) = self.backend {
                let call = self.heuristic(sampler, state, &sol.duals)?;
                report.heuristic_calls += 1;
                let added = call.added;
                report.calls.push(call);
                if added > 0 {
                    continue;
                }
            }

            let start = Instant::now();
            let priced = match price_exact(self.inst, &sol.duals, state.cuts(), &self.cfg.pricing) {
                Ok(p) => p,
                Err(Error::BudgetExhausted(msg)) => {
                    report.exact_calls += 1;
                    report.diagnostic = Some(msg);
                    break;
                }
                Err(e) => return Err(e),
            };
            let added = state.add_columns(self.inst, priced.negatives.iter().cloned())?;
            report.exact_calls += 1;
            report.calls.push(PricingCall {
                kind: CallKind::Exact,
                added,
                min_reduced_cost: Some(priced.min_reduced_cost),
                seconds: self.cfg.record_times.then(|| start.elapsed().as_secs_f64()),
                sampler_seconds: None,
            });
            debug!(
                "iteration {}: objective {:.6}, exact min reduced cost {:.6}, {} added",
                report.iterations, sol.objective, priced.min_reduced_cost, added
            );
            if added == 0 {
                if !priced.negatives.is_empty() {
                    warn!("exact pricer returned only columns already in the master");
                }
                if priced.proven {
                    report.certified = true;
                } else {
                    report.diagnostic = Some("exact pricing hit its node budget".into());
                }
                break;
            }
        }
        report.columns = state.columns().len();
        Ok(report)
    }

    fn heuristic(
        &mut self,
        sampler: &dyn Sampler,
        state: &mut MasterState,
        duals: &Duals,
    ) -> Result<PricingCall> {
        let start = Instant::now();
        let pi = &duals.pi;
        let q = build_pricing_qubo(self.inst, pi, pricing_penalty_bound(self.inst, pi))?;
        let lay = match q.layout() {
            VarLayout::Pricing(l) => l.clone(),
            _ => unreachable!("pricing QUBO carries its layout"),
        };
        let scfg = SamplerConfig {
            seed: self.cfg.sampler.seed.wrapping_add(self.heuristic_seq),
            ..self.cfg.sampler.clone()
        };
        self.heuristic_seq += 1;
        let sample_start = Instant::now();
        let set = sampler.sample(&q, &scfg)?;
        let sampler_seconds = sample_start.elapsed().as_secs_f64();

        let mut min_rc: Option<f64> = None;
        let mut negatives: Vec<(f64, Route)> = Vec::new();
        for s in &set.entries {
            let Some(route) = decode_pricing_sample(self.inst, &lay, &s.x) else {
                continue;
            };
            // Cut duals are not in the QUBO; the true reduced cost decides.
            let rc = reduced_cost(&route, duals, state.cuts());
            min_rc = Some(min_rc.map_or(rc, |m: f64| m.min(rc)));
            if rc < NEGATIVE_RC && !state.contains(&route) {
                negatives.push((rc, route));
            }
        }
        negatives.sort_by(|a, b| a.0.total_cmp(&b.0));
        let added = state.add_columns(self.inst, negatives.into_iter().map(|(_, r)| r))?;
        Ok(PricingCall {
            kind: CallKind::Heuristic,
            added,
            min_reduced_cost: min_rc,
            seconds: self.cfg.record_times.then(|| start.elapsed().as_secs_f64()),
            sampler_seconds: self.cfg.record_times.then_some(sampler_seconds),
        })
    }
}

/// Column generation from the singleton routes.
pub fn run_colgen(
    inst: &Instance,
    backend: PricingBackend<'_>,
    cfg: &ColgenConfig,
) -> Result<(MasterState, ColgenReport)> {
    let mut state = MasterState::init_singletons(inst);
    let report = ColumnGenerator::new(inst, backend, cfg.clone()).run(&mut state)?;
    Ok((state, report))
}
