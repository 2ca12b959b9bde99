use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{
    reference, run_cut_loop, ColgenConfig, ColgenReport, ColumnGenerator, CutLoopConfig,
    PricerKind, PricingBackend, SeparationReport, Separator, SeparatorKind,
};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::master::MasterState;
use crate::sampler::{ExternalCommandSampler, Sampler, SimulatedAnnealer};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveOptions {
    pub pricer: PricerKind,
    /// Command line of the sampler plugin, required for `PricerKind::Plugin`.
    pub plugin_cmd: Option<String>,
    pub separator: SeparatorKind,
    pub colgen: ColgenConfig,
    pub cut_loop: CutLoopConfig,
    /// Solve the restricted set-cover IP over the final column pool.
    pub price_and_branch: bool,
    pub price_and_branch_nodes: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            pricer: PricerKind::Exact,
            plugin_cmd: None,
            separator: SeparatorKind::None,
            colgen: ColgenConfig::default(),
            cut_loop: CutLoopConfig::default(),
            price_and_branch: false,
            price_and_branch_nodes: None,
        }
    }
}

/// Wall-clock totals; all `None` unless times are recorded.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Times {
    pub total: Option<f64>,
    pub pricing: Option<f64>,
    pub sampler: Option<f64>,
    pub separation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimalSolution {
    pub cost: f64,
    pub routes: Vec<Vec<usize>>,
    pub proven: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub instance: String,
    pub n: usize,
    pub backend: String,
    pub separator: SeparatorKind,
    /// Master bound before any cuts.
    pub c_mp: f64,
    pub reference_c_mp: Option<f64>,
    pub iterations: usize,
    pub exact_calls: usize,
    pub heuristic_calls: usize,
    pub certified: bool,
    pub cuts: Vec<Vec<usize>>,
    pub times: Times,
    pub seed: u64,
    pub reads: usize,
    pub sweeps: usize,
    pub colgen: ColgenReport,
    pub separation: Option<SeparationReport>,
    pub price_and_branch: Option<PrimalSolution>,
}

impl SolveReport {
    /// Converged with proofs and within the round limit.
    pub fn complete(&self) -> bool {
        self.certified && self.separation.as_ref().is_none_or(|s| !s.round_limit_hit)
    }
}

pub(crate) fn make_sampler(opts: &SolveOptions) -> Result<Box<dyn Sampler>> {
    Ok(match (&opts.pricer, &opts.plugin_cmd) {
        (PricerKind::Plugin, Some(cmd)) => {
            Box::new(ExternalCommandSampler::from_command_line(cmd)?)
        }
        (PricerKind::Plugin, None) => {
            return Err(Error::InvalidArgument(
                "the plugin pricer needs a sampler command".into(),
            ))
        }
        _ => Box::new(SimulatedAnnealer::default()),
    })
}

/// Column generation, the optional cut loop and the optional restricted IP.
pub fn solve(inst: &Instance, opts: &SolveOptions) -> Result<SolveReport> {
    let start = Instant::now();
    let record = opts.colgen.record_times;
    let sampler = make_sampler(opts)?;
    let sa = SimulatedAnnealer::default();
    let backend = match opts.pricer {
        PricerKind::Exact => PricingBackend::Exact,
        PricerKind::Sa | PricerKind::Plugin => PricingBackend::Qubo(sampler.as_ref()),
    };
    let mut gen = ColumnGenerator::new(inst, backend, opts.colgen.clone());
    let separator = match opts.separator {
        SeparatorKind::None => None,
        SeparatorKind::Greedy => Some(Separator::Greedy),
        SeparatorKind::Brute => Some(Separator::BruteForce),
        SeparatorKind::Sa => Some(Separator::Qubo(&sa)),
    };

    let mut state = MasterState::init_singletons(inst);
    let (colgen, separation) = match separator {
        None => (gen.run(&mut state)?, None),
        Some(sep) => {
            let (report, final_state) = run_cut_loop(&mut gen, sep, &opts.cut_loop)?;
            state = final_state;
            (report.initial.clone(), Some(report))
        }
    };

    let price_and_branch = if opts.price_and_branch {
        let pb = state.price_and_branch(opts.price_and_branch_nodes)?;
        let mut routes: Vec<Vec<usize>> = pb.routes.iter().map(|r| r.canonical_key()).collect();
        routes.sort();
        Some(PrimalSolution {
            cost: pb.cost,
            routes,
            proven: pb.proven,
        })
    } else {
        None
    };

    let runs =
        std::iter::once(&colgen).chain(separation.iter().flat_map(|s| s.repricing_runs.iter()));
    let (mut exact, mut heuristic, mut pricing, mut sampling) = (0, 0, None::<f64>, None::<f64>);
    for r in runs {
        exact += r.exact_calls;
        heuristic += r.heuristic_calls;
        if let Some(t) = r.total_pricing_seconds() {
            pricing = Some(pricing.unwrap_or(0.0) + t);
        }
        if let Some(t) = r.total_sampler_seconds() {
            sampling = Some(sampling.unwrap_or(0.0) + t);
        }
    }
    let certified = colgen.certified && separation.as_ref().is_none_or(|s| s.certified);
    let times = if record {
        Times {
            total: Some(start.elapsed().as_secs_f64()),
            pricing,
            sampler: sampling,
            separation: separation.as_ref().and_then(|s| s.separation_seconds),
        }
    } else {
        Times::default()
    };
    Ok(SolveReport {
        instance: inst.name.clone(),
        n: inst.n(),
        backend: colgen.backend.clone(),
        separator: opts.separator,
        c_mp: colgen.c_mp,
        reference_c_mp: reference(&inst.name).map(|e| e.c_mp),
        iterations: colgen.iterations,
        exact_calls: exact,
        heuristic_calls: heuristic,
        certified,
        cuts: separation
            .as_ref()
            .map(|s| s.cuts.clone())
            .unwrap_or_default(),
        times,
        seed: opts.colgen.sampler.seed,
        reads: opts.colgen.sampler.num_reads,
        sweeps: opts.colgen.sampler.sweeps,
        colgen,
        separation,
        price_and_branch,
    })
}
