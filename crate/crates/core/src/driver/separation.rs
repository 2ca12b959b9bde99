use std::collections::BTreeMap;
use std::time::Instant;

use log::info;
use serde::{Deserialize, Serialize};

use super::{integrality_gap, reference, ColgenReport, ColumnGenerator};
use crate::error::{Error, Result};
use crate::instance::{Instance, Route};
use crate::master::{MasterState, RccCut};
use crate::qubo::{build_separation_qubo, decode_separation_sample, VarLayout, SEPARATION_PENALTY};
use crate::sampler::{Sampler, SamplerConfig};

/// Largest customer count for exhaustive separation (two `2^n` tables).
pub const BRUTE_FORCE_SEPARATION_LIMIT: usize = 25;

const VIOLATION_TOL: f64 = 1e-6;
/// Below this relative gap the LP bound already equals the optimum.
const GAP_ZERO_TOL: f64 = 1e-6;

#[derive(Clone, Copy)]
pub enum Separator<'a> {
    Greedy,
    BruteForce,
    Qubo(&'a dyn Sampler),
}

impl Separator<'_> {
    pub fn id(&self) -> String {
        match self {
            Separator::Greedy => "greedy".into(),
            Separator::BruteForce => "brute-force".into(),
            Separator::Qubo(s) => format!("qubo/{}", s.name()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CutLoopConfig {
    pub max_rounds: usize,
    /// Sampler settings for QUBO separation. Round `k` uses `seed + k`.
    pub sampler: SamplerConfig,
}

impl Default for CutLoopConfig {
    fn default() -> Self {
        CutLoopConfig {
            max_rounds: 50,
            sampler: SamplerConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub cuts_added: usize,
    /// Master bound after re-pricing with the new cuts.
    pub objective: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub separation_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub separator: String,
    pub c_lp: f64,
    pub c_rcc: f64,
    pub c_star: Option<f64>,
    pub g_lp: Option<f64>,
    pub g_rcc: Option<f64>,
    /// `g_rcc / g_lp`; absent when the LP gap is zero or `c_star` unknown.
    pub ratio: Option<f64>,
    pub gap_zero: bool,
    pub rounds: usize,
    pub cuts: Vec<Vec<usize>>,
    pub round_trace: Vec<RoundRecord>,
    pub round_limit_hit: bool,
    /// Column generation is re-run after every round of cuts.
    pub repricing: bool,
    /// Every column generation run ended with a proof of optimality.
    pub certified: bool,
    pub initial: ColgenReport,
    pub repricing_runs: Vec<ColgenReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub separation_seconds: Option<f64>,
}

/// Grows a set from every customer, adding the customer that maximizes the
/// violation each step, and keeps the most violated prefix per seed.
pub fn separate_rcc_greedy(inst: &Instance, state: &MasterState) -> Vec<RccCut> {
    let support = state.support();
    let n = inst.n();
    let cap = inst.capacity();
    let mut routes_of: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (r, (route, _)) in support.iter().enumerate() {
        for &v in route.customers() {
            routes_of[v].push(r);
        }
    }
    let mut found: BTreeMap<Vec<usize>, RccCut> = BTreeMap::new();
    for seed in 1..=n {
        let mut inside = vec![false; n + 1];
        let mut touched = vec![false; support.len()];
        let (mut set, mut demand, mut lhs) = (Vec::new(), 0u64, 0.0);
        let mut best: Option<(f64, Vec<usize>)> = None;
        let mut next = Some(seed);
        while let Some(v) = next {
            inside[v] = true;
            set.push(v);
            demand += inst.demand(v);
            for &r in &routes_of[v] {
                if !touched[r] {
                    touched[r] = true;
                    lhs += support[r].1;
                }
            }
            let viol = demand.div_ceil(cap) as f64 - lhs;
            if viol > VIOLATION_TOL && best.as_ref().is_none_or(|(b, _)| viol > *b) {
                best = Some((viol, set.clone()));
            }
            next = None;
            let mut top = f64::NEG_INFINITY;
            for j in (1..=n).filter(|&j| !inside[j]) {
                let gain: f64 = routes_of[j]
                    .iter()
                    .filter(|&&r| !touched[r])
                    .map(|&r| support[r].1)
                    .sum();
                let score = (demand + inst.demand(j)).div_ceil(cap) as f64 - lhs - gain;
                if score > top {
                    top = score;
                    next = Some(j);
                }
            }
        }
        if let Some((_, mut s)) = best {
            s.sort_unstable();
            if let Ok(cut) = RccCut::new(inst, s.iter().copied()) {
                found.entry(s).or_insert(cut);
            }
        }
    }
    found.into_values().collect()
}

/// The most violated capacity cut over all customer subsets, with its
/// violation, or `None` when every cut holds.
///
/// A zeta transform gives `g(T) = sum of y_r over support routes inside T`,
/// so the routes meeting `S` weigh `Y - g(V \ S)`. Subsets are walked in Gray
/// code order to update the demand in O(1).
pub fn separate_rcc_bruteforce(
    inst: &Instance,
    state: &MasterState,
) -> Result<Option<(RccCut, f64)>> {
    let n = inst.n();
    if n > BRUTE_FORCE_SEPARATION_LIMIT {
        return Err(Error::LimitExceeded {
            what: "customer count",
            value: n,
            limit: BRUTE_FORCE_SEPARATION_LIMIT,
            hint: "use the greedy or QUBO separator",
        });
    }
    let support = state.support();
    let full = 1usize << n;
    let mut g = vec![0.0f64; full];
    let mut total = 0.0;
    for (route, y) in &support {
        g[route.mask() as usize] += y;
        total += y;
    }
    for b in 0..n {
        let bit = 1usize << b;
        for s in 0..full {
            if s & bit != 0 {
                g[s] += g[s ^ bit];
            }
        }
    }
    let cap = inst.capacity();
    let (mut s, mut demand) = (0usize, 0u64);
    let mut best: Option<(f64, usize)> = None;
    for i in 1..full {
        let b = i.trailing_zeros() as usize;
        s ^= 1 << b;
        if s & (1 << b) != 0 {
            demand += inst.demand(b + 1);
        } else {
            demand -= inst.demand(b + 1);
        }
        let lhs = total - g[!s & (full - 1)];
        let viol = demand.div_ceil(cap) as f64 - lhs;
        if best.is_none_or(|(v, _)| viol > v) {
            best = Some((viol, s));
        }
    }
    match best {
        Some((viol, mask)) if viol > VIOLATION_TOL => {
            let cut = RccCut::new(inst, (0..n).filter(|b| mask >> b & 1 == 1).map(|b| b + 1))?;
            Ok(Some((cut, viol)))
        }
        _ => Ok(None),
    }
}

/// Samples the separation QUBO and keeps every distinct violated cut.
pub fn separate_rcc_qubo(
    inst: &Instance,
    state: &MasterState,
    sampler: &dyn Sampler,
    cfg: &SamplerConfig,
) -> Result<Vec<RccCut>> {
    let support = state.support();
    if support.is_empty() {
        return Ok(Vec::new());
    }
    // Weights can exceed 1 by solver noise.
    let clipped: Vec<(&Route, f64)> = support.iter().map(|&(r, y)| (r, y.min(1.0))).collect();
    let q = build_separation_qubo(inst, &clipped, SEPARATION_PENALTY)?;
    let VarLayout::Separation(lay) = q.layout() else {
        unreachable!("separation QUBO carries its layout")
    };
    let samples = sampler.sample(&q, cfg)?;
    let mut found: BTreeMap<Vec<usize>, RccCut> = BTreeMap::new();
    for s in &samples.entries {
        if let Some(cut) = decode_separation_sample(inst, lay, &s.x, &clipped) {
            found.entry(cut.set().to_vec()).or_insert(cut);
        }
    }
    Ok(found.into_values().collect())
}

fn separate(
    inst: &Instance,
    state: &MasterState,
    sep: Separator<'_>,
    cfg: &CutLoopConfig,
    round: usize,
) -> Result<Vec<RccCut>> {
    match sep {
        Separator::Greedy => Ok(separate_rcc_greedy(inst, state)),
        Separator::BruteForce => Ok(separate_rcc_bruteforce(inst, state)?
            .map(|(c, _)| c)
            .into_iter()
            .collect()),
        Separator::Qubo(sampler) => {
            let scfg = SamplerConfig {
                seed: cfg.sampler.seed.wrapping_add(round as u64),
                ..cfg.sampler.clone()
            };
            separate_rcc_qubo(inst, state, sampler, &scfg)
        }
    }
}

/// Column generation to optimality, then rounds of separation and
/// re-pricing until the separator finds nothing or the round limit is hit.
/// Returns the final master alongside the report.
pub fn run_cut_loop(
    gen: &mut ColumnGenerator<'_>,
    sep: Separator<'_>,
    cfg: &CutLoopConfig,
) -> Result<(SeparationReport, MasterState)> {
    let inst = gen.instance();
    let record_times = gen.config().record_times;
    let mut state = MasterState::init_singletons(inst);
    let initial = gen.run(&mut state)?;
    let c_lp = initial.c_mp;
    let c_star = reference(&inst.name).map(|e| e.c_star);
    let g_lp = c_star.map(|c| integrality_gap(c, c_lp));
    let gap_zero = g_lp.is_some_and(|g| g.abs() < GAP_ZERO_TOL);
    let ratio_at = |c: f64| match (c_star, g_lp) {
        (Some(cs), Some(g)) if !gap_zero => Some(integrality_gap(cs, c) / g),
        _ => None,
    };

    let mut certified = initial.certified;
    let mut report = SeparationReport {
        separator: sep.id(),
        c_lp,
        c_rcc: c_lp,
        c_star,
        g_lp,
        g_rcc: g_lp,
        ratio: ratio_at(c_lp),
        gap_zero,
        rounds: 0,
        cuts: Vec::new(),
        round_trace: Vec::new(),
        round_limit_hit: false,
        repricing: true,
        certified,
        initial,
        repricing_runs: Vec::new(),
        separation_seconds: None,
    };
    if gap_zero || !certified {
        return Ok((report, state));
    }

    let mut sep_seconds = 0.0;
    loop {
        let start = Instant::now();
        let cuts = separate(inst, &state, sep, cfg, report.rounds)?;
        let elapsed = start.elapsed().as_secs_f64();
        sep_seconds += elapsed;
        let mut added = Vec::new();
        for cut in cuts {
            let set = cut.set().to_vec();
            if state.add_cut(cut) {
                added.push(set);
            }
        }
        if added.is_empty() {
            break;
        }
        if report.rounds == cfg.max_rounds {
            report.round_limit_hit = true;
            break;
        }
        report.rounds += 1;
        let run = gen.run(&mut state)?;
        certified &= run.certified;
        info!(
            "round {}: {} cuts, bound {:.6}",
            report.rounds,
            added.len(),
            run.c_mp
        );
        report.round_trace.push(RoundRecord {
            cuts_added: added.len(),
            objective: run.c_mp,
            ratio: ratio_at(run.c_mp),
            separation_seconds: record_times.then_some(elapsed),
        });
        report.c_rcc = run.c_mp;
        report.cuts.extend(added);
        let stop = !run.certified;
        report.repricing_runs.push(run);
        if stop {
            break;
        }
    }
    report.g_rcc = c_star.map(|c| integrality_gap(c, report.c_rcc));
    report.ratio = ratio_at(report.c_rcc);
    report.certified = certified;
    report.separation_seconds = record_times.then_some(sep_seconds);
    Ok((report, state))
}
