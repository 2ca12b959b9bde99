//! Acceptance suite: one PASS or FAIL line per criterion.
//!
//! Benchmark instances are looked up as `<name>.vrp` in `CVRP_INSTANCE_DIR`
//! and then in `data/`. A criterion whose instances are missing prints FAIL
//! with the list of missing files and whatever could be evaluated, but does
//! not fail the test run; any evaluated mismatch does.

mod common;

use std::process::{Command, ExitCode};
use std::sync::Mutex;
use std::time::Instant;

use rand::Rng;

use common::*;
use cvrp_bpc::driver::{
    run_colgen, run_cut_loop, ColgenConfig, ColgenReport, ColumnGenerator, CutLoopConfig,
    PricingBackend, Separator, BRUTE_FORCE_SEPARATION_LIMIT, REFERENCE,
};
use cvrp_bpc::lp::{solve_lp, LpStatus};
use cvrp_bpc::master::{reduced_cost, Duals, MasterState};
use cvrp_bpc::pricing_exact::{min_cut, price_dp, PricingOptions};
use cvrp_bpc::qubo::{
    build_pricing_qubo, build_separation_qubo, decode_pricing_sample, decode_separation_sample,
    fractional_cut_objective, pricing_layout, pricing_penalty_bound, pricing_violation, Qubo,
    VarLayout,
};
use cvrp_bpc::sampler::{brute_force_min, SampleSet, Sampler, SamplerConfig, SimulatedAnnealer};
use cvrp_bpc::synthetic::random_euclidean;
use cvrp_bpc::Instance;

const TABLE: [(&str, f64); 7] = [
    ("E-n13-k4", 264.0),
    ("P-n16-k8", 441.0),
    ("P-n19-k2", 204.29),
    ("P-n20-k2", 212.0),
    ("E-n22-k4", 373.71),
    ("P-n22-k8", 589.67),
    ("P-n23-k8", 521.54),
];
const STRETCH: [(&str, f64); 3] = [
    ("E-n30-k3", 484.1),
    ("E-n31-k7", 1188.13),
    ("A-n32-k5", 758.43),
];
const STRETCH_NODE_BUDGET: usize = 200_000;

/// Sampler used for the heuristic backend here; the CLI defaults are larger.
fn acceptance_sampler(seed: u64) -> SamplerConfig {
    SamplerConfig {
        num_reads: 1000,
        sweeps: 50,
        beta_range: None,
        seed,
    }
}

/// Annealer that keeps a copy of every model it is asked to sample.
struct Recording {
    inner: SimulatedAnnealer,
    seen: Mutex<Vec<Qubo>>,
}

impl Sampler for Recording {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn sample(&self, q: &Qubo, cfg: &SamplerConfig) -> cvrp_bpc::Result<SampleSet> {
        self.seen.lock().unwrap().push(q.clone());
        self.inner.sample(q, cfg)
    }
}

enum Outcome {
    Pass(String),
    Fail(String),
    /// Could not be fully evaluated because instances are missing.
    Blocked(String),
}

struct Suite {
    failures: usize,
    blocked: usize,
}

impl Suite {
    fn report(&mut self, id: usize, title: &str, outcome: Outcome) {
        match outcome {
            Outcome::Pass(d) => println!("PASS [{id}] {title}: {d}"),
            Outcome::Fail(d) => {
                self.failures += 1;
                println!("FAIL [{id}] {title}: {d}");
            }
            Outcome::Blocked(d) => {
                self.blocked += 1;
                println!("FAIL [{id}] {title}: blocked, {d}");
            }
        }
    }
}

struct TableRun {
    name: &'static str,
    expected: f64,
    exact: ColgenReport,
    sa: ColgenReport,
}

fn missing_list(names: &[&str]) -> String {
    format!("missing {}", names.join(", "))
}

fn table_runs(sa: &Recording) -> (Vec<TableRun>, Vec<&'static str>) {
    let mut runs = Vec::new();
    let mut missing = Vec::new();
    for (name, expected) in TABLE {
        let Some(inst) = load_instance(name) else {
            missing.push(name);
            continue;
        };
        let cfg = ColgenConfig::default();
        let (_, exact) =
            run_colgen(&inst, PricingBackend::Exact, &cfg).expect("exact column generation");
        let cfg = ColgenConfig {
            sampler: acceptance_sampler(0),
            ..ColgenConfig::default()
        };
        let (_, sa) =
            run_colgen(&inst, PricingBackend::Qubo(sa), &cfg).expect("heuristic column generation");
        runs.push(TableRun {
            name,
            expected,
            exact,
            sa,
        });
    }
    (runs, missing)
}

fn criterion_1(runs: &[TableRun], missing: &[&str]) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for r in runs {
        let good = r.exact.certified && (r.exact.c_mp - r.expected).abs() <= 0.01;
        ok &= good;
        detail.push(format!(
            "{} {:.4} vs {}{}",
            r.name,
            r.exact.c_mp,
            r.expected,
            if good { "" } else { " (mismatch)" }
        ));
    }
    let detail = detail.join("; ");
    if !ok {
        Outcome::Fail(detail)
    } else if !missing.is_empty() {
        Outcome::Blocked(format!("{}; evaluated: {detail}", missing_list(missing)))
    } else {
        Outcome::Pass(detail)
    }
}

fn criterion_2() -> Outcome {
    let mut missing = Vec::new();
    let mut detail = Vec::new();
    let mut ok = true;
    for (name, expected) in STRETCH {
        let Some(inst) = load_instance(name) else {
            missing.push(name);
            continue;
        };
        let cfg = ColgenConfig {
            pricing: PricingOptions {
                dp_limit: 0,
                dp_state_budget: 0,
                node_budget: Some(STRETCH_NODE_BUDGET),
                ..PricingOptions::default()
            },
            ..ColgenConfig::default()
        };
        match run_colgen(&inst, PricingBackend::Exact, &cfg) {
            Ok((_, rep)) if rep.certified => {
                let good = (rep.c_mp - expected).abs() <= 0.01;
                ok &= good;
                detail.push(format!("{name} {:.4} vs {expected}", rep.c_mp));
            }
            Ok((_, rep)) => {
                ok = false;
                detail.push(format!("{name} budget-flagged at {:.4}", rep.c_mp));
            }
            Err(e) => {
                ok = false;
                detail.push(format!("{name}: {e}"));
            }
        }
    }
    let detail = detail.join("; ");
    if !ok {
        Outcome::Fail(detail)
    } else if !missing.is_empty() {
        Outcome::Blocked(format!(
            "{}{}",
            missing_list(&missing),
            if detail.is_empty() {
                String::new()
            } else {
                format!("; evaluated: {detail}")
            }
        ))
    } else {
        Outcome::Pass(detail)
    }
}

fn criterion_3(runs: &[TableRun], missing: &[&str]) -> Outcome {
    let mut ok = true;
    let detail: Vec<String> = runs
        .iter()
        .map(|r| {
            let diff = (r.sa.c_mp - r.exact.c_mp).abs();
            ok &= r.sa.certified && diff <= 1e-4;
            format!("{} |diff| {:.2e}", r.name, diff)
        })
        .collect();
    let detail = detail.join("; ");
    if !ok {
        Outcome::Fail(detail)
    } else if !missing.is_empty() {
        Outcome::Blocked(format!("{}; evaluated: {detail}", missing_list(missing)))
    } else {
        Outcome::Pass(detail)
    }
}

fn criterion_4(runs: &[TableRun], missing: &[&str]) -> Outcome {
    if runs.is_empty() {
        return Outcome::Blocked(missing_list(missing));
    }
    let mut no_big_increase = true;
    let mut detail = Vec::new();
    let mut total = 0.0;
    for r in runs {
        let reduction = 1.0 - r.sa.exact_calls as f64 / r.exact.exact_calls as f64;
        total += reduction;
        no_big_increase &= r.sa.exact_calls <= r.exact.exact_calls + 1;
        detail.push(format!(
            "{} {} -> {}",
            r.name, r.exact.exact_calls, r.sa.exact_calls
        ));
    }
    let mean = total / runs.len() as f64;
    let detail = format!(
        "mean reduction {:.1}% ({})",
        100.0 * mean,
        detail.join("; ")
    );
    if mean < 0.30 || !no_big_increase {
        Outcome::Fail(detail)
    } else if !missing.is_empty() {
        Outcome::Blocked(format!("{}; evaluated: {detail}", missing_list(missing)))
    } else {
        Outcome::Pass(detail)
    }
}

/// Duals for which some route has negative reduced cost, so the best route
/// is a nonempty one.
fn pricing_case(seed: u64) -> Option<(Instance, Duals, Qubo)> {
    let mut r = rng(seed);
    let n = r.gen_range(3..=5);
    let inst = random_euclidean(n, r.gen_range(3..=12), 4, seed);
    let mut duals = Duals::zero(n, 0);
    for v in inst.customers() {
        duals.pi[v] = r.gen_range(0.5..3.0) * inst.dist(0, v);
    }
    let penalty = pricing_penalty_bound(&inst, &duals.pi);
    if pricing_layout(&inst, penalty).num_vars() > 24 {
        return None;
    }
    let q = build_pricing_qubo(&inst, &duals.pi, penalty).ok()?;
    Some((inst, duals, q))
}

fn criterion_5(pricing_qubos: &mut Vec<(usize, Qubo)>) -> Outcome {
    let opts = PricingOptions::default();
    let mut checked = 0;
    let mut seed = 0;
    let mut worst: f64 = 0.0;
    while checked < 50 {
        seed += 1;
        let Some((inst, duals, q)) = pricing_case(seed) else {
            continue;
        };
        let dp = price_dp(&inst, &duals, &[], &opts).unwrap();
        if dp.min_reduced_cost >= -1e-6 {
            continue;
        }
        let VarLayout::Pricing(lay) = q.layout() else {
            unreachable!()
        };
        let (x, _) = brute_force_min(&q).unwrap();
        let Some(route) = decode_pricing_sample(&inst, lay, &x) else {
            return Outcome::Fail(format!(
                "seed {seed}: QUBO minimum does not decode to a route"
            ));
        };
        let diff = (reduced_cost(&route, &duals, &[]) - dp.min_reduced_cost).abs();
        worst = worst.max(diff);
        if diff > 1e-6 {
            return Outcome::Fail(format!(
                "seed {seed}: decoded reduced cost off by {diff:.3e}"
            ));
        }
        pricing_qubos.push((inst.n(), q));
        checked += 1;
    }

    // Every infeasible assignment costs more than every feasible one.
    let mut bound_cases = 0;
    for seed in 0..20 {
        let mut r = rng(1000 + seed);
        let inst = random_euclidean(3, r.gen_range(2..6), 3, seed);
        let mut pi = vec![0.0; 4];
        for v in 1..4 {
            pi[v] = r.gen_range(0.0..2.5) * inst.dist(0, v);
        }
        let q = build_pricing_qubo(&inst, &pi, pricing_penalty_bound(&inst, &pi)).unwrap();
        let VarLayout::Pricing(lay) = q.layout() else {
            unreachable!()
        };
        let nv = q.num_vars();
        let (mut feasible_max, mut infeasible_min) = (f64::NEG_INFINITY, f64::INFINITY);
        for s in 0u64..1 << nv {
            let x: Vec<bool> = (0..nv).map(|i| s >> i & 1 == 1).collect();
            let e = q.energy(&x);
            if pricing_violation(lay, &x) == 0 {
                feasible_max = feasible_max.max(e);
            } else {
                infeasible_min = infeasible_min.min(e);
            }
        }
        if infeasible_min <= feasible_max {
            return Outcome::Fail(format!(
                "n = 3 seed {seed}: infeasible energy {infeasible_min:.4} <= feasible {feasible_max:.4}"
            ));
        }
        pricing_qubos.push((3, q));
        bound_cases += 1;
    }
    Outcome::Pass(format!(
        "{checked} instances, max |rc - dp| {worst:.1e}; penalty bound exhaustive on {bound_cases} n = 3 models"
    ))
}

fn is_fractional(st: &MasterState) -> bool {
    st.support().iter().any(|(_, y)| *y < 1.0 - 1e-6)
}

fn criterion_6(separation_sizes: &mut Vec<(usize, usize, usize)>) -> Outcome {
    let mut states = 0;
    let mut cuts = 0;
    let mut seed = 0;
    while states < 50 && seed < 2000 {
        seed += 1;
        let mut r = rng(seed);
        let n = r.gen_range(4..=10);
        let inst = random_euclidean(n, r.gen_range(8..=25), 8, seed);
        let (st, _) = run_colgen(&inst, PricingBackend::Exact, &ColgenConfig::default()).unwrap();
        if !is_fractional(&st) {
            continue;
        }
        let support = st.support();
        let q = build_separation_qubo(&inst, &support, 2.0).unwrap();
        separation_sizes.push((n, q.num_vars(), q.num_quad()));
        let (x, e) = brute_force_min(&q).unwrap();
        let exhaustive = (1u32..1 << n)
            .map(|m| {
                let set: Vec<usize> = (0..n).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect();
                fractional_cut_objective(&inst, &support, &set)
            })
            .fold(0.0, f64::min);
        if (e - exhaustive).abs() > 1e-9 {
            return Outcome::Fail(format!(
                "seed {seed}: QUBO minimum {e} vs exhaustive {exhaustive}"
            ));
        }
        let VarLayout::Separation(lay) = q.layout() else {
            unreachable!()
        };
        let samples = SimulatedAnnealer::default()
            .sample(&q, &acceptance_sampler(seed))
            .unwrap();
        let candidates = std::iter::once(x).chain(samples.entries.into_iter().map(|s| s.x));
        for x in candidates {
            let Some(cut) = decode_separation_sample(&inst, lay, &x, &support) else {
                continue;
            };
            let lhs: f64 = support
                .iter()
                .filter(|(r, _)| r.customers().iter().any(|v| cut.set().contains(v)))
                .map(|(_, y)| y)
                .sum();
            let demand: u64 = cut.set().iter().map(|&v| inst.demand(v)).sum();
            let rhs = demand.div_ceil(inst.capacity()) as f64;
            if lhs >= rhs - 1e-6 {
                return Outcome::Fail(format!(
                    "seed {seed}: decoded cut {:?} is not violated",
                    cut.set()
                ));
            }
            cuts += 1;
        }
        states += 1;
    }
    if states < 50 {
        return Outcome::Fail(format!("only {states} fractional states found"));
    }
    Outcome::Pass(format!(
        "{states} fractional states, {cuts} decoded cuts all violated"
    ))
}

fn criterion_7(separation_sizes: &mut Vec<(usize, usize, usize)>) -> Outcome {
    let candidates: Vec<&str> = REFERENCE
        .iter()
        .filter(|e| {
            e.n <= 23 && (e.c_star - e.c_mp).abs() > 1e-6 && TABLE.iter().any(|(n, _)| *n == e.name)
        })
        .map(|e| e.name)
        .collect();
    let mut missing = Vec::new();
    let mut improved = 0;
    let mut monotone = true;
    let mut detail = Vec::new();
    for name in &candidates {
        let Some(inst) = load_instance(name) else {
            missing.push(*name);
            continue;
        };
        if inst.n() > BRUTE_FORCE_SEPARATION_LIMIT {
            continue;
        }
        let mut gen = ColumnGenerator::new(&inst, PricingBackend::Exact, ColgenConfig::default());
        let (rep, st) =
            run_cut_loop(&mut gen, Separator::BruteForce, &CutLoopConfig::default()).unwrap();
        let q = build_separation_qubo(&inst, &st.support(), 2.0).unwrap();
        separation_sizes.push((inst.n(), q.num_vars(), q.num_quad()));
        let ratios: Vec<f64> = std::iter::once(rep.g_lp.map(|_| 1.0))
            .chain(rep.round_trace.iter().map(|r| r.ratio))
            .flatten()
            .collect();
        monotone &= ratios.windows(2).all(|w| w[1] <= w[0] + 1e-9);
        let ratio = rep.ratio.unwrap_or(f64::NAN);
        if rep.certified && ratio < 1.0 {
            improved += 1;
        }
        let trace: Vec<String> = ratios.iter().map(|r| format!("{r:.4}")).collect();
        detail.push(format!(
            "{name} ratio {ratio:.4} after {} rounds ({})",
            rep.rounds,
            trace.join(" > ")
        ));
    }
    let detail = format!("{} improved; {}", improved, detail.join("; "));
    if !monotone {
        Outcome::Fail(format!("ratios not monotone: {detail}"))
    } else if improved >= 2 {
        Outcome::Pass(detail)
    } else if !missing.is_empty() {
        Outcome::Blocked(format!("{}; evaluated: {detail}", missing_list(&missing)))
    } else {
        Outcome::Fail(detail)
    }
}

fn criterion_8(
    pricing_qubos: &[(usize, Qubo)],
    separation_sizes: &[(usize, usize, usize)],
) -> Outcome {
    let mut pricing = 0;
    let check_pricing = |n: usize, q: &Qubo| -> Result<(), String> {
        let VarLayout::Pricing(lay) = q.layout() else {
            return Err("pricing QUBO without layout".into());
        };
        let span = lay.scaled_capacity - lay.scaled_min_demand + 1;
        let big_m = if span <= 1 {
            0
        } else {
            (span as f64).log2().ceil() as usize
        };
        if q.num_vars() != (n + 1) * lay.m + n + big_m {
            return Err(format!("n = {n}: {} variables", q.num_vars()));
        }
        if q.num_quad() > 3 * n.pow(3) + 20 * n.pow(2) {
            return Err(format!("n = {n}: {} quadratic terms", q.num_quad()));
        }
        Ok(())
    };
    for (n, q) in pricing_qubos {
        if let Err(e) = check_pricing(*n, q) {
            return Outcome::Fail(e);
        }
        pricing += 1;
    }
    // With one or two customers the demand bits alone can exceed the bound,
    // e.g. n = 1 and K = 100 give 30 > 23 quadratic terms; the sweep starts at 3.
    for seed in 0..100 {
        let mut r = rng(5000 + seed);
        let n = r.gen_range(3..=22);
        let cap = 10u64.pow(r.gen_range(1..=5));
        let inst = random_euclidean(n, cap, r.gen_range(1..=cap / 2), seed);
        let pi: Vec<f64> = (0..=n)
            .map(|v| if v == 0 { 0.0 } else { r.gen_range(0.0..50.0) })
            .collect();
        let q = build_pricing_qubo(&inst, &pi, pricing_penalty_bound(&inst, &pi)).unwrap();
        if let Err(e) = check_pricing(n, &q) {
            return Outcome::Fail(e);
        }
        pricing += 1;
    }
    for &(n, vars, quad) in separation_sizes {
        if vars > 2 * n || quad > n * n {
            return Outcome::Fail(format!(
                "separation n = {n}: {vars} variables, {quad} quadratic terms"
            ));
        }
    }
    Outcome::Pass(format!(
        "{pricing} pricing and {} separation models; the quadratic bound fails for n <= 2 with large capacity",
        separation_sizes.len()
    ))
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("rand-10.vrp");
    std::fs::write(&inst, random_euclidean(10, 25, 8, 42).to_tsplib()).unwrap();
    let inst = inst.to_str().unwrap().to_owned();
    let run = |tag: &str| -> Result<Vec<Vec<u8>>, String> {
        let p = |f: &str| {
            dir.path()
                .join(format!("{tag}-{f}"))
                .to_str()
                .unwrap()
                .to_owned()
        };
        let jobs: [Vec<String>; 2] = [
            vec![
                "solve".into(),
                inst.clone(),
                "--pricer".into(),
                "sa".into(),
                "--separator".into(),
                "sa".into(),
                "--reads".into(),
                "300".into(),
                "--sweeps".into(),
                "100".into(),
                "--seed".into(),
                "11".into(),
                "--report".into(),
                p("solve.json"),
                "--csv".into(),
                p("solve.csv"),
            ],
            vec![
                "bench".into(),
                inst.clone(),
                "--pricers".into(),
                "exact,sa".into(),
                "--separators".into(),
                "none,greedy".into(),
                "--reads".into(),
                "300".into(),
                "--sweeps".into(),
                "100".into(),
                "--csv".into(),
                p("bench.csv"),
                "--log".into(),
                p("bench.json"),
            ],
        ];
        for args in jobs {
            let out = Command::new(env!("CARGO_BIN_EXE_cvrp-bpc"))
                .args(&args)
                .output()
                .map_err(|e| e.to_string())?;
            if out.status.code() != Some(0) {
                return Err(format!(
                    "{:?}: {}",
                    out.status.code(),
                    String::from_utf8_lossy(&out.stderr)
                ));
            }
        }
        ["solve.json", "solve.csv", "bench.csv", "bench.json"]
            .iter()
            .map(|f| std::fs::read(p(f)).map_err(|e| e.to_string()))
            .collect()
    };
    match (run("a"), run("b")) {
        (Ok(a), Ok(b)) if a == b => {
            Outcome::Pass("solve and bench JSON and CSV byte-identical across two runs".into())
        }
        (Ok(_), Ok(_)) => Outcome::Fail("reports differ between runs".into()),
        (Err(e), _) | (_, Err(e)) => Outcome::Fail(e),
    }
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let mut r = rng(77);
    for trial in 0..25 {
        let n = r.gen_range(2..=7);
        let inst = random_euclidean(n, r.gen_range(5..=15), 5, 900 + trial);
        let duals = random_duals(&mut r, &inst, 0);
        let dp = price_dp(&inst, &duals, &[], &PricingOptions::default()).unwrap();
        let oracle = pricing_by_permutations(&inst, &duals, &[]);
        if (dp.min_reduced_cost - oracle).abs() > 1e-9 {
            return Outcome::Fail(format!(
                "pricing trial {trial}: {} vs {oracle}",
                dp.min_reduced_cost
            ));
        }
    }
    for trial in 0..25 {
        let nv = r.gen_range(2..=10);
        let edges = random_graph(&mut r, nv);
        let t = r.gen_range(1..nv);
        let cut = min_cut(nv, &edges, 0, t);
        let oracle = min_cut_by_partitions(nv, &edges, 0, t);
        if (cut.value - oracle).abs() > 1e-9 {
            return Outcome::Fail(format!("min cut trial {trial}: {} vs {oracle}", cut.value));
        }
    }
    let mut infeasible = 0;
    for trial in 0..25 {
        let lp = random_lp(&mut r);
        let sol = solve_lp(&lp).unwrap();
        let good = match lp_vertex_min(&lp) {
            Some(best) => sol.status == LpStatus::Optimal && (sol.objective - best).abs() <= 1e-6,
            None => {
                infeasible += 1;
                sol.status == LpStatus::Infeasible
            }
        };
        if !good {
            return Outcome::Fail(format!(
                "LP trial {trial}: {:?} {}",
                sol.status, sol.objective
            ));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 600.0 {
        return Outcome::Fail(format!("suite took {secs:.0} s"));
    }
    Outcome::Pass(format!(
        "25 pricing, 25 min-cut, 25 LP trials ({infeasible} infeasible) in {secs:.2} s"
    ))
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags; listing gets an empty answer.
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let start = Instant::now();
    let mut suite = Suite {
        failures: 0,
        blocked: 0,
    };
    let mut pricing_qubos = Vec::new();
    let mut separation_sizes = Vec::new();

    let recorder = Recording {
        inner: SimulatedAnnealer::default(),
        seen: Mutex::new(Vec::new()),
    };
    let (runs, missing) = table_runs(&recorder);
    for q in recorder.seen.into_inner().unwrap() {
        if let VarLayout::Pricing(lay) = q.layout() {
            pricing_qubos.push((lay.n, q));
        }
    }
    suite.report(
        1,
        "exact column generation reproduces the reference bounds",
        criterion_1(&runs, &missing),
    );
    suite.report(
        2,
        "stretch instances with branch-and-cut pricing",
        criterion_2(),
    );
    suite.report(
        3,
        "heuristic and exact backends agree",
        criterion_3(&runs, &missing),
    );
    suite.report(
        4,
        "heuristic pricing saves exact calls",
        criterion_4(&runs, &missing),
    );
    suite.report(
        5,
        "pricing QUBO minimum is the cheapest route",
        criterion_5(&mut pricing_qubos),
    );
    suite.report(
        6,
        "separation QUBO minimum is the fractional minimum",
        criterion_6(&mut separation_sizes),
    );
    suite.report(
        7,
        "capacity cuts close part of the gap",
        criterion_7(&mut separation_sizes),
    );
    suite.report(
        8,
        "model sizes",
        criterion_8(&pricing_qubos, &separation_sizes),
    );
    suite.report(9, "CLI reports are reproducible", criterion_9());
    suite.report(10, "oracle suite", criterion_10());

    println!(
        "{} evaluated failures, {} blocked, {:.1} s",
        suite.failures,
        suite.blocked,
        start.elapsed().as_secs_f64()
    );
    if suite.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
