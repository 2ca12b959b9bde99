use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{solve, SolveOptions, SolveReport};
use crate::error::{Error, Result};
use crate::instance::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PricerKind {
    Exact,
    Sa,
    Plugin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparatorKind {
    None,
    Greedy,
    Brute,
    Sa,
}

impl FromStr for PricerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(PricerKind::Exact),
            "sa" => Ok(PricerKind::Sa),
            "plugin" => Ok(PricerKind::Plugin),
            _ => Err(Error::InvalidArgument(format!(
                "unknown pricer `{s}` (exact, sa, plugin)"
            ))),
        }
    }
}

impl FromStr for SeparatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(SeparatorKind::None),
            "greedy" => Ok(SeparatorKind::Greedy),
            "brute" => Ok(SeparatorKind::Brute),
            "sa" => Ok(SeparatorKind::Sa),
            _ => Err(Error::InvalidArgument(format!(
                "unknown separator `{s}` (none, greedy, brute, sa)"
            ))),
        }
    }
}

impl fmt::Display for PricerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PricerKind::Exact => "exact",
            PricerKind::Sa => "sa",
            PricerKind::Plugin => "plugin",
        })
    }
}

impl fmt::Display for SeparatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeparatorKind::None => "none",
            SeparatorKind::Greedy => "greedy",
            SeparatorKind::Brute => "brute",
            SeparatorKind::Sa => "sa",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchJob {
    pub pricer: PricerKind,
    pub separator: SeparatorKind,
}

/// Shared settings; each job overrides the pricer and separator.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BenchmarkConfig {
    pub solve: SolveOptions,
}

/// One CSV line. Time columns stay empty unless times are recorded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub pricer: PricerKind,
    pub separator: SeparatorKind,
    pub c_mp: f64,
    pub reference_c_mp: Option<f64>,
    pub certified: bool,
    pub iterations: usize,
    pub exact_calls: usize,
    pub heuristic_calls: usize,
    pub mean_pricing_seconds: Option<f64>,
    pub sampler_seconds: Option<f64>,
    pub cuts: usize,
    pub rounds: usize,
    pub g_lp: Option<f64>,
    pub g_rcc: Option<f64>,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
struct RunLog<'a> {
    config: &'a BenchmarkConfig,
    runs: Vec<RunEntry<'a>>,
}

#[derive(Debug, Clone, Serialize)]
struct RunEntry<'a> {
    job: BenchJob,
    report: &'a SolveReport,
}

fn jobs_of<'a>(pairs: &'a [(&Instance, BenchJob)]) -> impl Iterator<Item = BenchJob> + 'a {
    pairs.iter().map(|&(_, j)| j)
}

impl BenchRow {
    pub fn from_report(report: &SolveReport, pricer: PricerKind) -> Self {
        let sep = report.separation.as_ref();
        let calls = report.colgen.calls.len()
            + sep.map_or(0, |s| s.repricing_runs.iter().map(|r| r.calls.len()).sum());
        BenchRow {
            instance: report.instance.clone(),
            n: report.n,
            pricer,
            separator: report.separator,
            c_mp: report.c_mp,
            reference_c_mp: report.reference_c_mp,
            certified: report.complete(),
            iterations: report.iterations,
            exact_calls: report.exact_calls,
            heuristic_calls: report.heuristic_calls,
            mean_pricing_seconds: report.times.pricing.map(|t| t / calls.max(1) as f64),
            sampler_seconds: report.times.sampler,
            cuts: report.cuts.len(),
            rounds: sep.map_or(0, |s| s.rounds),
            g_lp: sep.and_then(|s| s.g_lp),
            g_rcc: sep.and_then(|s| s.g_rcc),
            ratio: sep.and_then(|s| s.ratio),
        }
    }
}

/// Writes rows with a header; an empty slice gives the header alone.
pub fn write_csv(rows: &[BenchRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    if rows.is_empty() {
        // serde only emits the header together with the first record.
        w.write_record(BENCH_HEADER).map_err(csv_error)?;
    }
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Runs every job on every instance, writes one CSV row per pair and a JSON
/// log holding the configuration and full reports for replay.
///
/// Pairs run in parallel with the `parallel` feature; output order is
/// instance-major regardless.
pub fn run_benchmark(
    instances: &[Instance],
    jobs: &[BenchJob],
    cfg: &BenchmarkConfig,
    csv_path: &Path,
    json_path: Option<&Path>,
) -> Result<Vec<BenchRow>> {
    let pairs: Vec<(&Instance, BenchJob)> = instances
        .iter()
        .flat_map(|inst| jobs.iter().map(move |&j| (inst, j)))
        .collect();
    let work = |&(inst, job): &(&Instance, BenchJob)| {
        let opts = SolveOptions {
            pricer: job.pricer,
            separator: job.separator,
            ..cfg.solve.clone()
        };
        solve(inst, &opts)
    };
    #[cfg(feature = "parallel")]
    let reports: Vec<Result<SolveReport>> = {
        use rayon::prelude::*;
        pairs.par_iter().map(work).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let reports: Vec<Result<SolveReport>> = pairs.iter().map(work).collect();
    let reports: Vec<SolveReport> = reports.into_iter().collect::<Result<_>>()?;

    let rows: Vec<BenchRow> = pairs
        .iter()
        .zip(&reports)
        .map(|(&(_, job), r)| BenchRow::from_report(r, job.pricer))
        .collect();
    write_csv(&rows, csv_path)?;

    if let Some(path) = json_path {
        let log = RunLog {
            config: cfg,
            runs: jobs_of(&pairs)
                .zip(&reports)
                .map(|(job, report)| RunEntry { job, report })
                .collect(),
        };
        std::fs::write(path, serde_json::to_string_pretty(&log)? + "\n")?;
    }
    Ok(rows)
}

const BENCH_HEADER: [&str; 17] = [
    "instance",
    "n",
    "pricer",
    "separator",
    "c_mp",
    "reference_c_mp",
    "certified",
    "iterations",
    "exact_calls",
    "heuristic_calls",
    "mean_pricing_seconds",
    "sampler_seconds",
    "cuts",
    "rounds",
    "g_lp",
    "g_rcc",
    "ratio",
];

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidArgument(format!("csv output: {other:?}")),
    }
}
