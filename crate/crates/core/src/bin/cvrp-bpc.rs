use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::error;

use cvrp_bpc::driver::{
    run_benchmark, solve, write_csv, BenchJob, BenchRow, BenchmarkConfig, PricerKind,
    SeparatorKind, SolveOptions,
};
use cvrp_bpc::pricing_exact::PricingOptions;
use cvrp_bpc::sampler::SamplerConfig;
use cvrp_bpc::{parse_instance, Error, Instance};

#[derive(Parser)]
#[command(
    name = "cvrp-bpc",
    version,
    about = "Column generation and capacity cuts for the CVRP"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the master LP of one instance, optionally with capacity cuts.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "exact", value_parser = parse_pricer)]
        pricer: PricerKind,
        /// Sampler command for `--pricer plugin`; see the README for the protocol.
        #[arg(long)]
        plugin_cmd: Option<String>,
        #[arg(long, default_value = "none", value_parser = parse_separator)]
        separator: SeparatorKind,
        /// JSON report path.
        #[arg(long)]
        report: Option<PathBuf>,
        /// One-row CSV summary path.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also solve the set-cover IP over the generated columns.
        #[arg(long)]
        price_and_branch: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run a matrix of pricers and separators over several instances.
    Bench {
        #[arg(required = true)]
        instances: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "exact,sa", value_parser = parse_pricer)]
        pricers: Vec<PricerKind>,
        #[arg(long, value_delimiter = ',', default_value = "none", value_parser = parse_separator)]
        separators: Vec<SeparatorKind>,
        #[arg(long)]
        plugin_cmd: Option<String>,
        #[arg(long, default_value = "bench.csv")]
        csv: PathBuf,
        /// JSON run log with configuration and full reports.
        #[arg(long)]
        log: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5000)]
    reads: usize,
    #[arg(long, default_value_t = 1000)]
    sweeps: usize,
    /// Customer count up to which the dynamic-programming pricer always runs.
    #[arg(long, default_value_t = 20)]
    dp_limit: usize,
    /// Above the customer limit, the dynamic program still runs when it has at
    /// most this many states.
    #[arg(long, default_value_t = PricingOptions::default().dp_state_budget)]
    dp_state_budget: usize,
    /// Node budget of the branch-and-cut pricer.
    #[arg(long)]
    node_budget: Option<usize>,
    #[arg(long, default_value_t = 50)]
    max_rounds: usize,
    /// Record wall-clock times (reports are then no longer reproducible).
    #[arg(long)]
    timings: bool,
}

fn parse_pricer(s: &str) -> Result<PricerKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_separator(s: &str) -> Result<SeparatorKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Common {
    fn options(
        &self,
        pricer: PricerKind,
        separator: SeparatorKind,
        plugin_cmd: Option<String>,
    ) -> SolveOptions {
        let sampler = SamplerConfig {
            num_reads: self.reads,
            sweeps: self.sweeps,
            beta_range: None,
            seed: self.seed,
        };
        let mut opts = SolveOptions {
            pricer,
            plugin_cmd,
            separator,
            ..SolveOptions::default()
        };
        opts.colgen.pricing = PricingOptions {
            dp_limit: self.dp_limit,
            dp_state_budget: self.dp_state_budget,
            node_budget: self.node_budget,
            ..PricingOptions::default()
        };
        opts.colgen.sampler = sampler.clone();
        opts.colgen.record_times = self.timings;
        opts.cut_loop.max_rounds = self.max_rounds;
        opts.cut_loop.sampler = sampler;
        opts
    }
}

fn load(path: &Path) -> Result<Instance, Error> {
    let text = std::fs::read_to_string(path)?;
    parse_instance(&text)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

/// `Ok(false)` means the run finished without a proof or hit the round limit.
fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Solve {
            instance,
            pricer,
            plugin_cmd,
            separator,
            report,
            csv,
            price_and_branch,
            common,
        } => {
            let inst = load(&instance)?;
            let mut opts = common.options(pricer, separator, plugin_cmd);
            opts.price_and_branch = price_and_branch;
            let rep = solve(&inst, &opts)?;
            println!(
                "{}: c_mp = {:.4}, {} iterations, {} exact and {} heuristic pricing calls{}",
                rep.instance,
                rep.c_mp,
                rep.iterations,
                rep.exact_calls,
                rep.heuristic_calls,
                if rep.certified {
                    ""
                } else {
                    " (not certified)"
                }
            );
            if let Some(sep) = &rep.separation {
                match sep.ratio {
                    Some(r) => println!(
                        "cuts: {} in {} rounds, bound {:.4}, gap ratio {:.4}",
                        sep.cuts.len(),
                        sep.rounds,
                        sep.c_rcc,
                        r
                    ),
                    None if sep.gap_zero => println!("LP gap is zero; no separation needed"),
                    None => println!(
                        "cuts: {} in {} rounds, bound {:.4}",
                        sep.cuts.len(),
                        sep.rounds,
                        sep.c_rcc
                    ),
                }
            }
            if let Some(pb) = &rep.price_and_branch {
                println!(
                    "price-and-branch: cost {:.4} with {} routes",
                    pb.cost,
                    pb.routes.len()
                );
            }
            if let Some(path) = report {
                write_json(&path, &rep)?;
            }
            if let Some(path) = csv {
                write_csv(&[BenchRow::from_report(&rep, pricer)], &path)?;
            }
            Ok(rep.complete())
        }
        Command::Bench {
            instances,
            pricers,
            separators,
            plugin_cmd,
            csv,
            log,
            common,
        } => {
            let insts = instances
                .iter()
                .map(|p| load(p))
                .collect::<Result<Vec<_>, _>>()?;
            let jobs: Vec<BenchJob> = pricers
                .iter()
                .flat_map(|&pricer| {
                    separators
                        .iter()
                        .map(move |&separator| BenchJob { pricer, separator })
                })
                .collect();
            let cfg = BenchmarkConfig {
                solve: common.options(PricerKind::Exact, SeparatorKind::None, plugin_cmd),
            };
            let rows = run_benchmark(&insts, &jobs, &cfg, &csv, log.as_deref())?;
            for r in &rows {
                println!(
                    "{} {}/{}: c_mp = {:.4}, exact calls {}, heuristic calls {}",
                    r.instance, r.pricer, r.separator, r.c_mp, r.exact_calls, r.heuristic_calls
                );
            }
            Ok(rows.iter().all(|r| r.certified))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Error::BudgetExhausted(msg)) => {
            error!("{msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
