//! Samplers for QUBO models: seeded simulated annealing, an external-command
//! adapter and an exhaustive oracle.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::process::{Command, Stdio};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubo::Qubo;

/// Largest model `brute_force_min` enumerates.
pub const BRUTE_FORCE_LIMIT: usize = 26;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub num_reads: usize,
    pub sweeps: usize,
    /// `(hot, cold)` inverse temperatures; derived from the model when unset.
    pub beta_range: Option<(f64, f64)>,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            num_reads: 5000,
            sweeps: 1000,
            beta_range: None,
            seed: 0,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_reads == 0 || self.sweeps == 0 {
            return Err(Error::InvalidArgument(
                "reads and sweeps must be positive".into(),
            ));
        }
        if let Some((hot, cold)) = self.beta_range {
            if !(hot > 0.0 && hot < cold && cold.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "bad beta range ({hot}, {cold})"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub x: Vec<bool>,
    pub energy: f64,
    pub count: usize,
}

#[derive(Serialize, Deserialize)]
struct SampleLine {
    x: String,
    energy: f64,
    count: usize,
}

/// Distinct assignments sorted by energy, then by bit string.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub entries: Vec<Sample>,
    pub config: SamplerConfig,
}

pub fn bitstring(x: &[bool]) -> String {
    x.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

impl SampleSet {
    /// Groups raw reads and re-evaluates every energy on `q`.
    pub fn from_reads(q: &Qubo, reads: Vec<Vec<bool>>, config: SamplerConfig) -> Self {
        let mut groups: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
        for x in reads {
            *groups.entry(x).or_insert(0) += 1;
        }
        let mut entries: Vec<Sample> = groups
            .into_iter()
            .map(|(x, count)| Sample {
                energy: q.energy(&x),
                x,
                count,
            })
            .collect();
        // BTreeMap order is bit-string order, so a stable sort finishes the job.
        entries.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        SampleSet { entries, config }
    }

    pub fn best(&self) -> Option<&Sample> {
        self.entries.first()
    }

    pub fn total_count(&self) -> usize {
        self.entries.iter().map(|s| s.count).sum()
    }

    /// One `{"x": ..., "energy": ..., "count": ...}` object per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for s in &self.entries {
            let line = SampleLine {
                x: bitstring(&s.x),
                energy: s.energy,
                count: s.count,
            };
            out.push_str(&serde_json::to_string(&line).expect("plain struct serializes"));
            out.push('\n');
        }
        out
    }

    /// Reads samples for `q`, trusting only the bit strings and counts.
    pub fn from_json_lines(q: &Qubo, text: &str, config: SamplerConfig) -> Result<Self> {
        let mut reads = Vec::new();
        for (no, line) in text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
        {
            let parsed: SampleLine = serde_json::from_str(line)?;
            let x = parse_bits(&parsed.x)
                .filter(|x| x.len() == q.num_vars())
                .ok_or_else(|| Error::Sampler(format!("line {}: bad bit string", no + 1)))?;
            reads.extend(std::iter::repeat_n(x, parsed.count));
        }
        Ok(SampleSet::from_reads(q, reads, config))
    }
}

/// Anything that turns a QUBO into samples, e.g. an annealer or a remote
/// device adapter.
pub trait Sampler: Send + Sync {
    fn name(&self) -> &str;
    fn sample(&self, q: &Qubo, cfg: &SamplerConfig) -> Result<SampleSet>;
}

/// Compressed rows of the symmetric coupling matrix.
struct Couplings {
    linear: Vec<f64>,
    start: Vec<usize>,
    nbr: Vec<usize>,
    weight: Vec<f64>,
}

impl Couplings {
    fn new(q: &Qubo) -> Self {
        let n = q.num_vars();
        let mut linear = vec![0.0; n];
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for ((i, j), v) in q.coeffs() {
            if i == j {
                linear[i] = v;
            } else {
                rows[i].push((j, v));
                rows[j].push((i, v));
            }
        }
        let mut start = vec![0];
        let mut nbr = Vec::new();
        let mut weight = Vec::new();
        for row in rows {
            for (j, v) in row {
                nbr.push(j);
                weight.push(v);
            }
            start.push(nbr.len());
        }
        Couplings {
            linear,
            start,
            nbr,
            weight,
        }
    }

    fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.start[i]..self.start[i + 1];
        self.nbr[r.clone()]
            .iter()
            .copied()
            .zip(self.weight[r].iter().copied())
    }

    /// `sum_j q_ij x_j` over off-diagonal entries.
    fn fields(&self, x: &[bool]) -> Vec<f64> {
        (0..self.linear.len())
            .map(|i| self.row(i).filter(|&(j, _)| x[j]).map(|(_, w)| w).sum())
            .collect()
    }

    fn flip(&self, i: usize, x: &mut [bool], field: &mut [f64]) {
        x[i] = !x[i];
        let sign = if x[i] { 1.0 } else { -1.0 };
        for (j, w) in self.row(i) {
            field[j] += sign * w;
        }
    }

    /// Energy change of flipping bit `i`.
    fn delta(&self, i: usize, x: &[bool], field: &[f64]) -> f64 {
        let d = self.linear[i] + field[i];
        if x[i] {
            -d
        } else {
            d
        }
    }
}

/// Default inverse temperatures: `ln 2` over the largest single-flip change
/// and `ln 100` over the smallest nonzero coefficient.
pub fn default_beta_range(q: &Qubo) -> (f64, f64) {
    let n = q.num_vars();
    let mut row_abs = vec![0.0; n];
    let mut min_abs = f64::INFINITY;
    for ((i, j), v) in q.coeffs() {
        let a = v.abs();
        row_abs[i] += a;
        if i != j {
            row_abs[j] += a;
        }
        min_abs = min_abs.min(a);
    }
    let max_delta = row_abs.iter().copied().fold(0.0, f64::max);
    if max_delta == 0.0 {
        return (0.1, 1.0);
    }
    (2f64.ln() / max_delta, 100f64.ln() / min_abs)
}

/// Single-flip Metropolis annealing with a geometric inverse-temperature
/// schedule. Read `r` draws from stream `r` of a ChaCha8 generator seeded
/// with the configured seed, so results do not depend on scheduling.
#[derive(Debug, Clone, Copy)]
pub struct SimulatedAnnealer {
    /// Run reads on the rayon pool. Ignored without the `parallel` feature.
    pub parallel: bool,
}

impl Default for SimulatedAnnealer {
    fn default() -> Self {
        SimulatedAnnealer { parallel: true }
    }
}

impl SimulatedAnnealer {
    pub fn sequential() -> Self {
        SimulatedAnnealer { parallel: false }
    }

    fn read(c: &Couplings, betas: &[f64], seed: u64, read: usize) -> Vec<bool> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(read as u64);
        let n = c.linear.len();
        let mut x: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let mut field = c.fields(&x);
        for &beta in betas {
            for i in 0..n {
                let d = c.delta(i, &x, &field);
                if d <= 0.0 || rng.gen::<f64>() < (-beta * d).exp() {
                    c.flip(i, &mut x, &mut field);
                }
            }
        }
        x
    }
}

fn schedule(hot: f64, cold: f64, sweeps: usize) -> Vec<f64> {
    if sweeps == 1 {
        return vec![cold];
    }
    let ratio = (cold / hot).powf(1.0 / (sweeps - 1) as f64);
    (0..sweeps).map(|s| hot * ratio.powi(s as i32)).collect()
}

impl Sampler for SimulatedAnnealer {
    fn name(&self) -> &str {
        "simulated-annealing"
    }

    fn sample(&self, q: &Qubo, cfg: &SamplerConfig) -> Result<SampleSet> {
        cfg.validate()?;
        if q.num_vars() == 0 {
            return Err(Error::InvalidArgument(
                "cannot sample an empty model".into(),
            ));
        }
        let c = Couplings::new(q);
        let (hot, cold) = cfg.beta_range.unwrap_or_else(|| default_beta_range(q));
        let betas = schedule(hot, cold, cfg.sweeps);
        let run = |r: usize| Self::read(&c, &betas, cfg.seed, r);
        #[cfg(feature = "parallel")]
        let reads: Vec<Vec<bool>> = if self.parallel {
            use rayon::prelude::*;
            (0..cfg.num_reads).into_par_iter().map(run).collect()
        } else {
            (0..cfg.num_reads).map(run).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let reads: Vec<Vec<bool>> = (0..cfg.num_reads).map(run).collect();
        Ok(SampleSet::from_reads(q, reads, cfg.clone()))
    }
}

/// Exact minimum by Gray-code enumeration with incremental energies.
///
/// Ties keep the first assignment visited, so the all-zeros vector wins
/// whenever it is optimal.
pub fn brute_force_min(q: &Qubo) -> Result<(Vec<bool>, f64)> {
    let n = q.num_vars();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::LimitExceeded {
            what: "variable count",
            value: n,
            limit: BRUTE_FORCE_LIMIT,
            hint: "use a heuristic sampler",
        });
    }
    let c = Couplings::new(q);
    let mut x = vec![false; n];
    let mut field = vec![0.0; n];
    let mut energy = q.offset();
    let mut best = (x.clone(), energy);
    let tol = 1e-12
        * (1.0
            + c.linear
                .iter()
                .chain(&c.weight)
                .map(|v| v.abs())
                .sum::<f64>());
    for step in 1u64..(1u64 << n) {
        let i = step.trailing_zeros() as usize;
        energy += c.delta(i, &x, &field);
        c.flip(i, &mut x, &mut field);
        if step % 1024 == 0 {
            // Resynchronize to keep rounding drift out of comparisons.
            field = c.fields(&x);
            energy = q.energy(&x);
        }
        if energy < best.1 - tol {
            let exact = q.energy(&x);
            if exact < best.1 {
                best = (x.clone(), exact);
            }
        }
    }
    Ok(best)
}

/// Runs an external program per call. It receives the model in the QUBO text
/// format on stdin and `SAMPLER_READS`, `SAMPLER_SWEEPS` and `SAMPLER_SEED` in
/// its environment, and must print JSON-lines samples on stdout.
#[derive(Debug, Clone)]
pub struct ExternalCommandSampler {
    pub program: String,
    pub args: Vec<String>,
}

impl ExternalCommandSampler {
    /// Splits a command line on whitespace.
    pub fn from_command_line(cmd: &str) -> Result<Self> {
        let mut parts = cmd.split_whitespace().map(String::from);
        let program = parts
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty sampler command".into()))?;
        Ok(ExternalCommandSampler {
            program,
            args: parts.collect(),
        })
    }
}

impl Sampler for ExternalCommandSampler {
    fn name(&self) -> &str {
        "external-command"
    }

    fn sample(&self, q: &Qubo, cfg: &SamplerConfig) -> Result<SampleSet> {
        cfg.validate()?;
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .env("SAMPLER_READS", cfg.num_reads.to_string())
            .env("SAMPLER_SWEEPS", cfg.sweeps.to_string())
            .env("SAMPLER_SEED", cfg.seed.to_string())
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::Sampler(format!("cannot start `{}`: {e}", self.program)))?;
        let text = q.to_text();
        {
            let mut stdin = child.stdin.take().expect("stdin is piped");
            stdin.write_all(text.as_bytes())?;
        }
        let out = child.wait_with_output()?;
        if !out.status.success() {
            return Err(Error::Sampler(format!(
                "`{}` exited with {}",
                self.program, out.status
            )));
        }
        let stdout = String::from_utf8(out.stdout).map_err(|e| Error::Sampler(e.to_string()))?;
        let set = SampleSet::from_json_lines(q, &stdout, cfg.clone())?;
        if set.entries.is_empty() {
            return Err(Error::Sampler(format!(
                "`{}` returned no samples",
                self.program
            )));
        }
        Ok(set)
    }
}
