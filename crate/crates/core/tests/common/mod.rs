//! Brute-force oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cvrp_bpc::lp::{LinearProgram, Row, Sense};
use cvrp_bpc::master::{Duals, RccCut};
use cvrp_bpc::{parse_instance, Instance, Route};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Looks for `<name>.vrp` in `CVRP_INSTANCE_DIR`, then in the bundled data.
pub fn instance_path(name: &str) -> Option<PathBuf> {
    let mut dirs = Vec::new();
    if let Ok(d) = std::env::var("CVRP_INSTANCE_DIR") {
        dirs.push(PathBuf::from(d));
    }
    dirs.push(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"));
    dirs.into_iter()
        .flat_map(|d| [d.join(format!("{name}.vrp")), d.join(name)])
        .find(|p| p.is_file())
}

pub fn load_instance(name: &str) -> Option<Instance> {
    let path = instance_path(name)?;
    let text = std::fs::read_to_string(path).ok()?;
    Some(parse_instance(&text).expect("bundled instance parses"))
}

/// Minimum of a bounded LP over all basic solutions: every choice of `n`
/// tight constraints among rows and bounds is solved as a square system.
/// `None` when no vertex is feasible.
pub fn lp_vertex_min(lp: &LinearProgram) -> Option<f64> {
    let n = lp.num_vars();
    // Each constraint as (a, b): a.x <= b or a.x = b.
    let mut cons: Vec<(Vec<f64>, f64, bool)> = Vec::new();
    for r in &lp.rows {
        let mut a = vec![0.0; n];
        for &(j, v) in &r.coeffs {
            a[j] += v;
        }
        match r.sense {
            Sense::Le => cons.push((a, r.rhs, false)),
            Sense::Ge => cons.push((a.iter().map(|v| -v).collect(), -r.rhs, false)),
            Sense::Eq => cons.push((a, r.rhs, true)),
        }
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cons.push((e.clone(), lp.upper[j], false));
        e[j] = -1.0;
        cons.push((e, -lp.lower[j], false));
    }
    let mut best: Option<f64> = None;
    let m = cons.len();
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        let a = DMatrix::from_fn(n, n, |i, j| cons[pick[i]].0[j]);
        let b = DVector::from_fn(n, |i, _| cons[pick[i]].1);
        if let Some(x) = a.lu().solve(&b) {
            let feasible = cons.iter().all(|(row, rhs, eq)| {
                let act: f64 = row.iter().zip(x.iter()).map(|(p, q)| p * q).sum();
                if *eq {
                    (act - rhs).abs() <= 1e-7
                } else {
                    act <= rhs + 1e-7
                }
            });
            if feasible {
                let obj: f64 = lp.objective.iter().zip(x.iter()).map(|(c, v)| c * v).sum();
                best = Some(best.map_or(obj, |b| b.min(obj)));
            }
        }
        // Next n-combination of 0..m.
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] < m - n + i {
                pick[i] += 1;
                for k in i + 1..n {
                    pick[k] = pick[k - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A random LP with box bounds, mixed row senses and small integer data.
pub fn random_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let n = rng.gen_range(2..=4);
    let rows = rng.gen_range(1..=4);
    let mut lp = LinearProgram::new((0..n).map(|_| rng.gen_range(-5..=5) as f64).collect());
    for j in 0..n {
        let lo = rng.gen_range(-2..=1) as f64;
        lp.set_bounds(j, lo, lo + rng.gen_range(1..=6) as f64);
    }
    for _ in 0..rows {
        let coeffs: Vec<f64> = (0..n).map(|_| rng.gen_range(-4..=4) as f64).collect();
        let sense = match rng.gen_range(0..5) {
            0 => Sense::Eq,
            1 | 2 => Sense::Ge,
            _ => Sense::Le,
        };
        lp.add_row(Row::dense(&coeffs, sense, rng.gen_range(-6..=6) as f64));
    }
    lp
}

/// Cheapest route over every ordering of every capacity-feasible subset.
pub fn pricing_by_permutations(inst: &Instance, duals: &Duals, cuts: &[RccCut]) -> f64 {
    let n = inst.n();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) {
        let set: Vec<usize> = (0..n)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| b + 1)
            .collect();
        if inst.set_demand(&set) > inst.capacity() {
            continue;
        }
        let mut perm = set.clone();
        permute(&mut perm, 0, &mut |seq| {
            let r = Route::new(inst, seq.to_vec()).expect("feasible subset");
            let rc = cvrp_bpc::master::reduced_cost(&r, duals, cuts);
            best = best.min(rc);
        });
    }
    best
}

fn permute(v: &mut [usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Minimum `s`-`t` cut over all vertex bipartitions.
pub fn min_cut_by_partitions(nv: usize, edges: &[(usize, usize, f64)], s: usize, t: usize) -> f64 {
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << nv) {
        let side = |v: usize| mask >> v & 1 == 1;
        if !side(s) || side(t) {
            continue;
        }
        let cut: f64 = edges
            .iter()
            .filter(|(u, v, _)| side(*u) != side(*v))
            .map(|e| e.2)
            .sum();
        best = best.min(cut);
    }
    best
}

/// A random weighted graph, possibly disconnected.
pub fn random_graph(rng: &mut ChaCha8Rng, nv: usize) -> Vec<(usize, usize, f64)> {
    let mut edges = Vec::new();
    for u in 0..nv {
        for v in u + 1..nv {
            if rng.gen_bool(0.45) {
                edges.push((u, v, rng.gen_range(1..=8) as f64 / 4.0));
            }
        }
    }
    edges
}

/// Random duals large enough that multi-customer routes become attractive.
pub fn random_duals(rng: &mut ChaCha8Rng, inst: &Instance, cuts: usize) -> Duals {
    let mut d = Duals::zero(inst.n(), cuts);
    for v in inst.customers() {
        d.pi[v] = rng.gen_range(0.0..2.2) * inst.dist(0, v);
    }
    for b in d.beta.iter_mut() {
        *b = rng.gen_range(0.0..20.0);
    }
    d
}
