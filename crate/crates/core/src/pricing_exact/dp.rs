use super::{PricingOptions, PricingResult, RoutePool};
use crate::error::{Error, Result};
use crate::instance::{customer_mask, Instance};
use crate::master::{Duals, RccCut, NEGATIVE_RC};

const NO_STATE: u32 = u32::MAX;
const FROM_DEPOT: u8 = u8::MAX;
/// The subset index is a dense table over all `2^n` masks.
const DENSE_INDEX_LIMIT: usize = 24;

/// Number of `(subset, last customer)` states the dynamic program would
/// allocate, or `None` when `n` is too large to index densely.
pub fn dp_state_count(inst: &Instance) -> Option<usize> {
    let n = inst.n();
    if n > DENSE_INDEX_LIMIT {
        return None;
    }
    let mut loads = vec![0u64];
    for v in inst.customers() {
        let d = inst.demand(v);
        let extra: Vec<u64> = loads
            .iter()
            .map(|l| l + d)
            .filter(|&l| l <= inst.capacity())
            .collect();
        loads.extend(extra);
    }
    Some((loads.len() - 1) * n)
}

/// Whether `price_dp` accepts the instance under `opts`.
pub fn dp_applicable(inst: &Instance, opts: &PricingOptions) -> bool {
    inst.n() <= opts.dp_limit.min(DENSE_INDEX_LIMIT)
        || dp_state_count(inst).is_some_and(|s| s <= opts.dp_state_budget)
}

/// Held-Karp over capacity-feasible customer subsets.
///
/// `f[S][v]` is the cheapest path from the depot through exactly `S` ending at
/// `v`, with each customer's price subtracted on arrival. Cut duals depend only
/// on the visited set and are charged when the route is closed.
pub fn price_dp(
    inst: &Instance,
    duals: &Duals,
    cuts: &[RccCut],
    opts: &PricingOptions,
) -> Result<PricingResult> {
    let n = inst.n();
    if !dp_applicable(inst, opts) {
        return Err(Error::LimitExceeded {
            what: "customer count",
            value: n,
            limit: opts.dp_limit.min(DENSE_INDEX_LIMIT),
            hint: "use the branch-and-cut pricer",
        });
    }
    let cap = inst.capacity();
    let full = 1usize << n;

    // Index the capacity-feasible subsets in increasing mask order, so every
    // subset is indexed after all of its subsets.
    let mut index = vec![NO_STATE; full];
    let mut load = vec![0u64; full];
    let mut subsets: Vec<usize> = Vec::new();
    index[0] = 0;
    subsets.push(0);
    for s in 1..full {
        let low = s.trailing_zeros() as usize;
        load[s] = load[s & (s - 1)] + inst.demand(low + 1);
        if load[s] <= cap {
            index[s] = subsets.len() as u32;
            subsets.push(s);
        }
    }

    let mut f = vec![f64::INFINITY; subsets.len() * n];
    let mut pred = vec![FROM_DEPOT; subsets.len() * n];
    let arrive = |u: usize, v: usize| inst.dist(u, v) - duals.pi[v];
    for v in 0..n {
        let k = index[1 << v];
        if k != NO_STATE {
            f[k as usize * n + v] = arrive(0, v + 1);
        }
    }
    for (k, &s) in subsets.iter().enumerate().skip(1) {
        for last in 0..n {
            let here = f[k * n + last];
            if here == f64::INFINITY {
                continue;
            }
            for next in 0..n {
                let bit = 1usize << next;
                if s & bit != 0 {
                    continue;
                }
                let t = index[s | bit];
                if t == NO_STATE {
                    continue;
                }
                let cand = here + arrive(last + 1, next + 1);
                let slot = t as usize * n + next;
                if cand < f[slot] {
                    f[slot] = cand;
                    pred[slot] = last as u8;
                }
            }
        }
    }

    let cut_masks: Vec<(usize, f64)> = cuts
        .iter()
        .zip(&duals.beta)
        .filter(|(_, &b)| b != 0.0)
        .map(|(c, &b)| (customer_mask(c.set()) as usize, b))
        .collect();

    // Best closing customer per subset.
    let mut best: Option<(f64, usize, usize)> = None;
    let mut negatives: Vec<(f64, usize, usize)> = Vec::new();
    for (k, &s) in subsets.iter().enumerate().skip(1) {
        let mut close: Option<(f64, usize)> = None;
        for last in 0..n {
            let v = f[k * n + last];
            if v == f64::INFINITY {
                continue;
            }
            let total = v + inst.dist(last + 1, 0);
            if close.is_none_or(|(c, _)| total < c) {
                close = Some((total, last));
            }
        }
        let Some((mut rc, last)) = close else {
            continue;
        };
        for &(m, b) in &cut_masks {
            if s & m != 0 {
                rc -= b;
            }
        }
        if best.is_none_or(|(b, _, _)| rc < b) {
            best = Some((rc, k, last));
        }
        if rc < NEGATIVE_RC {
            negatives.push((rc, k, last));
        }
    }

    let walk = |k: usize, last: usize| -> Vec<usize> {
        let mut seq = Vec::new();
        let (mut s, mut v) = (subsets[k], last);
        loop {
            seq.push(v + 1);
            let p = pred[index[s] as usize * n + v];
            s &= !(1 << v);
            if p == FROM_DEPOT {
                break;
            }
            v = p as usize;
        }
        seq.reverse();
        seq
    };

    negatives.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    if opts.max_negatives > 0 {
        negatives.truncate(opts.max_negatives);
    }
    let mut pool = RoutePool::default();
    let (_, bk, bl) = best.expect("singletons are always feasible");
    pool.offer_seq(inst, walk(bk, bl), duals, cuts);
    for &(_, k, last) in &negatives {
        pool.offer_seq(inst, walk(k, last), duals, cuts);
    }
    let (min_rc, route) = pool.best().expect("pool holds the best route");
    Ok(PricingResult {
        best_route: route.clone(),
        min_reduced_cost: min_rc,
        negatives: pool.negatives(opts.max_negatives),
        proven: true,
    })
}
