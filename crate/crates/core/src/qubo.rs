//! QUBO models of the pricing and separation subproblems.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Instance, Route};
use crate::master::RccCut;

/// Penalty factor of the separation model.
pub const SEPARATION_PENALTY: f64 = 2.0;

/// Variable meaning of a pricing model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PricingLayout {
    pub n: usize,
    /// Time slots, the largest number of customers on a feasible route.
    pub m: usize,
    /// Bits of the demand encoding.
    pub big_m: usize,
    pub penalty: f64,
    pub scaled_capacity: u64,
    /// Scaled demands indexed by node (entry 0 is the depot).
    pub scaled_demands: Vec<u64>,
    pub scaled_min_demand: u64,
}

impl PricingLayout {
    /// Vertex `v` (0 is the depot) at slot `j` in `1..=m`.
    pub fn x(&self, v: usize, j: usize) -> usize {
        debug_assert!(v <= self.n && (1..=self.m).contains(&j));
        v * self.m + j - 1
    }

    pub fn y(&self, v: usize) -> usize {
        debug_assert!((1..=self.n).contains(&v));
        (self.n + 1) * self.m + v - 1
    }

    pub fn w(&self, k: usize) -> usize {
        debug_assert!(k < self.big_m);
        (self.n + 1) * self.m + self.n + k
    }

    pub fn num_vars(&self) -> usize {
        (self.n + 1) * self.m + self.n + self.big_m
    }

    /// Weight of bit `k` in the demand encoding.
    pub fn w_weight(&self, k: usize) -> u64 {
        if k + 1 < self.big_m {
            1 << k
        } else {
            self.scaled_capacity - self.scaled_min_demand + 1 - (1 << (self.big_m - 1))
        }
    }
}

/// Variable meaning of a separation model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationLayout {
    pub n: usize,
    /// Number of support routes; `w_r` follows the `n` customer bits.
    pub routes: usize,
    pub penalty: f64,
}

impl SeparationLayout {
    pub fn x(&self, customer: usize) -> usize {
        customer - 1
    }

    pub fn w(&self, route: usize) -> usize {
        self.n + route
    }

    pub fn num_vars(&self) -> usize {
        self.n + self.routes
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum VarLayout {
    Pricing(PricingLayout),
    Separation(SeparationLayout),
    /// No structure, e.g. a model read from text.
    Plain,
}

/// Upper-triangular quadratic form over binary variables plus a constant.
#[derive(Debug, Clone, PartialEq)]
pub struct Qubo {
    num_vars: usize,
    coeffs: BTreeMap<(usize, usize), f64>,
    offset: f64,
    layout: VarLayout,
}

/// Size measures of a model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuboStats {
    pub num_vars: usize,
    pub num_linear: usize,
    pub num_quad: usize,
    pub density: f64,
}

impl Qubo {
    pub fn new(num_vars: usize, offset: f64) -> Self {
        Qubo {
            num_vars,
            coeffs: BTreeMap::new(),
            offset,
            layout: VarLayout::Plain,
        }
    }

    /// Adds `value * x_i * x_j`; `i == j` is a linear term.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        assert!(
            i < self.num_vars && j < self.num_vars,
            "variable out of range"
        );
        if value == 0.0 {
            return;
        }
        let key = (i.min(j), i.max(j));
        let entry = self.coeffs.entry(key).or_insert(0.0);
        *entry += value;
        if *entry == 0.0 {
            self.coeffs.remove(&key);
        }
    }

    pub fn add_offset(&mut self, value: f64) {
        self.offset += value;
    }

    /// Adds `weight * (constant + sum a_i x_i)^2` with distinct indices.
    pub fn add_squared(&mut self, weight: f64, constant: f64, terms: &[(usize, f64)]) {
        self.offset += weight * constant * constant;
        for (k, &(i, a)) in terms.iter().enumerate() {
            self.add(i, i, weight * (2.0 * constant * a + a * a));
            for &(j, b) in &terms[k + 1..] {
                debug_assert_ne!(i, j, "repeated index in squared term");
                self.add(i, j, weight * 2.0 * a * b);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn layout(&self) -> &VarLayout {
        &self.layout
    }

    /// Nonzero entries `((i, j), value)` with `i <= j`, in key order.
    pub fn coeffs(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.coeffs
            .get(&(i.min(j), i.max(j)))
            .copied()
            .unwrap_or(0.0)
    }

    /// `x^T Q x + offset`.
    pub fn energy(&self, x: &[bool]) -> f64 {
        assert_eq!(x.len(), self.num_vars, "assignment length");
        self.offset
            + self
                .coeffs
                .iter()
                .filter(|((i, j), _)| x[*i] && x[*j])
                .map(|(_, v)| v)
                .sum::<f64>()
    }

    pub fn num_quad(&self) -> usize {
        self.coeffs.keys().filter(|(i, j)| i != j).count()
    }

    /// Fraction of nonzero off-diagonal entries.
    pub fn density(&self) -> f64 {
        let n = self.num_vars;
        if n < 2 {
            return 0.0;
        }
        self.num_quad() as f64 / (n * (n - 1) / 2) as f64
    }

    pub fn stats(&self) -> QuboStats {
        QuboStats {
            num_vars: self.num_vars,
            num_linear: self.coeffs.keys().filter(|(i, j)| i == j).count(),
            num_quad: self.num_quad(),
            density: self.density(),
        }
    }

    /// The model with every coefficient and the offset negated.
    pub fn negated(&self) -> Qubo {
        Qubo {
            num_vars: self.num_vars,
            coeffs: self.coeffs.iter().map(|(&k, &v)| (k, -v)).collect(),
            offset: -self.offset,
            layout: self.layout.clone(),
        }
    }

    /// Header `N offset`, then one `i j value` line per nonzero entry.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {:?}\n", self.num_vars, self.offset);
        for (&(i, j), v) in &self.coeffs {
            let _ = writeln!(s, "{i} {j} {v:?}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Qubo> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| crate::error::parse_err(1, "empty QUBO text"))?;
        let mut it = header.split_whitespace();
        let bad = |line: usize| crate::error::parse_err(line, "expected `N offset`");
        let num_vars: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad(1))?;
        let offset: f64 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad(1))?;
        let mut q = Qubo::new(num_vars, offset);
        for (no, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            let parsed = match f.as_slice() {
                [i, j, v] => match (i.parse::<usize>(), j.parse::<usize>(), v.parse::<f64>()) {
                    (Ok(i), Ok(j), Ok(v)) if i < num_vars && j < num_vars => Some((i, j, v)),
                    _ => None,
                },
                _ => None,
            };
            let (i, j, v) =
                parsed.ok_or_else(|| crate::error::parse_err(no + 1, "expected `i j value`"))?;
            q.add(i, j, v);
        }
        Ok(q)
    }
}

/// `t~_uv = t_uv - (pi_u + pi_v) / 2` off the diagonal, 0 on it.
pub fn modified_distances(inst: &Instance, pi: &[f64]) -> Vec<Vec<f64>> {
    let nodes = inst.num_nodes();
    (0..nodes)
        .map(|u| {
            (0..nodes)
                .map(|v| {
                    if u == v {
                        0.0
                    } else {
                        inst.dist(u, v) - (pi[u] + pi[v]) / 2.0
                    }
                })
                .collect()
        })
        .collect()
}

/// `(n + 1) max t + sum pi + 1`, strictly above the feasibility threshold.
pub fn pricing_penalty_bound(inst: &Instance, pi: &[f64]) -> f64 {
    (inst.n() + 1) as f64 * inst.max_dist() + pi[1..].iter().sum::<f64>() + 1.0
}

fn ceil_log2(v: u64) -> usize {
    if v <= 1 {
        0
    } else {
        (64 - (v - 1).leading_zeros()) as usize
    }
}

/// Layout of the pricing model of `inst`.
pub fn pricing_layout(inst: &Instance, penalty: f64) -> PricingLayout {
    let scaling = inst.scale_demands();
    let d_min = scaling.min_demand();
    PricingLayout {
        n: inst.n(),
        m: inst.max_route_customers(),
        big_m: ceil_log2(scaling.capacity - d_min + 1),
        penalty,
        scaled_capacity: scaling.capacity,
        scaled_min_demand: d_min,
        scaled_demands: scaling.demands,
    }
}

/// Pricing model over slot variables `x`, visit variables `y` and demand
/// bits `w`.
///
/// Travel between consecutive slots is charged for slots `1..m-1`; the trip
/// out of the depot and back is attached to slots 1 and `m`. Slots not used
/// by a short route hold the depot, which costs nothing to stay at.
pub fn build_pricing_qubo(inst: &Instance, pi: &[f64], penalty: f64) -> Result<Qubo> {
    if pi.len() != inst.num_nodes() {
        return Err(Error::Dimension(format!(
            "{} prices for {} nodes",
            pi.len(),
            inst.num_nodes()
        )));
    }
    let bound = pricing_penalty_bound(inst, pi);
    if !(penalty >= bound) {
        return Err(Error::InvalidArgument(format!(
            "penalty {penalty} is below the bound {bound}"
        )));
    }
    let lay = pricing_layout(inst, penalty);
    let (n, m) = (lay.n, lay.m);
    let t = modified_distances(inst, pi);
    let mut q = Qubo::new(lay.num_vars(), 0.0);

    // Travel between consecutive slots.
    for j in 1..m {
        for u in 0..=n {
            for v in 0..=n {
                if u != v {
                    q.add(lay.x(u, j), lay.x(v, j + 1), t[u][v]);
                }
            }
        }
    }
    // Leaving the depot at slot 1 and returning after slot m.
    for v in 1..=n {
        q.add(lay.x(v, 1), lay.x(v, 1), t[0][v]);
        q.add(lay.x(v, m), lay.x(v, m), t[v][0]);
    }
    // One vertex per slot.
    for j in 1..=m {
        let terms: Vec<(usize, f64)> = (0..=n).map(|v| (lay.x(v, j), -1.0)).collect();
        q.add_squared(penalty, 1.0, &terms);
    }
    // y_v equals the number of slots holding v.
    for v in 1..=n {
        let mut terms = vec![(lay.y(v), 1.0)];
        terms.extend((1..=m).map(|j| (lay.x(v, j), -1.0)));
        q.add_squared(penalty, 0.0, &terms);
    }
    // Route demand equals its binary encoding in [d_min, K].
    let mut terms: Vec<(usize, f64)> = (0..lay.big_m)
        .map(|k| (lay.w(k), lay.w_weight(k) as f64))
        .collect();
    terms.extend((1..=n).map(|v| (lay.y(v), -(lay.scaled_demands[v] as f64))));
    q.add_squared(penalty, lay.scaled_min_demand as f64, &terms);

    q.layout = VarLayout::Pricing(lay);
    Ok(q)
}

/// Bit vector of a route laid out in the pricing model, depot in unused
/// slots and the demand encoded with the lowest bits that fit.
pub fn encode_route(lay: &PricingLayout, route: &Route) -> Result<Vec<bool>> {
    if route.len() > lay.m {
        return Err(Error::InvalidRoute(format!(
            "{} customers exceed {} slots",
            route.len(),
            lay.m
        )));
    }
    let mut x = vec![false; lay.num_vars()];
    for j in 1..=lay.m {
        let v = route.customers().get(j - 1).copied().unwrap_or(0);
        x[lay.x(v, j)] = true;
    }
    let mut load = 0;
    for &v in route.customers() {
        x[lay.y(v)] = true;
        load += lay.scaled_demands[v];
    }
    // Greedy from the top bit works because the top weight never exceeds
    // 2^(M-1) and the lower bits cover every value below 2^(M-1).
    let mut rest = load - lay.scaled_min_demand;
    for k in (0..lay.big_m).rev() {
        let wk = lay.w_weight(k);
        if wk <= rest {
            x[lay.w(k)] = true;
            rest -= wk;
        }
    }
    debug_assert_eq!(rest, 0);
    Ok(x)
}

/// The penalty part of the pricing model at `x`, an integer that is zero
/// exactly on feasible assignments.
pub fn pricing_violation(lay: &PricingLayout, x: &[bool]) -> i64 {
    let b = |i: usize| x[i] as i64;
    let mut total = 0;
    for j in 1..=lay.m {
        let s: i64 = (0..=lay.n).map(|v| b(lay.x(v, j))).sum();
        total += (1 - s).pow(2);
    }
    for v in 1..=lay.n {
        let s: i64 = (1..=lay.m).map(|j| b(lay.x(v, j))).sum();
        total += (b(lay.y(v)) - s).pow(2);
    }
    let encoded: i64 = lay.scaled_min_demand as i64
        + (0..lay.big_m)
            .map(|k| lay.w_weight(k) as i64 * b(lay.w(k)))
            .sum::<i64>();
    let load: i64 = (1..=lay.n)
        .map(|v| lay.scaled_demands[v] as i64 * b(lay.y(v)))
        .sum();
    total + (encoded - load).pow(2)
}

/// Reads the customer sequence off the slots. Slots with several customers,
/// repeated customers and overloaded routes decode to nothing.
pub fn decode_pricing_sample(inst: &Instance, lay: &PricingLayout, x: &[bool]) -> Option<Route> {
    if x.len() != lay.num_vars() {
        return None;
    }
    let mut seq = Vec::new();
    for j in 1..=lay.m {
        let mut here = (1..=lay.n).filter(|&v| x[lay.x(v, j)]);
        match (here.next(), here.next()) {
            (Some(v), None) => seq.push(v),
            (None, _) => {}
            (Some(_), Some(_)) => return None,
        }
    }
    if seq.is_empty() {
        return None;
    }
    Route::new(inst, seq).ok()
}

/// Separation model over customer bits `x_i` and one bit `w_r` per support
/// route.
pub fn build_separation_qubo(
    inst: &Instance,
    support: &[(&Route, f64)],
    penalty: f64,
) -> Result<Qubo> {
    if support.is_empty() {
        return Err(Error::InvalidArgument(
            "empty LP support, nothing to separate".into(),
        ));
    }
    if let Some((_, w)) = support
        .iter()
        .find(|(_, w)| !(*w > 0.0 && *w <= 1.0 + 1e-9))
    {
        return Err(Error::InvalidArgument(format!(
            "support weight {w} outside (0, 1]"
        )));
    }
    let lay = SeparationLayout {
        n: inst.n(),
        routes: support.len(),
        penalty,
    };
    let mut q = Qubo::new(lay.num_vars(), 0.0);
    let cap = inst.capacity() as f64;
    for i in inst.customers() {
        q.add(lay.x(i), lay.x(i), -(inst.demand(i) as f64) / cap);
    }
    for (r, (route, weight)) in support.iter().enumerate() {
        q.add(lay.w(r), lay.w(r), *weight);
        for &i in route.customers() {
            q.add(lay.x(i), lay.x(i), penalty);
            q.add(lay.x(i), lay.w(r), -penalty);
        }
    }
    q.layout = VarLayout::Separation(lay);
    Ok(q)
}

/// `sum_{r meets S} y*_r - D(S) / K`, the fractional capacity objective.
pub fn fractional_cut_objective(inst: &Instance, support: &[(&Route, f64)], set: &[usize]) -> f64 {
    let mut inside = vec![false; inst.num_nodes()];
    for &i in set {
        inside[i] = true;
    }
    let lhs: f64 = support
        .iter()
        .filter(|(r, _)| r.customers().iter().any(|&v| inside[v]))
        .map(|(_, w)| w)
        .sum();
    lhs - inst.set_demand(set) as f64 / inst.capacity() as f64
}

/// The customer set of a sample, as a cut if its rounded form is violated.
pub fn decode_separation_sample(
    inst: &Instance,
    lay: &SeparationLayout,
    x: &[bool],
    support: &[(&Route, f64)],
) -> Option<RccCut> {
    if x.len() != lay.num_vars() {
        return None;
    }
    let set: Vec<usize> = inst.customers().filter(|&i| x[lay.x(i)]).collect();
    if set.is_empty() {
        return None;
    }
    let cut = RccCut::new(inst, set).ok()?;
    let lhs: f64 = support
        .iter()
        .filter(|(r, _)| cut.intersects(r))
        .map(|(_, w)| w)
        .sum();
    (lhs < cut.rhs() as f64 - 1e-6).then_some(cut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::random_euclidean;

    fn tiny() -> Instance {
        // n = 3, K = 4, demands 1, 1, 2.
        let d = vec![
            vec![0.0, 3.0, 4.0, 5.0],
            vec![3.0, 0.0, 5.0, 4.0],
            vec![4.0, 5.0, 0.0, 3.0],
            vec![5.0, 4.0, 3.0, 0.0],
        ];
        Instance::new("tiny", d, vec![0, 1, 1, 2], 4, None).unwrap()
    }

    #[test]
    fn density_cases() {
        let mut q = Qubo::new(3, 0.0);
        q.add(0, 0, 1.0);
        assert_eq!(q.density(), 0.0);
        q.add(2, 1, 1.0);
        assert!((q.density() - 1.0 / 3.0).abs() < 1e-15);
        let mut full = Qubo::new(4, 0.0);
        for i in 0..4 {
            for j in i + 1..4 {
                full.add(i, j, -1.0);
            }
        }
        assert_eq!(full.density(), 1.0);
    }

    #[test]
    fn cancelling_terms_are_not_stored() {
        let mut q = Qubo::new(2, 0.0);
        q.add(0, 1, 2.0);
        q.add(1, 0, -2.0);
        assert_eq!(q.coeffs().count(), 0);
    }

    #[test]
    fn energy_basics() {
        let mut q = Qubo::new(2, 1.5);
        q.add(0, 0, -1.0);
        q.add(0, 1, 3.0);
        assert_eq!(q.energy(&[false, false]), 1.5);
        assert_eq!(q.energy(&[true, false]), 0.5);
        assert_eq!(q.energy(&[true, true]), 3.5);
    }

    #[test]
    fn text_round_trip() {
        let mut q = Qubo::new(3, -0.1);
        q.add(0, 2, 1.0 / 3.0);
        q.add(1, 1, -7.25);
        let back = Qubo::from_text(&q.to_text()).unwrap();
        assert_eq!(back, q);
        assert!(Qubo::from_text("2 0\n0 5 1\n").is_err());
    }

    #[test]
    fn penalty_bound_examples() {
        let d = vec![
            vec![0.0, 5.0, 3.0],
            vec![5.0, 0.0, 4.0],
            vec![3.0, 4.0, 0.0],
        ];
        let inst = Instance::new("b", d, vec![0, 1, 1], 2, None).unwrap();
        assert_eq!(pricing_penalty_bound(&inst, &[0.0, 1.0, 2.0]), 19.0);
    }

    #[test]
    fn modified_distance_formula() {
        let inst = tiny();
        let t = modified_distances(&inst, &[0.0, 4.0, 6.0, 0.0]);
        assert_eq!(t[1][2], 0.0);
        assert_eq!(t[0][1], 1.0);
        assert_eq!(t[2][2], 0.0);
        assert_eq!(modified_distances(&inst, &[0.0; 4])[1][3], 4.0);
    }

    #[test]
    fn pricing_variable_count() {
        let inst = tiny();
        let q = build_pricing_qubo(&inst, &[0.0; 4], 1e3).unwrap();
        let VarLayout::Pricing(lay) = q.layout() else {
            panic!()
        };
        assert_eq!((lay.m, lay.big_m, lay.scaled_min_demand), (3, 2, 1));
        assert_eq!(q.num_vars(), 17);
    }

    #[test]
    fn penalty_below_bound_is_refused() {
        let inst = tiny();
        assert!(build_pricing_qubo(&inst, &[0.0; 4], 10.0).is_err());
    }

    #[test]
    fn planted_route_energy() {
        let inst = tiny();
        let pi = [0.0, 2.0, 3.0, 1.0];
        let p = pricing_penalty_bound(&inst, &pi);
        let q = build_pricing_qubo(&inst, &pi, p).unwrap();
        let VarLayout::Pricing(lay) = q.layout() else {
            panic!()
        };
        let r = Route::new(&inst, vec![1, 2]).unwrap();
        let x = encode_route(lay, &r).unwrap();
        assert!((q.energy(&x) - (r.cost() - 5.0)).abs() < 1e-9);
        assert_eq!(decode_pricing_sample(&inst, lay, &x).unwrap(), r);
        let zeros = vec![false; q.num_vars()];
        assert!(q.energy(&zeros) >= p * lay.m as f64);
        assert!(decode_pricing_sample(&inst, lay, &zeros).is_none());
    }

    #[test]
    fn separation_model_shape() {
        let inst = random_euclidean(4, 10, 5, 1);
        let a = Route::new(&inst, vec![1, 2]).unwrap();
        let b = Route::new(&inst, vec![3]).unwrap();
        let support = [(&a, 0.5), (&b, 1.0)];
        let q = build_separation_qubo(&inst, &support, SEPARATION_PENALTY).unwrap();
        assert_eq!(q.num_vars(), 6);
        assert_eq!(q.num_quad(), 3);
        assert_eq!(q.energy(&[false; 6]), 0.0);
        assert!(build_separation_qubo(&inst, &[], 2.0).is_err());
    }
}
