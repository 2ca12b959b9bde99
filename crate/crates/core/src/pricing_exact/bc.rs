use super::{separate_sec, PricingOptions, PricingResult, RoutePool};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::lp::{solve_ip, IpCallback, IpOptions, IpStatus, LinearProgram, Row, Sense};
use crate::master::{Duals, RccCut};

/// Column layout of the edge model.
struct EdgeModel {
    nodes: usize,
    edges: Vec<(usize, usize)>,
    y0: usize,
}

impl EdgeModel {
    fn new(n: usize) -> Self {
        let nodes = n + 1;
        let edges: Vec<(usize, usize)> = (0..nodes)
            .flat_map(|i| (i + 1..nodes).map(move |j| (i, j)))
            .collect();
        let y0 = edges.len();
        EdgeModel { nodes, edges, y0 }
    }

    fn y(&self, customer: usize) -> usize {
        self.y0 + customer - 1
    }

    fn support(&self, x: &[f64]) -> Vec<(usize, usize, f64)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(e, _)| x[*e] > 1e-9)
            .map(|(e, &(i, j))| (i, j, x[e]))
            .collect()
    }

    fn node_values(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![1.0; self.nodes];
        for v in 1..self.nodes {
            y[v] = x[self.y(v)];
        }
        y
    }

    /// `x(delta(S)) - 2 y_k >= 0`.
    fn sec_row(&self, set: &[usize], k: usize) -> Row {
        let mut inside = vec![false; self.nodes];
        for &v in set {
            inside[v] = true;
        }
        let mut coeffs: Vec<(usize, f64)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(i, j))| inside[i] != inside[j])
            .map(|(e, _)| (e, 1.0))
            .collect();
        coeffs.push((self.y(k), -2.0));
        Row::new(coeffs, Sense::Ge, 0.0)
    }

    /// Connected components of an integral support, depot component first.
    fn components(&self, x: &[f64]) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes];
        for (i, j, _) in self.support(x) {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seen = vec![false; self.nodes];
        let mut comps = Vec::new();
        for start in 0..self.nodes {
            if seen[start] || (start != 0 && adj[start].is_empty()) {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut at = 0;
            while at < comp.len() {
                for &w in &adj[comp[at]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                at += 1;
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Customer sequence of the depot cycle in an integral solution.
    fn depot_route(&self, x: &[f64]) -> Vec<usize> {
        let mut adj = vec![Vec::new(); self.nodes];
        for (i, j, w) in self.support(x) {
            if w > 1.5 {
                // A doubled depot edge is an out-and-back route.
                return vec![j];
            }
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seq = Vec::new();
        let (mut prev, mut at) = (
            0,
            match adj[0].iter().min() {
                Some(&v) => v,
                None => return seq,
            },
        );
        while at != 0 && seq.len() < self.nodes {
            seq.push(at);
            let next = adj[at].iter().copied().find(|&w| w != prev);
            prev = at;
            match next {
                Some(w) => at = w,
                None => break,
            }
        }
        seq
    }
}

struct Separator<'a> {
    inst: &'a Instance,
    duals: &'a Duals,
    cuts: &'a [RccCut],
    model: &'a EdgeModel,
    fractional: bool,
    pool: RoutePool,
}

impl IpCallback for Separator<'_> {
    fn separate(&mut self, x: &[f64], integral: bool) -> Vec<Row> {
        if integral {
            let comps = self.model.components(x);
            if comps.len() <= 1 {
                return Vec::new();
            }
            let route = self.model.depot_route(x);
            if !route.is_empty() {
                self.pool.offer_seq(self.inst, route, self.duals, self.cuts);
            }
            comps
                .iter()
                .filter(|c| c[0] != 0)
                .map(|c| self.model.sec_row(c, c[0]))
                .collect()
        } else if self.fractional {
            let support = self.model.support(x);
            let y = self.model.node_values(x);
            let mut rows: Vec<Row> = separate_sec(self.model.nodes, &support, &y)
                .into_iter()
                .map(|v| self.model.sec_row(&v.set, v.k))
                .collect();
            // Two-node subtour rows x_ij <= y_i.
            for (e, &(i, j)) in self.model.edges.iter().enumerate() {
                if i == 0 {
                    continue;
                }
                for v in [i, j] {
                    if x[e] > y[v] + 1e-6 {
                        rows.push(Row::new(
                            vec![(e, 1.0), (self.model.y(v), -1.0)],
                            Sense::Le,
                            0.0,
                        ));
                    }
                }
            }
            rows
        } else {
            Vec::new()
        }
    }

    fn on_integral(&mut self, x: &[f64], _objective: f64) {
        let route = self.model.depot_route(x);
        if !route.is_empty() {
            self.pool.offer_seq(self.inst, route, self.duals, self.cuts);
        }
    }
}

/// Branch-and-cut on the undirected edge model of the pricing problem.
///
/// Depot edges may take the value 2 so that single-customer routes exist.
/// Each cut with a positive dual gets a variable `z <= sum_{i in S} y_i`
/// carrying `-beta`, which charges the dual exactly once per route.
pub fn price_bc(
    inst: &Instance,
    duals: &Duals,
    cuts: &[RccCut],
    opts: &PricingOptions,
) -> Result<PricingResult> {
    let n = inst.n();
    let model = EdgeModel::new(n);
    let active: Vec<(&RccCut, f64)> = cuts
        .iter()
        .zip(&duals.beta)
        .filter(|(_, &b)| b > 0.0)
        .map(|(c, &b)| (c, b))
        .collect();
    let z0 = model.y0 + n;

    let mut objective: Vec<f64> = model.edges.iter().map(|&(i, j)| inst.dist(i, j)).collect();
    objective.extend((1..=n).map(|v| -duals.pi[v]));
    objective.extend(active.iter().map(|(_, b)| -b));
    let mut lp = LinearProgram::new(objective);
    for (e, &(i, j)) in model.edges.iter().enumerate() {
        let upper = if i == 0 {
            2.0
        } else if inst.demand(i) + inst.demand(j) > inst.capacity() {
            0.0
        } else {
            1.0
        };
        lp.set_bounds(e, 0.0, upper);
    }
    for j in model.y0..lp.num_vars() {
        lp.set_bounds(j, 0.0, 1.0);
    }
    for v in 1..=n {
        let mut coeffs: Vec<(usize, f64)> = model
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(i, j))| i == v || j == v)
            .map(|(e, _)| (e, 1.0))
            .collect();
        coeffs.push((model.y(v), -2.0));
        lp.add_row(Row::new(coeffs, Sense::Eq, 0.0));
    }
    let depot: Vec<(usize, f64)> = (1..=n).map(|v| (v - 1, 1.0)).collect();
    lp.add_row(Row::new(depot, Sense::Eq, 2.0));
    let load: Vec<(usize, f64)> = (1..=n)
        .map(|v| (model.y(v), inst.demand(v) as f64))
        .collect();
    lp.add_row(Row::new(load, Sense::Le, inst.capacity() as f64));
    for (c, (cut, _)) in active.iter().enumerate() {
        let mut coeffs = vec![(z0 + c, 1.0)];
        coeffs.extend(cut.set().iter().map(|&v| (model.y(v), -1.0)));
        lp.add_row(Row::new(coeffs, Sense::Le, 0.0));
    }

    let integer_vars: Vec<usize> = (0..z0).collect();
    let ip_opts = IpOptions {
        node_budget: opts.node_budget,
        ..IpOptions::default()
    };
    let mut sep = Separator {
        inst,
        duals,
        cuts,
        model: &model,
        fractional: opts.fractional_sec,
        pool: RoutePool::default(),
    };
    let sol = solve_ip(&lp, &integer_vars, &ip_opts, &mut sep)?;
    if matches!(sol.status, IpStatus::Infeasible | IpStatus::Unbounded) {
        return Err(Error::InvalidArgument(format!(
            "pricing model ended as {:?}",
            sol.status
        )));
    }
    let Some((min_rc, route)) = sep.pool.best() else {
        return Err(Error::BudgetExhausted(
            "pricing search found no route within the node budget".into(),
        ));
    };
    Ok(PricingResult {
        best_route: route.clone(),
        min_reduced_cost: min_rc,
        negatives: sep.pool.negatives(opts.max_negatives),
        proven: sol.proven,
    })
}
