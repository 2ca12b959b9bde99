//! CVRP instance model and the TSPLIB/CVRPLIB text format.
//!
//! Node 0 is always the depot and customers are numbered `1..=n`, whatever
//! the numbering of the source file.

use std::fmt::Write as _;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};

/// How travel costs were specified, kept so an instance can be written back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeWeightKind {
    /// Rounded Euclidean distances between coordinates (TSPLIB `nint`).
    Euc2d,
    /// Distances listed in the file.
    Explicit,
    /// Built in code from an exact metric.
    Synthetic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    n: usize,
    dist: Vec<f64>,
    demands: Vec<u64>,
    capacity: u64,
    coords: Option<Vec<(f64, f64)>>,
    kind: EdgeWeightKind,
}

/// Tolerance applied when checking the triangle inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricCheck {
    /// `t(u,w) <= t(u,v) + t(v,w) + slack`.
    Slack(f64),
    Skip,
}

impl Instance {
    /// Builds and validates an instance from a full `(n+1) x (n+1)` matrix.
    /// `demands[0]` belongs to the depot and is ignored.
    pub fn new(
        name: impl Into<String>,
        dist: Vec<Vec<f64>>,
        demands: Vec<u64>,
        capacity: u64,
        coords: Option<Vec<(f64, f64)>>,
    ) -> Result<Self> {
        Self::build(
            name.into(),
            dist,
            demands,
            capacity,
            coords,
            EdgeWeightKind::Synthetic,
            MetricCheck::Slack(1e-9),
        )
    }

    fn build(
        name: String,
        dist: Vec<Vec<f64>>,
        mut demands: Vec<u64>,
        capacity: u64,
        coords: Option<Vec<(f64, f64)>>,
        kind: EdgeWeightKind,
        check: MetricCheck,
    ) -> Result<Self> {
        let nodes = dist.len();
        if nodes < 2 {
            return Err(Error::InvalidInstance(
                "an instance needs a depot and at least one customer".into(),
            ));
        }
        if dist.iter().any(|row| row.len() != nodes) {
            return Err(Error::InvalidInstance(
                "distance matrix is not square".into(),
            ));
        }
        if demands.len() != nodes {
            return Err(Error::InvalidInstance(format!(
                "{} demands for {} nodes",
                demands.len(),
                nodes
            )));
        }
        if let Some(c) = &coords {
            if c.len() != nodes {
                return Err(Error::InvalidInstance(
                    "coordinate count differs from node count".into(),
                ));
            }
        }
        if capacity == 0 {
            return Err(Error::InvalidInstance("capacity must be positive".into()));
        }
        demands[0] = 0;
        for (i, &d) in demands.iter().enumerate().skip(1) {
            if d == 0 {
                return Err(Error::InvalidInstance(format!(
                    "customer {i} has zero demand"
                )));
            }
            if d > capacity {
                return Err(Error::InvalidInstance(format!(
                    "customer {i} demand {d} exceeds capacity {capacity}"
                )));
            }
        }
        let flat: Vec<f64> = dist.into_iter().flatten().collect();
        let inst = Instance {
            name,
            n: nodes - 1,
            dist: flat,
            demands,
            capacity,
            coords,
            kind,
        };
        inst.check_metric(check)?;
        Ok(inst)
    }

    fn check_metric(&self, check: MetricCheck) -> Result<()> {
        let nodes = self.n + 1;
        for u in 0..nodes {
            if self.dist(u, u) != 0.0 {
                return Err(Error::InvalidInstance(format!("t({u},{u}) is not zero")));
            }
            for v in 0..nodes {
                let d = self.dist(u, v);
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidInstance(format!(
                        "t({u},{v}) = {d} is not a valid cost"
                    )));
                }
                if d != self.dist(v, u) {
                    return Err(Error::InvalidInstance(format!("t({u},{v}) != t({v},{u})")));
                }
            }
        }
        if let MetricCheck::Slack(slack) = check {
            if let Some((u, v, w, excess)) = self.worst_triangle_violation(slack) {
                return Err(Error::InvalidInstance(format!(
                    "triangle inequality violated: t({u},{w}) exceeds t({u},{v}) + t({v},{w}) by {excess}"
                )));
            }
        }
        Ok(())
    }

    /// Largest violation of `t(u,w) <= t(u,v) + t(v,w) + slack`, if any.
    pub fn worst_triangle_violation(&self, slack: f64) -> Option<(usize, usize, usize, f64)> {
        let nodes = self.n + 1;
        let mut worst = None;
        let mut worst_excess = 0.0;
        for u in 0..nodes {
            for w in (u + 1)..nodes {
                let direct = self.dist(u, w);
                for v in 0..nodes {
                    let excess = direct - self.dist(u, v) - self.dist(v, w);
                    if excess > slack && excess > worst_excess {
                        worst_excess = excess;
                        worst = Some((u, v, w, excess));
                    }
                }
            }
        }
        worst
    }

    /// Number of customers.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_nodes(&self) -> usize {
        self.n + 1
    }

    #[inline]
    pub fn dist(&self, u: usize, v: usize) -> f64 {
        self.dist[u * (self.n + 1) + v]
    }

    /// Demand of node `i`; the depot has demand 0.
    #[inline]
    pub fn demand(&self, i: usize) -> u64 {
        self.demands[i]
    }

    /// Demands indexed by node, depot included.
    pub fn demands(&self) -> &[u64] {
        &self.demands
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        self.coords.as_deref()
    }

    pub fn edge_weight_kind(&self) -> EdgeWeightKind {
        self.kind
    }

    pub fn max_dist(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    pub fn customers(&self) -> impl Iterator<Item = usize> {
        1..=self.n
    }

    pub fn total_demand(&self) -> u64 {
        self.demands.iter().sum()
    }

    /// Total demand of a customer set.
    pub fn set_demand(&self, set: &[usize]) -> u64 {
        set.iter().map(|&i| self.demands[i]).sum()
    }

    /// `ceil(D(S) / K)`, the number of vehicles a set needs.
    pub fn vehicles_needed(&self, set: &[usize]) -> u64 {
        self.set_demand(set).div_ceil(self.capacity)
    }

    /// Length of the closed route depot -> seq -> depot.
    pub fn route_cost(&self, seq: &[usize]) -> Result<f64> {
        if seq.is_empty() {
            return Err(Error::InvalidRoute("empty customer sequence".into()));
        }
        if let Some(&bad) = seq.iter().find(|&&v| v == 0 || v > self.n) {
            return Err(Error::InvalidRoute(format!(
                "customer index {bad} out of range 1..={}",
                self.n
            )));
        }
        let mut cost = self.dist(0, seq[0]) + self.dist(seq[seq.len() - 1], 0);
        for pair in seq.windows(2) {
            cost += self.dist(pair[0], pair[1]);
        }
        Ok(cost)
    }

    /// Capacity and demands divided by their greatest common divisor.
    pub fn scale_demands(&self) -> DemandScaling {
        let divisor = self.demands[1..]
            .iter()
            .fold(self.capacity, |g, &d| g.gcd(&d));
        DemandScaling {
            divisor,
            capacity: self.capacity / divisor,
            demands: self.demands.iter().map(|&d| d / divisor).collect(),
        }
    }

    /// Largest number of customers a capacity-feasible route can contain.
    pub fn max_route_customers(&self) -> usize {
        let mut sorted: Vec<u64> = self.demands[1..].to_vec();
        sorted.sort_unstable();
        let mut load = 0;
        let mut count = 0;
        for d in sorted {
            load += d;
            if load > self.capacity {
                break;
            }
            count += 1;
        }
        count
    }

    /// Writes the instance in the TSPLIB text format.
    ///
    /// Coordinate-based instances are written as `EUC_2D`, everything else as
    /// an explicit `FULL_MATRIX`.
    pub fn to_tsplib(&self) -> String {
        let mut out = String::new();
        let nodes = self.n + 1;
        let _ = writeln!(out, "NAME : {}", self.name);
        let _ = writeln!(out, "TYPE : CVRP");
        let _ = writeln!(out, "DIMENSION : {nodes}");
        match (&self.coords, self.kind) {
            (Some(coords), EdgeWeightKind::Euc2d) => {
                let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EUC_2D");
                let _ = writeln!(out, "CAPACITY : {}", self.capacity);
                let _ = writeln!(out, "NODE_COORD_SECTION");
                for (i, (x, y)) in coords.iter().enumerate() {
                    let _ = writeln!(out, "{} {} {}", i + 1, x, y);
                }
            }
            _ => {
                let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EXPLICIT");
                let _ = writeln!(out, "EDGE_WEIGHT_FORMAT : FULL_MATRIX");
                let _ = writeln!(out, "CAPACITY : {}", self.capacity);
                let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
                for u in 0..nodes {
                    let row: Vec<String> =
                        (0..nodes).map(|v| format!("{}", self.dist(u, v))).collect();
                    let _ = writeln!(out, "{}", row.join(" "));
                }
            }
        }
        let _ = writeln!(out, "DEMAND_SECTION");
        for (i, d) in self.demands.iter().enumerate() {
            let _ = writeln!(out, "{} {}", i + 1, d);
        }
        let _ = writeln!(out, "DEPOT_SECTION");
        let _ = writeln!(out, "1");
        let _ = writeln!(out, "-1");
        let _ = writeln!(out, "EOF");
        out
    }
}

/// Result of dividing capacity and demands by their gcd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandScaling {
    pub divisor: u64,
    pub capacity: u64,
    /// Indexed by node; entry 0 is the depot.
    pub demands: Vec<u64>,
}

impl DemandScaling {
    pub fn min_demand(&self) -> u64 {
        self.demands[1..].iter().copied().min().unwrap_or(0)
    }
}

/// A closed route from the depot through an ordered list of distinct customers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    customers: Vec<usize>,
    cost: f64,
    demand: u64,
}

impl Route {
    /// Validates the sequence against the instance and computes cost and load.
    pub fn new(inst: &Instance, customers: Vec<usize>) -> Result<Self> {
        let cost = inst.route_cost(&customers)?;
        let mut seen = vec![false; inst.n() + 1];
        for &v in &customers {
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidRoute(format!("customer {v} visited twice")));
            }
        }
        let demand = inst.set_demand(&customers);
        if demand > inst.capacity() {
            return Err(Error::InvalidRoute(format!(
                "route load {demand} exceeds capacity {}",
                inst.capacity()
            )));
        }
        Ok(Route {
            customers,
            cost,
            demand,
        })
    }

    pub fn customers(&self) -> &[usize] {
        &self.customers
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn demand(&self) -> u64 {
        self.demand
    }

    pub fn len(&self) -> usize {
        self.customers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.customers.is_empty()
    }

    pub fn visits(&self, customer: usize) -> bool {
        self.customers.contains(&customer)
    }

    /// Orientation-independent identity: the lexicographically smaller of the
    /// sequence and its reversal.
    pub fn canonical_key(&self) -> Vec<usize> {
        let rev: Vec<usize> = self.customers.iter().rev().copied().collect();
        if rev < self.customers {
            rev
        } else {
            self.customers.clone()
        }
    }

    /// Bitmask of visited customers (customer `i` is bit `i - 1`).
    pub fn mask(&self) -> u64 {
        customer_mask(&self.customers)
    }
}

/// Bitmask of a customer set; only valid for customer indices up to 64.
pub fn customer_mask(set: &[usize]) -> u64 {
    set.iter().fold(0u64, |m, &i| m | (1u64 << (i - 1)))
}

/// Options controlling how strictly parsed files are validated.
#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    pub metric: MetricCheck,
}

impl Default for ParseOptions {
    fn default() -> Self {
        // Rounded EUC_2D distances can break the triangle inequality by one unit.
        ParseOptions {
            metric: MetricCheck::Slack(1.0),
        }
    }
}

/// Parses a TSPLIB-style CVRP file with default validation.
pub fn parse_instance(text: &str) -> Result<Instance> {
    parse_instance_with(text, ParseOptions::default())
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Coords,
    Weights,
    Demands,
    Depots,
    Ignored,
}

pub fn parse_instance_with(text: &str, opts: ParseOptions) -> Result<Instance> {
    let mut name = String::new();
    let mut dimension: Option<usize> = None;
    let mut capacity: Option<u64> = None;
    let mut weight_type: Option<(String, usize)> = None;
    let mut weight_format: Option<(String, usize)> = None;
    let mut coords: Vec<(usize, f64, f64, usize)> = Vec::new();
    let mut weights: Vec<(f64, usize)> = Vec::new();
    let mut demand_rows: Vec<(usize, f64, usize)> = Vec::new();
    let mut depots: Vec<usize> = Vec::new();
    let mut section = Section::None;
    let mut weight_section_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let starts_alpha = line.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
        if starts_alpha {
            let (key, value) = match line.split_once(':') {
                Some((k, v)) => (k.trim().to_ascii_uppercase(), Some(v.trim())),
                None => (line.to_ascii_uppercase(), None),
            };
            section = Section::None;
            match (key.as_str(), value) {
                ("EOF", _) => break,
                ("NODE_COORD_SECTION", _) => section = Section::Coords,
                ("EDGE_WEIGHT_SECTION", _) => {
                    section = Section::Weights;
                    weight_section_line = lineno;
                }
                ("DEMAND_SECTION", _) => section = Section::Demands,
                ("DEPOT_SECTION", _) => section = Section::Depots,
                ("DISPLAY_DATA_SECTION", _) => section = Section::Ignored,
                ("NAME", Some(v)) => name = v.to_string(),
                ("DIMENSION", Some(v)) => {
                    dimension = Some(
                        v.parse()
                            .map_err(|_| parse_err(lineno, format!("bad DIMENSION '{v}'")))?,
                    )
                }
                ("CAPACITY", Some(v)) => {
                    let c: f64 = v
                        .parse()
                        .map_err(|_| parse_err(lineno, format!("bad CAPACITY '{v}'")))?;
                    if c <= 0.0 || c.fract() != 0.0 {
                        return Err(parse_err(
                            lineno,
                            format!("capacity must be a positive integer, got {v}"),
                        ));
                    }
                    capacity = Some(c as u64);
                }
                ("EDGE_WEIGHT_TYPE", Some(v)) => {
                    weight_type = Some((v.to_ascii_uppercase(), lineno))
                }
                ("EDGE_WEIGHT_FORMAT", Some(v)) => {
                    weight_format = Some((v.to_ascii_uppercase(), lineno))
                }
                ("TYPE", Some(v)) => {
                    let v = v.to_ascii_uppercase();
                    if v != "CVRP" {
                        return Err(parse_err(lineno, format!("unsupported problem type {v}")));
                    }
                }
                (_, Some(_)) => {}
                (other, None) => {
                    return Err(parse_err(lineno, format!("unknown section '{other}'")))
                }
            }
            continue;
        }

        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| parse_err(lineno, format!("expected a number, found '{s}'")))
        };
        let node_id = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .ok()
                .filter(|&v| v >= 1)
                .ok_or_else(|| parse_err(lineno, format!("bad node id '{s}'")))
        };
        match section {
            Section::Coords => {
                if fields.len() < 3 {
                    return Err(parse_err(lineno, "coordinate line needs id, x and y"));
                }
                coords.push((
                    node_id(fields[0])?,
                    num(fields[1])?,
                    num(fields[2])?,
                    lineno,
                ));
            }
            Section::Weights => {
                for f in fields {
                    weights.push((num(f)?, lineno));
                }
            }
            Section::Demands => {
                if fields.len() != 2 {
                    return Err(parse_err(lineno, "demand line needs id and demand"));
                }
                demand_rows.push((node_id(fields[0])?, num(fields[1])?, lineno));
            }
            Section::Depots => {
                let v: i64 = fields[0]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad depot id '{}'", fields[0])))?;
                if v == -1 {
                    section = Section::None;
                } else if v >= 1 {
                    depots.push(v as usize);
                } else {
                    return Err(parse_err(lineno, format!("bad depot id {v}")));
                }
            }
            Section::Ignored => {}
            Section::None => {
                return Err(parse_err(
                    lineno,
                    format!("data outside of any section: '{line}'"),
                ))
            }
        }
    }

    let last_line = text.lines().count();
    let dim = dimension.ok_or_else(|| parse_err(last_line, "missing DIMENSION"))?;
    if dim < 2 {
        return Err(parse_err(last_line, "DIMENSION must be at least 2"));
    }
    let capacity = capacity.ok_or_else(|| parse_err(last_line, "missing CAPACITY"))?;
    let (wtype, wline) =
        weight_type.ok_or_else(|| parse_err(last_line, "missing EDGE_WEIGHT_TYPE"))?;

    // Demands in file order.
    let mut file_demand: Vec<Option<u64>> = vec![None; dim];
    if demand_rows.is_empty() {
        return Err(parse_err(last_line, "missing DEMAND_SECTION"));
    }
    for (id, d, lineno) in demand_rows {
        if id > dim {
            return Err(parse_err(
                lineno,
                format!("node {id} exceeds DIMENSION {dim}"),
            ));
        }
        if d < 0.0 || d.fract() != 0.0 {
            return Err(parse_err(
                lineno,
                format!("demand must be a non-negative integer, got {d}"),
            ));
        }
        file_demand[id - 1] = Some(d as u64);
    }
    let file_demand: Vec<u64> = file_demand
        .into_iter()
        .enumerate()
        .map(|(i, d)| {
            d.ok_or_else(|| parse_err(last_line, format!("no demand for node {}", i + 1)))
        })
        .collect::<Result<_>>()?;

    let depot = match depots.as_slice() {
        [] => file_demand
            .iter()
            .position(|&d| d == 0)
            .ok_or_else(|| parse_err(last_line, "no DEPOT_SECTION and no node with zero demand"))?,
        [d] if *d <= dim => d - 1,
        [d] => {
            return Err(parse_err(
                last_line,
                format!("depot {d} exceeds DIMENSION {dim}"),
            ))
        }
        _ => return Err(parse_err(last_line, "multiple depots are not supported")),
    };

    // Full matrix in file order.
    let (file_dist, file_coords, kind) = match wtype.as_str() {
        "EUC_2D" => {
            let mut pts: Vec<Option<(f64, f64)>> = vec![None; dim];
            for (id, x, y, lineno) in coords {
                if id > dim {
                    return Err(parse_err(
                        lineno,
                        format!("node {id} exceeds DIMENSION {dim}"),
                    ));
                }
                pts[id - 1] = Some((x, y));
            }
            let pts: Vec<(f64, f64)> = pts
                .into_iter()
                .enumerate()
                .map(|(i, p)| {
                    p.ok_or_else(|| {
                        parse_err(last_line, format!("no coordinates for node {}", i + 1))
                    })
                })
                .collect::<Result<_>>()?;
            let m: Vec<Vec<f64>> = (0..dim)
                .map(|u| (0..dim).map(|v| euc_2d(pts[u], pts[v])).collect())
                .collect();
            (m, Some(pts), EdgeWeightKind::Euc2d)
        }
        "EXPLICIT" => {
            let (fmt, _) = weight_format
                .clone()
                .ok_or_else(|| parse_err(wline, "EXPLICIT weights need an EDGE_WEIGHT_FORMAT"))?;
            let m = explicit_matrix(dim, &fmt, &weights, weight_section_line.max(wline))?;
            let pts = if coords.len() == dim {
                let mut pts = vec![(0.0, 0.0); dim];
                for (id, x, y, _) in coords {
                    pts[id - 1] = (x, y);
                }
                Some(pts)
            } else {
                None
            };
            (m, pts, EdgeWeightKind::Explicit)
        }
        other => {
            return Err(parse_err(
                wline,
                format!("unsupported EDGE_WEIGHT_TYPE {other}"),
            ))
        }
    };

    // Remap: depot first, then the remaining nodes in file order.
    let order: Vec<usize> = std::iter::once(depot)
        .chain((0..dim).filter(|&i| i != depot))
        .collect();
    let dist: Vec<Vec<f64>> = order
        .iter()
        .map(|&u| order.iter().map(|&v| file_dist[u][v]).collect())
        .collect();
    let demands: Vec<u64> = order.iter().map(|&i| file_demand[i]).collect();
    for (new_id, &old) in order.iter().enumerate().skip(1) {
        if demands[new_id] == 0 {
            return Err(parse_err(
                last_line,
                format!("customer node {} has non-positive demand", old + 1),
            ));
        }
    }
    let coords = file_coords.map(|pts| order.iter().map(|&i| pts[i]).collect());
    Instance::build(name, dist, demands, capacity, coords, kind, opts.metric)
}

/// TSPLIB `nint` of the Euclidean distance.
fn euc_2d(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).hypot(a.1 - b.1) + 0.5).floor()
}

fn explicit_matrix(
    dim: usize,
    fmt: &str,
    weights: &[(f64, usize)],
    line: usize,
) -> Result<Vec<Vec<f64>>> {
    let expected = match fmt {
        "FULL_MATRIX" => dim * dim,
        "LOWER_ROW" | "UPPER_ROW" => dim * (dim - 1) / 2,
        "LOWER_DIAG_ROW" | "UPPER_DIAG_ROW" => dim * (dim + 1) / 2,
        other => {
            return Err(parse_err(
                line,
                format!("unsupported EDGE_WEIGHT_FORMAT {other}"),
            ))
        }
    };
    if weights.len() != expected {
        let at = weights.last().map_or(line, |w| w.1);
        return Err(parse_err(
            at,
            format!(
                "{fmt} with DIMENSION {dim} needs {expected} weights, found {}",
                weights.len()
            ),
        ));
    }
    let mut m = vec![vec![0.0; dim]; dim];
    let mut it = weights.iter().map(|w| w.0);
    let set = |m: &mut Vec<Vec<f64>>, i: usize, j: usize, v: f64| {
        m[i][j] = v;
        m[j][i] = v;
    };
    match fmt {
        "FULL_MATRIX" => {
            for (i, row) in m.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    let v = it.next().unwrap();
                    if i == j && v != 0.0 {
                        return Err(parse_err(
                            line,
                            format!("nonzero diagonal entry at node {}", i + 1),
                        ));
                    }
                    *cell = v;
                }
            }
        }
        "LOWER_ROW" => {
            for i in 1..dim {
                for j in 0..i {
                    set(&mut m, i, j, it.next().unwrap());
                }
            }
        }
        "UPPER_ROW" => {
            for i in 0..dim {
                for j in (i + 1)..dim {
                    set(&mut m, i, j, it.next().unwrap());
                }
            }
        }
        "LOWER_DIAG_ROW" => {
            for i in 0..dim {
                for j in 0..=i {
                    set(&mut m, i, j, it.next().unwrap());
                }
            }
        }
        "UPPER_DIAG_ROW" => {
            for i in 0..dim {
                for j in i..dim {
                    set(&mut m, i, j, it.next().unwrap());
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(m)
}
