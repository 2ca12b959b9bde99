use std::collections::VecDeque;

const FLOW_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct MinCut {
    pub value: f64,
    /// `true` for vertices on the source side.
    pub source_side: Vec<bool>,
}

/// Minimum `s`-`t` cut of an undirected graph by shortest augmenting paths.
///
/// Parallel edges are merged. When `t` is unreachable the value is 0 and the
/// source side is the component of `s`.
pub fn min_cut(num_vertices: usize, edges: &[(usize, usize, f64)], s: usize, t: usize) -> MinCut {
    assert!(
        s < num_vertices && t < num_vertices && s != t,
        "bad terminals"
    );
    let nv = num_vertices;
    let mut cap = vec![0.0; nv * nv];
    for &(u, v, w) in edges {
        debug_assert!(w >= 0.0, "negative edge weight");
        if u != v {
            cap[u * nv + v] += w;
            cap[v * nv + u] += w;
        }
    }
    let mut value = 0.0;
    let mut parent = vec![usize::MAX; nv];
    loop {
        parent.fill(usize::MAX);
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for v in 0..nv {
                if parent[v] == usize::MAX && cap[u * nv + v] > FLOW_EPS {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[t] == usize::MAX {
            break;
        }
        let mut push = f64::INFINITY;
        let mut v = t;
        while v != s {
            let u = parent[v];
            push = push.min(cap[u * nv + v]);
            v = u;
        }
        let mut v = t;
        while v != s {
            let u = parent[v];
            cap[u * nv + v] -= push;
            cap[v * nv + u] += push;
            v = u;
        }
        value += push;
    }
    let source_side = parent.iter().map(|&p| p != usize::MAX).collect();
    MinCut { value, source_side }
}

/// A violated subtour row `x(delta(S)) >= 2 y_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecViolation {
    /// Customers in `S`; never contains the depot.
    pub set: Vec<usize>,
    pub k: usize,
    pub cut_value: f64,
}

/// Checks every customer `k` with `y_k > 0` against the depot (vertex 0).
///
/// Sets found from several `k` are reported once, with the `k` of largest
/// violation.
pub fn separate_sec(
    num_vertices: usize,
    edges: &[(usize, usize, f64)],
    y: &[f64],
) -> Vec<SecViolation> {
    let mut found: Vec<SecViolation> = Vec::new();
    for k in 1..num_vertices {
        if y[k] <= 1e-9 {
            continue;
        }
        let cut = min_cut(num_vertices, edges, 0, k);
        let violation = 2.0 * y[k] - cut.value;
        if violation <= 1e-6 {
            continue;
        }
        let set: Vec<usize> = (1..num_vertices).filter(|&v| !cut.source_side[v]).collect();
        match found.iter_mut().find(|f| f.set == set) {
            Some(prev) => {
                if violation > 2.0 * y[prev.k] - prev.cut_value {
                    prev.k = k;
                    prev.cut_value = cut.value;
                }
            }
            None => found.push(SecViolation {
                set,
                k,
                cut_value: cut.value,
            }),
        }
    }
    found
}
