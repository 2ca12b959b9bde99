//! Seeded random instances for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::Instance;

/// Customers placed uniformly in a 100 x 100 square with exact (unrounded)
/// Euclidean distances, so the metric satisfies the triangle inequality.
pub fn random_euclidean(n: usize, capacity: u64, max_demand: u64, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..=n)
        .map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
        .collect();
    let dist = (0..=n)
        .map(|u| {
            (0..=n)
                .map(|v| {
                    if u == v {
                        0.0
                    } else {
                        let (a, b) = (pts[u.min(v)], pts[u.max(v)]);
                        (a.0 - b.0).hypot(a.1 - b.1)
                    }
                })
                .collect()
        })
        .collect();
    let upper = max_demand.min(capacity).max(1);
    let demands = (0..=n)
        .map(|i| if i == 0 { 0 } else { rng.gen_range(1..=upper) })
        .collect();
    Instance::new(
        format!("rand-n{n}-s{seed}"),
        dist,
        demands,
        capacity,
        Some(pts),
    )
    .expect("generated instance is valid")
}
