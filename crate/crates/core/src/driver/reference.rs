use serde::Serialize;

/// Published optimum `c_star` and master LP bound `c_mp` of a benchmark
/// instance. `n` counts nodes including the depot, as in the instance names.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceEntry {
    pub name: &'static str,
    pub n: usize,
    pub c_star: f64,
    pub c_mp: f64,
}

const fn entry(name: &'static str, n: usize, c_star: f64, c_mp: f64) -> ReferenceEntry {
    ReferenceEntry {
        name,
        n,
        c_star,
        c_mp,
    }
}

pub const REFERENCE: &[ReferenceEntry] = &[
    entry("E-n13-k4", 13, 264.0, 264.0),
    entry("W-n15-k2-C7", 15, 76.0, 76.0),
    entry("P-n16-k8", 16, 450.0, 441.0),
    entry("W-n18-k3-C6", 18, 108.0, 99.27),
    entry("P-n19-k2", 19, 212.0, 204.29),
    entry("W-n20-k4-C6", 20, 110.0, 104.0),
    entry("P-n20-k2", 20, 216.0, 212.0),
    entry("P-n22-k8", 22, 603.0, 589.67),
    entry("E-n22-k4", 22, 375.0, 373.71),
    entry("P-n23-k8", 23, 529.0, 521.54),
    entry("W-n28-k6-C5", 28, 156.0, 154.3),
    entry("E-n30-k3", 30, 534.0, 484.1),
    entry("E-n31-k7", 31, 1815.0, 1188.13),
    entry("A-n32-k5", 32, 784.0, 758.43),
];

/// Looks an instance up by name, ignoring case and a file extension.
pub fn reference(name: &str) -> Option<&'static ReferenceEntry> {
    let stem = name.trim();
    let stem = stem.strip_suffix(".vrp").unwrap_or(stem);
    REFERENCE.iter().find(|e| e.name.eq_ignore_ascii_case(stem))
}
