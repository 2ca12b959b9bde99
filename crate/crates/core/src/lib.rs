//! Branch-price-and-cut for the capacitated vehicle routing problem with
//! QUBO-based pricing and separation heuristics.

pub mod driver;
pub mod error;
pub mod instance;
pub mod lp;
pub mod master;
pub mod pricing_exact;
pub mod qubo;
pub mod sampler;
pub mod synthetic;

pub use error::{Error, Result};
pub use instance::{parse_instance, Instance, Route};
