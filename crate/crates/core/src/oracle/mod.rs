//! Ground-truth optima: interval reachability for the integrator benchmark and
//! exhaustive grid search for small instances.

mod brute;
mod linear;

pub use brute::{brute_force_optimum, linspace, ENUMERATION_LIMIT};
pub use linear::{violation_error, CostMode, LexOptimum, LinearBenchmark, Span};
