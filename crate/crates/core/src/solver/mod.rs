//! Deterministic MPPI over packed lexicographic costs.

mod config;
mod linalg;
mod mppi;
mod schedule;

pub use config::{BetaRule, ReturnRule, SampleRule, SolverConfig};
pub use linalg::SquareMatrix;
pub use mppi::{solve, solve_observed, Candidate, IterationDetail, IterationRecord, SolveResult};
pub use schedule::{beta_cosine, beta_exponential, sample_count_cosine};
