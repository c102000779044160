//! Violation costs, quantization and the packed lexicographic scalar.

mod cost;
mod layout;
mod specset;

pub use cost::{violation_cost, DiscretizationScheme};
pub use layout::{lex_compare, word_width, Layout, ScalarCost};
pub use specset::{CostFunction, Spec, SpecEvaluation, SpecSet};
