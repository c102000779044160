//! Quantitative semantics: predicate measures, operator families and the evaluator.

mod eval;
mod ext;
mod measure;
mod ops;
mod predicate;

pub use eval::{robustness, robustness_all_times, CompiledFormula, EvalStats, PredicateCache};
pub use ext::ExtReal;
pub use measure::{Measure, MeasureConfig};
pub use ops::{amax, amin, Nu, OperatorFamily};
pub use predicate::{predicate_robustness, predicate_robustness_of_signal, PredicateMeasure};
