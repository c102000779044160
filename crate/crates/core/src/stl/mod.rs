//! Formulas, traces and Boolean semantics.

mod boolean;
mod formula;
mod parse;
mod trace;

pub use boolean::{boolean_sat, boolean_sat_all_times, BooleanMonitor};
pub(crate) use boolean::{future_window, past_window};
pub use formula::{resolve, Formula, Interval, Predicate};
pub use parse::{is_valid_identifier, parse_formula, parse_formula_with, PredicateRegistry};
pub use trace::Trace;
