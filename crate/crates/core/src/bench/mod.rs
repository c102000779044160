//! Desk-scale experiment harnesses.

mod ablation;
mod comparison;
mod compositions;
mod discretization;
mod measures;

pub use ablation::{optimality_gap, solver_ablation, AblationConfig, AblationParams, AblationReport, AblationRow, AblationScenario};
pub use compositions::{composition_count, sample_composition, sample_compositions, sample_distinct_compositions, CompositionSample, Strategy};
pub use discretization::{benchmark_population, composition_error, discretization_study, random_thresholds, DiscretizationParams, DiscretizationRow};
pub use comparison::{fan_comparison, robustness_comparison, ComparisonTable, FanInstant};
pub use measures::{measure_benchmark, random_trajectories, MeasureBenchParams, MeasureRow, Stat};
