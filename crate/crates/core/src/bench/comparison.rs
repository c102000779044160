use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::robustness::{CompiledFormula, Measure};
use crate::stl::{parse_formula, Trace};
use crate::systems::running_example;

/// Robustness of every sample under every measure, raw and scaled by the column's largest magnitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub measures: Vec<Measure>,
    /// `raw[i][j]`: measure `i`, sample `j`.
    pub raw: Vec<Vec<f64>>,
    /// Values in `[-1, 1]`; an unnormalizable column is copied raw.
    pub normalized: Vec<Vec<f64>>,
    /// Measures whose column is all zero or not finite, left unnormalized.
    pub skipped: Vec<Measure>,
}

pub fn robustness_comparison(formula: &CompiledFormula<f64>, traces: &[Trace<f64>], measures: &[Measure]) -> Result<ComparisonTable> {
    if traces.is_empty() || measures.is_empty() {
        return Err(Error::Config("comparison needs samples and measures".into()));
    }
    let mut raw = Vec::with_capacity(measures.len());
    let mut normalized = Vec::with_capacity(measures.len());
    let mut skipped = Vec::new();
    for &m in measures {
        let config = m.config();
        let col: Vec<f64> = traces.iter().map(|t| formula.robustness(&config, t, 0).map(|r| r.to_float())).collect::<Result<_>>()?;
        let scale = col.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if scale == 0.0 || !scale.is_finite() {
            skipped.push(m);
            normalized.push(col.clone());
        } else {
            normalized.push(col.iter().map(|v| v / scale).collect());
        }
        raw.push(col);
    }
    Ok(ComparisonTable { measures: measures.to_vec(), raw, normalized, skipped })
}

/// Planning instant of the trajectory fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FanInstant {
    T1,
    T2,
}

/// Comparison on the overtaking fan at `instant` for `G(and(left_bound, right_bound))`.
pub fn fan_comparison(instant: FanInstant, measures: &[Measure]) -> Result<ComparisonTable> {
    let scenario = running_example::overtaking()?;
    let start = match instant {
        FanInstant::T1 => running_example::FAN_START_T1,
        FanInstant::T2 => running_example::FAN_START_T2,
    };
    let fan = running_example::trajectory_fan(&scenario, &start)?;
    let formula = parse_formula("G(and(left_bound, right_bound))", &scenario.registry_at(0.0)?)?;
    robustness_comparison(&CompiledFormula::new(&formula), &fan, measures)
}
