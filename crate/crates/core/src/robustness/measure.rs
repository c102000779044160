use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::robustness::ops::{Nu, OperatorFamily};
use crate::robustness::predicate::PredicateMeasure;
use crate::scalar::Real;

/// The eleven named robustness measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Space,
    LeftTime,
    RightTime,
    CombTime,
    Dur,
    DurSev,
    Smooth,
    Agm,
    New,
    Pm,
    SpaceLeftTime,
}

impl Measure {
    pub const ALL: [Measure; 11] = [
        Measure::Space,
        Measure::LeftTime,
        Measure::RightTime,
        Measure::CombTime,
        Measure::Dur,
        Measure::DurSev,
        Measure::Smooth,
        Measure::Agm,
        Measure::New,
        Measure::Pm,
        Measure::SpaceLeftTime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Space => "space",
            Measure::LeftTime => "left-time",
            Measure::RightTime => "right-time",
            Measure::CombTime => "comb-time",
            Measure::Dur => "dur",
            Measure::DurSev => "dur-sev",
            Measure::Smooth => "smooth",
            Measure::Agm => "agm",
            Measure::New => "new",
            Measure::Pm => "pm",
            Measure::SpaceLeftTime => "space-left-time",
        }
    }

    pub fn predicate_measure(self) -> PredicateMeasure {
        match self {
            Measure::LeftTime => PredicateMeasure::LeftTime,
            Measure::RightTime => PredicateMeasure::RightTime,
            Measure::CombTime => PredicateMeasure::CombTime,
            Measure::SpaceLeftTime => PredicateMeasure::SpaceLeftTime,
            _ => PredicateMeasure::Space,
        }
    }

    pub fn family(self) -> OperatorFamily {
        match self {
            Measure::Dur => OperatorFamily::Dur,
            Measure::DurSev => OperatorFamily::DurSev,
            Measure::Smooth => OperatorFamily::Smooth,
            Measure::Agm => OperatorFamily::Agm,
            Measure::New => OperatorFamily::New,
            Measure::Pm => OperatorFamily::Pm,
            _ => OperatorFamily::Std,
        }
    }

    /// Measures for which negative robustness implies Boolean violation.
    pub fn is_reverse_sound(self) -> bool {
        matches!(
            self,
            Measure::Space
                | Measure::LeftTime
                | Measure::RightTime
                | Measure::CombTime
                | Measure::SpaceLeftTime
                | Measure::Dur
                | Measure::DurSev
        )
    }

    pub fn config<F: Real>(self) -> MeasureConfig<F> {
        MeasureConfig::preset(self)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMeasure(s.to_string()))
    }
}

/// Predicate robustness function, min/max families and tuning constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct MeasureConfig<F> {
    pub predicate: PredicateMeasure,
    pub min_op: OperatorFamily,
    pub max_op: OperatorFamily,
    pub nu: Nu<F>,
}

impl<F: Real> MeasureConfig<F> {
    pub fn preset(measure: Measure) -> Self {
        Self {
            predicate: measure.predicate_measure(),
            min_op: measure.family(),
            max_op: measure.family(),
            nu: Nu::default(),
        }
    }

    pub fn with_nu(mut self, nu: Nu<F>) -> Self {
        self.nu = nu;
        self
    }

    /// The named preset this configuration matches, ignoring `nu`.
    pub fn named(&self) -> Option<Measure> {
        Measure::ALL.into_iter().find(|m| {
            m.predicate_measure() == self.predicate && m.family() == self.min_op && m.family() == self.max_op
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.nu.validate()
    }

    /// True when both operators are the exact minimum and maximum.
    pub fn is_standard(&self) -> bool {
        self.min_op == OperatorFamily::Std && self.max_op == OperatorFamily::Std
    }
}

impl<F: Real> Default for MeasureConfig<F> {
    fn default() -> Self {
        Self::preset(Measure::Space)
    }
}
