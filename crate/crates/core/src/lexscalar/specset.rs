use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::lexscalar::cost::{violation_cost, DiscretizationScheme};
use crate::lexscalar::layout::{lex_compare, Layout, ScalarCost};
use crate::robustness::{CompiledFormula, ExtReal, MeasureConfig};
use crate::scalar::Real;
use crate::stl::{Formula, Trace};

/// One prioritized specification.
#[derive(Clone, Debug)]
pub struct Spec<F> {
    pub name: String,
    formula: Formula<F>,
    compiled: CompiledFormula<F>,
    pub measure: MeasureConfig<F>,
    pub scheme: DiscretizationScheme<F>,
}

impl<F: Real> Spec<F> {
    pub fn new(name: impl Into<String>, formula: Formula<F>, measure: MeasureConfig<F>, scheme: DiscretizationScheme<F>) -> Self {
        let compiled = CompiledFormula::new(&formula);
        Self { name: name.into(), formula, compiled, measure, scheme }
    }

    pub fn formula(&self) -> &Formula<F> {
        &self.formula
    }

    pub fn compiled(&self) -> &CompiledFormula<F> {
        &self.compiled
    }

    /// Robustness at time 0.
    pub fn robustness(&self, trace: &Trace<F>) -> Result<ExtReal<F>> {
        self.compiled.robustness(&self.measure, trace, 0)
    }
}

/// Per-spec results of evaluating a trace, highest priority first.
#[derive(Debug, Clone)]
pub struct SpecEvaluation<F> {
    pub robustness: Vec<ExtReal<F>>,
    pub continuous: Vec<F>,
    pub discrete: Vec<u64>,
    pub scalar: ScalarCost,
}

/// Totally ordered specification set with its cached bit layout.
#[derive(Clone, Debug)]
pub struct SpecSet<F> {
    specs: Vec<Spec<F>>,
    layout: Layout,
}

impl<F: Real> SpecSet<F> {
    /// `specs` ordered by decreasing priority.
    pub fn new(specs: Vec<Spec<F>>) -> Result<Self> {
        if specs.is_empty() {
            return Err(Error::Config("a specification set needs at least one specification".into()));
        }
        for s in &specs {
            s.measure.validate()?;
        }
        let m: Vec<u64> = specs.iter().map(|s| s.scheme.m() as u64).collect();
        let layout = Layout::new(&m)?;
        Ok(Self { specs, layout })
    }

    pub fn specs(&self) -> &[Spec<F>] {
        &self.specs
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Robustness, continuous and discrete costs and the packed scalar.
    pub fn evaluate(&self, trace: &Trace<F>) -> Result<SpecEvaluation<F>> {
        let n = self.specs.len();
        let mut robustness = Vec::with_capacity(n);
        let mut continuous = Vec::with_capacity(n);
        let mut discrete = Vec::with_capacity(n);
        for s in &self.specs {
            let eta = s.robustness(trace)?;
            let c = violation_cost(eta);
            discrete.push(s.scheme.discretize(c));
            robustness.push(eta);
            continuous.push(c);
        }
        let scalar = self.layout.pack(&discrete)?;
        Ok(SpecEvaluation { robustness, continuous, discrete, scalar })
    }

    /// Discrete cost vector.
    pub fn discrete_costs(&self, trace: &Trace<F>) -> Result<Vec<u64>> {
        self.specs
            .iter()
            .map(|s| Ok(s.scheme.discretize(violation_cost(s.robustness(trace)?))))
            .collect()
    }

    /// Continuous cost vector.
    pub fn continuous_costs(&self, trace: &Trace<F>) -> Result<Vec<F>> {
        self.specs.iter().map(|s| Ok(violation_cost(s.robustness(trace)?))).collect()
    }

    /// Packed scalar cost `s(y)`.
    pub fn scalar_cost(&self, trace: &Trace<F>) -> Result<ScalarCost> {
        self.layout.pack(&self.discrete_costs(trace)?)
    }

    /// Compares two traces by their discrete cost vectors.
    pub fn compare(&self, a: &Trace<F>, b: &Trace<F>) -> Result<Ordering> {
        lex_compare(&self.discrete_costs(a)?, &self.discrete_costs(b)?)
    }
}

/// Scalar objective minimized by the solver.
pub trait CostFunction<F>: Sync {
    fn cost(&self, trace: &Trace<F>) -> Result<ScalarCost>;
}

impl<F: Real> CostFunction<F> for SpecSet<F> {
    fn cost(&self, trace: &Trace<F>) -> Result<ScalarCost> {
        self.scalar_cost(trace)
    }
}

impl<F, C> CostFunction<F> for C
where
    C: Fn(&Trace<F>) -> Result<ScalarCost> + Sync,
{
    fn cost(&self, trace: &Trace<F>) -> Result<ScalarCost> {
        self(trace)
    }
}
