//! Scenario files (TOML, `schema_version = 1`).
//!
//! ```toml
//! schema_version = 1
//! name = "overtaking"
//! horizon = 15
//! initial_state = [0.0, 0.0, 0.0, 0.0, 10.0]
//!
//! [system]
//! kind = "single-track"          # or "integrator"
//! wheelbase = 3.0
//! dt = 0.2
//! u_lo = [-0.3, -8.0]
//! u_hi = [0.3, 8.0]
//!
//! [lane]
//! width = 6.0
//! path = [[0.0, 0.0], [400.0, 0.0]]
//!
//! [[obstacles]]
//! id = "broken_down"
//! x = 40.0
//! y = -0.2
//! shape = { length = 5.0, width = 3.6 }
//!
//! [limits]
//! progress_s = 55.0
//!
//! [[specs]]
//! name = "lane"
//! formula = "G(and(left_bound, right_bound))"
//! measure = "space-left-time"
//! m = 30
//! c_bar = 30.0
//!
//! [solver]
//! iterations = 20
//! sigma = [[0.1, 0.0], [0.0, 6.0]]
//! beta = { kind = "cosine", beta_min = 1e-6 }
//! samples = { kind = "cosine", m_init = 400, m_final = 100 }
//! return_rule = "best-sample"
//!
//! [mpc]
//! steps = 40
//! ```
//!
//! Optional sections: `vehicle` (`length`, `width`), `limits` (see [`Limits`]),
//! `initial_input`, and `[[predicates]]` entries `{ id, channel, op = ">=" | "<=", value }`
//! for linear output predicates. Unknown keys are rejected.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexscalar::{DiscretizationScheme, Spec, SpecSet};
use crate::robustness::{Measure, MeasureConfig, Nu};
use crate::solver::{BetaRule, ReturnRule, SampleRule, SolverConfig, SquareMatrix};
use crate::stl::{is_valid_identifier, parse_formula, Predicate, PredicateRegistry};
use crate::systems::dynamics::{Integrator, SingleTrack, System};
use crate::systems::geometry::{Lane, Obstacle, Polyline, VehicleShape};
use crate::systems::predicates::{road_predicates, Limits, RoadContext};

pub const SCHEMA_VERSION: u32 = 1;

fn d_int_lo() -> f64 {
    -1.35
}
fn d_int_hi() -> f64 {
    1.35
}
fn d_wheelbase() -> f64 {
    3.0
}
fn d_dt() -> f64 {
    0.2
}
fn d_st_lo() -> [f64; 2] {
    [-0.3, -8.0]
}
fn d_st_hi() -> [f64; 2] {
    [0.3, 8.0]
}
fn d_measure() -> String {
    "space".into()
}
fn d_c_bar() -> f64 {
    10.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SystemSpec {
    Integrator {
        #[serde(default = "d_int_lo")]
        u_lo: f64,
        #[serde(default = "d_int_hi")]
        u_hi: f64,
    },
    SingleTrack {
        #[serde(default = "d_wheelbase")]
        wheelbase: f64,
        #[serde(default = "d_dt")]
        dt: f64,
        #[serde(default = "d_st_lo")]
        u_lo: [f64; 2],
        #[serde(default = "d_st_hi")]
        u_hi: [f64; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaneSpec {
    pub width: f64,
    pub path: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelPredicate {
    pub id: String,
    pub channel: usize,
    pub op: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecEntry {
    pub name: String,
    pub formula: String,
    #[serde(default = "d_measure")]
    pub measure: String,
    #[serde(default)]
    pub nu: Option<Nu<f64>>,
    /// Number of violation intervals; `thresholds` takes precedence when given.
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default = "d_c_bar")]
    pub c_bar: f64,
    #[serde(default)]
    pub thresholds: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSpec {
    pub iterations: usize,
    /// Row-major covariance; defaults to 0.5 (integrator) or diag(0.1, 6) (single track).
    pub sigma: Option<Vec<Vec<f64>>>,
    pub lambda: f64,
    pub beta: BetaRule,
    pub samples: SampleRule,
    pub return_rule: ReturnRule,
    pub seed: u64,
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            iterations: 20,
            sigma: None,
            lambda: 1.0,
            beta: BetaRule::Cosine { beta_min: 1e-6 },
            samples: SampleRule::Cosine { m_init: 400, m_final: 100 },
            return_rule: ReturnRule::BestSample,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MpcSpec {
    pub steps: usize,
}

impl Default for MpcSpec {
    fn default() -> Self {
        Self { steps: 1 }
    }
}

/// Raw scenario file contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub horizon: usize,
    pub system: SystemSpec,
    pub initial_state: Vec<f64>,
    #[serde(default)]
    pub initial_input: Option<Vec<f64>>,
    #[serde(default)]
    pub vehicle: VehicleShape,
    #[serde(default)]
    pub lane: Option<LaneSpec>,
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
    #[serde(default)]
    pub limits: Limits,
    #[serde(default)]
    pub predicates: Vec<ChannelPredicate>,
    pub specs: Vec<SpecEntry>,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub mpc: MpcSpec,
}

/// Concrete system of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemModel {
    Integrator(Integrator<f64>),
    SingleTrack(SingleTrack<f64>),
}

impl SystemModel {
    fn inner(&self) -> &dyn System<f64> {
        match self {
            SystemModel::Integrator(s) => s,
            SystemModel::SingleTrack(s) => s,
        }
    }

    pub fn wheelbase(&self) -> Option<f64> {
        match self {
            SystemModel::SingleTrack(s) => Some(s.wheelbase),
            SystemModel::Integrator(_) => None,
        }
    }
}

impl System<f64> for SystemModel {
    fn n_x(&self) -> usize {
        self.inner().n_x()
    }
    fn n_u(&self) -> usize {
        self.inner().n_u()
    }
    fn n_y(&self) -> usize {
        self.inner().n_y()
    }
    fn dt(&self) -> f64 {
        self.inner().dt()
    }
    fn u_lo(&self) -> &[f64] {
        self.inner().u_lo()
    }
    fn u_hi(&self) -> &[f64] {
        self.inner().u_hi()
    }
    fn step(&self, x: &[f64], u: &[f64], next: &mut [f64]) -> Result<()> {
        self.inner().step(x, u, next)
    }
    fn output(&self, x: &[f64], u: &[f64], y: &mut [f64]) {
        self.inner().output(x, u, y)
    }
}

/// Validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub file: ScenarioFile,
    model: SystemModel,
    lane: Option<Lane<f64>>,
}

/// 1-based line and column of a byte offset.
fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

impl Scenario {
    pub fn from_toml_str(src: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(src).map_err(|e| {
            let (line, col) = e.span().map_or((1, 1), |s| line_col(src, s.start));
            Error::Parse { line, col, msg: e.message().to_string() }
        })?;
        Self::new(file)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let src = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&src)
    }

    pub fn new(file: ScenarioFile) -> Result<Self> {
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!("unsupported schema_version {} (expected {SCHEMA_VERSION})", file.schema_version)));
        }
        if file.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if file.specs.is_empty() {
            return Err(Error::Config("a scenario needs at least one spec".into()));
        }
        let model = match &file.system {
            SystemSpec::Integrator { u_lo, u_hi } => SystemModel::Integrator(Integrator::new(*u_lo, *u_hi)?),
            SystemSpec::SingleTrack { wheelbase, dt, u_lo, u_hi } => SystemModel::SingleTrack(SingleTrack::new(*wheelbase, *dt, *u_lo, *u_hi)?),
        };
        if file.initial_state.len() != model.n_x() || file.initial_state.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config(format!("initial_state must hold {} finite values", model.n_x())));
        }
        if let SystemModel::SingleTrack(_) = model {
            if file.initial_state[3].abs() >= std::f64::consts::FRAC_PI_2 {
                return Err(Error::Config("initial steering angle must be below pi/2".into()));
            }
        }
        if let Some(u) = &file.initial_input {
            if u.len() != model.n_u() {
                return Err(Error::Config(format!("initial_input must hold {} values", model.n_u())));
            }
            if !crate::systems::inputs_within_bounds(u, model.u_lo(), model.u_hi()) {
                return Err(Error::Config("initial_input violates the input bounds".into()));
            }
        }
        file.vehicle.validate()?;
        for o in &file.obstacles {
            o.validate()?;
        }
        let lane = match &file.lane {
            Some(l) => Some(Lane::new(Polyline::new(l.path.clone())?, l.width)?),
            None => None,
        };
        let s = Self { file, model, lane };
        s.spec_set_at(0, None)?;
        s.solver_config()?.validate()?;
        Ok(s)
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn system(&self) -> &SystemModel {
        &self.model
    }

    pub fn horizon(&self) -> usize {
        self.file.horizon
    }

    pub fn lane(&self) -> Option<&Lane<f64>> {
        self.lane.as_ref()
    }

    pub fn initial_state(&self) -> &[f64] {
        &self.file.initial_state
    }

    pub fn mpc_steps(&self) -> usize {
        self.file.mpc.steps
    }

    /// Initial input trajectory `u_0..=u_K`.
    pub fn initial_inputs(&self) -> Vec<f64> {
        let u = self.file.initial_input.clone().unwrap_or_else(|| vec![0.0; self.model.n_u()]);
        u.iter().copied().cycle().take(u.len() * (self.horizon() + 1)).collect()
    }

    /// Road context with obstacles advanced by `t0` seconds.
    pub fn context_at(&self, t0: f64) -> RoadContext {
        RoadContext {
            lane: self.lane.clone(),
            ego: self.file.vehicle,
            wheelbase: self.model.wheelbase().unwrap_or(1.0),
            obstacles: self.file.obstacles.iter().map(|o| o.advanced(t0)).collect(),
            limits: self.file.limits.clone(),
        }
    }

    /// Predicates for a plan starting `t0` seconds into the scenario.
    pub fn registry_at(&self, t0: f64) -> Result<PredicateRegistry<f64>> {
        let mut reg = match self.model {
            SystemModel::SingleTrack(_) => road_predicates(Arc::new(self.context_at(t0)))?,
            SystemModel::Integrator(_) => PredicateRegistry::new(),
        };
        for p in &self.file.predicates {
            if !is_valid_identifier(&p.id) || reg.contains(&p.id) {
                return Err(Error::Config(format!("predicate id `{}` is invalid or already defined", p.id)));
            }
            if p.channel >= self.model.n_y() {
                return Err(Error::Config(format!("predicate `{}` reads channel {} of {}", p.id, p.channel, self.model.n_y())));
            }
            let pred = match p.op.as_str() {
                ">=" => Predicate::channel_at_least(p.id.as_str(), p.channel, p.value),
                "<=" => Predicate::channel_at_most(p.id.as_str(), p.channel, p.value),
                other => return Err(Error::Config(format!("predicate `{}`: unknown op `{other}`", p.id))),
            };
            reg.insert(pred);
        }
        Ok(reg)
    }

    /// Specification set for MPC step `step`; `measure` replaces every spec's measure.
    pub fn spec_set_at(&self, step: usize, measure: Option<Measure>) -> Result<SpecSet<f64>> {
        let reg = self.registry_at(step as f64 * self.model.dt())?;
        let specs = self
            .file
            .specs
            .iter()
            .map(|e| {
                let formula = parse_formula(&e.formula, &reg).map_err(|err| match err {
                    Error::Parse { line, col, msg } => Error::Config(format!("spec `{}`, formula {line}:{col}: {msg}", e.name)),
                    other => other,
                })?;
                let mut config: MeasureConfig<f64> = match measure {
                    Some(m) => m.config(),
                    None => e.measure.parse::<Measure>()?.config(),
                };
                if let Some(nu) = e.nu {
                    config = config.with_nu(nu);
                }
                let scheme = match &e.thresholds {
                    Some(t) => {
                        let s = DiscretizationScheme::new(t.clone())?;
                        if e.m.is_some_and(|m| m != s.m()) {
                            return Err(Error::Config(format!("spec `{}`: m disagrees with the thresholds", e.name)));
                        }
                        s
                    }
                    None => DiscretizationScheme::uniform_or_single(e.c_bar, e.m.unwrap_or(1))?,
                };
                Ok(Spec::new(e.name.clone(), formula, config, scheme))
            })
            .collect::<Result<Vec<_>>>()?;
        SpecSet::new(specs)
    }

    pub fn solver_config(&self) -> Result<SolverConfig<f64>> {
        let s = &self.file.solver;
        let n = self.model.n_u();
        let sigma = match &s.sigma {
            Some(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Config(format!("solver.sigma must be {n}x{n}")));
                }
                SquareMatrix::from_row_major(n, rows.concat())?
            }
            None => match self.model {
                SystemModel::Integrator(_) => SquareMatrix::diagonal(&[0.5]),
                SystemModel::SingleTrack(_) => SquareMatrix::diagonal(&[0.1, 6.0]),
            },
        };
        let mut c = SolverConfig::for_system(&self.model, sigma);
        c.iterations = s.iterations;
        c.lambda = s.lambda;
        c.beta_rule = s.beta;
        c.sample_rule = s.samples;
        c.return_rule = s.return_rule;
        c.seed = s.seed;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
schema_version = 1
name = "tiny"
horizon = 3
initial_state = [0.0]

[system]
kind = "integrator"

[[predicates]]
id = "above"
channel = 0
op = ">="
value = 1.0

[[specs]]
name = "reach"
formula = "F(above)"
m = 3
"#;

    #[test]
    fn parses_minimal() {
        let s = Scenario::from_toml_str(MINIMAL).unwrap();
        assert_eq!(s.horizon(), 3);
        assert_eq!(s.initial_inputs().len(), 4);
        let set = s.spec_set_at(0, None).unwrap();
        assert_eq!(set.layout().widths(), &[2]);
    }

    #[test]
    fn errors_are_line_anchored() {
        let bad = MINIMAL.replace("horizon = 3", "horizon = 3\nbogus = 1");
        match Scenario::from_toml_str(&bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
        let unknown = MINIMAL.replace("F(above)", "F(below)");
        assert!(matches!(Scenario::from_toml_str(&unknown), Err(Error::Config(_))));
        let version = MINIMAL.replace("schema_version = 1", "schema_version = 2");
        assert!(Scenario::from_toml_str(&version).is_err());
    }
}
