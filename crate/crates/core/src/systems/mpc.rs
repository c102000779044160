use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lexscalar::{ScalarCost, SpecEvaluation};
use crate::robustness::Measure;
use crate::solver::{solve, IterationRecord, SolverConfig};
use crate::stl::Trace;
use crate::systems::dynamics::{outputs_of, System};
use crate::systems::scenario::Scenario;

/// Warm start for the next plan: drop the executed input and repeat the last one.
pub fn warm_start(plan: &[f64], n_u: usize) -> Vec<f64> {
    let mut next = plan[n_u..].to_vec();
    next.extend_from_slice(&plan[plan.len() - n_u..]);
    next
}

/// Diagnostics of one receding-horizon step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MpcStep {
    pub step: usize,
    pub plan_cost: ScalarCost,
    pub plan_discrete: Vec<u64>,
    pub invalid_samples: usize,
    pub wall_time_s: f64,
    pub solver: Vec<IterationRecord>,
}

/// Executed closed-loop run.
#[derive(Debug, Clone)]
pub struct MpcRun {
    /// `x_0..=x_H`.
    pub states: Vec<Vec<f64>>,
    /// Executed inputs `u_0..u_{H-1}`.
    pub inputs: Vec<Vec<f64>>,
    /// Outputs `g(x_h, u_h)`; the last row repeats the last executed input.
    pub executed: Trace<f64>,
    pub steps: Vec<MpcStep>,
}

impl MpcRun {
    /// Specification costs of the executed trajectory, with obstacles predicted from the start.
    pub fn evaluate(&self, scenario: &Scenario, measure: Option<Measure>) -> Result<SpecEvaluation<f64>> {
        scenario.spec_set_at(0, measure)?.evaluate(&self.executed)
    }
}

/// Plans, applies the first input, re-plans from the new state, `steps` times.
///
/// Solve `h` uses seed `config.seed + h`. Obstacles move at constant velocity and are
/// re-predicted from their current state at every step.
pub fn mpc_loop(scenario: &Scenario, config: &SolverConfig<f64>, steps: usize, measure: Option<Measure>) -> Result<MpcRun> {
    if steps == 0 {
        return Err(Error::Config("the MPC loop needs at least one step".into()));
    }
    let sys = scenario.system();
    let n_u = sys.n_u();
    let mut x = scenario.initial_state().to_vec();
    let mut plan = scenario.initial_inputs();
    let mut states = vec![x.clone()];
    let mut inputs = Vec::with_capacity(steps);
    let mut records = Vec::with_capacity(steps);
    let mut next = vec![0.0; sys.n_x()];
    for h in 0..steps {
        let started = Instant::now();
        let wrap = |e: Error| Error::Mpc { iteration: h, source: Box::new(e) };
        let specs = scenario.spec_set_at(h, measure).map_err(wrap)?;
        let mut cfg = config.clone();
        cfg.seed = config.seed.wrapping_add(h as u64);
        let result = solve(sys, &specs, &x, &plan, &cfg).map_err(wrap)?;
        let chosen = result.solution();
        let u0 = chosen.inputs[..n_u].to_vec();
        sys.step(&x, &u0, &mut next).map_err(wrap)?;
        records.push(MpcStep {
            step: h,
            plan_cost: chosen.cost.clone(),
            plan_discrete: specs.layout().unpack(&chosen.cost).map_err(wrap)?,
            invalid_samples: result.invalid_samples,
            wall_time_s: started.elapsed().as_secs_f64(),
            solver: result.iterations.clone(),
        });
        plan = warm_start(&chosen.inputs, n_u);
        x = next.clone();
        states.push(x.clone());
        inputs.push(u0);
    }
    let mut flat_u: Vec<f64> = inputs.concat();
    flat_u.extend_from_slice(&inputs[steps - 1]);
    let executed = outputs_of(sys, &states.concat(), &flat_u)?;
    Ok(MpcRun { states, inputs, executed, steps: records })
}
