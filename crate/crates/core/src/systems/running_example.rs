//! The overtaking example: a straight 6 m lane with a broken-down car ahead of the ego.
//!
//! The obstacle is 3.6 m wide and sits 0.2 m right of the centre line, so every
//! collision-free pass leaves the lane, least so on the left. The
//! specifications are, by priority: no collision, make progress, stay in the lane.

use crate::error::Result;
use crate::stl::Trace;
use crate::systems::dynamics::{rollout, System};
use crate::systems::scenario::Scenario;

/// Scenario file of the overtaking example, also shipped as `scenarios/overtaking.toml`.
pub const OVERTAKING_TOML: &str = r#"schema_version = 1
name = "overtaking"
horizon = 15
initial_state = [0.0, 0.0, 0.0, 0.0, 10.0]

[system]
kind = "single-track"
wheelbase = 3.0
dt = 0.2
u_lo = [-0.3, -8.0]
u_hi = [0.3, 8.0]

[vehicle]
length = 4.5
width = 1.8

[lane]
width = 6.0
path = [[0.0, 0.0], [400.0, 0.0]]

[[obstacles]]
id = "broken_down"
x = 40.0
y = -0.2
theta = 0.0
v = 0.0
shape = { length = 5.0, width = 3.6 }

[limits]
progress_s = 55.0

[[specs]]
name = "coll"
formula = "G(not(collision))"
measure = "space-left-time"
m = 1

[[specs]]
name = "prog"
formula = "F(make_progress)"
measure = "space-left-time"
m = 6
c_bar = 30.0

[[specs]]
name = "lane"
formula = "G(and(left_bound, right_bound))"
measure = "space-left-time"
m = 30
c_bar = 30.0

[solver]
iterations = 20
sigma = [[0.1, 0.0], [0.0, 6.0]]
lambda = 1.0
beta = { kind = "cosine", beta_min = 1e-6 }
samples = { kind = "cosine", m_init = 400, m_final = 100 }
return_rule = "best-sample"
seed = 0

[mpc]
steps = 40
"#;

pub fn overtaking() -> Result<Scenario> {
    Scenario::from_toml_str(OVERTAKING_TOML)
}

/// Number of trajectories in a fan.
pub const FAN_SIZE: usize = 21;

/// Ego state `[x, y, theta, delta, v]` at the first fan instant, in the lane before the obstacle.
pub const FAN_START_T1: [f64; 5] = [10.0, 0.0, 0.0, 0.0, 10.0];
/// Ego state at the second fan instant: beside and past the obstacle, 1.5 m over the left bound.
pub const FAN_START_T2: [f64; 5] = [48.0, 3.6, 0.0, 0.0, 10.0];

/// Largest steering velocity of the fan.
pub const FAN_MAX_RATE: f64 = 0.027;

/// Steering velocities of the fan, from `+FAN_MAX_RATE` (sample 0, left) to
/// `-FAN_MAX_RATE` (sample 20, right).
pub fn fan_steering_rates() -> Vec<f64> {
    (0..FAN_SIZE).map(|i| FAN_MAX_RATE * (1.0 - 2.0 * i as f64 / (FAN_SIZE - 1) as f64)).collect()
}

/// 21 rollouts from `start` with constant steering velocity and zero acceleration.
pub fn trajectory_fan(scenario: &Scenario, start: &[f64]) -> Result<Vec<Trace<f64>>> {
    let sys = scenario.system();
    let k = scenario.horizon();
    fan_steering_rates()
        .into_iter()
        .map(|rate| {
            let inputs: Vec<f64> = (0..=k).flat_map(|_| [rate, 0.0]).collect();
            rollout(sys, start, &inputs)
        })
        .collect()
}

/// Output trace through the points `(x_k, y_k)` with speeds `v_k`; heading from forward differences.
fn path_trace(xs: &[f64], ys: &[f64], vs: &[f64], dt: f64) -> Result<Trace<f64>> {
    let n = xs.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let j = if k + 1 < n { k } else { k - 1 };
            let (dx, dy) = (xs[j + 1] - xs[j], ys[j + 1] - ys[j]);
            let theta = if dx == 0.0 && dy == 0.0 { 0.0 } else { dy.atan2(dx) };
            let acc = if k + 1 < n { (vs[k + 1] - vs[k]) / dt } else { 0.0 };
            vec![xs[k], ys[k], theta, 0.0, vs[k], 0.0, acc]
        })
        .collect();
    Trace::from_rows(&rows, dt)
}

fn smoothstep(a: f64, b: f64, t: f64) -> f64 {
    let u = ((t - a) / (b - a)).clamp(0.0, 1.0);
    u * u * (3.0 - 2.0 * u)
}

/// The five hand-built example trajectories `y_a..y_e`, keyed by their letter.
///
/// All start at `x = 20` on the lane centre. `a` and `b` swerve out to the same peak
/// offset of 3.6 m; `b` comes back into the lane after the obstacle, `a` stays out. `c`
/// is faster and swerves further without returning. `d` swerves late and clips the
/// obstacle before leaving the lane. `e` brakes to a stop behind the obstacle.
pub fn example_trajectories(scenario: &Scenario) -> Result<Vec<(char, Trace<f64>)>> {
    let dt = scenario.system().dt();
    let n = scenario.horizon() + 1;
    let ks: Vec<f64> = (0..n).map(|k| k as f64).collect();
    let cruise = |v: f64| -> Vec<f64> { ks.iter().map(|k| 20.0 + v * k * dt).collect() };
    let lateral = |f: &dyn Fn(f64) -> f64| -> Vec<f64> { ks.iter().map(|&k| f(k)).collect() };
    let const_v = |v: f64| vec![v; n];

    let b_y = lateral(&|k| 3.6 * (smoothstep(0.0, 5.0, k) - smoothstep(9.0, 14.0, k)));
    let a_y = lateral(&|k| 3.6 * smoothstep(0.0, 5.0, k));
    let c_y = lateral(&|k| 5.0 * smoothstep(0.0, 5.0, k));
    let d_y = lateral(&|k| if k <= 3.0 { 0.0 } else { 5.0 * (k - 3.0) / 12.0 });

    // braking at 8 m/s^2 from 15 m/s, then standing
    let e_v: Vec<f64> = ks.iter().map(|k| (15.0 - 8.0 * k * dt).max(0.0)).collect();
    let mut e_x = vec![20.0; n];
    for k in 1..n {
        e_x[k] = e_x[k - 1] + 0.5 * (e_v[k - 1] + e_v[k]) * dt;
    }

    Ok(vec![
        ('a', path_trace(&cruise(15.0), &a_y, &const_v(15.0), dt)?),
        ('b', path_trace(&cruise(15.0), &b_y, &const_v(15.0), dt)?),
        ('c', path_trace(&cruise(16.0), &c_y, &const_v(16.0), dt)?),
        ('d', path_trace(&cruise(15.0), &d_y, &const_v(15.0), dt)?),
        ('e', path_trace(&e_x, &vec![0.0; n], &e_v, dt)?),
    ])
}
