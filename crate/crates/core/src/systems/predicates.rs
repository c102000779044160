//! Scenario predicates over single-track outputs `[x, y, theta, delta, v, v_delta, a]`.
//!
//! Every predicate is a signed margin, nonnegative exactly when it holds.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stl::{Predicate, PredicateRegistry, Trace};
use crate::systems::dynamics::channel;
use crate::systems::geometry::{clearance, Disc, Lane, Obstacle, VehicleShape};

/// Thresholds of the predicate library. None of these are fixed by the method; the
/// defaults describe an urban passenger car.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Limits {
    pub v_min: f64,
    pub v_max: f64,
    pub steering_max: f64,
    pub speed_limit: f64,
    pub flow_min: f64,
    pub long_acc_max: f64,
    pub lat_acc_max: f64,
    /// Arc length that counts as having made progress.
    pub progress_s: Option<f64>,
    /// Scheduled arc length and its tolerance.
    pub schedule_s: Option<f64>,
    pub schedule_tol: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            v_min: 0.0,
            v_max: 30.0,
            steering_max: 0.6,
            speed_limit: 13.9,
            flow_min: 5.0,
            long_acc_max: 6.0,
            lat_acc_max: 4.0,
            progress_s: None,
            schedule_s: None,
            schedule_tol: 2.0,
        }
    }
}

/// Everything the road predicates need, fixed for one planning problem.
#[derive(Debug, Clone)]
pub struct RoadContext {
    pub lane: Option<Lane<f64>>,
    pub ego: VehicleShape,
    pub wheelbase: f64,
    pub obstacles: Vec<Obstacle>,
    pub limits: Limits,
}

impl RoadContext {
    pub fn ego_discs(&self, trace: &Trace<f64>, k: usize) -> [Disc<f64>; 3] {
        self.ego.discs(trace.get(k, channel::X), trace.get(k, channel::Y), trace.get(k, channel::THETA))
    }

    /// Arc length of the rear axle along the lane path, or `x` without a lane.
    pub fn longitudinal(&self, trace: &Trace<f64>, k: usize) -> f64 {
        let (x, y) = (trace.get(k, channel::X), trace.get(k, channel::Y));
        self.lane.as_ref().map_or(x, |l| l.path.project(x, y).s)
    }

    /// Penetration depth of the ego into obstacle `o` at step `k`; positive when colliding.
    pub fn collision(&self, o: &Obstacle, trace: &Trace<f64>, k: usize) -> f64 {
        let t = k as f64 * trace.dt();
        -clearance(&self.ego_discs(trace, k), &o.discs_at::<f64>(t))
    }

    pub fn lateral_acceleration(&self, trace: &Trace<f64>, k: usize) -> f64 {
        let v = trace.get(k, channel::V);
        v * v * trace.get(k, channel::DELTA).tan() / self.wheelbase
    }
}

/// Registers the predicate library:
///
/// `velocity_in_limits`, `steering_in_limits`, `below_speed_limit`, `preserves_flow`,
/// `below_long_acc_limit`, `below_lat_acc_limit`, plus `left_bound`, `right_bound`,
/// `in_lane` with a lane, `make_progress` and `at_scheduled_long_pos` when their
/// targets are set, `collision_<id>` per obstacle and `collision` over all obstacles.
pub fn road_predicates(ctx: Arc<RoadContext>) -> Result<PredicateRegistry<f64>> {
    if ctx.obstacles.iter().any(|o| !crate::stl::is_valid_identifier(&format!("collision_{}", o.id))) {
        return Err(Error::Config("obstacle ids must be identifiers".into()));
    }
    let mut reg = PredicateRegistry::new();
    let mut add = |id: String, f: Box<dyn Fn(&RoadContext, &Trace<f64>, usize) -> f64 + Send + Sync>| {
        let c = Arc::clone(&ctx);
        reg.insert(Predicate::new(id, move |t: &Trace<f64>, k| f(&c, t, k)));
    };
    add("velocity_in_limits".into(), Box::new(|c, t, k| {
        let v = t.get(k, channel::V);
        (v - c.limits.v_min).min(c.limits.v_max - v)
    }));
    add("steering_in_limits".into(), Box::new(|c, t, k| c.limits.steering_max - t.get(k, channel::DELTA).abs()));
    add("below_speed_limit".into(), Box::new(|c, t, k| c.limits.speed_limit - t.get(k, channel::V)));
    add("preserves_flow".into(), Box::new(|c, t, k| t.get(k, channel::V) - c.limits.flow_min));
    add("below_long_acc_limit".into(), Box::new(|c, t, k| c.limits.long_acc_max - t.get(k, channel::ACC).abs()));
    add("below_lat_acc_limit".into(), Box::new(|c, t, k| c.limits.lat_acc_max - c.lateral_acceleration(t, k).abs()));
    if ctx.lane.is_some() {
        add("left_bound".into(), Box::new(|c, t, k| c.lane.as_ref().unwrap().left_margin(&c.ego_discs(t, k))));
        add("right_bound".into(), Box::new(|c, t, k| c.lane.as_ref().unwrap().right_margin(&c.ego_discs(t, k))));
        add("in_lane".into(), Box::new(|c, t, k| c.lane.as_ref().unwrap().in_lane_margin(&c.ego_discs(t, k))));
    }
    if let Some(goal) = ctx.limits.progress_s {
        add("make_progress".into(), Box::new(move |c, t, k| c.longitudinal(t, k) - goal));
    }
    if let Some(target) = ctx.limits.schedule_s {
        add("at_scheduled_long_pos".into(), Box::new(move |c, t, k| c.limits.schedule_tol - (c.longitudinal(t, k) - target).abs()));
    }
    for (i, o) in ctx.obstacles.iter().enumerate() {
        add(format!("collision_{}", o.id), Box::new(move |c, t, k| c.collision(&c.obstacles[i], t, k)));
    }
    if !ctx.obstacles.is_empty() {
        add("collision".into(), Box::new(|c, t, k| {
            c.obstacles.iter().map(|o| c.collision(o, t, k)).fold(f64::NEG_INFINITY, f64::max)
        }));
    }
    Ok(reg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::geometry::Polyline;

    fn ctx() -> Arc<RoadContext> {
        Arc::new(RoadContext {
            lane: Some(Lane::new(Polyline::new(vec![[0.0, 0.0], [200.0, 0.0]]).unwrap(), 6.0).unwrap()),
            ego: VehicleShape::default(),
            wheelbase: 3.0,
            obstacles: vec![Obstacle { id: "car".into(), x: 20.0, y: 0.0, theta: 0.0, v: 5.0, shape: VehicleShape::default() }],
            limits: Limits { progress_s: Some(50.0), ..Limits::default() },
        })
    }

    fn row(x: f64, y: f64, v: f64, delta: f64) -> Vec<f64> {
        vec![x, y, 0.0, delta, v, 0.0, 0.0]
    }

    #[test]
    fn margins() {
        let reg = road_predicates(ctx()).unwrap();
        let t = Trace::from_rows(&[row(0.0, 0.0, 10.0, 0.0), row(21.0, 0.0, 10.0, 0.1)], 1.0).unwrap();
        assert!((reg.get("below_speed_limit").unwrap().eval(&t, 0) - 3.9).abs() < 1e-12);
        assert!(reg.get("in_lane").unwrap().eval(&t, 0) > 0.0);
        assert!(reg.get("collision").unwrap().eval(&t, 0) < 0.0);
        // obstacle moved to x = 25 after 1 s; ego rear axle at 21 overlaps it
        assert!(reg.get("collision_car").unwrap().eval(&t, 1) > 0.0);
        assert_eq!(reg.get("make_progress").unwrap().eval(&t, 1), -29.0);
        let lat = reg.get("below_lat_acc_limit").unwrap().eval(&t, 1);
        assert!((lat - (4.0 - 100.0 * 0.1f64.tan() / 3.0)).abs() < 1e-12);
    }
}
