use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stl::Trace;

/// Deterministic discrete-time system `x' = f(x, u)`, `y = g(x, u)` with box input bounds.
pub trait System<F: Real>: Send + Sync {
    fn n_x(&self) -> usize;
    fn n_u(&self) -> usize;
    fn n_y(&self) -> usize;
    /// Time increment stamped on rolled-out traces.
    fn dt(&self) -> F;
    fn u_lo(&self) -> &[F];
    fn u_hi(&self) -> &[F];
    /// Writes `f(x, u)` into `next`.
    fn step(&self, x: &[F], u: &[F], next: &mut [F]) -> Result<()>;
    /// Writes `g(x, u)` into `y`.
    fn output(&self, x: &[F], u: &[F], y: &mut [F]);
}

/// States `x_0..=x_K` for inputs `u_0..=u_K` (flat, time-major). `u_K` only affects the output.
pub fn rollout_states<F: Real, S: System<F> + ?Sized>(sys: &S, x0: &[F], inputs: &[F]) -> Result<Vec<F>> {
    let (n_x, n_u) = (sys.n_x(), sys.n_u());
    if x0.len() != n_x {
        return Err(Error::Dynamics(format!("initial state has {} entries, expected {n_x}", x0.len())));
    }
    if inputs.is_empty() || inputs.len() % n_u != 0 {
        return Err(Error::Dynamics(format!("input buffer length {} is not a multiple of {n_u}", inputs.len())));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::Dynamics("initial state is not finite".into()));
    }
    let steps = inputs.len() / n_u;
    let mut states = Vec::with_capacity(steps * n_x);
    states.extend_from_slice(x0);
    let mut next = vec![F::zero(); n_x];
    for k in 0..steps - 1 {
        sys.step(&states[k * n_x..(k + 1) * n_x], &inputs[k * n_u..(k + 1) * n_u], &mut next)?;
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Dynamics(format!("non-finite state at step {}", k + 1)));
        }
        states.extend_from_slice(&next);
    }
    Ok(states)
}

/// Output trace `y_0..=y_K` for inputs `u_0..=u_K`.
pub fn rollout<F: Real, S: System<F> + ?Sized>(sys: &S, x0: &[F], inputs: &[F]) -> Result<Trace<F>> {
    let states = rollout_states(sys, x0, inputs)?;
    outputs_of(sys, &states, inputs)
}

/// Output trace of precomputed states.
pub fn outputs_of<F: Real, S: System<F> + ?Sized>(sys: &S, states: &[F], inputs: &[F]) -> Result<Trace<F>> {
    let (n_x, n_u, n_y) = (sys.n_x(), sys.n_u(), sys.n_y());
    let steps = inputs.len() / n_u;
    let mut ys = vec![F::zero(); steps * n_y];
    for k in 0..steps {
        sys.output(&states[k * n_x..(k + 1) * n_x], &inputs[k * n_u..(k + 1) * n_u], &mut ys[k * n_y..(k + 1) * n_y]);
    }
    Trace::from_flat(ys, n_y, sys.dt()).map_err(|e| Error::Dynamics(e.to_string()))
}

/// Checks `lo <= u <= hi` componentwise for a flat input trajectory.
pub fn inputs_within_bounds<F: Real>(inputs: &[F], lo: &[F], hi: &[F]) -> bool {
    inputs.chunks(lo.len()).all(|u| u.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| *l <= *v && *v <= *h))
}

/// Scalar integrator `x' = x + u`, `y = x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Integrator<F> {
    lo: [F; 1],
    hi: [F; 1],
}

impl<F: Real> Integrator<F> {
    pub const DEFAULT_BOUND: f64 = 1.35;

    pub fn new(u_lo: F, u_hi: F) -> Result<Self> {
        if !(u_lo.is_finite() && u_hi.is_finite() && u_lo <= u_hi) {
            return Err(Error::Config(format!("invalid integrator bounds [{u_lo}, {u_hi}]")));
        }
        Ok(Self { lo: [u_lo], hi: [u_hi] })
    }
}

impl<F: Real> Default for Integrator<F> {
    fn default() -> Self {
        let b = F::lit(Self::DEFAULT_BOUND);
        Self { lo: [-b], hi: [b] }
    }
}

impl<F: Real> System<F> for Integrator<F> {
    fn n_x(&self) -> usize {
        1
    }
    fn n_u(&self) -> usize {
        1
    }
    fn n_y(&self) -> usize {
        1
    }
    fn dt(&self) -> F {
        F::one()
    }
    fn u_lo(&self) -> &[F] {
        &self.lo
    }
    fn u_hi(&self) -> &[F] {
        &self.hi
    }
    fn step(&self, x: &[F], u: &[F], next: &mut [F]) -> Result<()> {
        next[0] = x[0] + u[0];
        Ok(())
    }
    fn output(&self, x: &[F], _u: &[F], y: &mut [F]) {
        y[0] = x[0];
    }
}

/// Output channel indices of [`SingleTrack`]: `y = [x, y, theta, delta, v, v_delta, a]`.
pub mod channel {
    pub const X: usize = 0;
    pub const Y: usize = 1;
    pub const THETA: usize = 2;
    pub const DELTA: usize = 3;
    pub const V: usize = 4;
    pub const V_DELTA: usize = 5;
    pub const ACC: usize = 6;
}

/// Kinematic single-track state at the rear axle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleTrackState<F> {
    pub x: F,
    pub y: F,
    pub theta: F,
    pub delta: F,
    pub v: F,
}

impl<F: Real> SingleTrackState<F> {
    pub fn to_array(self) -> [F; 5] {
        [self.x, self.y, self.theta, self.delta, self.v]
    }

    pub fn from_slice(s: &[F]) -> Self {
        Self { x: s[0], y: s[1], theta: s[2], delta: s[3], v: s[4] }
    }
}

/// Kinematic single-track model, explicit Euler. Inputs are steering velocity and acceleration.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleTrack<F> {
    pub wheelbase: F,
    pub dt: F,
    lo: [F; 2],
    hi: [F; 2],
}

impl<F: Real> SingleTrack<F> {
    pub fn new(wheelbase: F, dt: F, u_lo: [F; 2], u_hi: [F; 2]) -> Result<Self> {
        if !(wheelbase.is_finite() && wheelbase > F::zero() && dt.is_finite() && dt > F::zero()) {
            return Err(Error::Config("wheelbase and dt must be positive".into()));
        }
        if (0..2).any(|i| !(u_lo[i].is_finite() && u_hi[i].is_finite() && u_lo[i] <= u_hi[i])) {
            return Err(Error::Config("invalid single-track input bounds".into()));
        }
        Ok(Self { wheelbase, dt, lo: u_lo, hi: u_hi })
    }

    /// One Euler step. Fails when the steering angle reaches the `tan` singularity.
    pub fn step_state(&self, s: SingleTrackState<F>, v_delta: F, acc: F) -> Result<SingleTrackState<F>> {
        if !(s.delta.abs() < F::FRAC_PI_2()) {
            return Err(Error::ContractViolation(format!("steering angle {} at or beyond pi/2", s.delta)));
        }
        let dt = self.dt;
        Ok(SingleTrackState {
            x: s.x + dt * s.v * s.theta.cos(),
            y: s.y + dt * s.v * s.theta.sin(),
            theta: s.theta + dt * s.v / self.wheelbase * s.delta.tan(),
            delta: s.delta + dt * v_delta,
            v: s.v + dt * acc,
        })
    }
}

impl<F: Real> Default for SingleTrack<F> {
    /// Wheelbase 3 m, dt 0.2 s, bounds 0.3 rad/s and 8 m/s^2.
    fn default() -> Self {
        Self {
            wheelbase: F::lit(3.0),
            dt: F::lit(0.2),
            lo: [F::lit(-0.3), F::lit(-8.0)],
            hi: [F::lit(0.3), F::lit(8.0)],
        }
    }
}

impl<F: Real> System<F> for SingleTrack<F> {
    fn n_x(&self) -> usize {
        5
    }
    fn n_u(&self) -> usize {
        2
    }
    fn n_y(&self) -> usize {
        7
    }
    fn dt(&self) -> F {
        self.dt
    }
    fn u_lo(&self) -> &[F] {
        &self.lo
    }
    fn u_hi(&self) -> &[F] {
        &self.hi
    }
    fn step(&self, x: &[F], u: &[F], next: &mut [F]) -> Result<()> {
        let s = self.step_state(SingleTrackState::from_slice(x), u[0], u[1])?;
        next.copy_from_slice(&s.to_array());
        Ok(())
    }
    fn output(&self, x: &[F], u: &[F], y: &mut [F]) {
        y[..5].copy_from_slice(&x[..5]);
        y[5] = u[0];
        y[6] = u[1];
    }
}
