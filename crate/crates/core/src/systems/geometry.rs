//! Planar road geometry: reference paths, disc occupancies and obstacles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Arc-length position and signed lateral offset (left of the path is positive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection<F> {
    pub s: F,
    pub offset: F,
}

/// Piecewise-linear reference path.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline<F> {
    points: Vec<[F; 2]>,
    cumulative: Vec<F>,
}

impl<F: Real> Polyline<F> {
    /// At least two points, consecutive points distinct.
    pub fn new(points: Vec<[F; 2]>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Geometry("a reference path needs at least two points".into()));
        }
        let mut cumulative = vec![F::zero()];
        for w in points.windows(2) {
            let d = (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]);
            if !(d > F::zero() && d.is_finite()) {
                return Err(Error::Geometry("consecutive path points must be distinct and finite".into()));
            }
            cumulative.push(*cumulative.last().unwrap() + d);
        }
        Ok(Self { points, cumulative })
    }

    pub fn points(&self) -> &[[F; 2]] {
        &self.points
    }

    pub fn length(&self) -> F {
        *self.cumulative.last().unwrap()
    }

    /// Projection onto the nearest segment. Points beyond either end are measured
    /// against the extension of the first or last segment, so `s` may be negative
    /// or exceed the length.
    pub fn project(&self, px: F, py: F) -> Projection<F> {
        let last = self.points.len() - 2;
        let mut best: Option<(F, Projection<F>)> = None;
        for i in 0..=last {
            let [ax, ay] = self.points[i];
            let [bx, by] = self.points[i + 1];
            let (dx, dy) = (bx - ax, by - ay);
            let len = self.cumulative[i + 1] - self.cumulative[i];
            let t_raw = ((px - ax) * dx + (py - ay) * dy) / (len * len);
            let lo = if i == 0 { F::neg_infinity() } else { F::zero() };
            let hi = if i == last { F::infinity() } else { F::one() };
            let t = t_raw.max(lo).min(hi);
            let (qx, qy) = (ax + t * dx, ay + t * dy);
            let dist = (px - qx).hypot(py - qy);
            let cross = (dx * (py - ay) - dy * (px - ax)) / len;
            let proj = Projection { s: self.cumulative[i] + t * len, offset: if t == t_raw { cross } else { cross.signum() * dist } };
            if best.as_ref().is_none_or(|(d, _)| dist < *d) {
                best = Some((dist, proj));
            }
        }
        best.unwrap().1
    }
}

/// Circle used in occupancy approximations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc<F> {
    pub x: F,
    pub y: F,
    pub r: F,
}

/// Body dimensions. The reference point is the rear axle (ego) or rear end (obstacles);
/// the body is covered by three discs at `{0.25, 0.5, 0.75}·length` along the heading
/// with radius `width / 2`. Defaults are 4.5 m by 1.8 m, chosen for a passenger car.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleShape {
    pub length: f64,
    pub width: f64,
}

impl Default for VehicleShape {
    fn default() -> Self {
        Self { length: 4.5, width: 1.8 }
    }
}

impl VehicleShape {
    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.width > 0.0 && self.length.is_finite() && self.width.is_finite()) {
            return Err(Error::Geometry(format!("vehicle extent must be positive, got {} x {}", self.length, self.width)));
        }
        Ok(())
    }

    pub fn discs<F: Real>(&self, x: F, y: F, theta: F) -> [Disc<F>; 3] {
        let (c, s) = (theta.cos(), theta.sin());
        let r = F::lit(self.width / 2.0);
        [0.25, 0.5, 0.75].map(|f| {
            let d = F::lit(f * self.length);
            Disc { x: x + d * c, y: y + d * s, r }
        })
    }
}

/// Smallest gap between two disc sets; negative when they overlap.
pub fn clearance<F: Real>(a: &[Disc<F>], b: &[Disc<F>]) -> F {
    let mut best = F::infinity();
    for p in a {
        for q in b {
            best = best.min((p.x - q.x).hypot(p.y - q.y) - p.r - q.r);
        }
    }
    best
}

/// Lane of constant width around a reference path.
#[derive(Debug, Clone, PartialEq)]
pub struct Lane<F> {
    pub path: Polyline<F>,
    pub width: F,
}

impl<F: Real> Lane<F> {
    pub fn new(path: Polyline<F>, width: F) -> Result<Self> {
        if !(width > F::zero() && width.is_finite()) {
            return Err(Error::Geometry(format!("lane width must be positive, got {width}")));
        }
        Ok(Self { path, width })
    }

    /// Largest signed offset of the disc extremes (left positive).
    pub fn left_deviation(&self, discs: &[Disc<F>]) -> F {
        discs.iter().map(|d| self.path.project(d.x, d.y).offset + d.r).fold(F::neg_infinity(), F::max)
    }

    /// Smallest signed offset of the disc extremes.
    pub fn right_deviation(&self, discs: &[Disc<F>]) -> F {
        discs.iter().map(|d| self.path.project(d.x, d.y).offset - d.r).fold(F::infinity(), F::min)
    }

    /// `w/2 - leftDeviation`.
    pub fn left_margin(&self, discs: &[Disc<F>]) -> F {
        F::lit(0.5) * self.width - self.left_deviation(discs)
    }

    /// `rightDeviation + w/2`.
    pub fn right_margin(&self, discs: &[Disc<F>]) -> F {
        self.right_deviation(discs) + F::lit(0.5) * self.width
    }

    /// `min(left margin, right margin)`; nonnegative iff every disc lies inside the lane.
    pub fn in_lane_margin(&self, discs: &[Disc<F>]) -> F {
        self.left_margin(discs).min(self.right_margin(discs))
    }
}

/// Obstacle moving at constant velocity along its heading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Obstacle {
    pub id: String,
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default)]
    pub v: f64,
    #[serde(default)]
    pub shape: VehicleShape,
}

impl Obstacle {
    pub fn validate(&self) -> Result<()> {
        self.shape.validate()?;
        if ![self.x, self.y, self.theta, self.v].iter().all(|v| v.is_finite()) {
            return Err(Error::Geometry(format!("obstacle `{}` has a non-finite pose", self.id)));
        }
        Ok(())
    }

    /// Reference point after `t` seconds.
    pub fn predicted(&self, t: f64) -> (f64, f64) {
        (self.x + self.v * t * self.theta.cos(), self.y + self.v * t * self.theta.sin())
    }

    /// Occupancy after `t` seconds.
    pub fn discs_at<F: Real>(&self, t: f64) -> [Disc<F>; 3] {
        let (x, y) = self.predicted(t);
        self.shape.discs(F::lit(x), F::lit(y), F::lit(self.theta))
    }

    /// State advanced by `t` seconds.
    pub fn advanced(&self, t: f64) -> Self {
        let (x, y) = self.predicted(t);
        Self { x, y, ..self.clone() }
    }
}
