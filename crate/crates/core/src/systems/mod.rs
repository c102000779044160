//! System models, road geometry, scenario predicates and the receding-horizon loop.

mod dynamics;
mod geometry;
mod mpc;
mod predicates;
pub mod running_example;
mod scenario;

pub use dynamics::{channel, inputs_within_bounds, outputs_of, rollout, rollout_states, Integrator, SingleTrack, SingleTrackState, System};
pub use geometry::{clearance, Disc, Lane, Obstacle, Polyline, Projection, VehicleShape};
pub use mpc::{mpc_loop, warm_start, MpcRun, MpcStep};
pub use predicates::{road_predicates, Limits, RoadContext};
pub use scenario::{ChannelPredicate, LaneSpec, MpcSpec, Scenario, ScenarioFile, SolverSpec, SpecEntry, SystemModel, SystemSpec, SCHEMA_VERSION};
