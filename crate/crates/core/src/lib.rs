//! Lexicographic minimum-violation planning with signal temporal logic.
//!
//! The crate is generic over the floating-point scalar ([`Real`], implemented for
//! `f32` and `f64`); the `*64` and `*32` aliases below fix the common choices.

pub mod bench;
pub mod error;
pub mod lexscalar;
pub mod oracle;
pub mod robustness;
pub mod scalar;
pub mod solver;
pub mod stl;
pub mod systems;

pub use error::{Error, Result};
pub use scalar::Real;

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Trace64 = stl::Trace<f64>;
pub type Trace32 = stl::Trace<f32>;
pub type Formula64 = stl::Formula<f64>;
pub type Formula32 = stl::Formula<f32>;
pub type MeasureConfig64 = robustness::MeasureConfig<f64>;
pub type MeasureConfig32 = robustness::MeasureConfig<f32>;
pub type SpecSet64 = lexscalar::SpecSet<f64>;
pub type SpecSet32 = lexscalar::SpecSet<f32>;
