//! The symmetric unimodal family at arbitrary precision: evaluation,
//! critical orbits, symmetric points, the reversing fixed point and
//! bracketed inverse solving on monotone branches.

mod hpnum;
pub mod map;
mod orbit;
mod solve;

pub use hpnum::HpNum;
pub use map::{
    distance_to_c, point_at, side, symmetric_point, tolerance, MapSpec, Stepper, DEFAULT_PRECISION,
};
pub use orbit::{critical_orbit, critical_orbit_prefix, Orbit};
pub use solve::{bisect, monotone_solve, reversing_fixed_point, Solution};
