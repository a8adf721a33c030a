//! Fixed-point iteration schemes and the numerical machinery to study them.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! * [`numerics`]: points in R^d, box domains, convex combinations and
//!   parameter schedules `{α_n}`, `{β_n}`.
//! * [`mappings`]: self-maps of a box, the built-in catalog, and grid-based
//!   verifiers for contraction, nonexpansiveness, quasi-nonexpansiveness and
//!   Suzuki's condition (C).
//! * [`schemes`]: one-step functions and orbit runners for the K iteration and
//!   the Picard-S, Thakur New, Vatan two-step, Picard, Mann, Ishikawa and Noor
//!   schemes.
//! * [`analysis`]: a-priori error bounds, Berinde rate comparison, the
//!   T-stability harness and the data-dependence experiment.
//!
//! ```
//! use fixiter_core::mappings::builtin_cbrt_map;
//! use fixiter_core::numerics::{ParamSchedule, Point};
//! use fixiter_core::schemes::{run, SchemeId, StopRule};
//!
//! let map = builtin_cbrt_map();
//! let schedule = ParamSchedule::constant(0.25, 0.25).unwrap();
//! let traj = run(SchemeId::K, &map, &Point::scalar(1.99), &schedule, &StopRule::fixed_count(11)).unwrap();
//! assert!((traj.records[1].x[0] - 1.522643193061496).abs() < 1e-12);
//! ```
#![no_std]
#![warn(missing_docs)]
// `!(x >= 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
mod error;
pub mod mappings;
pub mod numerics;
pub mod schemes;

pub use error::{Error, Result};
pub use mappings::Mapping;
pub use numerics::{BoxDomain, ParamSchedule, Point};
pub use schemes::{SchemeId, StopRule, Trajectory};

/// Slack applied to every inequality check.
pub const TOLERANCE: f64 = 1e-12;
