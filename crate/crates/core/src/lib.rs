//! Gravity-induced interference of two continuously position-monitored beams,
//! computed with Gaussian restricted path integrals.
//!
//! The crate is `no_std` (it needs `alloc`). Modules, bottom-up:
//!
//! - [`time_function`] and [`scenario`]: inputs and their validation.
//! - [`quadrature`]: composite Gauss–Legendre with panel doubling.
//! - [`action`]: closed-form propagator of one monitored beam.
//! - [`interference`]: the interference pattern and its five contributions.
//! - [`lattice`]: brute-force time-sliced evaluation used as an oracle.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod math;

pub mod action;
pub mod error;
pub mod interference;
pub mod lattice;
pub mod quadrature;
#[cfg(feature = "random")]
pub mod random;
pub mod scenario;
pub mod time_function;

pub use action::{ComplexAction, ComplexValue, PropagatorValue};
pub use error::{Error, Result, ValidationErrors, Violation};
pub use interference::{decompose, InterferenceBreakdown, Mode};

pub use scenario::{
    mean_square, validate_scenario, Beam, BeamRecord, PhysicalParams, RawBeam, RawScenario,
    Scenario,
};
pub use time_function::{build_time_function, Interval, TimeFunction, TimeFunctionSpec};
