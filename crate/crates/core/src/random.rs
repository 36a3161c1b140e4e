//! Seeded random scenarios for property tests and sweeps.
//!
//! Every scenario uses natural units (m = ħ = T = g = 1). The frame profile
//! and both measured trajectories are cubic polynomials with coefficients
//! drawn uniformly from [-1, 1], the endpoints from [-1, 1], and the two
//! resolutions from [0.5, 4] with Δa ≠ Δb.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scenario::{PhysicalParams, RawBeam, RawScenario};
use crate::time_function::TimeFunctionSpec;

/// Seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 0x5eed_2026;

pub const RESOLUTION_RANGE: (f64, f64) = (0.5, 4.0);

/// Polynomial degree of generated time functions.
pub const DEGREE: usize = 3;

/// Deterministic stream of random scenarios.
#[derive(Debug, Clone)]
pub struct ScenarioGenerator {
    rng: ChaCha8Rng,
    seed: u64,
}

impl ScenarioGenerator {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn polynomial(&mut self) -> TimeFunctionSpec {
        let coeffs: Vec<f64> = (0..=DEGREE)
            .map(|_| self.rng.gen_range(-1.0..=1.0))
            .collect();
        TimeFunctionSpec::Polynomial(coeffs)
    }

    fn resolution(&mut self) -> f64 {
        self.rng.gen_range(RESOLUTION_RANGE.0..=RESOLUTION_RANGE.1)
    }

    /// Draws the next scenario.
    pub fn next_raw(&mut self) -> RawScenario {
        let frame_profile = self.polynomial();
        let a = self.polynomial();
        let b = self.polynomial();
        let delta_a = self.resolution();
        let mut delta_b = self.resolution();
        while delta_b == delta_a {
            delta_b = self.resolution();
        }
        let z1 = self.rng.gen_range(-1.0..=1.0);
        let z2 = self.rng.gen_range(-1.0..=1.0);
        RawScenario {
            params: PhysicalParams::NATURAL,
            z1,
            z2,
            frame_profile,
            beam_a: RawBeam {
                trajectory: a,
                resolution: delta_a,
            },
            beam_b: RawBeam {
                trajectory: b,
                resolution: delta_b,
            },
        }
    }
}

impl Iterator for ScenarioGenerator {
    type Item = RawScenario;

    fn next(&mut self) -> Option<RawScenario> {
        Some(self.next_raw())
    }
}
