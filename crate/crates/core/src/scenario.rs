//! Domain model of the two-beam experiment and its validation.

use alloc::format;

use crate::error::{Error, Result, ValidationErrors};
use crate::math;
use crate::quadrature::{QuadPolicy, Quadrature};
use crate::time_function::{build_time_function, Interval, TimeFunction, TimeFunctionSpec};

/// Mass, gravity, reduced Planck constant and the observation window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub mass: f64,
    pub gravity: f64,
    pub hbar: f64,
    pub tau_start: f64,
    pub tau_end: f64,
}

impl PhysicalParams {
    /// Natural units: m = ħ = 1 on the window [0, 1].
    pub const NATURAL: Self = Self {
        mass: 1.0,
        gravity: 1.0,
        hbar: 1.0,
        tau_start: 0.0,
        tau_end: 1.0,
    };

    /// Duration T of the window.
    pub fn duration(&self) -> f64 {
        self.tau_end - self.tau_start
    }

    pub fn window(&self) -> Interval {
        Interval::new(self.tau_start, self.tau_end)
    }
}

/// Unvalidated beam description.
#[derive(Debug, Clone, PartialEq)]
pub struct RawBeam {
    pub trajectory: TimeFunctionSpec,
    pub resolution: f64,
}

/// Unvalidated scenario, as read from a configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RawScenario {
    pub params: PhysicalParams,
    pub z1: f64,
    pub z2: f64,
    pub frame_profile: TimeFunctionSpec,
    pub beam_a: RawBeam,
    pub beam_b: RawBeam,
}

/// One monitored beam: the measured record c(t) and the resolution Δc.
///
/// An infinite resolution describes an unmonitored beam.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamRecord {
    trajectory: TimeFunction,
    resolution: f64,
}

impl BeamRecord {
    pub fn new(trajectory: TimeFunction, resolution: f64) -> Result<Self> {
        if !(resolution > 0.0) {
            let mut errs = ValidationErrors::default();
            errs.push("resolution", format!("must be > 0, got {resolution}"));
            return Err(Error::Validation(errs));
        }
        Ok(Self {
            trajectory,
            resolution,
        })
    }

    pub fn trajectory(&self) -> &TimeFunction {
        &self.trajectory
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }
}

/// Selects one of the two beams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Beam {
    A,
    B,
}

/// A validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    raw: RawScenario,
    frame_profile: TimeFunction,
    beam_a: BeamRecord,
    beam_b: BeamRecord,
}

impl Scenario {
    pub fn params(&self) -> &PhysicalParams {
        &self.raw.params
    }

    pub fn z1(&self) -> f64 {
        self.raw.z1
    }

    pub fn z2(&self) -> f64 {
        self.raw.z2
    }

    pub fn frame_profile(&self) -> &TimeFunction {
        &self.frame_profile
    }

    pub fn beam(&self, which: Beam) -> &BeamRecord {
        match which {
            Beam::A => &self.beam_a,
            Beam::B => &self.beam_b,
        }
    }

    pub fn beam_a(&self) -> &BeamRecord {
        &self.beam_a
    }

    pub fn beam_b(&self) -> &BeamRecord {
        &self.beam_b
    }

    /// The raw description this scenario was validated from.
    pub fn raw(&self) -> &RawScenario {
        &self.raw
    }

    /// The same experiment with the two beams exchanged.
    pub fn swapped(&self) -> Scenario {
        let mut raw = self.raw.clone();
        core::mem::swap(&mut raw.beam_a, &mut raw.beam_b);
        Scenario {
            raw,
            frame_profile: self.frame_profile.clone(),
            beam_a: self.beam_b.clone(),
            beam_b: self.beam_a.clone(),
        }
    }

    /// Rescales to units where m = ħ = T = 1 and the window starts at 0.
    ///
    /// Lengths are measured in `sqrt(ħT/m)`; phases S/ħ are unchanged.
    pub fn nondimensionalized(&self) -> Result<(Scenario, Units)> {
        let p = self.raw.params;
        let units = Units {
            mass: p.mass,
            time: p.duration(),
            hbar: p.hbar,
            length: math::sqrt(p.hbar * p.duration() / p.mass),
            origin: p.tau_start,
        };
        let l = units.length;
        let t = units.time;
        let scale_beam = |b: &RawBeam| RawBeam {
            trajectory: b.trajectory.rescaled(p.tau_start, t, 1.0 / l),
            resolution: b.resolution / l,
        };
        let raw = RawScenario {
            params: PhysicalParams {
                mass: 1.0,
                gravity: p.gravity * t * t / l,
                hbar: 1.0,
                tau_start: 0.0,
                tau_end: 1.0,
            },
            z1: self.raw.z1 / l,
            z2: self.raw.z2 / l,
            frame_profile: self.raw.frame_profile.rescaled(p.tau_start, t, 1.0),
            beam_a: scale_beam(&self.raw.beam_a),
            beam_b: scale_beam(&self.raw.beam_b),
        };
        Ok((validate_scenario(&raw)?, units))
    }
}

/// Unit system used by [`Scenario::nondimensionalized`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub mass: f64,
    pub time: f64,
    pub hbar: f64,
    pub length: f64,
    pub origin: f64,
}

/// Validates a raw scenario, reporting every violated invariant at once.
pub fn validate_scenario(raw: &RawScenario) -> Result<Scenario> {
    let mut errs = ValidationErrors::default();
    let p = &raw.params;
    let positive = |errs: &mut ValidationErrors, field: &str, v: f64| {
        if !(v > 0.0 && v.is_finite()) {
            errs.push(field, format!("must be finite and > 0, got {v}"));
        }
    };
    positive(&mut errs, "params.mass", p.mass);
    positive(&mut errs, "params.hbar", p.hbar);
    if !(p.gravity >= 0.0 && p.gravity.is_finite()) {
        errs.push(
            "params.gravity",
            format!("must be finite and >= 0, got {}", p.gravity),
        );
    }
    let ordered = p.tau_start.is_finite() && p.tau_end.is_finite() && p.tau_end > p.tau_start;
    if !ordered {
        errs.push(
            "params.tau_end",
            format!(
                "time ordering violated: need tau_end > tau_start, got [{}, {}]",
                p.tau_start, p.tau_end
            ),
        );
    }
    for (field, v) in [("z1", raw.z1), ("z2", raw.z2)] {
        if !v.is_finite() {
            errs.push(field, format!("must be finite, got {v}"));
        }
    }
    for (field, beam) in [("beam_a", &raw.beam_a), ("beam_b", &raw.beam_b)] {
        if raw_resolution_invalid(beam.resolution) {
            errs.push(
                format!("{field}.resolution"),
                format!("must be > 0, got {}", beam.resolution),
            );
        }
    }

    let window = p.window();
    let mut bind = |field: &str, spec: &TimeFunctionSpec| -> Option<TimeFunction> {
        if !ordered {
            return None;
        }
        match build_time_function(spec.clone(), window) {
            Ok(f) => Some(f),
            Err(e) => {
                errs.push(field, format!("{e}"));
                None
            }
        }
    };
    let frame = bind("frame_profile", &raw.frame_profile);
    let traj_a = bind("beam_a.trajectory", &raw.beam_a.trajectory);
    let traj_b = bind("beam_b.trajectory", &raw.beam_b.trajectory);

    if !errs.is_empty() {
        return Err(Error::Validation(errs));
    }
    match (frame, traj_a, traj_b) {
        (Some(frame_profile), Some(a), Some(b)) => Ok(Scenario {
            raw: raw.clone(),
            frame_profile,
            beam_a: BeamRecord {
                trajectory: a,
                resolution: raw.beam_a.resolution,
            },
            beam_b: BeamRecord {
                trajectory: b,
                resolution: raw.beam_b.resolution,
            },
        }),
        _ => unreachable!("every unbound function records a violation"),
    }
}

fn raw_resolution_invalid(r: f64) -> bool {
    // +inf is accepted: an unmonitored beam.
    !(r > 0.0)
}

/// Time average ⟨c²⟩ = (1/T) ∫ c(t)² dt over the window.
pub fn mean_square(c: &TimeFunction, params: &PhysicalParams) -> Result<f64> {
    if c.is_zero() {
        return Ok(0.0);
    }
    let q = Quadrature::new(QuadPolicy::SINGLE);
    let est = q.integrate(
        |t| {
            let v = c.evaluate(t)?;
            Ok(v * v)
        },
        params.tau_start,
        params.tau_end,
        c.breakpoints(),
    )?;
    Ok(est.value / params.duration())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;

    pub(crate) fn baseline_raw() -> RawScenario {
        RawScenario {
            params: PhysicalParams::NATURAL,
            z1: 0.0,
            z2: 0.5,
            frame_profile: TimeFunctionSpec::Constant(1.0),
            beam_a: RawBeam {
                trajectory: TimeFunctionSpec::Constant(0.1),
                resolution: 1.0,
            },
            beam_b: RawBeam {
                trajectory: TimeFunctionSpec::Constant(-0.1),
                resolution: 2.0,
            },
        }
    }

    #[test]
    fn baseline_is_accepted() {
        let s = validate_scenario(&baseline_raw()).unwrap();
        assert_eq!(s.beam_b().resolution(), 2.0);
        assert_eq!(s.params().duration(), 1.0);
    }

    #[test]
    fn zero_resolution_is_named() {
        let mut raw = baseline_raw();
        raw.beam_a.resolution = 0.0;
        match validate_scenario(&raw) {
            Err(Error::Validation(errs)) => assert!(errs.names("beam_a.resolution")),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn reversed_window_is_named() {
        let mut raw = baseline_raw();
        raw.params.tau_start = 1.0;
        raw.params.tau_end = 0.5;
        match validate_scenario(&raw) {
            Err(Error::Validation(errs)) => {
                assert!(errs.names("params.tau_end"));
                assert!(format!("{errs}").contains("time ordering"));
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn every_violation_is_listed() {
        let mut raw = baseline_raw();
        raw.params.mass = -1.0;
        raw.params.hbar = 0.0;
        raw.beam_a.resolution = -2.0;
        raw.beam_b.resolution = f64::NAN;
        raw.frame_profile = TimeFunctionSpec::Tabulated {
            times: vec![0.0, 0.5],
            values: vec![1.0, 1.0],
        };
        let Err(Error::Validation(errs)) = validate_scenario(&raw) else {
            panic!("expected rejection");
        };
        for field in [
            "params.mass",
            "params.hbar",
            "beam_a.resolution",
            "beam_b.resolution",
            "frame_profile",
        ] {
            assert!(errs.names(field), "missing {field} in {errs}");
        }
    }

    #[test]
    fn infinite_resolution_is_an_unmonitored_beam() {
        let mut raw = baseline_raw();
        raw.beam_a.resolution = f64::INFINITY;
        assert!(validate_scenario(&raw).is_ok());
    }

    #[test]
    fn mean_square_examples() {
        let p = PhysicalParams::NATURAL;
        let w = p.window();
        let zero = build_time_function(TimeFunctionSpec::Constant(0.0), w).unwrap();
        assert_eq!(mean_square(&zero, &p).unwrap(), 0.0);
        let k = build_time_function(TimeFunctionSpec::Constant(3.0), w).unwrap();
        assert_relative_eq!(mean_square(&k, &p).unwrap(), 9.0, max_relative = 1e-14);
        let lin = build_time_function(
            TimeFunctionSpec::Linear {
                slope: 1.0,
                intercept: 0.0,
            },
            w,
        )
        .unwrap();
        assert_relative_eq!(
            mean_square(&lin, &p).unwrap(),
            1.0 / 3.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn mean_square_sign_and_scale() {
        let p = PhysicalParams {
            tau_start: 0.5,
            tau_end: 3.0,
            ..PhysicalParams::NATURAL
        };
        let coeffs = [0.3, -1.2, 0.7, 0.05];
        let build = |scale: f64| {
            let c: alloc::vec::Vec<f64> = coeffs.iter().map(|x| x * scale).collect();
            build_time_function(TimeFunctionSpec::Polynomial(c), p.window()).unwrap()
        };
        let base = mean_square(&build(1.0), &p).unwrap();
        assert_eq!(mean_square(&build(-1.0), &p).unwrap(), base);
        for lambda in [2.0, 10.0] {
            let scaled = mean_square(&build(lambda), &p).unwrap();
            assert_relative_eq!(scaled, lambda * lambda * base, max_relative = 1e-12);
        }
    }

    #[test]
    fn mean_square_of_tabulated_record() {
        let p = PhysicalParams::NATURAL;
        let c = build_time_function(
            TimeFunctionSpec::Tabulated {
                times: vec![0.0, 0.5, 1.0],
                values: vec![0.0, 1.0, 0.0],
            },
            p.window(),
        )
        .unwrap();
        // two ramps, each ∫ (2t)^2 dt over [0, 1/2] = 1/6
        assert_relative_eq!(
            mean_square(&c, &p).unwrap(),
            1.0 / 3.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn nondimensionalization_preserves_dimensionless_groups() {
        let raw = RawScenario {
            params: PhysicalParams {
                mass: 1.67e-27,
                gravity: 9.81,
                hbar: 1.054_571_817e-34,
                tau_start: 2.0,
                tau_end: 2.5,
            },
            z1: 1e-5,
            z2: 3e-5,
            frame_profile: TimeFunctionSpec::Constant(1.0),
            beam_a: RawBeam {
                trajectory: TimeFunctionSpec::Linear {
                    slope: 1e-5,
                    intercept: 0.0,
                },
                resolution: 4e-6,
            },
            beam_b: RawBeam {
                trajectory: TimeFunctionSpec::Constant(0.0),
                resolution: 8e-6,
            },
        };
        let s = validate_scenario(&raw).unwrap();
        let (nd, units) = s.nondimensionalized().unwrap();
        assert_eq!(nd.params().duration(), 1.0);
        let l = units.length;
        assert_relative_eq!(nd.z2() * l, 3e-5, max_relative = 1e-14);
        assert_relative_eq!(nd.beam_a().resolution() * l, 4e-6, max_relative = 1e-14);
        let c = nd.beam_a().trajectory().evaluate(0.5).unwrap() * l;
        assert_relative_eq!(c, 1e-5 * 2.25, max_relative = 1e-13);
        // ħT/(mΔ²) is the group that sets |wT|.
        let group = 1.054_571_817e-34 * 0.5 / (1.67e-27 * 4e-6 * 4e-6);
        let nd_group = 1.0 / (nd.beam_a().resolution() * nd.beam_a().resolution());
        assert_relative_eq!(group, nd_group, max_relative = 1e-12);
    }
}
