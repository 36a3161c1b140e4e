#![allow(dead_code)]

use num_complex::Complex64;
use rpif_core::random::{ScenarioGenerator, DEFAULT_SEED};
use rpif_core::{
    validate_scenario, Beam, PhysicalParams, RawBeam, RawScenario, Scenario, TimeFunctionSpec,
};

pub fn baseline_raw() -> RawScenario {
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

pub fn baseline() -> Scenario {
    validate_scenario(&baseline_raw()).unwrap()
}

/// Seed from `RPIF_SEED`, falling back to the crate default. The seed is
/// printed so a failing run can be replayed.
pub fn seed() -> u64 {
    let seed = std::env::var("RPIF_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    eprintln!("RPIF_SEED={seed}");
    seed
}

pub fn random_scenarios(count: usize) -> Vec<Scenario> {
    ScenarioGenerator::new(seed())
        .take(count)
        .map(|raw| validate_scenario(&raw).unwrap())
        .collect()
}

/// Classical action by shooting: integrates m z'' = -m w² z + F(t) with RK4,
/// matches z(τ″) = z2 by linear superposition, and accumulates the
/// Lagrangian ½ m z'² - ½ m w² z² + F z along the solution.
pub fn shooting_action(scenario: &Scenario, which: Beam, steps: usize) -> Complex64 {
    let p = scenario.params();
    let beam = scenario.beam(which);
    let delta = beam.resolution();
    let coupling = 4.0 * p.hbar / (p.duration() * delta * delta);
    // w² = -i · coupling / m
    let w2 = Complex64::new(0.0, -coupling / p.mass);
    let force = |t: f64| {
        let f = scenario.frame_profile().evaluate(t).unwrap();
        let c = beam.trajectory().evaluate(t).unwrap();
        Complex64::new(-p.mass * p.gravity * f, -coupling * c)
    };
    let m = p.mass;
    let h = p.duration() / steps as f64;

    // state: (z, v, S)
    let run = |z0: Complex64, v0: Complex64, forced: bool| {
        let rhs = |t: f64, z: Complex64, v: Complex64| {
            let fv = if forced {
                force(t)
            } else {
                Complex64::new(0.0, 0.0)
            };
            let acc = -w2 * z + fv / m;
            let lag = 0.5 * m * v * v - 0.5 * m * w2 * z * z + fv * z;
            (v, acc, lag)
        };
        let (mut z, mut v, mut s) = (z0, v0, Complex64::new(0.0, 0.0));
        for k in 0..steps {
            let t = p.tau_start + k as f64 * h;
            let (a1, b1, c1) = rhs(t, z, v);
            let (a2, b2, c2) = rhs(t + h / 2.0, z + a1 * (h / 2.0), v + b1 * (h / 2.0));
            let (a3, b3, c3) = rhs(t + h / 2.0, z + a2 * (h / 2.0), v + b2 * (h / 2.0));
            let (a4, b4, c4) = rhs(t + h, z + a3 * h, v + b3 * h);
            z += (a1 + 2.0 * a2 + 2.0 * a3 + a4) * (h / 6.0);
            v += (b1 + 2.0 * b2 + 2.0 * b3 + b4) * (h / 6.0);
            s += (c1 + 2.0 * c2 + 2.0 * c3 + c4) * (h / 6.0);
        }
        (z, v, s)
    };

    let z1 = Complex64::new(scenario.z1(), 0.0);
    let z2 = Complex64::new(scenario.z2(), 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let (zp, _, _) = run(z1, zero, true);
    let (zh, _, _) = run(zero, one, false);
    let slope = (z2 - zp) / zh;
    let (zend, _, s) = run(z1, slope, true);
    assert!((zend - z2).norm() < 1e-9, "shooting missed the endpoint");
    s
}

pub fn relative(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}
