//! Physical properties of the interference decomposition.

mod common;

use common::*;
use proptest::prelude::*;
use rpif_core::interference::{decompose, DERIVED_RESIDUAL_TOLERANCE};
use rpif_core::{validate_scenario, Mode, TimeFunctionSpec};

#[test]
fn derived_terms_reconstruct_the_phase_on_random_scenarios() {
    for s in random_scenarios(20) {
        let d = decompose(&s, Mode::Derived).unwrap();
        assert!(
            d.residual <= DERIVED_RESIDUAL_TOLERANCE,
            "residual {:e}",
            d.residual
        );
    }
}

#[test]
fn literal_mode_reports_its_residual() {
    let d = decompose(&baseline(), Mode::PaperLiteral).unwrap();
    let expected = (d.term_sum() - d.phase_difference).abs();
    assert_eq!(d.residual, expected);
    assert!(d.residual.is_finite());
}

#[test]
fn symmetric_beams_give_a_null_pattern() {
    let mut raw = baseline_raw();
    raw.beam_b = raw.beam_a.clone();
    let s = validate_scenario(&raw).unwrap();
    for mode in Mode::ALL {
        let d = decompose(&s, mode).unwrap();
        for v in d.terms() {
            assert!(v.abs() <= 1e-12);
        }
        assert!((d.reduced_i - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn unequal_resolutions_are_an_interference_source() {
    let mut raw = baseline_raw();
    raw.beam_b.trajectory = raw.beam_a.trajectory.clone();
    raw.z2 = 1.0;
    let s = validate_scenario(&raw).unwrap();
    for mode in Mode::ALL {
        let d = decompose(&s, mode).unwrap();
        assert!(d.i1.abs() + d.i2.abs() > 1e-6, "{mode}");
    }
}

#[test]
fn equivalence_principle_without_frame_acceleration() {
    let mut raw = baseline_raw();
    raw.frame_profile = TimeFunctionSpec::Constant(0.0);
    raw.params.gravity = 0.0;
    let still = validate_scenario(&raw).unwrap();
    raw.params.gravity = 9.8;
    let heavy = validate_scenario(&raw).unwrap();
    for mode in Mode::ALL {
        let a = decompose(&still, mode).unwrap();
        let b = decompose(&heavy, mode).unwrap();
        for (x, y) in a.terms().iter().zip(b.terms()) {
            assert!((x - y).abs() <= 1e-10);
        }
        assert!((a.intensity - b.intensity).abs() <= 1e-10);
        assert!((a.reduced_i - b.reduced_i).abs() <= 1e-10);
    }
}

#[test]
fn reduced_interference_depends_on_mass_over_hbar() {
    let base = decompose(&baseline(), Mode::Derived).unwrap();
    for lambda in [0.5, 2.0, 10.0] {
        let mut raw = baseline_raw();
        raw.params.mass *= lambda;
        raw.params.hbar *= lambda;
        let s = validate_scenario(&raw).unwrap();
        let d = decompose(&s, Mode::Derived).unwrap();
        assert!((d.reduced_i - base.reduced_i).abs() <= 1e-9, "λ = {lambda}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn swapping_beams_negates_every_term(seed in any::<u64>()) {
        let raw = rpif_core::random::ScenarioGenerator::new(seed).next_raw();
        let s = validate_scenario(&raw).unwrap();
        let w = s.swapped();
        for mode in Mode::ALL {
            let d = decompose(&s, mode).unwrap();
            let e = decompose(&w, mode).unwrap();
            for (x, y) in d.terms().iter().zip(e.terms()) {
                prop_assert!((x + y).abs() <= 1e-12);
            }
            prop_assert!((d.phase_difference + e.phase_difference).abs() <= 1e-12);
            prop_assert!((d.intensity - e.intensity).abs() <= 1e-12 * d.intensity);
        }
    }

    #[test]
    fn derived_residual_stays_small(seed in any::<u64>()) {
        let raw = rpif_core::random::ScenarioGenerator::new(seed).next_raw();
        let s = validate_scenario(&raw).unwrap();
        let d = decompose(&s, Mode::Derived).unwrap();
        prop_assert!(d.residual <= DERIVED_RESIDUAL_TOLERANCE, "residual {:e}", d.residual);
    }
}
