//! Side-by-side report of the paper-literal and derived evaluators.

use std::fmt::Write;

use rpif_core::interference::DERIVED_RESIDUAL_TOLERANCE;
use rpif_core::interference::{auxiliary_angles, decompose_with, BeamPair, InterferenceBreakdown};
use rpif_core::{Mode, Scenario};

/// Both breakdowns of one scenario, with the angles each mode used.
#[derive(Debug, Clone)]
pub struct ModeComparison {
    /// (θ, ρ) as printed.
    pub literal_angles: (f64, f64),
    /// (θ, ρ) from the complex frequency.
    pub derived_angles: (f64, f64),
    pub literal: Result<InterferenceBreakdown, String>,
    pub derived: Result<InterferenceBreakdown, String>,
}

pub fn compare_modes(scenario: &Scenario) -> rpif_core::Result<ModeComparison> {
    let pair = BeamPair::compute(scenario)?;
    let angles = |mode| {
        let a = auxiliary_angles(scenario, mode);
        (a.theta, a.rho)
    };
    let run = |mode| decompose_with(scenario, mode, &pair).map_err(|e| e.to_string());
    Ok(ModeComparison {
        literal_angles: angles(Mode::PaperLiteral),
        derived_angles: angles(Mode::Derived),
        literal: run(Mode::PaperLiteral),
        derived: run(Mode::Derived),
    })
}

impl ModeComparison {
    pub fn derived_ok(&self) -> bool {
        matches!(&self.derived, Ok(d) if d.residual <= DERIVED_RESIDUAL_TOLERANCE)
    }

    /// Whether the paper-literal terms fail to reproduce the phase difference.
    pub fn literal_exceeds_tolerance(&self) -> bool {
        !matches!(&self.literal, Ok(l) if l.residual <= DERIVED_RESIDUAL_TOLERANCE)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let num = |x: f64| format!("{x:>24.16e}");
        let cell = |r: &Result<InterferenceBreakdown, String>,
                    f: &dyn Fn(&InterferenceBreakdown) -> f64| {
            match r {
                Ok(b) => num(f(b)),
                Err(_) => format!("{:>24}", "n/a"),
            }
        };
        let _ = writeln!(
            s,
            "{:<18}{:>24}{:>24}{:>24}",
            "quantity", "paper-literal", "derived", "literal - derived"
        );
        let mut line = |name: &str, f: &dyn Fn(&InterferenceBreakdown) -> f64| {
            let diff = match (&self.literal, &self.derived) {
                (Ok(l), Ok(d)) => num(f(l) - f(d)),
                _ => format!("{:>24}", "n/a"),
            };
            let _ = writeln!(
                s,
                "{name:<18}{}{}{diff}",
                cell(&self.literal, f),
                cell(&self.derived, f)
            );
        };
        line("i1", &|b| b.i1);
        line("i2", &|b| b.i2);
        line("i3", &|b| b.i3);
        line("i4", &|b| b.i4);
        line("i5", &|b| b.i5);
        line("sum", &|b| b.term_sum());
        line("phase_difference", &|b| b.phase_difference);
        line("residual", &|b| b.residual);
        line("reduced_i", &|b| b.reduced_i);
        line("intensity", &|b| b.intensity);
        let _ = writeln!(
            s,
            "{:<18}{}{}",
            "theta",
            num(self.literal_angles.0),
            num(self.derived_angles.0)
        );
        let _ = writeln!(
            s,
            "{:<18}{}{}",
            "rho",
            num(self.literal_angles.1),
            num(self.derived_angles.1)
        );
        for (name, r) in [("paper-literal", &self.literal), ("derived", &self.derived)] {
            let status = match r {
                Ok(b) if b.residual <= DERIVED_RESIDUAL_TOLERANCE => {
                    format!(
                        "residual {:.3e} within {:e}",
                        b.residual, DERIVED_RESIDUAL_TOLERANCE
                    )
                }
                Ok(b) => format!(
                    "residual {:.3e} exceeds {:e}",
                    b.residual, DERIVED_RESIDUAL_TOLERANCE
                ),
                Err(e) => format!("failed: {e}"),
            };
            let _ = writeln!(s, "{name}: {status}");
        }
        s
    }
}
