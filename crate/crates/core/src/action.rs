//! Closed-form restricted propagator of one monitored beam.
//!
//! A Gaussian weight of width Δc turns the vertical motion into a driven
//! harmonic oscillator with complex frequency `w = sqrt(-4iħ/(mTΔc²))` and
//! complex force `F(t) = -m g f(t) - i (4ħ/(TΔc²)) c(t)`. The classical action
//! of that oscillator is assembled here as
//!
//! ```text
//! S = A (z1² + z2²) + B z1 z2 + C z1 + D z2 + E
//! ```
//!
//! with the coefficients taken from the forced-oscillator boundary formula,
//! or from its Taylor series in `wT` when `|wT|` is small.

use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;
use crate::quadrature::{QuadPolicy, Quadrature};
use crate::scenario::{mean_square, Beam, BeamRecord, PhysicalParams, Scenario};
use crate::time_function::{merged_breakpoints, TimeFunction};

pub type ComplexValue = Complex64;

/// `|wT|` above which a scenario is rejected.
pub const STABILITY_LIMIT: f64 = 60.0;

/// `|wT|` below which the Taylor series replaces the closed form.
pub const SERIES_CROSSOVER: f64 = 1e-2;

const SINGULAR_SINE: f64 = 1e-300;

/// S = S⁽¹⁾ + i S⁽²⁾.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexAction {
    pub s1: f64,
    pub s2: f64,
}

impl ComplexAction {
    pub fn from_complex(s: Complex64) -> Self {
        Self { s1: s.re, s2: s.im }
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.s1, self.s2)
    }

    /// exp(iS/ħ); its modulus exp(-S⁽²⁾/ħ) is kept as a diagnostic.
    pub fn phase_factor(&self, hbar: f64) -> Complex64 {
        (Complex64::i() * self.as_complex() / hbar).exp()
    }
}

/// Restricted propagator and its three factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorValue {
    pub amplitude: Complex64,
    /// exp(-2⟨c²⟩/Δc²)
    pub weight_norm_factor: f64,
    /// sqrt(mw / (2πiħ sin wT)), continued from the free-particle branch.
    pub prefactor: Complex64,
    /// exp(iS/ħ)
    pub phase_factor: Complex64,
    pub action: ComplexAction,
}

impl PropagatorValue {
    /// |exp(iS/ħ)|, recorded rather than asserted.
    pub fn damping(&self) -> f64 {
        self.phase_factor.norm()
    }
}

/// Coefficients of S as a quadratic polynomial in the endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionCoefficients {
    /// multiplies z1² + z2²
    pub quadratic: Complex64,
    /// multiplies z1 z2
    pub cross: Complex64,
    /// multiplies z1
    pub start_linear: Complex64,
    /// multiplies z2
    pub end_linear: Complex64,
    /// endpoint-free part
    pub free: Complex64,
}

impl ActionCoefficients {
    pub fn action(&self, z1: f64, z2: f64) -> ComplexAction {
        let s = self.quadratic * (z1 * z1 + z2 * z2)
            + self.cross * (z1 * z2)
            + self.start_linear * z1
            + self.end_linear * z2
            + self.free;
        ComplexAction::from_complex(s)
    }
}

/// Measurement coupling 4ħ/(TΔc²); zero for an unmonitored beam.
pub fn measurement_coupling(params: &PhysicalParams, delta_c: f64) -> f64 {
    4.0 * params.hbar / (params.duration() * delta_c * delta_c)
}

/// w = sqrt(-i·4ħ/(mTΔc²)) on the principal branch, arg(w) = -π/4.
pub fn complex_frequency(params: &PhysicalParams, delta_c: f64) -> ComplexValue {
    let k = math::sqrt(measurement_coupling(params, delta_c) / params.mass);
    Complex64::new(k * FRAC_1_SQRT_2, -k * FRAC_1_SQRT_2)
}

/// F(t) = -m g f(t) - i (4ħ/(TΔc²)) c(t).
pub fn driving_force(
    beam: &BeamRecord,
    f: &TimeFunction,
    params: &PhysicalParams,
    t: f64,
) -> Result<ComplexValue> {
    let fv = f.evaluate(t)?;
    let cv = beam.trajectory().evaluate(t)?;
    Ok(Complex64::new(
        -params.mass * params.gravity * fv,
        -measurement_coupling(params, beam.resolution()) * cv,
    ))
}

/// Rejects resolutions whose oscillator would overflow the closed forms.
pub fn check_stability(params: &PhysicalParams, delta_c: f64) -> Result<Complex64> {
    let w = complex_frequency(params, delta_c);
    let wt = w * params.duration();
    let guard = wt.im.abs() * SQRT_2;
    if !(guard <= STABILITY_LIMIT) {
        return Err(Error::StabilityGuard {
            resolution: delta_c,
            wt_modulus: guard,
            limit: STABILITY_LIMIT,
        });
    }
    Ok(w)
}

struct Oscillator<'a> {
    params: &'a PhysicalParams,
    beam: &'a BeamRecord,
    frame: &'a TimeFunction,
    w: Complex64,
    gravity_force: f64,
    coupling: f64,
    breaks: alloc::vec::Vec<f64>,
}

impl<'a> Oscillator<'a> {
    fn new(
        beam: &'a BeamRecord,
        frame: &'a TimeFunction,
        params: &'a PhysicalParams,
    ) -> Result<Self> {
        let w = check_stability(params, beam.resolution())?;
        Ok(Self {
            params,
            beam,
            frame,
            w,
            gravity_force: params.mass * params.gravity,
            coupling: measurement_coupling(params, beam.resolution()),
            breaks: merged_breakpoints(&[frame, beam.trajectory()]),
        })
    }

    fn unforced(&self) -> bool {
        (self.gravity_force == 0.0 || self.frame.is_zero())
            && (self.coupling == 0.0 || self.beam.trajectory().is_zero())
    }

    fn force(&self, t: f64) -> Result<Complex64> {
        let fv = self.frame.evaluate(t)?;
        let cv = self.beam.trajectory().evaluate(t)?;
        Ok(Complex64::new(
            -self.gravity_force * fv,
            -self.coupling * cv,
        ))
    }

    fn wt(&self) -> Complex64 {
        self.w * self.params.duration()
    }

    fn closed_form(&self) -> Result<ActionCoefficients> {
        let m = self.params.mass;
        let (t0, t1) = (self.params.tau_start, self.params.tau_end);
        let w = self.w;
        let sin_wt = self.wt().sin();
        if sin_wt.norm() < SINGULAR_SINE || w.norm() == 0.0 {
            return Err(Error::SingularSine {
                modulus: sin_wt.norm(),
            });
        }
        let quadratic = m * w * self.wt().cos() / (2.0 * sin_wt);
        let cross = -m * w / sin_wt;
        if self.unforced() {
            let zero = Complex64::new(0.0, 0.0);
            return Ok(ActionCoefficients {
                quadratic,
                cross,
                start_linear: zero,
                end_linear: zero,
                free: zero,
            });
        }
        let single = Quadrature::new(QuadPolicy::SINGLE);
        let nested = Quadrature::new(QuadPolicy::NESTED);
        let end = single
            .integrate(
                |t| Ok(self.force(t)? * (w * (t - t0)).sin()),
                t0,
                t1,
                &self.breaks,
            )?
            .value;
        let start = single
            .integrate(
                |t| Ok(self.force(t)? * (w * (t1 - t)).sin()),
                t0,
                t1,
                &self.breaks,
            )?
            .value;
        let double = nested
            .integrate_triangle(
                |t, s| {
                    Ok(self.force(t)?
                        * (w * (t1 - t)).sin()
                        * self.force(s)?
                        * (w * (s - t0)).sin())
                },
                t0,
                t1,
                &self.breaks,
            )?
            .value;
        Ok(ActionCoefficients {
            quadratic,
            cross,
            start_linear: start / sin_wt,
            end_linear: end / sin_wt,
            free: -double / (m * w * sin_wt),
        })
    }

    fn series(&self) -> Result<ActionCoefficients> {
        let m = self.params.mass;
        let period = self.params.duration();
        let (t0, t1) = (self.params.tau_start, self.params.tau_end);
        let x = self.wt();
        if x.norm() > SERIES_CROSSOVER * (1.0 + 1e-12) {
            return Err(Error::SeriesOutOfRange {
                wt_modulus: x.norm(),
            });
        }
        let w = self.w;
        let xs = x_over_sin_series(x);
        let x2 = x * x;
        let cos = 1.0 - x2 / 2.0 + x2 * x2 / 24.0;
        let quadratic = m / (2.0 * period) * xs * cos;
        let cross = -m / period * xs;
        if self.unforced() {
            let zero = Complex64::new(0.0, 0.0);
            return Ok(ActionCoefficients {
                quadratic,
                cross,
                start_linear: zero,
                end_linear: zero,
                free: zero,
            });
        }
        let single = Quadrature::new(QuadPolicy::SINGLE);
        let nested = Quadrature::new(QuadPolicy::NESTED);
        let end = single
            .integrate(
                |t| Ok(self.force(t)? * sinc_series(w, t - t0)),
                t0,
                t1,
                &self.breaks,
            )?
            .value;
        let start = single
            .integrate(
                |t| Ok(self.force(t)? * sinc_series(w, t1 - t)),
                t0,
                t1,
                &self.breaks,
            )?
            .value;
        let double = nested
            .integrate_triangle(
                |t, s| {
                    Ok(self.force(t)?
                        * sinc_series(w, t1 - t)
                        * self.force(s)?
                        * sinc_series(w, s - t0))
                },
                t0,
                t1,
                &self.breaks,
            )?
            .value;
        Ok(ActionCoefficients {
            quadratic,
            cross,
            start_linear: xs * start / period,
            end_linear: xs * end / period,
            free: -xs * double / (m * period),
        })
    }
}

/// x / sin x through order x⁴.
fn x_over_sin_series(x: Complex64) -> Complex64 {
    let x2 = x * x;
    1.0 + x2 / 6.0 + 7.0 * x2 * x2 / 360.0
}

/// sin(w u) / w through order (w u)⁴.
fn sinc_series(w: Complex64, u: f64) -> Complex64 {
    let y2 = w * w * (u * u);
    u * (1.0 - y2 / 6.0 + y2 * y2 / 120.0)
}

/// Endpoint coefficients of S, choosing series or closed form by `|wT|`.
pub fn action_coefficients(
    beam: &BeamRecord,
    f: &TimeFunction,
    params: &PhysicalParams,
) -> Result<ActionCoefficients> {
    let osc = Oscillator::new(beam, f, params)?;
    if osc.wt().norm() < SERIES_CROSSOVER {
        osc.series()
    } else {
        osc.closed_form()
    }
}

/// Classical action of the driven complex oscillator between z1 and z2.
pub fn classical_action(
    beam: &BeamRecord,
    f: &TimeFunction,
    params: &PhysicalParams,
    z1: f64,
    z2: f64,
) -> Result<ComplexAction> {
    Ok(action_coefficients(beam, f, params)?.action(z1, z2))
}

/// The closed-form boundary formula, regardless of `|wT|` (fails at w = 0).
pub fn closed_form_action(
    beam: &BeamRecord,
    f: &TimeFunction,
    params: &PhysicalParams,
    z1: f64,
    z2: f64,
) -> Result<ComplexAction> {
    Ok(Oscillator::new(beam, f, params)?
        .closed_form()?
        .action(z1, z2))
}

/// Taylor expansion of the action in `wT` through fourth order; valid for
/// `|wT| <= SERIES_CROSSOVER`.
pub fn small_w_action(
    beam: &BeamRecord,
    f: &TimeFunction,
    params: &PhysicalParams,
    z1: f64,
    z2: f64,
) -> Result<ComplexAction> {
    Ok(Oscillator::new(beam, f, params)?.series()?.action(z1, z2))
}

/// ln(x / sin x), continued along the ray from x = 0.
///
/// For `Im x < 0`, `sin x = e^{ix}(1 - e^{-2ix}) / (2i)` and the last factor
/// stays in the right half plane, so its principal log is continuous.
fn ln_x_over_sin(x: Complex64) -> Complex64 {
    let r = x.norm();
    if r < SERIES_CROSSOVER {
        return x_over_sin_series(x).ln();
    }
    if r < 1.0 || x.im >= 0.0 {
        return (x / x.sin()).ln();
    }
    let i = Complex64::i();
    let ln_sin = i * x - Complex64::new(core::f64::consts::LN_2, FRAC_PI_2)
        + (1.0 - (-2.0 * i * x).exp()).ln();
    x.ln() - ln_sin
}

/// sqrt(mw / (2πiħ sin wT)) on the branch continuous with the free particle.
pub fn propagator_prefactor(params: &PhysicalParams, w: Complex64) -> Complex64 {
    let period = params.duration();
    let base = math::ln(params.mass / (2.0 * PI * params.hbar * period));
    let log = Complex64::new(base, -FRAC_PI_2) + ln_x_over_sin(w * period);
    (0.5 * log).exp()
}

/// U = exp(-2⟨c²⟩/Δc²) · sqrt(mw/(2πiħ sin wT)) · exp(iS/ħ).
pub fn restricted_propagator(
    beam: &BeamRecord,
    f: &TimeFunction,
    params: &PhysicalParams,
    z1: f64,
    z2: f64,
) -> Result<PropagatorValue> {
    let w = check_stability(params, beam.resolution())?;
    let action = classical_action(beam, f, params, z1, z2)?;
    let delta = beam.resolution();
    let msq = mean_square(beam.trajectory(), params)?;
    let weight_norm_factor = if msq == 0.0 {
        1.0
    } else {
        math::exp(-2.0 * msq / (delta * delta))
    };
    let prefactor = propagator_prefactor(params, w);
    let phase_factor = action.phase_factor(params.hbar);
    Ok(PropagatorValue {
        amplitude: prefactor * phase_factor * weight_norm_factor,
        weight_norm_factor,
        prefactor,
        phase_factor,
        action,
    })
}

/// Restricted propagator of one beam of a scenario.
pub fn beam_propagator(scenario: &Scenario, which: Beam) -> Result<PropagatorValue> {
    restricted_propagator(
        scenario.beam(which),
        scenario.frame_profile(),
        scenario.params(),
        scenario.z1(),
        scenario.z2(),
    )
}

/// Classical action of one beam of a scenario.
pub fn beam_action(scenario: &Scenario, which: Beam) -> Result<ComplexAction> {
    classical_action(
        scenario.beam(which),
        scenario.frame_profile(),
        scenario.params(),
        scenario.z1(),
        scenario.z2(),
    )
}
