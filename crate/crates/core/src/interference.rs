//! Interference of the two recombined beams.
//!
//! The full intensity is `|U_a + U_b|²`. The reduced interference term keeps
//! only the real action parts, `cos((S⁽¹⁾_a - S⁽¹⁾_b)/ħ)`, and the phase
//! difference splits into five groups by their endpoint dependence:
//!
//! | term | endpoint factor |
//! |------|-----------------|
//! | I1   | z1² + z2²       |
//! | I2   | z1 z2           |
//! | I3   | z1              |
//! | I4   | z2              |
//! | I5   | none            |
//!
//! Each term is a beam-a block minus the same block for beam b. Two
//! evaluators exist. [`Mode::PaperLiteral`] follows the published closed
//! forms symbol for symbol, including `θ = sqrt(2πħT/(mΔ²))` and the sum
//! kernels `f(t) + f(s)` in I5. [`Mode::Derived`] evaluates the real parts of
//! the oscillator action coefficients in the same `e^{-θ}`-factored real
//! form, with `θ = |Re(wT)| = sqrt(2ħT/(mΔ²))`; its five terms sum to the
//! phase difference.
//!
//! All I-terms and the phase difference in an [`InterferenceBreakdown`] are
//! expressed in units of ħ.

use core::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;

use crate::action::{beam_action, beam_propagator, check_stability, complex_frequency};
use crate::error::{Error, Result};
use crate::math::{cos, exp, sin, sin_cos, sqrt};
use crate::quadrature::{QuadPolicy, Quadrature};
use crate::scenario::{Beam, Scenario};
use crate::time_function::merged_breakpoints;

/// Tolerance on the derived-mode decomposition residual.
pub const DERIVED_RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Which closed forms evaluate I1…I5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    PaperLiteral,
    Derived,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::PaperLiteral, Mode::Derived];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::PaperLiteral => "paper-literal",
            Mode::Derived => "derived",
        }
    }
}

impl core::fmt::Display for Mode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// θ, ρ and the per-time angles of both beams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxiliaryAngles {
    pub theta: f64,
    pub rho: f64,
    /// sqrt(4ħ/(mTΔa²))
    pub rate_a: f64,
    /// sqrt(4ħ/(mTΔb²))
    pub rate_b: f64,
    pub tau_start: f64,
    pub tau_end: f64,
}

impl AuxiliaryAngles {
    pub fn gamma(&self, t: f64) -> f64 {
        self.rate_a * (t - self.tau_end)
    }

    pub fn big_gamma(&self, t: f64) -> f64 {
        self.rate_b * (t - self.tau_end)
    }

    pub fn mu(&self, t: f64) -> f64 {
        self.rate_a * (t - self.tau_start)
    }

    pub fn nu(&self, t: f64) -> f64 {
        self.rate_b * (t - self.tau_start)
    }

    pub fn epsilon(&self, t: f64) -> f64 {
        self.rate_a * (self.tau_end - t)
    }

    pub fn sigma(&self, s: f64) -> f64 {
        self.rate_a * (s - self.tau_start)
    }

    pub fn alpha(&self, s: f64) -> f64 {
        self.rate_b * (s - self.tau_start)
    }

    pub fn beta(&self, t: f64) -> f64 {
        self.rate_b * (self.tau_end - t)
    }
}

fn theta_for(scenario: &Scenario, delta: f64, mode: Mode) -> f64 {
    let p = scenario.params();
    match mode {
        Mode::PaperLiteral => sqrt(2.0 * PI * p.hbar * p.duration() / (p.mass * delta * delta)),
        Mode::Derived => (complex_frequency(p, delta) * p.duration()).re.abs(),
    }
}

fn rate_for(scenario: &Scenario, delta: f64) -> f64 {
    let p = scenario.params();
    sqrt(4.0 * p.hbar / (p.mass * p.duration() * delta * delta))
}

/// θ and ρ in the requested mode, plus the per-time angle rates.
pub fn auxiliary_angles(scenario: &Scenario, mode: Mode) -> AuxiliaryAngles {
    let (da, db) = (
        scenario.beam_a().resolution(),
        scenario.beam_b().resolution(),
    );
    let p = scenario.params();
    AuxiliaryAngles {
        theta: theta_for(scenario, da, mode),
        rho: theta_for(scenario, db, mode),
        rate_a: rate_for(scenario, da),
        rate_b: rate_for(scenario, db),
        tau_start: p.tau_start,
        tau_end: p.tau_end,
    }
}

/// Index of an interference term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    I1,
    I2,
    I3,
    I4,
    I5,
}

impl Term {
    pub const ALL: [Term; 5] = [Term::I1, Term::I2, Term::I3, Term::I4, Term::I5];
}

/// Shared per-beam inputs of the block evaluators.
struct BeamBlock<'a> {
    scenario: &'a Scenario,
    which: Beam,
    theta: f64,
    /// |w| = sqrt(4ħ/(mTΔ²))
    rate: f64,
    delta: f64,
    breaks: alloc::vec::Vec<f64>,
}

impl<'a> BeamBlock<'a> {
    fn new(scenario: &'a Scenario, which: Beam, mode: Mode) -> Result<Self> {
        let beam = scenario.beam(which);
        let delta = beam.resolution();
        check_stability(scenario.params(), delta)?;
        if mode == Mode::PaperLiteral && delta.is_infinite() {
            return Err(Error::Unsupported(
                "the paper-literal closed forms are undefined for an unmonitored beam".into(),
            ));
        }
        Ok(Self {
            scenario,
            which,
            theta: theta_for(scenario, delta, mode),
            rate: rate_for(scenario, delta),
            delta,
            breaks: merged_breakpoints(&[scenario.frame_profile(), beam.trajectory()]),
        })
    }

    fn frame(&self, t: f64) -> Result<f64> {
        self.scenario.frame_profile().evaluate(t)
    }

    fn record(&self, t: f64) -> Result<f64> {
        self.scenario.beam(self.which).trajectory().evaluate(t)
    }

    fn single<F: FnMut(f64) -> Result<Complex64>>(&self, f: F) -> Result<Complex64> {
        let p = self.scenario.params();
        Ok(Quadrature::new(QuadPolicy::SINGLE)
            .integrate(f, p.tau_start, p.tau_end, &self.breaks)?
            .value)
    }

    fn double<F: FnMut(f64, f64) -> Result<Complex64>>(&self, f: F) -> Result<Complex64> {
        let p = self.scenario.params();
        Ok(Quadrature::new(QuadPolicy::NESTED)
            .integrate_triangle(f, p.tau_start, p.tau_end, &self.breaks)?
            .value)
    }

    fn forced(&self) -> bool {
        let s = self.scenario;
        let gravity = s.params().gravity != 0.0 && !s.frame_profile().is_zero();
        let record = !s.beam(self.which).trajectory().is_zero();
        gravity || record
    }
}

/// 1 + e^{-4θ} - 2e^{-2θ}cos 2θ as printed.
fn denominator_printed(theta: f64) -> f64 {
    1.0 + exp(-4.0 * theta) - 2.0 * exp(-2.0 * theta) * cos(2.0 * theta)
}

/// The same denominator, written as 4e^{-2θ}(sin²θ + sinh²θ) for small θ.
fn denominator_stable(theta: f64) -> f64 {
    if theta < 1.0 {
        let s = sin(theta);
        let sh = libm::sinh(theta);
        4.0 * exp(-2.0 * theta) * (s * s + sh * sh)
    } else {
        denominator_printed(theta)
    }
}

/// 1 - e^{-x} without cancellation.
fn one_minus_exp_neg(x: f64) -> f64 {
    -libm::expm1(-x)
}

// ---------------------------------------------------------------------------
// Paper-literal blocks (phase units, as printed).
// ---------------------------------------------------------------------------

mod literal {
    use super::*;

    pub(super) fn i1(b: &BeamBlock<'_>) -> f64 {
        let s = b.scenario;
        let p = s.params();
        let th = b.theta;
        let frac =
            (1.0 - exp(-4.0 * th) + 2.0 * exp(-2.0 * th) * sin(2.0 * th)) / denominator_printed(th);
        (s.z1() * s.z1() + s.z2() * s.z2()) * sqrt(p.mass / (2.0 * p.hbar * p.duration())) * frac
            / b.delta
    }

    pub(super) fn i2(b: &BeamBlock<'_>) -> f64 {
        let s = b.scenario;
        let p = s.params();
        let th = b.theta;
        let num = (1.0 - exp(-2.0 * th)) * cos(th) + (1.0 + exp(-2.0 * th)) * sin(th);
        let frac = num / (exp(th) * denominator_printed(th));
        -sqrt(8.0 * p.mass / (p.hbar * p.duration())) * s.z1() * s.z2() * frac / b.delta
    }

    /// Braced factor shared by I3 (`angle = γ/√2`) and I4 (`angle = μ/√2`).
    fn endpoint_brace(b: &BeamBlock<'_>, angle: impl Fn(f64) -> f64) -> Result<f64> {
        let p = b.scenario.params();
        let g = p.gravity;
        let k2 = b.rate * b.rate;
        let th = b.theta;
        let ints = b.single(|t| {
            let x = angle(t);
            let (f, c) = (b.frame(t)?, b.record(t)?);
            let e = exp(x);
            let ep = 1.0 + exp(-2.0 * x);
            let em = 1.0 - exp(-2.0 * x);
            let first = e * (k2 * c * sin(x) * ep - g * f * cos(x) * em);
            let second = e * (k2 * c * cos(x) * em + g * f * sin(x) * ep);
            Ok(Complex64::new(first, second))
        })?;
        let brace =
            (1.0 - exp(-2.0 * th)) * cos(th) * ints.re - (1.0 + exp(-2.0 * th)) * sin(th) * ints.im;
        Ok(exp(-th) / denominator_printed(th) * brace)
    }

    pub(super) fn i3(b: &BeamBlock<'_>) -> Result<f64> {
        let s = b.scenario;
        let p = s.params();
        if s.z1() == 0.0 {
            return Ok(0.0);
        }
        let (k, t1) = (b.rate, p.tau_end);
        let brace = endpoint_brace(b, |t| k * (t - t1) * FRAC_1_SQRT_2)?;
        Ok(-(p.mass / p.hbar) * s.z1() * brace)
    }

    pub(super) fn i4(b: &BeamBlock<'_>) -> Result<f64> {
        let s = b.scenario;
        let p = s.params();
        if s.z2() == 0.0 {
            return Ok(0.0);
        }
        let (k, t0) = (b.rate, p.tau_start);
        let brace = endpoint_brace(b, |t| k * (t - t0) * FRAC_1_SQRT_2)?;
        Ok((p.mass / p.hbar) * s.z2() * brace)
    }

    pub(super) fn i5(b: &BeamBlock<'_>) -> Result<f64> {
        let s = b.scenario;
        let p = s.params();
        let (g, k) = (p.gravity, b.rate);
        let (k2, k4) = (k * k, k * k * k * k);
        let (t0, t1) = (p.tau_start, p.tau_end);
        let th = b.theta;
        let ints = b.double(|t, s_| {
            let eps = k * (t1 - t);
            let sig = k * (s_ - t0);
            let (ft, fs) = (b.frame(t)?, b.frame(s_)?);
            let (ct, cs) = (b.record(t)?, b.record(s_)?);
            let sum = g * g * (ft + fs) - k4 * (ct + cs);
            let mixed = k2 * g * (ft * cs + fs * ct);
            let dm = (eps - sig) * FRAC_1_SQRT_2;
            let dp = (eps + sig) * FRAC_1_SQRT_2;
            let es = exp(-SQRT_2 * sig);
            let ee = exp(-SQRT_2 * eps);
            let eb = exp(-SQRT_2 * (sig + eps));
            let pre = exp((sig + eps) / 2.0) / 2.0;
            let k1 = cos(dm) * (es + ee) - cos(dp) * (1.0 + eb);
            let k2_ = sin(dp) * (1.0 - eb) + (-es + ee) * sin(dm);
            let k3 = sin(dm) * (-es + ee) + sin(dp) * (1.0 - eb);
            let k4_ = -cos(dp) * (1.0 + eb) + (es + ee) * cos(dm);
            Ok(Complex64::new(
                pre * (sum * k1 + mixed * k2_),
                pre * (sum * k3 - mixed * k4_),
            ))
        })?;
        let em = (1.0 - exp(-2.0 * th)) * cos(th);
        let ep = (1.0 + exp(-2.0 * th)) * sin(th);
        let brace = -(em - ep) * ints.re + (em + ep) * ints.im;
        Ok((p.mass / p.hbar) * p.duration() * exp(-th) / (th * denominator_printed(th)) * brace)
    }
}

// ---------------------------------------------------------------------------
// Derived blocks: Re of the oscillator action coefficients, divided by ħ.
// ---------------------------------------------------------------------------

mod derived {
    use super::*;

    /// sinθ coshθ - cosθ sinhθ, by series below θ = 0.1.
    fn sc_minus_cs(theta: f64) -> f64 {
        if theta < 0.1 {
            let t3 = theta * theta * theta;
            let t4 = t3 * theta;
            2.0 * t3 / 3.0 - 2.0 * t3 * t4 / 315.0
        } else {
            sin(theta) * libm::cosh(theta) - cos(theta) * libm::sinh(theta)
        }
    }

    /// (1+e^{-2θ})sinθ - (1-e^{-2θ})cosθ = 2e^{-θ}(sinθ coshθ - cosθ sinhθ).
    fn x_minus(theta: f64) -> f64 {
        if theta < 0.1 {
            2.0 * exp(-theta) * sc_minus_cs(theta)
        } else {
            (1.0 + exp(-2.0 * theta)) * sin(theta) - one_minus_exp_neg(2.0 * theta) * cos(theta)
        }
    }

    /// (1+e^{-2θ})sinθ + (1-e^{-2θ})cosθ.
    fn x_plus(theta: f64) -> f64 {
        (1.0 + exp(-2.0 * theta)) * sin(theta) + one_minus_exp_neg(2.0 * theta) * cos(theta)
    }

    fn phase_scale(b: &BeamBlock<'_>) -> f64 {
        let p = b.scenario.params();
        p.mass / (p.hbar * p.duration())
    }

    pub(super) fn i1(b: &BeamBlock<'_>) -> f64 {
        let s = b.scenario;
        let zz = s.z1() * s.z1() + s.z2() * s.z2();
        if b.theta == 0.0 {
            return zz * 0.5 * phase_scale(b);
        }
        let p = s.params();
        let th = b.theta;
        let num = if th < 1.0 {
            2.0 * exp(-2.0 * th) * (libm::sinh(2.0 * th) + sin(2.0 * th))
        } else {
            one_minus_exp_neg(4.0 * th) + 2.0 * exp(-2.0 * th) * sin(2.0 * th)
        };
        zz * sqrt(p.mass / (2.0 * p.hbar * p.duration())) * num / denominator_stable(th) / b.delta
    }

    pub(super) fn i2(b: &BeamBlock<'_>) -> f64 {
        let s = b.scenario;
        let zz = s.z1() * s.z2();
        if b.theta == 0.0 {
            return -zz * phase_scale(b);
        }
        let p = s.params();
        let th = b.theta;
        let frac = x_plus(th) * exp(-th) / denominator_stable(th);
        -sqrt(8.0 * p.mass / (p.hbar * p.duration())) * zz * frac / b.delta
    }

    /// Re of the coefficient of z1 (`from_end = true`, lever τ″ - t) or of z2
    /// (lever t - τ′), in units of ħ.
    fn endpoint_coefficient(b: &BeamBlock<'_>, from_end: bool) -> Result<f64> {
        let p = b.scenario.params();
        let (t0, t1) = (p.tau_start, p.tau_end);
        let lever = |t: f64| if from_end { t1 - t } else { t - t0 };
        let g = p.gravity;
        if b.theta == 0.0 {
            // w → 0: (1/T) ∫ F(t) lever(t) dt with F = -m g f.
            let v = b.single(|t| Ok(Complex64::new(-p.mass * g * b.frame(t)? * lever(t), 0.0)))?;
            return Ok(v.re / (p.duration() * p.hbar));
        }
        let th = b.theta;
        let k2 = b.rate * b.rate;
        let ints = b.single(|t| {
            let phi = b.rate * lever(t) * FRAC_1_SQRT_2;
            let (gf, q) = (g * b.frame(t)?, k2 * b.record(t)?);
            let (s, c) = sin_cos(phi);
            let ep = 1.0 + exp(-2.0 * phi);
            let em = one_minus_exp_neg(2.0 * phi);
            let scale = 0.5 * exp(phi - th);
            Ok(Complex64::new(
                scale * (gf * ep * s + q * em * c),
                scale * (q * ep * s - gf * em * c),
            ))
        })?;
        let bracket = (1.0 + exp(-2.0 * th)) * sin(th) * ints.re
            - one_minus_exp_neg(2.0 * th) * cos(th) * ints.im;
        Ok(-2.0 * p.mass / p.hbar * bracket / denominator_stable(th))
    }

    pub(super) fn i3(b: &BeamBlock<'_>) -> Result<f64> {
        let z1 = b.scenario.z1();
        if z1 == 0.0 || !b.forced() {
            return Ok(0.0);
        }
        Ok(z1 * endpoint_coefficient(b, true)?)
    }

    pub(super) fn i4(b: &BeamBlock<'_>) -> Result<f64> {
        let z2 = b.scenario.z2();
        if z2 == 0.0 || !b.forced() {
            return Ok(0.0);
        }
        Ok(z2 * endpoint_coefficient(b, false)?)
    }

    pub(super) fn i5(b: &BeamBlock<'_>) -> Result<f64> {
        if !b.forced() {
            return Ok(0.0);
        }
        let p = b.scenario.params();
        let (g, k) = (p.gravity, b.rate);
        let (k2, k4) = (k * k, k * k * k * k);
        let (t0, t1) = (p.tau_start, p.tau_end);
        if b.theta == 0.0 {
            // w → 0: -(m/(ħT)) ∫∫ g² f(t) f(s) (τ″ - t)(s - τ′).
            let v = b.double(|t, s| {
                Ok(Complex64::new(
                    g * g * b.frame(t)? * b.frame(s)? * (t1 - t) * (s - t0),
                    0.0,
                ))
            })?;
            return Ok(-phase_scale(b) * v.re);
        }
        let th = b.theta;
        let ints = b.double(|t, s| {
            let eps = k * (t1 - t);
            let sig = k * (s - t0);
            let (ft, fs) = (b.frame(t)?, b.frame(s)?);
            let (ct, cs) = (b.record(t)?, b.record(s)?);
            let kernel =
                Complex64::new(g * g * ft * fs - k4 * ct * cs, g * k2 * (ft * cs + fs * ct));
            let big = (eps + sig) * FRAC_1_SQRT_2;
            let small = (eps - sig) * FRAC_1_SQRT_2;
            let es = exp(-SQRT_2 * sig);
            let ee = exp(-SQRT_2 * eps);
            let eb = exp(-2.0 * big);
            let (sp, cp) = sin_cos(small);
            let (sb, cb) = sin_cos(big);
            let sines = Complex64::new(
                cp * (es + ee) - cb * (1.0 + eb),
                sp * (es - ee) - sb * one_minus_exp_neg(2.0 * big),
            ) * (0.25 * exp(big - th));
            Ok(kernel * sines)
        })?;
        let bracket = x_minus(th) * ints.re - x_plus(th) * ints.im;
        Ok(-(p.mass * p.duration() / p.hbar) * bracket / (th * denominator_stable(th)))
    }
}

fn block(scenario: &Scenario, which: Beam, mode: Mode, term: Term) -> Result<f64> {
    let b = BeamBlock::new(scenario, which, mode)?;
    match (mode, term) {
        (Mode::PaperLiteral, Term::I1) => Ok(literal::i1(&b)),
        (Mode::PaperLiteral, Term::I2) => Ok(literal::i2(&b)),
        (Mode::PaperLiteral, Term::I3) => literal::i3(&b),
        (Mode::PaperLiteral, Term::I4) => literal::i4(&b),
        (Mode::PaperLiteral, Term::I5) => literal::i5(&b),
        (Mode::Derived, Term::I1) => Ok(derived::i1(&b)),
        (Mode::Derived, Term::I2) => Ok(derived::i2(&b)),
        (Mode::Derived, Term::I3) => derived::i3(&b),
        (Mode::Derived, Term::I4) => derived::i4(&b),
        (Mode::Derived, Term::I5) => derived::i5(&b),
    }
}

/// One interference term, beam a block minus beam b block, in units of ħ.
pub fn term(scenario: &Scenario, term: Term, mode: Mode) -> Result<f64> {
    let a = block(scenario, Beam::A, mode, term)?;
    let b = block(scenario, Beam::B, mode, term)?;
    let v = a - b;
    if !v.is_finite() {
        return Err(Error::NonFinite("interference term"));
    }
    Ok(v)
}

pub fn term_i1(scenario: &Scenario, mode: Mode) -> Result<f64> {
    term(scenario, Term::I1, mode)
}

pub fn term_i2(scenario: &Scenario, mode: Mode) -> Result<f64> {
    term(scenario, Term::I2, mode)
}

pub fn term_i3(scenario: &Scenario, mode: Mode) -> Result<f64> {
    term(scenario, Term::I3, mode)
}

pub fn term_i4(scenario: &Scenario, mode: Mode) -> Result<f64> {
    term(scenario, Term::I4, mode)
}

pub fn term_i5(scenario: &Scenario, mode: Mode) -> Result<f64> {
    term(scenario, Term::I5, mode)
}

/// S⁽¹⁾_a - S⁽¹⁾_b in action units, from the closed-form actions.
pub fn phase_difference(scenario: &Scenario) -> Result<f64> {
    let a = beam_action(scenario, Beam::A)?;
    let b = beam_action(scenario, Beam::B)?;
    Ok(a.s1 - b.s1)
}

/// cos((S⁽¹⁾_a - S⁽¹⁾_b)/ħ).
pub fn reduced_interference(scenario: &Scenario) -> Result<f64> {
    Ok(cos(phase_difference(scenario)? / scenario.params().hbar))
}

/// |U_a + U_b|² with every factor of both propagators retained.
pub fn intensity(scenario: &Scenario) -> Result<f64> {
    let a = beam_propagator(scenario, Beam::A)?;
    let b = beam_propagator(scenario, Beam::B)?;
    Ok((a.amplitude + b.amplitude).norm_sqr())
}

/// Full set of interference outputs for one scenario and mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceBreakdown {
    pub mode: Mode,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub i5: f64,
    /// (S⁽¹⁾_a - S⁽¹⁾_b)/ħ
    pub phase_difference: f64,
    /// cos of `phase_difference`
    pub reduced_i: f64,
    /// |U_a + U_b|²
    pub intensity: f64,
    /// |i1 + … + i5 - phase_difference|
    pub residual: f64,
}

impl InterferenceBreakdown {
    pub fn terms(&self) -> [f64; 5] {
        [self.i1, self.i2, self.i3, self.i4, self.i5]
    }

    pub fn term_sum(&self) -> f64 {
        self.terms().iter().sum()
    }
}

/// Everything mode-independent: the two propagators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamPair {
    pub a: crate::action::PropagatorValue,
    pub b: crate::action::PropagatorValue,
}

impl BeamPair {
    pub fn compute(scenario: &Scenario) -> Result<Self> {
        Ok(Self {
            a: beam_propagator(scenario, Beam::A)?,
            b: beam_propagator(scenario, Beam::B)?,
        })
    }
}

/// Evaluates every term in `mode` and reconciles them with the actions.
pub fn decompose(scenario: &Scenario, mode: Mode) -> Result<InterferenceBreakdown> {
    let pair = BeamPair::compute(scenario)?;
    decompose_with(scenario, mode, &pair)
}

/// As [`decompose`], reusing already computed propagators.
pub fn decompose_with(
    scenario: &Scenario,
    mode: Mode,
    pair: &BeamPair,
) -> Result<InterferenceBreakdown> {
    let hbar = scenario.params().hbar;
    let phase = (pair.a.action.s1 - pair.b.action.s1) / hbar;
    let mut i = [0.0; 5];
    for (slot, t) in i.iter_mut().zip(Term::ALL) {
        *slot = term(scenario, t, mode)?;
    }
    let intensity = (pair.a.amplitude + pair.b.amplitude).norm_sqr();
    let sum: f64 = i.iter().sum();
    let out = InterferenceBreakdown {
        mode,
        i1: i[0],
        i2: i[1],
        i3: i[2],
        i4: i[3],
        i5: i[4],
        phase_difference: phase,
        reduced_i: cos(phase),
        intensity,
        residual: (sum - phase).abs(),
    };
    if !(out.intensity.is_finite() && out.phase_difference.is_finite()) {
        return Err(Error::NonFinite("interference breakdown"));
    }
    Ok(out)
}
