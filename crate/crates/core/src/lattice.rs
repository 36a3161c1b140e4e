//! Time-sliced evaluation of the restricted path integral.
//!
//! The window is cut into N slices of width h. On slice k the integrand
//! contributes
//!
//! ```text
//! (im/2ħh)(z_{k+1} - z_k)² - (i/ħ) h m g f_k z̄_k - γ ∫ (z - c_k)² dτ
//! ```
//!
//! with `z̄_k` the slice midpoint value, `f_k`, `c_k` sampled at the slice
//! midpoint time and `γ = 2/(TΔ²)`. The weight integral is split
//! symmetrically between the two lattice points,
//! `h[(z_k² + z_{k+1}²)/2 - 2 c_k z̄_k + c_k²]`, which makes each slice a
//! symmetric Trotter step and keeps the free-particle slice normalization
//! second-order accurate. Squaring the midpoint value instead leaves an O(h)
//! error in the fluctuation determinant. The exponent is quadratic in the N - 1
//! interior points, so the integral is an exact Gaussian:
//! `(m/2πiħh)^{N/2} (2π)^{(N-1)/2} det(A)^{-1/2} exp(½ rᵀA⁻¹r + s0)`.
//!
//! Nothing here calls into [`crate::action`]; the two are meant to check one
//! another.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::action::ComplexAction;
use crate::error::{Error, Result};
use crate::math::ln;
use crate::scenario::{Beam, Scenario};

/// Conditions above this are treated as singular.
pub const CONDITION_LIMIT: f64 = 1e13;

/// Agreement demanded between the two reduction orders.
pub const ORDER_AGREEMENT: f64 = 1e-12;

/// Lattice resolution and endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    steps: usize,
    z1: f64,
    z2: f64,
    step: f64,
}

impl LatticeSpec {
    pub fn new(steps: usize, z1: f64, z2: f64, duration: f64) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Unsupported(
                "a lattice needs at least one step".to_string(),
            ));
        }
        let step = duration / steps as f64;
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Unsupported(
                "lattice step must be positive".to_string(),
            ));
        }
        Ok(Self {
            steps,
            z1,
            z2,
            step,
        })
    }

    /// Lattice over the scenario's window and endpoints.
    pub fn for_scenario(scenario: &Scenario, steps: usize) -> Result<Self> {
        Self::new(
            steps,
            scenario.z1(),
            scenario.z2(),
            scenario.params().duration(),
        )
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn z1(&self) -> f64 {
        self.z1
    }

    pub fn z2(&self) -> f64 {
        self.z2
    }
}

/// `-½ zᵀAz + rᵀz + s0` over the interior points, plus normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    /// Diagonal of A, length N - 1.
    pub diagonal: Vec<Complex64>,
    /// Off-diagonal of A, length N - 2.
    pub off_diagonal: Vec<Complex64>,
    pub linear: Vec<Complex64>,
    pub offset: Complex64,
    /// log of the per-slice factor sqrt(m/(2πiħh)).
    pub log_slice_norm: Complex64,
    /// The endpoint-independent part -γ h Σ c_k², which is not part of the
    /// oscillator action.
    pub record_offset: Complex64,
    pub steps: usize,
}

impl QuadraticForm {
    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    /// Value of the exponent at an interior configuration.
    pub fn exponent_at(&self, z: &[Complex64]) -> Complex64 {
        let n = self.dimension();
        let mut quad = Complex64::new(0.0, 0.0);
        let mut lin = Complex64::new(0.0, 0.0);
        for j in 0..n {
            quad += self.diagonal[j] * z[j] * z[j];
            if j + 1 < n {
                quad += 2.0 * self.off_diagonal[j] * z[j] * z[j + 1];
            }
            lin += self.linear[j] * z[j];
        }
        -0.5 * quad + lin + self.offset
    }
}

/// Builds the discretized exponent for one beam.
pub fn assemble_quadratic_form(
    scenario: &Scenario,
    which: Beam,
    lattice: &LatticeSpec,
) -> Result<QuadraticForm> {
    let p = scenario.params();
    let beam = scenario.beam(which);
    let (m, hbar, g) = (p.mass, p.hbar, p.gravity);
    let n = lattice.steps;
    let h = lattice.step;
    let delta = beam.resolution();
    let gamma = 2.0 / (p.duration() * delta * delta);
    let i = Complex64::i();

    // Slice exponent in (u, v) = (z_k, z_{k+1}):
    //   q (u² + v²) + x u v + l_k (u + v) - γ h c_k²
    let kinetic = i * (m / (2.0 * hbar * h));
    let q = kinetic - gamma * h / 2.0;
    let x = -2.0 * kinetic;

    // Full (N + 1)-point form, boundary points included.
    let mut diag = vec![Complex64::new(0.0, 0.0); n + 1];
    let off = vec![-x; n];
    let mut lin = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut record = 0.0;
    for k in 0..n {
        let t = p.tau_start + (k as f64 + 0.5) * h;
        let f = scenario.frame_profile().evaluate(t)?;
        let c = beam.trajectory().evaluate(t)?;
        let l = Complex64::new(gamma * h * c, -h * m * g * f / (2.0 * hbar));
        diag[k] -= 2.0 * q;
        diag[k + 1] -= 2.0 * q;
        lin[k] += l;
        lin[k + 1] += l;
        record -= gamma * h * c * c;
    }

    // Fold the fixed endpoints into the linear term and the offset.
    let (z1, z2) = (lattice.z1, lattice.z2);
    let mut offset = Complex64::new(record, 0.0) + lin[0] * z1 + lin[n] * z2
        - 0.5 * diag[0] * z1 * z1
        - 0.5 * diag[n] * z2 * z2;
    let dim = n - 1;
    let (diagonal, off_diagonal, linear) = if dim == 0 {
        offset -= off[0] * z1 * z2;
        (Vec::new(), Vec::new(), Vec::new())
    } else {
        let diagonal = diag[1..n].to_vec();
        let off_diagonal = off[1..n - 1].to_vec();
        let mut linear = lin[1..n].to_vec();
        linear[0] -= off[0] * z1;
        linear[dim - 1] -= off[n - 1] * z2;
        (diagonal, off_diagonal, linear)
    };

    let log_slice_norm = 0.5 * Complex64::new(ln(m / (2.0 * PI * hbar * h)), -FRAC_PI_2);
    Ok(QuadraticForm {
        diagonal,
        off_diagonal,
        linear,
        offset,
        log_slice_norm,
        record_offset: Complex64::new(record, 0.0),
        steps: n,
    })
}

/// Which end the elimination starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionOrder {
    Forward,
    Backward,
}

/// Outcome of eliminating the interior points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reduction {
    /// Σ log(pivot), each pivot on the principal branch.
    pub log_det: Complex64,
    /// rᵀ A⁻¹ r
    pub quadratic: Complex64,
    /// max|pivot| / min|pivot|
    pub condition: f64,
}

/// LDLᵀ elimination of a symmetric tridiagonal system.
///
/// Each pivot of a complex symmetric matrix with positive semidefinite real
/// part keeps a nonnegative real part, so summing principal logs follows
/// det^{-1/2} continuously from the free particle.
pub fn reduce(form: &QuadraticForm, order: ReductionOrder) -> Result<Reduction> {
    let n = form.dimension();
    if n == 0 {
        return Ok(Reduction {
            log_det: Complex64::new(0.0, 0.0),
            quadratic: Complex64::new(0.0, 0.0),
            condition: 1.0,
        });
    }
    let at = |v: &[Complex64], j: usize| match order {
        ReductionOrder::Forward => v[j],
        ReductionOrder::Backward => v[v.len() - 1 - j],
    };
    let mut log_det = Complex64::new(0.0, 0.0);
    let mut quadratic = Complex64::new(0.0, 0.0);
    let (mut largest, mut smallest) = (0.0f64, f64::INFINITY);
    let mut pivot = at(&form.diagonal, 0);
    let mut carried = at(&form.linear, 0);
    for j in 0..n {
        if j > 0 {
            let b = at(&form.off_diagonal, j - 1);
            let l = b / pivot;
            carried = at(&form.linear, j) - l * carried;
            pivot = at(&form.diagonal, j) - l * b;
        }
        let size = pivot.norm();
        largest = largest.max(size);
        smallest = smallest.min(size);
        if !(size > 0.0) || largest / smallest > CONDITION_LIMIT {
            return Err(Error::NearSingular {
                n: form.steps,
                condition: largest / smallest,
            });
        }
        log_det += pivot.ln();
        quadratic += carried * carried / pivot;
    }
    Ok(Reduction {
        log_det,
        quadratic,
        condition: largest / smallest,
    })
}

/// Lattice propagator estimate and its stationary exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeValue {
    pub propagator: Complex64,
    /// ½ rᵀA⁻¹r + s0
    pub stationary_exponent: Complex64,
    pub condition: f64,
}

/// Exact Gaussian integral of a quadratic form, cross-checked between the
/// two elimination orders.
pub fn gaussian_reduce(form: &QuadraticForm) -> Result<LatticeValue> {
    let fwd = reduce(form, ReductionOrder::Forward)?;
    let bwd = reduce(form, ReductionOrder::Backward)?;
    let scale = 1.0 + fwd.log_det.norm() + fwd.quadratic.norm();
    let gap = (fwd.log_det - bwd.log_det).norm() + (fwd.quadratic - bwd.quadratic).norm();
    if gap > ORDER_AGREEMENT * scale {
        return Err(Error::NearSingular {
            n: form.steps,
            condition: fwd.condition.max(bwd.condition),
        });
    }
    let n = form.dimension() as f64;
    let stationary_exponent = 0.5 * fwd.quadratic + form.offset;
    let log_value = form.log_slice_norm * form.steps as f64 + 0.5 * n * ln(2.0 * PI)
        - 0.5 * fwd.log_det
        + stationary_exponent;
    let propagator = log_value.exp();
    if !(propagator.re.is_finite() && propagator.im.is_finite()) {
        return Err(Error::NonFinite("lattice propagator"));
    }
    Ok(LatticeValue {
        propagator,
        stationary_exponent,
        condition: fwd.condition,
    })
}

/// det(A) through the three-term continuant, rescaled by powers of two.
///
/// Returns `(mantissa, exponent)` with `det = mantissa · 2^exponent`.
pub fn continuant_determinant(
    diagonal: &[Complex64],
    off_diagonal: &[Complex64],
) -> (Complex64, i64) {
    let mut prev = Complex64::new(1.0, 0.0);
    let mut cur = match diagonal.first() {
        Some(&d) => d,
        None => return (prev, 0),
    };
    let mut exponent = 0i64;
    for j in 1..diagonal.len() {
        let b = off_diagonal[j - 1];
        let next = diagonal[j] * cur - b * b * prev;
        prev = cur;
        cur = next;
        let size = cur.norm().max(prev.norm());
        if size > 0.0 {
            let (_, e) = libm::frexp(size);
            if e.abs() > 64 {
                let factor = libm::ldexp(1.0, -e);
                cur *= factor;
                prev *= factor;
                exponent += e as i64;
            }
        }
    }
    (cur, exponent)
}

/// Propagator of one beam at a single lattice resolution.
pub fn lattice_propagator(scenario: &Scenario, which: Beam, steps: usize) -> Result<Complex64> {
    let lattice = LatticeSpec::for_scenario(scenario, steps)?;
    Ok(gaussian_reduce(&assemble_quadratic_form(scenario, which, &lattice)?)?.propagator)
}

/// Discrete action at the stationary path, `-iħ (½ rᵀA⁻¹r + s0 - record)`.
pub fn stationary_action(
    scenario: &Scenario,
    which: Beam,
    lattice: &LatticeSpec,
) -> Result<ComplexAction> {
    let form = assemble_quadratic_form(scenario, which, lattice)?;
    let value = gaussian_reduce(&form)?;
    let hbar = scenario.params().hbar;
    let s = Complex64::new(0.0, -hbar) * (value.stationary_exponent - form.record_offset);
    Ok(ComplexAction::from_complex(s))
}

/// Extrapolated limit of a lattice sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub value: Complex64,
    /// Distance between the last two extrapolation levels.
    pub error_estimate: f64,
    /// |v(N) - v(2N)| / |v(2N) - v(4N)| for each consecutive triple.
    pub ratios: Vec<f64>,
}

/// Romberg extrapolation in h² of values at doubling N.
pub fn richardson_extrapolate(estimates: &[(usize, Complex64)]) -> Result<Extrapolation> {
    if estimates.len() < 3 {
        return Err(Error::Extrapolation(
            "at least three lattice levels are needed".to_string(),
        ));
    }
    for w in estimates.windows(2) {
        if w[1].0 != 2 * w[0].0 {
            return Err(Error::Extrapolation(
                "lattice sizes must double".to_string(),
            ));
        }
    }
    let scale = estimates
        .iter()
        .map(|(_, v)| v.norm())
        .fold(0.0f64, f64::max);
    let floor = 1e-14 * scale.max(f64::MIN_POSITIVE);
    let diffs: Vec<f64> = estimates
        .windows(2)
        .map(|w| (w[1].1 - w[0].1).norm())
        .collect();
    let mut ratios = Vec::with_capacity(diffs.len() - 1);
    for w in diffs.windows(2) {
        if w[1] > w[0] && w[1] > floor {
            return Err(Error::Extrapolation(alloc::format!(
                "differences grew from {:e} to {:e}",
                w[0],
                w[1]
            )));
        }
        ratios.push(if w[1] > 0.0 {
            w[0] / w[1]
        } else {
            f64::INFINITY
        });
    }

    let mut level: Vec<Complex64> = estimates.iter().map(|e| e.1).collect();
    let mut previous_best = *level.last().unwrap_or(&Complex64::new(0.0, 0.0));
    let mut factor = 4.0;
    while level.len() > 1 {
        let next: Vec<Complex64> = level
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
        previous_best = *level.last().unwrap_or(&previous_best);
        level = next;
        factor *= 4.0;
    }
    let value = level[0];
    Ok(Extrapolation {
        value,
        error_estimate: (value - previous_best).norm(),
        ratios,
    })
}

/// Lattice propagator extrapolated over the given doubling sequence.
pub fn extrapolated_propagator(
    scenario: &Scenario,
    which: Beam,
    levels: &[usize],
) -> Result<Extrapolation> {
    let mut estimates = Vec::with_capacity(levels.len());
    for &n in levels {
        estimates.push((n, lattice_propagator(scenario, which, n)?));
    }
    richardson_extrapolate(&estimates)
}

/// Stationary action extrapolated over the given doubling sequence.
pub fn extrapolated_action(
    scenario: &Scenario,
    which: Beam,
    levels: &[usize],
) -> Result<Extrapolation> {
    let mut estimates = Vec::with_capacity(levels.len());
    for &n in levels {
        let lattice = LatticeSpec::for_scenario(scenario, n)?;
        estimates.push((
            n,
            stationary_action(scenario, which, &lattice)?.as_complex(),
        ));
    }
    richardson_extrapolate(&estimates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{validate_scenario, PhysicalParams, RawBeam, RawScenario};
    use crate::time_function::TimeFunctionSpec;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn free_raw(z1: f64, z2: f64) -> RawScenario {
        RawScenario {
            params: PhysicalParams {
                gravity: 0.0,
                ..PhysicalParams::NATURAL
            },
            z1,
            z2,
            frame_profile: TimeFunctionSpec::Constant(0.0),
            beam_a: RawBeam {
                trajectory: TimeFunctionSpec::Constant(0.0),
                resolution: f64::INFINITY,
            },
            beam_b: RawBeam {
                trajectory: TimeFunctionSpec::Constant(0.0),
                resolution: f64::INFINITY,
            },
        }
    }

    fn baseline() -> Scenario {
        validate_scenario(&RawScenario {
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
        })
        .unwrap()
    }

    fn free_exact(m: f64, hbar: f64, t: f64, dz: f64) -> Complex64 {
        let i = Complex64::i();
        (m / (2.0 * PI * i * hbar * t)).sqrt() * (i * m * dz * dz / (2.0 * hbar * t)).exp()
    }

    #[test]
    fn single_step_is_the_free_action() {
        let s = validate_scenario(&free_raw(0.2, 0.9)).unwrap();
        let lat = LatticeSpec::for_scenario(&s, 1).unwrap();
        let form = assemble_quadratic_form(&s, Beam::A, &lat).unwrap();
        assert_eq!(form.dimension(), 0);
        let expected = Complex64::new(0.0, 0.49 / 2.0);
        assert!((form.offset - expected).norm() < 1e-15);
    }

    #[test]
    fn form_shape() {
        let s = baseline();
        let lat = LatticeSpec::for_scenario(&s, 4).unwrap();
        let form = assemble_quadratic_form(&s, Beam::A, &lat).unwrap();
        assert_eq!(form.dimension(), 3);
        assert_eq!(form.off_diagonal.len(), 2);
        assert_eq!(form.linear.len(), 3);
    }

    #[test]
    fn zero_steps_rejected() {
        assert!(LatticeSpec::new(0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn free_particle_is_exact_at_every_n() {
        let s = validate_scenario(&free_raw(0.3, -0.4)).unwrap();
        let exact = free_exact(1.0, 1.0, 1.0, -0.7);
        for n in [1, 2, 3, 8, 64, 500] {
            let v = lattice_propagator(&s, Beam::A, n).unwrap();
            assert!(
                (v - exact).norm() <= 1e-10 * exact.norm(),
                "N = {n}: {v} vs {exact}"
            );
            let lat = LatticeSpec::for_scenario(&s, n).unwrap();
            let a = stationary_action(&s, Beam::A, &lat).unwrap();
            assert_relative_eq!(a.s1, 0.49 / 2.0, max_relative = 1e-12);
            assert!(a.s2.abs() < 1e-13);
        }
    }

    #[test]
    fn continuant_matches_dense_determinant() {
        let s = baseline();
        let lat = LatticeSpec::for_scenario(&s, 9).unwrap();
        let form = assemble_quadratic_form(&s, Beam::A, &lat).unwrap();
        let n = form.dimension();
        assert_eq!(n, 8);
        let mut dense = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for j in 0..n {
            dense[j][j] = form.diagonal[j];
            if j + 1 < n {
                dense[j][j + 1] = form.off_diagonal[j];
                dense[j + 1][j] = form.off_diagonal[j];
            }
        }
        let dense_det = dense_determinant(dense);
        let (mantissa, exp) = continuant_determinant(&form.diagonal, &form.off_diagonal);
        let det = mantissa * libm::ldexp(1.0, exp as i32);
        assert!((det - dense_det).norm() <= 1e-12 * dense_det.norm());
        let red = reduce(&form, ReductionOrder::Forward).unwrap();
        let from_pivots = red.log_det.exp();
        assert!((from_pivots - dense_det).norm() <= 1e-12 * dense_det.norm());
    }

    /// Gaussian elimination with partial pivoting.
    fn dense_determinant(mut a: Vec<Vec<Complex64>>) -> Complex64 {
        let n = a.len();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let p = (col..n)
                .max_by(|&x, &y| a[x][col].norm().partial_cmp(&a[y][col].norm()).unwrap())
                .unwrap();
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            det *= a[col][col];
            for row in col + 1..n {
                let l = a[row][col] / a[col][col];
                for k in col..n {
                    let v = a[col][k];
                    a[row][k] -= l * v;
                }
            }
        }
        det
    }

    #[test]
    fn continuant_survives_large_systems() {
        let s = baseline();
        let lat = LatticeSpec::for_scenario(&s, 4096).unwrap();
        let form = assemble_quadratic_form(&s, Beam::A, &lat).unwrap();
        let (mantissa, exp) = continuant_determinant(&form.diagonal, &form.off_diagonal);
        assert!(mantissa.norm().is_finite() && mantissa.norm() > 0.0);
        let red = reduce(&form, ReductionOrder::Forward).unwrap();
        let log_mag = mantissa.norm().ln() + exp as f64 * core::f64::consts::LN_2;
        assert_relative_eq!(log_mag, red.log_det.re, max_relative = 1e-12);
    }

    #[test]
    fn reduction_orders_agree() {
        let s = baseline();
        for n in [2, 7, 64, 1024] {
            let lat = LatticeSpec::for_scenario(&s, n).unwrap();
            let form = assemble_quadratic_form(&s, Beam::B, &lat).unwrap();
            let f = reduce(&form, ReductionOrder::Forward).unwrap();
            let b = reduce(&form, ReductionOrder::Backward).unwrap();
            assert!((f.log_det - b.log_det).norm() <= 1e-12 * (1.0 + f.log_det.norm()));
            assert!((f.quadratic - b.quadratic).norm() <= 1e-12 * (1.0 + f.quadratic.norm()));
        }
    }

    #[test]
    fn stationary_path_solves_the_normal_equations() {
        // The reduced exponent equals the form evaluated at z* = A⁻¹r.
        let s = baseline();
        let lat = LatticeSpec::for_scenario(&s, 6).unwrap();
        let form = assemble_quadratic_form(&s, Beam::A, &lat).unwrap();
        let z = solve_dense(&form);
        let direct = form.exponent_at(&z);
        let reduced = gaussian_reduce(&form).unwrap().stationary_exponent;
        assert!((direct - reduced).norm() < 1e-12);
    }

    fn solve_dense(form: &QuadraticForm) -> Vec<Complex64> {
        // Thomas algorithm, written independently of `reduce`.
        let n = form.dimension();
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        let mut d = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            let sub = if j > 0 {
                form.off_diagonal[j - 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let denom = form.diagonal[j]
                - if j > 0 {
                    sub * c[j - 1]
                } else {
                    Complex64::new(0.0, 0.0)
                };
            if j + 1 < n {
                c[j] = form.off_diagonal[j] / denom;
            }
            d[j] = (form.linear[j]
                - if j > 0 {
                    sub * d[j - 1]
                } else {
                    Complex64::new(0.0, 0.0)
                })
                / denom;
        }
        let mut z = vec![Complex64::new(0.0, 0.0); n];
        for j in (0..n).rev() {
            z[j] = d[j]
                - if j + 1 < n {
                    c[j] * z[j + 1]
                } else {
                    Complex64::new(0.0, 0.0)
                };
        }
        z
    }

    #[test]
    fn baseline_converges_at_second_order() {
        let s = baseline();
        let ex = extrapolated_propagator(&s, Beam::A, &[64, 128, 256, 512]).unwrap();
        for r in &ex.ratios {
            assert!((3.6..=4.4).contains(r), "ratio {r}");
        }
    }

    #[test]
    fn richardson_constant_sequence() {
        let v = Complex64::new(0.3, -1.2);
        let ex = richardson_extrapolate(&[(8, v), (16, v), (32, v)]).unwrap();
        assert_eq!(ex.value, v);
        assert_eq!(ex.error_estimate, 0.0);
    }

    #[test]
    fn richardson_recovers_h_squared_model() {
        let v = Complex64::new(0.7, 0.2);
        let c = Complex64::new(-3.0, 5.0);
        let seq: Vec<(usize, Complex64)> = [16usize, 32, 64]
            .iter()
            .map(|&n| (n, v + c / (n * n) as f64))
            .collect();
        let ex = richardson_extrapolate(&seq).unwrap();
        assert!((ex.value - v).norm() < 1e-12);
    }

    #[test]
    fn richardson_refuses_divergence() {
        let seq = [
            (8, Complex64::new(1.0, 0.0)),
            (16, Complex64::new(1.1, 0.0)),
            (32, Complex64::new(1.5, 0.0)),
        ];
        assert!(matches!(
            richardson_extrapolate(&seq),
            Err(Error::Extrapolation(_))
        ));
        assert!(richardson_extrapolate(&seq[..2]).is_err());
        assert!(richardson_extrapolate(&[(8, seq[0].1), (17, seq[1].1), (34, seq[2].1)]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn free_lattice_matches_free_propagator(
            z1 in -2.0f64..2.0, z2 in -2.0f64..2.0, n in 1usize..200,
        ) {
            let s = validate_scenario(&free_raw(z1, z2)).unwrap();
            let exact = free_exact(1.0, 1.0, 1.0, z2 - z1);
            let v = lattice_propagator(&s, Beam::A, n).unwrap();
            prop_assert!((v - exact).norm() <= 1e-11 * exact.norm());
        }
    }
}
