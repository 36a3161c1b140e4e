//! Real functions of time: the frame profile f(t) and the measured records
//! a(t), b(t).

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::math;

/// Closed interval of time on which a function may be evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn new(start: f64, end: f64) -> Self {
        Self { start, end }
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t <= self.end
    }
}

/// Names of the supported function families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeFunctionKind {
    Constant,
    Linear,
    Sinusoid,
    Polynomial,
    Tabulated,
}

impl TimeFunctionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Constant => "constant",
            Self::Linear => "linear",
            Self::Sinusoid => "sinusoid",
            Self::Polynomial => "polynomial",
            Self::Tabulated => "tabulated",
        }
    }
}

impl FromStr for TimeFunctionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(Self::Constant),
            "linear" => Ok(Self::Linear),
            "sinusoid" => Ok(Self::Sinusoid),
            "polynomial" => Ok(Self::Polynomial),
            "tabulated" => Ok(Self::Tabulated),
            other => Err(Error::UnknownKind(other.to_string())),
        }
    }
}

/// Description of a time function before it is bound to a domain.
#[derive(Debug, Clone, PartialEq)]
pub enum TimeFunctionSpec {
    Constant(f64),
    /// `slope * t + intercept`
    Linear {
        slope: f64,
        intercept: f64,
    },
    /// `amplitude * sin(angular_frequency * t + phase) + offset`
    Sinusoid {
        amplitude: f64,
        angular_frequency: f64,
        phase: f64,
        offset: f64,
    },
    /// Coefficients in ascending powers of t.
    Polynomial(Vec<f64>),
    /// Samples joined by straight lines.
    Tabulated {
        times: Vec<f64>,
        values: Vec<f64>,
    },
}

impl TimeFunctionSpec {
    pub fn kind(&self) -> TimeFunctionKind {
        match self {
            Self::Constant(_) => TimeFunctionKind::Constant,
            Self::Linear { .. } => TimeFunctionKind::Linear,
            Self::Sinusoid { .. } => TimeFunctionKind::Sinusoid,
            Self::Polynomial(_) => TimeFunctionKind::Polynomial,
            Self::Tabulated { .. } => TimeFunctionKind::Tabulated,
        }
    }

    /// The function `t' -> value_scale * self(origin + time_scale * t')`.
    pub fn rescaled(&self, origin: f64, time_scale: f64, value_scale: f64) -> Self {
        match self {
            Self::Constant(v) => Self::Constant(v * value_scale),
            Self::Linear { slope, intercept } => Self::Linear {
                slope: slope * time_scale * value_scale,
                intercept: (slope * origin + intercept) * value_scale,
            },
            Self::Sinusoid {
                amplitude,
                angular_frequency,
                phase,
                offset,
            } => Self::Sinusoid {
                amplitude: amplitude * value_scale,
                angular_frequency: angular_frequency * time_scale,
                phase: phase + angular_frequency * origin,
                offset: offset * value_scale,
            },
            Self::Polynomial(coeffs) => {
                // Expand sum_j c_j (origin + time_scale t')^j by the binomial theorem.
                let n = coeffs.len();
                let mut out = alloc::vec![0.0; n];
                for (j, c) in coeffs.iter().enumerate() {
                    let mut binom = 1.0;
                    for k in 0..=j {
                        let term = c
                            * binom
                            * math::powi(origin, (j - k) as u32)
                            * math::powi(time_scale, k as u32);
                        out[k] += term * value_scale;
                        binom = binom * (j - k) as f64 / (k + 1) as f64;
                    }
                }
                Self::Polynomial(out)
            }
            Self::Tabulated { times, values } => Self::Tabulated {
                times: times.iter().map(|t| (t - origin) / time_scale).collect(),
                values: values.iter().map(|v| v * value_scale).collect(),
            },
        }
    }
}

/// A time function bound to its evaluation domain.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeFunction {
    spec: TimeFunctionSpec,
    domain: Interval,
}

/// Checks `spec` against `domain` and binds the two.
pub fn build_time_function(spec: TimeFunctionSpec, domain: Interval) -> Result<TimeFunction> {
    let bad = |msg: String| Err(Error::InvalidTimeFunction(msg));
    let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
    match &spec {
        TimeFunctionSpec::Constant(v) if !v.is_finite() => return bad("non-finite constant".into()),
        TimeFunctionSpec::Linear { slope, intercept } if !finite(&[*slope, *intercept]) => {
            return bad("non-finite linear coefficient".into())
        }
        TimeFunctionSpec::Sinusoid {
            amplitude,
            angular_frequency,
            phase,
            offset,
        } if !finite(&[*amplitude, *angular_frequency, *phase, *offset]) => {
            return bad("non-finite sinusoid coefficient".into())
        }
        TimeFunctionSpec::Polynomial(c) => {
            if c.is_empty() {
                return bad("polynomial needs at least one coefficient".into());
            }
            if !finite(c) {
                return bad("non-finite polynomial coefficient".into());
            }
        }
        TimeFunctionSpec::Tabulated { times, values } => {
            if times.len() != values.len() {
                return bad(format!(
                    "{} sample times but {} values",
                    times.len(),
                    values.len()
                ));
            }
            if times.len() < 2 {
                return bad("tabulated function needs at least 2 samples".into());
            }
            if !finite(times) || !finite(values) {
                return bad("non-finite sample".into());
            }
            if times.windows(2).any(|w| w[1] <= w[0]) {
                return bad("sample times are not strictly increasing".into());
            }
            if times[0] > domain.start || times[times.len() - 1] < domain.end {
                return bad(format!(
                    "samples span [{}, {}] but must cover [{}, {}]",
                    times[0],
                    times[times.len() - 1],
                    domain.start,
                    domain.end
                ));
            }
        }
        _ => {}
    }
    Ok(TimeFunction { spec, domain })
}

impl TimeFunction {
    pub fn spec(&self) -> &TimeFunctionSpec {
        &self.spec
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Value at `t`, which must lie in the domain.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !self.domain.contains(t) {
            return Err(Error::OutOfDomain {
                t,
                start: self.domain.start,
                end: self.domain.end,
            });
        }
        Ok(self.value_at(t))
    }

    /// Value at `t` without the domain check; callers guarantee `t` is inside.
    pub(crate) fn value_at(&self, t: f64) -> f64 {
        match &self.spec {
            TimeFunctionSpec::Constant(v) => *v,
            TimeFunctionSpec::Linear { slope, intercept } => slope * t + intercept,
            TimeFunctionSpec::Sinusoid {
                amplitude,
                angular_frequency,
                phase,
                offset,
            } => amplitude * math::sin(angular_frequency * t + phase) + offset,
            TimeFunctionSpec::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ci| acc * t + ci),
            TimeFunctionSpec::Tabulated { times, values } => {
                let idx = times.partition_point(|&x| x <= t);
                if idx == 0 {
                    return values[0];
                }
                if idx >= times.len() {
                    return values[times.len() - 1];
                }
                let (t0, t1) = (times[idx - 1], times[idx]);
                let s = (t - t0) / (t1 - t0);
                values[idx - 1] * (1.0 - s) + values[idx] * s
            }
        }
    }

    /// Kinks strictly inside the domain (tabulated sample times).
    pub fn breakpoints(&self) -> &[f64] {
        match &self.spec {
            TimeFunctionSpec::Tabulated { times, .. } => {
                let lo = times.partition_point(|&x| x <= self.domain.start);
                let hi = times.partition_point(|&x| x < self.domain.end);
                if lo < hi {
                    &times[lo..hi]
                } else {
                    &[]
                }
            }
            _ => &[],
        }
    }

    /// True when the function is identically zero by construction.
    pub fn is_zero(&self) -> bool {
        match &self.spec {
            TimeFunctionSpec::Constant(v) => *v == 0.0,
            TimeFunctionSpec::Linear { slope, intercept } => *slope == 0.0 && *intercept == 0.0,
            TimeFunctionSpec::Sinusoid {
                amplitude, offset, ..
            } => *amplitude == 0.0 && *offset == 0.0,
            TimeFunctionSpec::Polynomial(c) => c.iter().all(|x| *x == 0.0),
            TimeFunctionSpec::Tabulated { values, .. } => values.iter().all(|x| *x == 0.0),
        }
    }
}

/// Merged, sorted breakpoints of several functions.
pub(crate) fn merged_breakpoints(fns: &[&TimeFunction]) -> Vec<f64> {
    let mut all: Vec<f64> = fns
        .iter()
        .flat_map(|f| f.breakpoints().iter().copied())
        .collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    all.dedup();
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const UNIT: Interval = Interval {
        start: 0.0,
        end: 1.0,
    };

    fn build(spec: TimeFunctionSpec) -> TimeFunction {
        build_time_function(spec, UNIT).unwrap()
    }

    #[test]
    fn constant_is_flat() {
        let f = build(TimeFunctionSpec::Constant(1.0));
        for t in [0.0, 0.3, 1.0] {
            assert_eq!(f.evaluate(t).unwrap(), 1.0);
        }
        assert_eq!(
            build(TimeFunctionSpec::Constant(3.0))
                .evaluate(0.7)
                .unwrap(),
            3.0
        );
    }

    #[test]
    fn linear_midpoint() {
        let f = build(TimeFunctionSpec::Linear {
            slope: 2.0,
            intercept: 0.0,
        });
        assert_eq!(f.evaluate(0.5).unwrap(), 1.0);
    }

    #[test]
    fn tabulated_midpoint() {
        let f = build(TimeFunctionSpec::Tabulated {
            times: vec![0.0, 1.0],
            values: vec![0.0, 2.0],
        });
        assert_eq!(f.evaluate(0.5).unwrap(), 1.0);
    }

    #[test]
    fn sinusoid_quarter_period() {
        let f = build(TimeFunctionSpec::Sinusoid {
            amplitude: 1.0,
            angular_frequency: 2.0 * core::f64::consts::PI,
            phase: 0.0,
            offset: 0.0,
        });
        assert_relative_eq!(f.evaluate(0.25).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn polynomial_square() {
        let f = build_time_function(
            TimeFunctionSpec::Polynomial(vec![0.0, 0.0, 1.0]),
            Interval::new(0.0, 4.0),
        )
        .unwrap();
        assert_eq!(f.evaluate(3.0).unwrap(), 9.0);
    }

    #[test]
    fn out_of_domain_is_rejected() {
        let f = build(TimeFunctionSpec::Constant(1.0));
        assert!(matches!(f.evaluate(1.5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(f.evaluate(-1e-9), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn unknown_kind() {
        assert_eq!(
            "spline".parse::<TimeFunctionKind>(),
            Err(Error::UnknownKind("spline".into()))
        );
        assert_eq!(
            "tabulated".parse::<TimeFunctionKind>(),
            Ok(TimeFunctionKind::Tabulated)
        );
    }

    #[test]
    fn tabulation_errors() {
        let non_increasing = TimeFunctionSpec::Tabulated {
            times: vec![0.0, 0.5, 0.5, 1.0],
            values: vec![0.0; 4],
        };
        assert!(build_time_function(non_increasing, UNIT).is_err());
        let short = TimeFunctionSpec::Tabulated {
            times: vec![0.0, 0.9],
            values: vec![0.0, 1.0],
        };
        assert!(build_time_function(short, UNIT).is_err());
        let single = TimeFunctionSpec::Tabulated {
            times: vec![0.0],
            values: vec![0.0],
        };
        assert!(build_time_function(single, UNIT).is_err());
    }

    #[test]
    fn breakpoints_are_interior_samples() {
        let f = build(TimeFunctionSpec::Tabulated {
            times: vec![-1.0, 0.0, 0.25, 0.5, 1.0, 2.0],
            values: vec![0.0; 6],
        });
        assert_eq!(f.breakpoints(), &[0.25, 0.5]);
    }

    #[test]
    fn rescaling_matches_composition() {
        let specs = vec![
            TimeFunctionSpec::Constant(2.0),
            TimeFunctionSpec::Linear {
                slope: -1.5,
                intercept: 0.3,
            },
            TimeFunctionSpec::Sinusoid {
                amplitude: 0.7,
                angular_frequency: 3.0,
                phase: 0.2,
                offset: -0.1,
            },
            TimeFunctionSpec::Polynomial(vec![0.5, -1.0, 0.25, 2.0]),
            TimeFunctionSpec::Tabulated {
                times: vec![2.0, 2.5, 4.0, 6.0],
                values: vec![1.0, -1.0, 3.0, 0.0],
            },
        ];
        let domain = Interval::new(2.0, 6.0);
        for spec in specs {
            let original = build_time_function(spec.clone(), domain).unwrap();
            let scaled =
                build_time_function(spec.rescaled(2.0, 4.0, 0.5), Interval::new(0.0, 1.0)).unwrap();
            for k in 0..=10 {
                let tp = k as f64 / 10.0;
                let expected = 0.5 * original.evaluate(2.0 + 4.0 * tp).unwrap();
                assert_relative_eq!(
                    scaled.evaluate(tp).unwrap(),
                    expected,
                    epsilon = 1e-13,
                    max_relative = 1e-13
                );
            }
        }
    }

    proptest! {
        #[test]
        fn tabulated_reproduces_samples(
            mut times in proptest::collection::vec(0.01f64..0.99, 1..12),
            seed_values in proptest::collection::vec(-5.0f64..5.0, 14),
        ) {
            times.push(0.0);
            times.push(1.0);
            times.sort_by(|a, b| a.partial_cmp(b).unwrap());
            times.dedup();
            let values: Vec<f64> = seed_values.iter().copied().take(times.len()).collect();
            let f = build(TimeFunctionSpec::Tabulated { times: times.clone(), values: values.clone() });
            for (t, v) in times.iter().zip(values.iter()) {
                prop_assert_eq!(f.evaluate(*t).unwrap(), *v);
            }
        }

        #[test]
        fn evaluation_is_deterministic(t in 0.0f64..=1.0, a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let f = build(TimeFunctionSpec::Polynomial(vec![a, b, a * b]));
            prop_assert_eq!(f.evaluate(t).unwrap().to_bits(), f.evaluate(t).unwrap().to_bits());
        }
    }
}
