//! Composite Gauss–Legendre quadrature with panel doubling.
//!
//! Every integral in the crate goes through [`Quadrature`]: the interval is
//! cut at the supplied breakpoints (kinks of tabulated inputs), each segment
//! is split into `2^level` equal panels carrying an [`ORDER`]-point rule, and
//! the level is raised until two successive estimates agree to the relative
//! tolerance or the node budget is exhausted.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

/// Points per panel.
pub const ORDER: usize = 8;

/// Values that can be accumulated by the quadrature driver.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Convergence policy for one integration axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPolicy {
    pub rel_tol: f64,
    pub max_nodes: usize,
}

impl QuadPolicy {
    /// Single integrals: relative 1e-10 within 2^16 nodes.
    pub const SINGLE: Self = Self {
        rel_tol: 1e-10,
        max_nodes: 1 << 16,
    };

    /// Each axis of a nested double integral: relative 1e-10 within 2^12 nodes.
    pub const NESTED: Self = Self {
        rel_tol: 1e-10,
        max_nodes: 1 << 12,
    };
}

/// Absolute floor relative to the integral of |f|, so integrals that cancel
/// to zero still register as converged.
const CANCELLATION_FLOOR: f64 = 1e-14;

/// Nodes and weights of the `ORDER`-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
}

impl Default for GaussLegendre {
    fn default() -> Self {
        Self::new()
    }
}

impl GaussLegendre {
    pub fn new() -> Self {
        let n = ORDER;
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        for i in 0..n {
            // Newton on P_n from the Chebyshev-like initial guess.
            let mut x = math::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64; ORDER] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64; ORDER] {
        &self.weights
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Converged value and the node count of the accepted level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub nodes: usize,
}

/// Quadrature driver: a rule plus a convergence policy.
#[derive(Debug, Clone)]
pub struct Quadrature {
    rule: GaussLegendre,
    policy: QuadPolicy,
}

impl Quadrature {
    pub fn new(policy: QuadPolicy) -> Self {
        Self {
            rule: GaussLegendre::new(),
            policy,
        }
    }

    pub fn policy(&self) -> QuadPolicy {
        self.policy
    }

    /// Integrates `f` over `[a, b]`, splitting at any `breaks` strictly inside.
    pub fn integrate<T, F>(&self, mut f: F, a: f64, b: f64, breaks: &[f64]) -> Result<Estimate<T>>
    where
        T: QuadValue,
        F: FnMut(f64) -> Result<T>,
    {
        let edges = segment_edges(a, b, breaks);
        let segments = edges.len() - 1;
        if b <= a {
            return Ok(Estimate {
                value: T::default(),
                nodes: 0,
            });
        }

        let mut previous: Option<T> = None;
        let mut last_change = f64::INFINITY;
        let mut panels = 1usize;
        loop {
            let nodes = segments * panels * ORDER;
            if nodes > self.policy.max_nodes {
                return Err(Error::QuadratureNotConverged {
                    nodes: nodes / 2,
                    change: last_change,
                });
            }
            let (value, l1) = self.composite(&mut f, &edges, panels)?;
            if let Some(prev) = previous {
                let change = (value - prev).magnitude();
                let bound = self.policy.rel_tol * value.magnitude() + CANCELLATION_FLOOR * l1;
                if change <= bound {
                    return Ok(Estimate { value, nodes });
                }
                last_change = change;
            }
            previous = Some(value);
            panels *= 2;
        }
    }

    /// Integrates `f(t, s)` over the triangle `a <= s <= t <= b`, outer in `t`
    /// and inner in `s`. Each axis follows this driver's policy; the inner
    /// axis runs a decade tighter so its noise cannot stall the outer test.
    pub fn integrate_triangle<T, F>(
        &self,
        mut f: F,
        a: f64,
        b: f64,
        breaks: &[f64],
    ) -> Result<Estimate<T>>
    where
        T: QuadValue,
        F: FnMut(f64, f64) -> Result<T>,
    {
        let inner = Quadrature {
            rule: self.rule.clone(),
            policy: QuadPolicy {
                rel_tol: self.policy.rel_tol * 0.1,
                max_nodes: self.policy.max_nodes,
            },
        };
        self.integrate(
            |t| Ok(inner.integrate(|s| f(t, s), a, t, breaks)?.value),
            a,
            b,
            breaks,
        )
    }

    fn composite<T, F>(&self, f: &mut F, edges: &[f64], panels: usize) -> Result<(T, f64)>
    where
        T: QuadValue,
        F: FnMut(f64) -> Result<T>,
    {
        let mut sum = T::default();
        let mut l1 = 0.0;
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let width = (hi - lo) / panels as f64;
            for p in 0..panels {
                let left = lo + width * p as f64;
                let half = 0.5 * width;
                let mid = left + half;
                let mut panel = T::default();
                for (x, wt) in self.rule.nodes.iter().zip(self.rule.weights.iter()) {
                    let v = f(mid + half * x)?;
                    l1 += wt * half * v.magnitude();
                    panel = panel + v * *wt;
                }
                sum = sum + panel * half;
            }
        }
        Ok((sum, l1))
    }
}

fn segment_edges(a: f64, b: f64, breaks: &[f64]) -> Vec<f64> {
    let mut edges = Vec::with_capacity(breaks.len() + 2);
    edges.push(a);
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));
    inner.dedup();
    edges.extend(inner);
    edges.push(b.max(a));
    edges
}
