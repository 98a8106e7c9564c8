//! Real-argument binomial coefficients and the smooth surrogate `LL_r` for
//! the Kruskal–Katona function.
//!
//! For `v >= 1`, `LL_r(v) = C(x, r − 1)` where `x >= r` solves `C(x, r) = v`.
//! On `[0, 1]` the curve is the quadratic `r·(v + ε·(v − v²))` with
//! `ε = 1 / (1 + 1/2 + … + 1/r)`; the two pieces meet at `v = 1` with value
//! `r` and matching derivative `r·(1 − ε)`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// `x(x−1)⋯(x−r+1) / r!` in double precision.
pub fn binom_real(x: f64, r: u32) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (x - f64::from(i)) / f64::from(i + 1))
}

/// Solves `C(x, r) = m` for `x >= r`, by bisection on `[r − 1, r + m]`.
///
/// `C(·, r)` is increasing on that bracket and `C(r + m, r) >= m`, so
/// bisection always converges; it runs until the bracket stops shrinking.
pub fn binom_invert(m: f64, r: u32) -> Result<f64> {
    if r == 0 {
        return invalid("binom_invert needs r >= 1");
    }
    if !(m >= 1.0) || !m.is_finite() {
        return Err(Error::OutOfDomain(format!("binom_invert needs m >= 1, got {m}")));
    }
    let mut lo = f64::from(r) - 1.0;
    let mut hi = f64::from(r) + m;
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if binom_real(mid, r) < m {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let res = |x: f64| (binom_real(x, r) - m).abs();
    Ok(if res(lo) < res(hi) { lo } else { hi })
}

/// A real function on `[0, ∞)`, as used by the flow and the property checker.
pub trait Curve {
    fn eval(&self, v: f64) -> f64;

    fn name(&self) -> String;
}

/// The curve `LL_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LLCurve {
    r: u32,
    epsilon: f64,
}

impl LLCurve {
    pub fn new(r: u32) -> Result<Self> {
        if r < 2 {
            return invalid(format!("LL_r needs r >= 2, got {r}"));
        }
        let harmonic: f64 = (1..=r).map(|i| 1.0 / f64::from(i)).sum();
        Ok(LLCurve { r, epsilon: 1.0 / harmonic })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn value(&self, v: f64) -> f64 {
        let r = f64::from(self.r);
        if v <= 1.0 {
            r * (v + self.epsilon * (v - v * v))
        } else {
            // m = v >= 1 is always in the domain of binom_invert.
            let x = binom_invert(v, self.r).expect("v > 1");
            binom_real(x, self.r - 1)
        }
    }

    /// The derivative in closed form.
    ///
    /// Above 1 it comes from implicit differentiation of `C(x, r) = v`:
    /// `1 / LL_r' = (x − r + 1 + 1 / (1/x + … + 1/(x − r + 2))) / r`.
    pub fn derivative(&self, v: f64) -> f64 {
        let r = f64::from(self.r);
        if v <= 1.0 {
            r * (1.0 + self.epsilon * (1.0 - 2.0 * v))
        } else {
            let x = binom_invert(v, self.r).expect("v > 1");
            let s: f64 = (0..self.r - 1).map(|j| 1.0 / (x - f64::from(j))).sum();
            r / (x - r + 1.0 + 1.0 / s)
        }
    }
}

impl Curve for LLCurve {
    fn eval(&self, v: f64) -> f64 {
        self.value(v)
    }

    fn name(&self) -> String {
        format!("LL_{}", self.r)
    }
}

/// `f(v) = v`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl Curve for Identity {
    fn eval(&self, v: f64) -> f64 {
        v
    }

    fn name(&self) -> String {
        "identity".into()
    }
}

/// Wraps a closure as a [`Curve`].
pub struct FnCurve<F> {
    name: String,
    f: F,
}

impl<F: Fn(f64) -> f64> FnCurve<F> {
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnCurve { name: name.into(), f }
    }
}

impl<F: Fn(f64) -> f64> Curve for FnCurve<F> {
    fn eval(&self, v: f64) -> f64 {
        (self.f)(v)
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

/// `LL_r(v)`; negative arguments are rejected.
pub fn ll(v: f64, curve: &LLCurve) -> Result<f64> {
    if !(v >= 0.0) {
        return invalid(format!("LL_r is defined on [0, inf), got {v}"));
    }
    Ok(curve.value(v))
}

pub fn ll_vec(v: &[f64], curve: &LLCurve) -> Result<Vec<f64>> {
    v.iter().map(|&x| ll(x, curve)).collect()
}

/// Sampling plan for [`check_curve_properties`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    /// Right end of the sampled interval `(0, v_max]`.
    pub v_max: f64,
    /// Number of sample points: half evenly spaced in `(0, 1]`, half
    /// geometrically spaced in `(1, v_max]`.
    pub points: usize,
    /// Finite-difference step, relative to the sample point.
    pub rel_step: f64,
    /// Margin allowed on every monotonicity comparison.
    pub tolerance: f64,
    /// Where the one-sided derivatives are compared.
    pub joint: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { v_max: 1e4, points: 4000, rel_step: 1e-5, tolerance: 1e-6, joint: Some(1.0) }
    }
}

impl GridSpec {
    fn samples(&self) -> Vec<f64> {
        let half = (self.points / 2).max(2);
        let below = self.v_max.min(1.0);
        let mut out: Vec<f64> = (1..=half).map(|i| below * i as f64 / half as f64).collect();
        if self.v_max > 1.0 {
            let ratio = self.v_max.ln() / (self.points - half) as f64;
            out.extend((1..=self.points - half).map(|i| (ratio * i as f64).exp()));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub passed: bool,
    /// Smallest margin seen; negative margins beyond the tolerance are failures.
    pub worst_margin: f64,
    pub worst_at: f64,
    pub first_violation: Option<f64>,
    pub violations: usize,
}

impl PropertyCheck {
    fn from_margins(margins: impl IntoIterator<Item = (f64, f64)>, threshold: f64) -> Self {
        let mut check = PropertyCheck {
            passed: true,
            worst_margin: f64::INFINITY,
            worst_at: f64::NAN,
            first_violation: None,
            violations: 0,
        };
        for (at, m) in margins {
            if m < check.worst_margin || check.worst_at.is_nan() {
                check.worst_margin = m;
                check.worst_at = at;
            }
            if !(m > threshold) {
                check.passed = false;
                check.violations += 1;
                check.first_violation.get_or_insert(at);
            }
        }
        check
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointCheck {
    pub at: f64,
    pub left_derivative: f64,
    pub right_derivative: f64,
    pub mismatch: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveReport {
    pub curve: String,
    pub grid: GridSpec,
    /// Central difference strictly positive at every sample.
    pub increasing: PropertyCheck,
    /// Right secant slope never exceeds the left one by more than the tolerance.
    pub concave: PropertyCheck,
    /// `v·f'(v)/f(v)` decreasing from each sample to the next.
    pub log_derivative_decreasing: PropertyCheck,
    /// `v·f'(v)/f(v)` nondecreasing from each sample to the next, restricted to
    /// samples at or above the joint. Informational; not part of `passed`.
    pub log_derivative_increasing_above_joint: PropertyCheck,
    pub c1_joint: Option<JointCheck>,
    pub passed: bool,
}

/// Samples a curve and checks monotonicity, concavity, the monotone
/// decrease of `v·f'/f`, and derivative continuity at the joint, all by
/// finite differences with step `rel_step · v`.
pub fn check_curve_properties(curve: &dyn Curve, grid: &GridSpec) -> Result<CurveReport> {
    if !(grid.rel_step > 0.0 && grid.rel_step <= 1e-3) {
        return invalid(format!("finite-difference step {} is too coarse (need <= 1e-3)", grid.rel_step));
    }
    if !(grid.v_max > 0.0) || grid.points < 4 {
        return invalid("grid needs v_max > 0 and at least 4 points");
    }
    let samples = grid.samples();
    let tol = grid.tolerance;

    let mut incr = Vec::with_capacity(samples.len());
    let mut conc = Vec::with_capacity(samples.len());
    let mut logd = Vec::with_capacity(samples.len());
    for &v in &samples {
        let h = grid.rel_step * v;
        let (lo, mid, hi) = (curve.eval(v - h), curve.eval(v), curve.eval(v + h));
        let left = (mid - lo) / h;
        let right = (hi - mid) / h;
        let central = (hi - lo) / (2.0 * h);
        incr.push((v, central));
        conc.push((v, left - right + tol * left.abs().max(1.0)));
        logd.push((v, v * central / mid));
    }
    let increasing = PropertyCheck::from_margins(incr, 0.0);
    let concave = PropertyCheck::from_margins(conc, 0.0);
    let log_derivative_decreasing =
        PropertyCheck::from_margins(logd.windows(2).map(|w| (w[1].0, w[0].1 - w[1].1 + tol)), 0.0);
    let joint_at = grid.joint.unwrap_or(f64::INFINITY);
    let log_derivative_increasing_above_joint = PropertyCheck::from_margins(
        logd.windows(2).filter(|w| w[0].0 >= joint_at).map(|w| (w[1].0, w[1].1 - w[0].1 + tol)),
        0.0,
    );

    let c1_joint = grid.joint.map(|at| {
        let h = grid.rel_step * at.max(f64::MIN_POSITIVE);
        let f0 = curve.eval(at);
        // Second-order one-sided differences.
        let left = (3.0 * f0 - 4.0 * curve.eval(at - h) + curve.eval(at - 2.0 * h)) / (2.0 * h);
        let right = (-3.0 * f0 + 4.0 * curve.eval(at + h) - curve.eval(at + 2.0 * h)) / (2.0 * h);
        let mismatch = (left - right).abs();
        JointCheck { at, left_derivative: left, right_derivative: right, mismatch, passed: mismatch < tol }
    });

    let passed = increasing.passed
        && concave.passed
        && log_derivative_decreasing.passed
        && c1_joint.as_ref().is_none_or(|j| j.passed);
    Ok(CurveReport {
        curve: curve.name(),
        grid: *grid,
        increasing,
        concave,
        log_derivative_decreasing,
        log_derivative_increasing_above_joint,
        c1_joint,
        passed,
    })
}
