//! Monotone plane regions as decreasing step functions, the area-preserving
//! deformation `g ↦ g_t`, and the check that the square minimizes the
//! `f`-image area.
//!
//! A [`StepProfile`] with breakpoints `0 = x_0 < x_1 < … < x_k` and heights
//! `h_1 > … > h_k > 0` is the left-continuous function equal to `h_i` on
//! `(x_{i−1}, x_i]` and zero beyond `x_k`; it encodes the region
//! `M = {(x, y) : y <= g(x)}`. Everything here is evaluated in closed form on
//! that representation, so there is no quadrature and no time stepping.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::llr::Curve;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileFile", into = "ProfileFile")]
pub struct StepProfile {
    /// `x_1 … x_k`; `x_0 = 0` is implicit.
    breakpoints: Vec<f64>,
    heights: Vec<f64>,
}

/// On-disk form: `{"breakpoints": [0, x_1, …, x_k], "heights": [h_1, …, h_k]}`.
/// The leading 0 may be omitted on input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileFile {
    pub breakpoints: Vec<f64>,
    pub heights: Vec<f64>,
}

impl TryFrom<ProfileFile> for StepProfile {
    type Error = crate::Error;

    fn try_from(f: ProfileFile) -> Result<Self> {
        let mut bp = f.breakpoints;
        if bp.len() == f.heights.len() + 1 {
            if bp[0] != 0.0 {
                return invalid("with k+1 breakpoints the first must be 0");
            }
            bp.remove(0);
        }
        StepProfile::new(bp, f.heights)
    }
}

impl From<StepProfile> for ProfileFile {
    fn from(p: StepProfile) -> Self {
        let mut breakpoints = vec![0.0];
        breakpoints.extend(p.breakpoints);
        ProfileFile { breakpoints, heights: p.heights }
    }
}

impl StepProfile {
    /// Validates and normalizes: plateaus merge, zero-height steps drop.
    pub fn new(breakpoints: Vec<f64>, heights: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != heights.len() {
            return invalid(format!(
                "{} breakpoints for {} heights",
                breakpoints.len(),
                heights.len()
            ));
        }
        if breakpoints.iter().chain(&heights).any(|v| !v.is_finite()) {
            return invalid("profile values must be finite");
        }
        let mut prev = 0.0;
        for &x in &breakpoints {
            if !(x > prev) {
                return invalid(format!("breakpoints must be strictly increasing from 0, got {x} after {prev}"));
            }
            prev = x;
        }
        if heights.iter().any(|&h| h < 0.0) {
            return invalid("heights must be nonnegative");
        }
        if heights.windows(2).any(|w| w[1] > w[0]) {
            return invalid("heights must be nonincreasing");
        }
        let mut bp: Vec<f64> = Vec::with_capacity(breakpoints.len());
        let mut hs: Vec<f64> = Vec::with_capacity(heights.len());
        for (x, h) in breakpoints.into_iter().zip(heights) {
            if h == 0.0 {
                break;
            }
            if hs.last() == Some(&h) {
                *bp.last_mut().unwrap() = x;
            } else {
                bp.push(x);
                hs.push(h);
            }
        }
        Ok(StepProfile { breakpoints: bp, heights: hs })
    }

    pub fn empty() -> Self {
        StepProfile { breakpoints: Vec::new(), heights: Vec::new() }
    }

    /// `[0, width] × [0, height]`
    pub fn rectangle(width: f64, height: f64) -> Result<Self> {
        Self::new(vec![width], vec![height])
    }

    pub fn square(side: f64) -> Result<Self> {
        if side == 0.0 {
            return Ok(Self::empty());
        }
        Self::rectangle(side, side)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    /// `x_k`, the extent along the first axis.
    pub fn width(&self) -> f64 {
        self.breakpoints.last().copied().unwrap_or(0.0)
    }

    /// `h_1`, the extent along the second axis.
    pub fn height(&self) -> f64 {
        self.heights.first().copied().unwrap_or(0.0)
    }

    fn steps(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        // (left, right, height)
        let lefts = std::iter::once(0.0).chain(self.breakpoints.iter().copied());
        lefts.zip(&self.breakpoints).zip(&self.heights).map(|((l, &r), &h)| (l, r, h))
    }

    /// `g(x)`, left-continuous; `g(0) = h_1`.
    pub fn value_at(&self, x: f64) -> f64 {
        match self.breakpoints.iter().position(|&b| x <= b) {
            Some(i) => self.heights[i],
            None => 0.0,
        }
    }

    /// `∫_t^∞ g`
    pub fn tail_integral(&self, t: f64) -> f64 {
        self.steps().filter(|&(_, r, _)| r > t).map(|(l, r, h)| h * (r - l.max(t))).sum()
    }

    /// True when the region is the square `[0, s]²` up to `tol`.
    pub fn is_square(&self, tol: f64) -> bool {
        match (self.breakpoints.as_slice(), self.heights.as_slice()) {
            ([x], [h]) => (x - h).abs() <= tol,
            ([], []) => true,
            _ => false,
        }
    }
}

/// `Σ h_i (x_i − x_{i−1})`
pub fn area(g: &StepProfile) -> f64 {
    g.steps().map(|(l, r, h)| h * (r - l)).sum()
}

/// Area of the image `f(M)` under `f` applied to both coordinates:
/// `Σ f(h_i) (f(x_i) − f(x_{i−1}))`.
pub fn f_area(g: &StepProfile, f: &dyn Curve) -> f64 {
    let mut prev = f.eval(0.0);
    let mut total = 0.0;
    for (_, r, h) in g.steps() {
        let fr = f.eval(r);
        total += f.eval(h) * (fr - prev);
        prev = fr;
    }
    total
}

/// `g_t`: cut the region at `x = t` and spread the cut-off mass evenly over
/// `[0, t]` as a vertical lift of `(1/t) ∫_t^∞ g`.
pub fn deform(g: &StepProfile, t: f64) -> Result<StepProfile> {
    if !(t > 0.0) || !t.is_finite() {
        return invalid(format!("deformation time must be positive, got {t}"));
    }
    if t >= g.width() {
        return Ok(g.clone());
    }
    let lift = g.tail_integral(t) / t;
    let (bp, hs) = g
        .steps()
        .filter(|&(l, _, _)| l < t)
        .map(|(_, r, h)| (r.min(t), h + lift))
        .unzip();
    Ok(StepProfile { breakpoints: bp, heights: hs })
}

/// `g_t(t)`
pub fn g_t_at_t(g: &StepProfile, t: f64) -> Result<f64> {
    Ok(deform(g, t)?.value_at(t))
}

/// The mirror image of the region in the diagonal.
pub fn transpose(g: &StepProfile) -> StepProfile {
    StepProfile {
        breakpoints: g.heights.iter().rev().copied().collect(),
        heights: g.breakpoints.iter().rev().copied().collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracePoint {
    pub t: f64,
    pub f_area: f64,
    pub g_t_at_t: f64,
    /// `g_t(t) < t`
    pub in_regime: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowTrace {
    pub curve: String,
    pub area: f64,
    /// `√area`
    pub side: f64,
    pub points: Vec<TracePoint>,
}

impl FlowTrace {
    /// Largest drop between consecutive in-regime points (0 if none).
    pub fn worst_regime_drop(&self) -> f64 {
        let regime: Vec<&TracePoint> = self.points.iter().filter(|p| p.in_regime).collect();
        regime.windows(2).map(|w| w[0].f_area - w[1].f_area).fold(0.0, f64::max)
    }

    /// CSV with columns `t,f_area,g_t_at_t,regime_flag`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,f_area,g_t_at_t,regime_flag\n");
        for p in &self.points {
            writeln!(out, "{},{},{},{}", p.t, p.f_area, p.g_t_at_t, u8::from(p.in_regime)).unwrap();
        }
        out
    }
}

/// `f_area(g_t)` along an increasing grid of times.
pub fn flow_trace(g: &StepProfile, f: &dyn Curve, t_grid: &[f64]) -> Result<FlowTrace> {
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return invalid("time grid must be strictly increasing");
    }
    let points = t_grid
        .iter()
        .map(|&t| {
            let gt = deform(g, t)?;
            let at_t = gt.value_at(t);
            Ok(TracePoint { t, f_area: f_area(&gt, f), g_t_at_t: at_t, in_regime: at_t < t })
        })
        .collect::<Result<Vec<_>>>()?;
    let a = area(g);
    Ok(FlowTrace { curve: f.name(), area: a, side: a.sqrt(), points })
}

/// `n` evenly spaced times on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimReport {
    pub curve: String,
    pub area: f64,
    /// `T = √area`
    pub side: f64,
    pub f_area: f64,
    /// `f(T)²`, the image area of the square of the same area.
    pub square_f_area: f64,
    pub margin: f64,
    pub is_square: bool,
    pub equality: bool,
    /// `f_area` after deforming to `T`, after transposing, and after the
    /// second deformation to `T`.
    pub stage_f_areas: [f64; 3],
    pub stages_nonincreasing: bool,
    /// Extent of the two-stage result, which should lie in `[0, 2T] × [0, T]`.
    pub reduced_extent: (f64, f64),
    pub contained: bool,
    pub tolerance: f64,
    pub passed: bool,
}

/// Default absolute tolerance on `f`-areas.
pub const CLAIM_TOLERANCE: f64 = 1e-9;

/// Compares `f_area(g)` with the square of the same area and runs the
/// two-stage reduction (deform to `T`, transpose, deform to `T`).
pub fn check_claim_d2(g: &StepProfile, f: &dyn Curve, tol: f64) -> Result<ClaimReport> {
    let a = area(g);
    let side = a.sqrt();
    let fa = f_area(g, f);
    if g.is_empty() {
        return Ok(ClaimReport {
            curve: f.name(),
            area: 0.0,
            side: 0.0,
            f_area: fa,
            square_f_area: 0.0,
            margin: fa,
            is_square: true,
            equality: true,
            stage_f_areas: [fa; 3],
            stages_nonincreasing: true,
            reduced_extent: (0.0, 0.0),
            contained: true,
            tolerance: tol,
            passed: true,
        });
    }
    let fs = f.eval(side);
    let square_f_area = fs * fs;
    let margin = fa - square_f_area;
    let is_square = g.is_square(1e-9 * side);
    let equality = margin.abs() <= tol;

    let first = deform(g, side)?;
    let flipped = transpose(&first);
    let second = deform(&flipped, side)?;
    let stage_f_areas = [f_area(&first, f), f_area(&flipped, f), f_area(&second, f)];
    let stages_nonincreasing = stage_f_areas[0] <= fa + tol
        && stage_f_areas[1] <= stage_f_areas[0] + tol
        && stage_f_areas[2] <= stage_f_areas[1] + tol;
    let reduced = transpose(&second);
    let reduced_extent = (reduced.width(), reduced.height());
    let slack = 1e-12 * side + tol;
    let contained = reduced_extent.0 <= 2.0 * side + slack && reduced_extent.1 <= side + slack;

    let passed = margin >= -tol && (!equality || is_square) && stages_nonincreasing && contained;
    Ok(ClaimReport {
        curve: f.name(),
        area: a,
        side,
        f_area: fa,
        square_f_area,
        margin,
        is_square,
        equality,
        stage_f_areas,
        stages_nonincreasing,
        reduced_extent,
        contained,
        tolerance: tol,
        passed,
    })
}

/// A random staircase whose breakpoints and heights are all at least 1 and
/// whose area lies in `[min_area, max_area]`.
pub fn random_staircase<R: Rng>(rng: &mut R, min_area: f64, max_area: f64) -> StepProfile {
    loop {
        let k = rng.gen_range(1..=5);
        let mut bp = Vec::with_capacity(k);
        let mut x = 1.0 + rng.gen_range(0.0..3.0);
        for _ in 0..k {
            bp.push(x);
            x += rng.gen_range(0.1..3.0);
        }
        let mut hs = vec![0.0; k];
        let mut h = 1.0 + rng.gen_range(0.0..2.0);
        for slot in hs.iter_mut().rev() {
            *slot = h;
            h += rng.gen_range(0.1..3.0);
        }
        let g = StepProfile::new(bp, hs).expect("constructed valid");
        let a = area(&g);
        if a >= min_area && a <= max_area {
            return g;
        }
    }
}

/// One slab of a [`LayeredSet`]: the region `profile × [z, z + thickness]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub thickness: f64,
    #[serde(flatten)]
    pub profile: StepProfile,
}

/// A monotone region of `R³₊` as a stack of nested plane sections, bottom first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LayeredFile")]
pub struct LayeredSet {
    layers: Vec<Layer>,
}

#[derive(Deserialize)]
struct LayeredFile {
    layers: Vec<Layer>,
}

impl TryFrom<LayeredFile> for LayeredSet {
    type Error = crate::Error;

    fn try_from(f: LayeredFile) -> Result<Self> {
        LayeredSet::new(f.layers)
    }
}

/// `inner(x) <= outer(x)` everywhere. Both are step functions, so it is
/// enough to compare at every breakpoint of either.
fn nested_in(inner: &StepProfile, outer: &StepProfile) -> bool {
    inner
        .breakpoints()
        .iter()
        .chain(outer.breakpoints())
        .all(|&x| inner.value_at(x) <= outer.value_at(x))
}

impl LayeredSet {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        if let Some(l) = layers.iter().find(|l| !(l.thickness > 0.0) || !l.thickness.is_finite()) {
            return invalid(format!("layer thickness must be positive, got {}", l.thickness));
        }
        if let Some(j) = layers.windows(2).position(|w| !nested_in(&w[1].profile, &w[0].profile)) {
            return invalid(format!("layer {} is not contained in layer {}", j + 1, j));
        }
        Ok(LayeredSet { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn volume(&self) -> f64 {
        self.layers.iter().map(|l| l.thickness * area(&l.profile)).sum()
    }

    /// Volume of the image under `f` applied to all three coordinates:
    /// `Σ_j (f(z_j) − f(z_{j−1})) · f_area(layer_j)`.
    pub fn f_volume(&self, f: &dyn Curve) -> f64 {
        let mut z = 0.0;
        let mut fz = f.eval(0.0);
        let mut total = 0.0;
        for l in &self.layers {
            z += l.thickness;
            let next = f.eval(z);
            total += (next - fz) * f_area(&l.profile, f);
            fz = next;
        }
        total
    }

    pub fn is_nested(&self) -> bool {
        self.layers.windows(2).all(|w| nested_in(&w[1].profile, &w[0].profile))
    }
}

/// Replaces every section by the square of the same area.
pub fn squarify_layers(m: &LayeredSet) -> Result<LayeredSet> {
    let layers = m
        .layers
        .iter()
        .map(|l| Ok(Layer { thickness: l.thickness, profile: StepProfile::square(area(&l.profile).sqrt())? }))
        .collect::<Result<Vec<_>>>()?;
    LayeredSet::new(layers)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SquarifyReport {
    pub curve: String,
    pub volume_in: f64,
    pub volume_out: f64,
    pub f_volume_in: f64,
    pub f_volume_out: f64,
    pub nested: bool,
    pub passed: bool,
}

/// Squarifies and checks that volume is kept (relative `1e−12`), nesting is
/// kept, and the `f`-volume does not grow.
pub fn squarify_check(m: &LayeredSet, f: &dyn Curve) -> Result<(LayeredSet, SquarifyReport)> {
    let out = squarify_layers(m)?;
    let (volume_in, volume_out) = (m.volume(), out.volume());
    let (f_volume_in, f_volume_out) = (m.f_volume(f), out.f_volume(f));
    let nested = out.is_nested();
    let passed = (volume_in - volume_out).abs() <= 1e-12 * volume_in.max(1.0)
        && nested
        && f_volume_out <= f_volume_in + CLAIM_TOLERANCE;
    let report = SquarifyReport { curve: f.name(), volume_in, volume_out, f_volume_in, f_volume_out, nested, passed };
    Ok((out, report))
}
