//! Desk-scale verification runs. Every report is a plain serializable value
//! that depends only on its parameters and seed.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::binom::binomial;
use crate::colex::{colex_unrank, ColexRank};
use crate::compress::{is_monotone, monotonize};
use crate::error::{invalid, Result};
use crate::lattice::{enumerate_monotone, family_to_lattice, lattice_to_family, shadow_lattice, MonotoneLattice};
use crate::llr::{binom_invert, binom_real, ll, LLCurve};
use crate::shadow::{kk, shadow_multi, Tuple, TupleFamily};

/// Slack allowed below the real-valued bound in the Lovász check.
pub const LOVASZ_TOLERANCE: f64 = 1e-9;
/// Guard band for floating-point error in the multidimensional bound.
pub const THEOREM_GUARD: f64 = 1e-6;
/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x006b_6b6d_756c_7469;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LovaszRow {
    pub m: u64,
    pub kk: u64,
    pub ll: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LovaszReport {
    pub n: u64,
    pub r: u32,
    pub rows: Vec<LovaszRow>,
    pub min_margin: f64,
    pub violations: usize,
    pub passed: bool,
}

/// `kk(m, r) >= LL_r(m)` for every `m` in `1..=C(n, r)`.
pub fn check_lovasz_1d(n: u64, r: u32) -> Result<LovaszReport> {
    check_lovasz_1d_with(n, r, LOVASZ_TOLERANCE)
}

/// [`check_lovasz_1d`] with a chosen slack on each comparison.
pub fn check_lovasz_1d_with(n: u64, r: u32, tolerance: f64) -> Result<LovaszReport> {
    if r < 2 || u64::from(r) > n {
        return invalid(format!("need 2 <= r <= n, got r = {r}, n = {n}"));
    }
    let curve = LLCurve::new(r)?;
    let total = binomial(n, u64::from(r))?;
    let rows = (1..=total)
        .map(|m| {
            let k = kk(m, r as usize)?;
            let l = ll(m as f64, &curve)?;
            Ok(LovaszRow { m, kk: k, ll: l, margin: k as f64 - l })
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = rows.iter().filter(|row| row.margin < -tolerance).count();
    let min_margin = rows.iter().map(|row| row.margin).fold(f64::INFINITY, f64::min);
    Ok(LovaszReport { n, r, rows, min_margin, violations, passed: violations == 0 })
}

fn check_small_config(d: usize, r: usize, n: u32) -> Result<()> {
    if !(1..=3).contains(&d) || !(1..=3).contains(&r) || n > 6 || (n as usize) < r {
        return invalid(format!("sampling checks need d <= 3, r <= 3, r <= n <= 6; got d={d} r={r} n={n}"));
    }
    Ok(())
}

/// A random monotone lattice inside `[1, side]^d`: the closure of a few random points.
pub fn random_lattice<R: Rng>(rng: &mut R, d: usize, side: u64) -> MonotoneLattice {
    let k = rng.gen_range(1..=4);
    let pts = (0..k).map(|_| (0..d).map(|_| rng.gen_range(1..=side)).collect()).collect::<Vec<Vec<u64>>>();
    MonotoneLattice::closure_of(d, pts).expect("coordinates are >= 1")
}

/// A random family of `d`-tuples of `r`-subsets of `[n]`, of random size.
pub fn random_family<R: Rng>(rng: &mut R, d: usize, r: usize, n: u32) -> Result<TupleFamily> {
    let per_coord = binomial(u64::from(n), r as u64)?;
    let universe = per_coord.pow(d as u32);
    let size = rng.gen_range(1..=universe.min(120));
    let mut fam = TupleFamily::empty(d, r)?;
    for idx in sample(rng, universe as usize, size as usize) {
        let mut idx = idx as u64;
        let mut t: Tuple = Vec::with_capacity(d);
        for _ in 0..d {
            t.push(colex_unrank(ColexRank::new(idx % per_coord + 1)?, r)?);
            idx /= per_coord;
        }
        fam.insert(t)?;
    }
    Ok(fam)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Mismatch {
    pub lattice: MonotoneLattice,
    pub direct: MonotoneLattice,
    pub via_kk: MonotoneLattice,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Report {
    pub d: usize,
    pub r: usize,
    pub n: u32,
    pub seed: u64,
    pub samples: usize,
    pub shadow_not_monotone: usize,
    pub mismatches: Vec<Lemma2Mismatch>,
    pub passed: bool,
}

/// Compares the rank image of the shadow with `KK_r` applied to extreme points.
pub fn lemma2_case(lattice: &MonotoneLattice, r: usize) -> Result<(bool, MonotoneLattice, MonotoneLattice)> {
    let family = lattice_to_family(lattice, r)?;
    let sh = shadow_multi(&family)?;
    let monotone = is_monotone(&sh)?;
    let direct = if monotone { family_to_lattice(&sh)? } else { MonotoneLattice::empty(lattice.d()) };
    let via_kk = shadow_lattice(lattice, r)?;
    Ok((monotone, direct, via_kk))
}

/// Checks the extreme-point shadow identity on seeded random monotone families.
pub fn check_lemma2(samples: usize, d: usize, r: usize, n: u32, seed: u64) -> Result<Lemma2Report> {
    check_small_config(d, r, n)?;
    if r < 2 {
        return invalid("the rank image of a shadow needs r >= 2");
    }
    let side = binomial(u64::from(n), r as u64)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lattices: Vec<MonotoneLattice> = (0..samples).map(|_| random_lattice(&mut rng, d, side)).collect();
    let outcomes = lattices
        .par_iter()
        .map(|l| lemma2_case(l, r).map(|o| (l, o)))
        .collect::<Result<Vec<_>>>()?;
    let mut shadow_not_monotone = 0;
    let mut mismatches = Vec::new();
    for (l, (monotone, direct, via_kk)) in outcomes {
        if !monotone {
            shadow_not_monotone += 1;
        }
        if !monotone || direct != via_kk {
            mismatches.push(Lemma2Mismatch { lattice: l.clone(), direct, via_kk });
        }
    }
    let passed = mismatches.is_empty();
    Ok(Lemma2Report { d, r, n, seed, samples, shadow_not_monotone, mismatches, passed })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompressionViolation {
    pub sample: usize,
    pub size_in: usize,
    pub size_out: usize,
    pub monotone: bool,
    pub shadow_in: usize,
    pub shadow_out: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompressionReport {
    pub d: usize,
    pub r: usize,
    pub n: u32,
    pub seed: u64,
    pub samples: usize,
    pub total_shadow_in: u64,
    pub total_shadow_out: u64,
    pub violations: Vec<CompressionViolation>,
    pub passed: bool,
}

/// Monotonizes seeded random families and checks size, monotonicity and shadow size.
pub fn check_compression(samples: usize, d: usize, r: usize, n: u32, seed: u64) -> Result<CompressionReport> {
    check_small_config(d, r, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let families = (0..samples).map(|_| random_family(&mut rng, d, r, n)).collect::<Result<Vec<_>>>()?;
    let rows = families
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            let m = monotonize(f)?;
            Ok(CompressionViolation {
                sample: i,
                size_in: f.len(),
                size_out: m.len(),
                monotone: is_monotone(&m)?,
                shadow_in: shadow_multi(f)?.len(),
                shadow_out: shadow_multi(&m)?.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let total_shadow_in = rows.iter().map(|r| r.shadow_in as u64).sum();
    let total_shadow_out = rows.iter().map(|r| r.shadow_out as u64).sum();
    let violations: Vec<_> = rows
        .into_iter()
        .filter(|v| v.size_in != v.size_out || !v.monotone || v.shadow_out > v.shadow_in)
        .collect();
    let passed = violations.is_empty();
    Ok(CompressionReport { d, r, n, seed, samples, total_shadow_in, total_shadow_out, violations, passed })
}

/// Largest size enumerated per dimension by [`check_theorem`].
pub fn theorem_budget(d: usize) -> u64 {
    match d {
        1 => 100_000,
        2 => 35,
        _ => 20,
    }
}

/// `C(x, r − 1)^d` where `C(x, r) = s^{1/d}`, `x >= r`.
pub fn theorem_bound(s: u64, d: usize, r: u32) -> Result<(f64, f64)> {
    let per_coord = (s as f64).powf(1.0 / d as f64);
    // s^{1/d} can land a hair under 1 only when s = 1.
    let x = binom_invert(per_coord.max(1.0), r)?;
    Ok((x, binom_real(x, r - 1).powi(d as i32)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub d: usize,
    pub r: u32,
    pub s: u64,
    pub x: f64,
    pub bound: f64,
    pub lattices: usize,
    pub min_shadow: Option<u64>,
    /// Lattices whose shadow is below the bound.
    pub violations: Vec<MonotoneLattice>,
    pub equality_cases: Vec<MonotoneLattice>,
    /// Equality cases that are not an equal-sided box with side `C(y, r)`.
    pub bad_equality_cases: Vec<MonotoneLattice>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.bad_equality_cases.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremRun {
    pub d: usize,
    pub r: u32,
    pub s_max: u64,
    /// Set when `s_max` exceeded the enumeration budget; `reports` stops at the budget.
    pub truncated_at: Option<u64>,
    pub reports: Vec<TheoremReport>,
    pub passed: bool,
}

impl TheoremRun {
    /// `s,x,bound,min_shadow,n_equality,n_violations`
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("s,x,bound,min_shadow,n_equality,n_violations\n");
        for rep in &self.reports {
            let min = rep.min_shadow.map(|m| m.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{}",
                rep.s,
                rep.x,
                rep.bound,
                min,
                rep.equality_cases.len(),
                rep.violations.len() + rep.bad_equality_cases.len()
            )
            .unwrap();
        }
        out
    }
}

/// Side `m` is `C(y, r)` for some integer `y >= r`.
fn is_binomial_side(m: u64, r: u32) -> bool {
    let mut y = u64::from(r);
    loop {
        match binomial(y, u64::from(r)) {
            Ok(v) if v == m => return true,
            Ok(v) if v < m => y += 1,
            _ => return false,
        }
    }
}

/// Checks one size `s` against every monotone lattice of that size.
pub fn check_theorem_size(d: usize, r: u32, s: u64) -> Result<TheoremReport> {
    check_theorem_size_with(d, r, s, THEOREM_GUARD)
}

/// [`check_theorem_size`] with a chosen floating-point guard.
pub fn check_theorem_size_with(d: usize, r: u32, s: u64, guard: f64) -> Result<TheoremReport> {
    let start = Instant::now();
    let (x, bound) = theorem_bound(s, d, r)?;
    let lattices = enumerate_monotone(d, s)?;
    let shadows = lattices
        .par_iter()
        .map(|l| shadow_lattice(l, r as usize)?.size())
        .collect::<Result<Vec<u64>>>()?;
    let bound_is_integer = (bound - bound.round()).abs() <= guard;
    let mut violations = Vec::new();
    let mut equality_cases = Vec::new();
    let mut bad_equality_cases = Vec::new();
    for (l, &sh) in lattices.iter().zip(&shadows) {
        let sh_f = sh as f64;
        if sh_f < bound - guard {
            violations.push(l.clone());
        } else if bound_is_integer && sh_f < bound + 0.5 {
            equality_cases.push(l.clone());
            if !l.cube_side().is_some_and(|m| is_binomial_side(m, r)) {
                bad_equality_cases.push(l.clone());
            }
        }
    }
    Ok(TheoremReport {
        d,
        r,
        s,
        x,
        bound,
        lattices: lattices.len(),
        min_shadow: shadows.iter().copied().min(),
        violations,
        equality_cases,
        bad_equality_cases,
        elapsed: start.elapsed(),
    })
}

/// Exhaustive check of `|∂F| >= C(x, r − 1)^d` over all monotone lattices of
/// size `1..=s_max`, with the equality characterization.
pub fn check_theorem(d: usize, r: u32, s_max: u64) -> Result<TheoremRun> {
    check_theorem_with(d, r, s_max, THEOREM_GUARD)
}

/// [`check_theorem`] with a chosen floating-point guard.
pub fn check_theorem_with(d: usize, r: u32, s_max: u64, guard: f64) -> Result<TheoremRun> {
    if !(1..=3).contains(&d) {
        return invalid(format!("exhaustive theorem checks support d in 1..=3, got {d}"));
    }
    if r < 2 {
        return invalid("the theorem needs r >= 2");
    }
    let budget = theorem_budget(d);
    let top = s_max.min(budget);
    let reports = (1..=top).map(|s| check_theorem_size_with(d, r, s, guard)).collect::<Result<Vec<_>>>()?;
    let passed = reports.iter().all(TheoremReport::passed);
    Ok(TheoremRun { d, r, s_max, truncated_at: (s_max > budget).then_some(budget), reports, passed })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductRow {
    pub sides: Vec<u64>,
    pub size: u64,
    pub shadow: u64,
    /// Shadow size from expanding the family, when small enough to build.
    pub shadow_direct: Option<u64>,
    pub bound: f64,
    pub ratio: f64,
    pub equal_sides: bool,
    /// Only asserted for equal sides: `|F| = C(y, r)^d` and `|∂F| = C(y, r − 1)^d`.
    pub exact: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityReport {
    pub d: usize,
    pub r: u32,
    pub y_max: u64,
    pub rows: Vec<ProductRow>,
    pub passed: bool,
}

/// Families that are built when computing `shadow_direct`.
const DIRECT_PRODUCT_LIMIT: u64 = 20_000;

fn nondecreasing_tuples(d: usize, lo: u64, hi: u64) -> Vec<Vec<u64>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in lo..=hi {
        for mut rest in nondecreasing_tuples(d - 1, first, hi) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Shadows of products `C([y_1], r) × … × C([y_d], r)`.
pub fn check_equality_products(d: usize, r: u32, y_max: u64) -> Result<EqualityReport> {
    check_equality_products_with(d, r, y_max, THEOREM_GUARD)
}

/// [`check_equality_products`] with a chosen relative guard on the equality test.
pub fn check_equality_products_with(d: usize, r: u32, y_max: u64, guard: f64) -> Result<EqualityReport> {
    if d == 0 || r < 2 || y_max < u64::from(r) || y_max > 10 {
        return invalid(format!("need d >= 1, r >= 2 and r <= y_max <= 10; got d={d} r={r} y_max={y_max}"));
    }
    let ru = u64::from(r);
    let mut rows = Vec::new();
    for ys in nondecreasing_tuples(d, ru, y_max) {
        let sides: Vec<u64> = ys.iter().map(|&y| binomial(y, ru)).collect::<Result<_>>()?;
        let lattice = MonotoneLattice::from_antichain(d, vec![sides.clone()])?;
        let size = lattice.size()?;
        let shadow = shadow_lattice(&lattice, r as usize)?.size()?;
        let shadow_direct = if size <= DIRECT_PRODUCT_LIMIT {
            Some(shadow_multi(&lattice_to_family(&lattice, r as usize)?)?.len() as u64)
        } else {
            None
        };
        let (_, bound) = theorem_bound(size, d, r)?;
        let equal_sides = ys.iter().all(|&y| y == ys[0]);
        let exact = equal_sides.then(|| {
            let y = ys[0];
            let want_size = binomial(y, ru).ok().and_then(|b| b.checked_pow(d as u32));
            let want_shadow = binomial(y, ru - 1).ok().and_then(|b| b.checked_pow(d as u32));
            want_size == Some(size)
                && want_shadow == Some(shadow)
                && shadow_direct.is_none_or(|s| s == shadow)
                && (shadow as f64 - bound).abs() <= guard * bound.max(1.0)
        });
        rows.push(ProductRow { sides: ys, size, shadow, shadow_direct, bound, ratio: shadow as f64 / bound, equal_sides, exact });
    }
    let passed = rows.iter().all(|row| row.exact != Some(false));
    Ok(EqualityReport { d, r, y_max, rows, passed })
}
