//! Exit criteria. Each test prints one `criterion N: PASS|FAIL ...` line.

use std::time::{Duration, Instant};

use kkmulti::binom::binomial;
use kkmulti::flow::{
    area, check_claim_d2, deform, flow_trace, linear_grid, random_staircase, squarify_check, Layer, LayeredSet,
    StepProfile, CLAIM_TOLERANCE,
};
use kkmulti::lattice::MonotoneLattice;
use kkmulti::llr::{check_curve_properties, ll, GridSpec, LLCurve};
use kkmulti::verify::{check_compression, check_lemma2, check_theorem, check_theorem_size, DEFAULT_SEED};
use kkmulti::{colex_rank, colex_unrank, kk, kk_oracle, ColexRank, RSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(n: u32, ok: bool, started: Instant, budget: Duration, detail: &str) {
    let elapsed = started.elapsed();
    let within = elapsed <= budget;
    println!(
        "criterion {n}: {} ({:.2?} of {:?}) {detail}",
        if ok && within { "PASS" } else { "FAIL" },
        elapsed,
        budget
    );
    assert!(ok, "criterion {n} failed: {detail}");
    assert!(within, "criterion {n} exceeded its time budget");
}

fn subsets(n: u32, r: usize) -> Vec<RSet> {
    fn rec(start: u32, n: u32, r: usize, cur: &mut Vec<u32>, out: &mut Vec<RSet>) {
        if cur.len() == r {
            out.push(RSet::new(cur.clone()).unwrap());
            return;
        }
        for e in start..=n {
            cur.push(e);
            rec(e + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, r, &mut Vec::new(), &mut out);
    out
}

#[test]
fn criterion_01_colex_roundtrip() {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = 0;
    for r in 1..=6 {
        for s in subsets(12, r) {
            let rank = colex_rank(&s).unwrap();
            if colex_unrank(rank, r).unwrap() != s {
                bad += 1;
            }
            checked += 1;
        }
        for i in 1..=binomial(12, r as u64).unwrap() {
            let rank = ColexRank::new(i).unwrap();
            if colex_rank(&colex_unrank(rank, r).unwrap()).unwrap() != rank {
                bad += 1;
            }
        }
    }
    report(1, bad == 0, start, Duration::from_secs(5), &format!("{checked} subsets, {bad} mismatches"));
}

#[test]
fn criterion_02_kk_oracle_equivalence() {
    let start = Instant::now();
    let mut bad = 0;
    let mut checked = 0;
    for r in 1..=5usize {
        for m in 0..=binomial(12, r as u64).unwrap() {
            if kk(m, r).unwrap() != kk_oracle(m, r).unwrap() {
                bad += 1;
            }
            checked += 1;
        }
    }
    report(2, bad == 0, start, Duration::from_secs(30), &format!("{checked} (m, r) pairs, {bad} mismatches"));
}

#[test]
fn criterion_03_lovasz_bound() {
    let start = Instant::now();
    let mut worst = f64::INFINITY;
    let mut bad = 0;
    for r in 2..=5u32 {
        let curve = LLCurve::new(r).unwrap();
        for m in 1..=binomial(14, u64::from(r)).unwrap() {
            let margin = kk(m, r as usize).unwrap() as f64 - ll(m as f64, &curve).unwrap();
            worst = worst.min(margin);
            if margin < -1e-9 {
                bad += 1;
            }
        }
    }
    report(3, bad == 0, start, Duration::from_secs(10), &format!("min margin {worst:.3e}, {bad} violations"));
}

#[test]
fn criterion_04_surrogate_properties() {
    let start = Instant::now();
    let grid = GridSpec { v_max: 1e4, points: 4000, rel_step: 1e-5, tolerance: 1e-6, joint: Some(1.0) };
    let mut lines = Vec::new();
    let mut ok = true;
    for r in 2..=5 {
        let rep = check_curve_properties(&LLCurve::new(r).unwrap(), &grid).unwrap();
        let joint = rep.c1_joint.as_ref().unwrap();
        ok &= rep.passed && joint.mismatch < 1e-6;
        lines.push(format!(
            "r={r}: increasing={} concave={} v·f'/f decreasing={} (first violation at v={:?}) joint mismatch={:.1e}",
            rep.increasing.passed,
            rep.concave.passed,
            rep.log_derivative_decreasing.passed,
            rep.log_derivative_decreasing.first_violation,
            joint.mismatch
        ));
    }
    report(4, ok, start, Duration::from_secs(10), &lines.join("; "));
}

#[test]
fn criterion_05_compression() {
    let start = Instant::now();
    let mut configs = 0;
    let mut violations = 0;
    for d in 1..=3 {
        for r in 1..=3usize {
            for n in r as u32..=6 {
                let seed = DEFAULT_SEED ^ ((d as u64) << 16 | (r as u64) << 8 | u64::from(n));
                let rep = check_compression(500, d, r, n, seed).unwrap();
                violations += rep.violations.len();
                configs += 1;
            }
        }
    }
    report(
        5,
        violations == 0,
        start,
        Duration::from_secs(120),
        &format!("{configs} configurations x 500 families, {violations} violations"),
    );
}

#[test]
fn criterion_06_lemma2_identity() {
    let start = Instant::now();
    let mut configs = 0;
    let mut mismatches = 0;
    for d in 1..=3 {
        for r in 2..=3usize {
            for n in r as u32..=6 {
                let seed = DEFAULT_SEED ^ ((d as u64) << 16 | (r as u64) << 8 | u64::from(n));
                let rep = check_lemma2(200, d, r, n, seed).unwrap();
                mismatches += rep.mismatches.len();
                configs += 1;
            }
        }
    }
    report(
        6,
        mismatches == 0,
        start,
        Duration::from_secs(120),
        &format!("{configs} configurations x 200 families, {mismatches} mismatches"),
    );
}

#[test]
fn criterion_07_main_theorem() {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for &(d, r, s_max) in &[(2usize, 2u32, 35u64), (2, 3, 35), (3, 2, 20)] {
        let run = check_theorem(d, r, s_max).unwrap();
        let lattices: usize = run.reports.iter().map(|x| x.lattices).sum();
        let violations: usize = run.reports.iter().map(|x| x.violations.len()).sum();
        let bad_eq: usize = run.reports.iter().map(|x| x.bad_equality_cases.len()).sum();
        let eq_sizes: Vec<u64> = run.reports.iter().filter(|x| !x.equality_cases.is_empty()).map(|x| x.s).collect();
        // The equality sizes are exactly C(y, r)^d, each attained by its cube alone.
        let expected: Vec<u64> = (u64::from(r)..)
            .map(|y| binomial(y, u64::from(r)).unwrap().pow(d as u32))
            .take_while(|&s| s <= s_max)
            .collect();
        let cubes_only = run.reports.iter().filter(|x| !x.equality_cases.is_empty()).all(|x| {
            x.equality_cases.len() == 1 && x.equality_cases[0].cube_side().is_some()
        });
        ok &= run.passed && run.truncated_at.is_none() && violations == 0 && bad_eq == 0;
        ok &= eq_sizes == expected && cubes_only;
        parts.push(format!(
            "d={d} r={r} s<={s_max}: {lattices} lattices, {violations} violations, equality at s={eq_sizes:?}"
        ));
    }
    report(7, ok, start, Duration::from_secs(600), &parts.join("; "));
}

#[test]
fn criterion_08_equality_cases() {
    let start = Instant::now();
    let nine = check_theorem_size(2, 2, 9).unwrap();
    let one = check_theorem_size(2, 2, 1).unwrap();
    let box3 = kkmulti::lattice::shadow_lattice(&MonotoneLattice::cube(2, 3), 2).unwrap().size().unwrap();
    let box1 = kkmulti::lattice::shadow_lattice(&MonotoneLattice::cube(2, 1), 2).unwrap().size().unwrap();
    let ok = box3 == 9
        && (nine.bound - 9.0).abs() < 1e-9
        && nine.equality_cases == vec![MonotoneLattice::cube(2, 3)]
        && box1 == 4
        && (one.bound - 4.0).abs() < 1e-9
        && one.equality_cases == vec![MonotoneLattice::cube(2, 1)];
    report(
        8,
        ok,
        start,
        Duration::from_secs(1),
        &format!("3x3 box shadow {box3} vs bound {:.12}; unit box shadow {box1} vs bound {:.12}", nine.bound, one.bound),
    );
}

#[test]
fn criterion_09_flow_claim() {
    let start = Instant::now();
    let mut ok = true;
    let mut worst_area = 0.0f64;
    let mut worst_drop = 0.0f64;
    let mut worst_margin = f64::INFINITY;
    let mut contained = true;
    let mut in_regime = 0usize;
    for r in [2u32, 3] {
        let curve = LLCurve::new(r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED + u64::from(r));
        for _ in 0..20 {
            let g = random_staircase(&mut rng, 1.0, 25.0);
            let a = area(&g);
            let side = a.sqrt();
            let mut grid = linear_grid(0.25 * side, 1.5 * g.width(), 400);
            grid.push(side);
            grid.sort_by(f64::total_cmp);
            grid.dedup();
            for &t in &grid {
                worst_area = worst_area.max((area(&deform(&g, t).unwrap()) - a).abs() / a);
            }
            let trace = flow_trace(&g, &curve, &grid).unwrap();
            worst_drop = worst_drop.max(trace.worst_regime_drop());
            in_regime += trace.points.iter().filter(|p| p.in_regime).count();
            let claim = check_claim_d2(&g, &curve, CLAIM_TOLERANCE).unwrap();
            worst_margin = worst_margin.min(claim.margin);
            contained &= claim.contained;
            ok &= claim.passed;
        }
    }
    // the monotonicity claim means nothing unless the trace actually enters the regime
    ok &= worst_area <= 1e-12 && worst_drop <= 1e-9 && worst_margin >= -1e-9 && contained && in_regime > 0;
    report(
        9,
        ok,
        start,
        Duration::from_secs(30),
        &format!(
            "40 profiles: area error {worst_area:.1e}, worst trace drop {worst_drop:.1e} over {in_regime} regime points, \
             min f_area - square {worst_margin:.3e}, contained {contained}"
        ),
    );
}

fn layer(thickness: f64, bp: &[f64], hs: &[f64]) -> Layer {
    Layer { thickness, profile: StepProfile::new(bp.to_vec(), hs.to_vec()).unwrap() }
}

#[test]
fn criterion_10_squarification() {
    let start = Instant::now();
    let two = LayeredSet::new(vec![layer(1.0, &[4.0], &[1.0]), layer(1.0, &[1.0], &[1.0])]).unwrap();
    let five = LayeredSet::new(vec![
        layer(0.5, &[2.0, 4.0, 6.0], &[5.0, 3.0, 1.5]),
        layer(1.0, &[2.0, 4.0, 5.0], &[4.0, 2.0, 1.0]),
        layer(0.7, &[1.5, 3.0], &[3.0, 1.2]),
        layer(1.2, &[1.0, 2.5], &[2.5, 1.0]),
        layer(2.0, &[1.0], &[1.0]),
    ])
    .unwrap();
    let curve = LLCurve::new(2).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, m) in [("two-layer", &two), ("five-layer", &five)] {
        let (out, rep) = squarify_check(m, &curve).unwrap();
        let vol_err = (rep.volume_out - rep.volume_in).abs() / rep.volume_in;
        ok &= rep.passed && vol_err <= 1e-12 && out.is_nested() && rep.f_volume_out <= rep.f_volume_in;
        parts.push(format!(
            "{name}: volume error {vol_err:.1e}, f-volume {:.6} -> {:.6}",
            rep.f_volume_in, rep.f_volume_out
        ));
    }
    report(10, ok, start, Duration::from_secs(5), &parts.join("; "));
}
