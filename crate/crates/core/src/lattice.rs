//! Finite monotone (downward closed) subsets of `N^d`, stored by their
//! extreme points, and the correspondence with monotone tuple families.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::colex::{colex_rank, colex_unrank, ColexRank};
use crate::compress::is_monotone;
use crate::error::{invalid, Error, Result};
use crate::shadow::{kk_vec, Tuple, TupleFamily};

/// A point of `N^d` with every coordinate `>= 1`.
pub type LatticePoint = Vec<u64>;

/// `a <= b` in the product order.
pub fn dominated(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// A monotone set `mclos(extreme)`; `extreme` is an antichain kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LatticeFile")]
pub struct MonotoneLattice {
    d: usize,
    extreme: Vec<LatticePoint>,
}

#[derive(Deserialize)]
struct LatticeFile {
    d: usize,
    extreme: Vec<LatticePoint>,
}

impl TryFrom<LatticeFile> for MonotoneLattice {
    type Error = Error;

    fn try_from(f: LatticeFile) -> Result<Self> {
        MonotoneLattice::from_antichain(f.d, f.extreme)
    }
}

impl MonotoneLattice {
    pub fn empty(d: usize) -> Self {
        MonotoneLattice { d, extreme: Vec::new() }
    }

    /// The monotone closure of arbitrary generating points.
    pub fn closure_of(d: usize, points: impl IntoIterator<Item = LatticePoint>) -> Result<Self> {
        let points: Vec<LatticePoint> = points.into_iter().collect();
        check_points(d, &points)?;
        Ok(MonotoneLattice { d, extreme: extr(&points) })
    }

    /// Accepts only a genuine antichain.
    pub fn from_antichain(d: usize, extreme: Vec<LatticePoint>) -> Result<Self> {
        check_points(d, &extreme)?;
        let reduced = extr(&extreme);
        if reduced.len() != extreme.len() {
            return invalid("extreme points must be pairwise incomparable");
        }
        Ok(MonotoneLattice { d, extreme: reduced })
    }

    /// The box `[1, side]^d`.
    pub fn cube(d: usize, side: u64) -> Self {
        if side == 0 {
            return Self::empty(d);
        }
        MonotoneLattice { d, extreme: vec![vec![side; d]] }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn extreme(&self) -> &[LatticePoint] {
        &self.extreme
    }

    pub fn size(&self) -> Result<u64> {
        mclos_size(&self.extreme)
    }

    pub fn contains(&self, p: &[u64]) -> bool {
        self.extreme.iter().any(|e| dominated(p, e))
    }

    /// `Some(side)` when the lattice is a box with all sides equal.
    pub fn cube_side(&self) -> Option<u64> {
        match self.extreme.as_slice() {
            [e] if e.iter().all(|&x| x == e[0]) => Some(e[0]),
            _ => None,
        }
    }

    /// All points, in lexicographic order.
    pub fn points(&self) -> Vec<LatticePoint> {
        mclos_points(self.d, &self.extreme)
    }
}

fn check_points(d: usize, points: &[LatticePoint]) -> Result<()> {
    if d == 0 {
        return invalid("dimension must be >= 1");
    }
    for p in points {
        if p.len() != d {
            return invalid(format!("point {p:?} does not have {d} coordinates"));
        }
        if p.contains(&0) {
            return invalid(format!("lattice coordinates start at 1, got {p:?}"));
        }
    }
    Ok(())
}

/// The maximal elements of `points` under the product order, sorted and deduplicated.
pub fn extr(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let uniq: BTreeSet<&LatticePoint> = points.iter().collect();
    let uniq: Vec<&LatticePoint> = uniq.into_iter().collect();
    uniq.iter()
        .filter(|p| !uniq.iter().any(|q| q != *p && dominated(p, q)))
        .map(|p| (*p).clone())
        .collect()
}

fn box_volume(p: &[u64]) -> Result<u64> {
    p.iter()
        .try_fold(1u64, |acc, &x| acc.checked_mul(x))
        .ok_or_else(|| Error::Overflow(format!("volume of box {p:?}")))
}

/// `|mclos(antichain)|` by inclusion–exclusion over the boxes `[1, e]`.
///
/// Uses `|B ∪ R| = |B| + |R| − |∪_{e ∈ R} (B ∩ [1, e])|`, where the meet of two
/// boxes is the box at the coordinatewise minimum; dominated meets are
/// dropped before recursing.
pub fn mclos_size(antichain: &[LatticePoint]) -> Result<u64> {
    let Some((first, rest)) = antichain.split_first() else {
        return Ok(0);
    };
    let meets: Vec<LatticePoint> = rest
        .iter()
        .map(|e| e.iter().zip(first).map(|(a, b)| *a.min(b)).collect())
        .collect();
    let rest = extr(rest);
    let meets = extr(&meets);
    let total = box_volume(first)?
        .checked_add(mclos_size(&rest)?)
        .ok_or_else(|| Error::Overflow("lattice size".into()))?;
    Ok(total - mclos_size(&meets)?)
}

/// Every point of `mclos(antichain)`, by scanning the bounding box.
pub fn mclos_points(d: usize, antichain: &[LatticePoint]) -> Vec<LatticePoint> {
    if antichain.is_empty() {
        return Vec::new();
    }
    let bound: Vec<u64> = (0..d).map(|i| antichain.iter().map(|e| e[i]).max().unwrap()).collect();
    let mut out = Vec::new();
    let mut p = vec![1u64; d];
    'scan: loop {
        if antichain.iter().any(|e| dominated(&p, e)) {
            out.push(p.clone());
        }
        for i in (0..d).rev() {
            p[i] += 1;
            if p[i] <= bound[i] {
                continue 'scan;
            }
            p[i] = 1;
        }
        break;
    }
    out
}

/// The image of a monotone family under the coordinatewise colex rank.
pub fn family_to_lattice(family: &TupleFamily) -> Result<MonotoneLattice> {
    if !is_monotone(family)? {
        return invalid("family is not monotone");
    }
    let points = family
        .iter()
        .map(|t| t.iter().map(|s| colex_rank(s).map(ColexRank::get)).collect::<Result<LatticePoint>>())
        .collect::<Result<Vec<_>>>()?;
    MonotoneLattice::closure_of(family.d(), points)
}

/// The monotone family of `r`-set tuples whose rank image is `lattice`.
pub fn lattice_to_family(lattice: &MonotoneLattice, r: usize) -> Result<TupleFamily> {
    if r == 0 {
        return invalid("r must be >= 1");
    }
    let mut fam = TupleFamily::empty(lattice.d, r)?;
    for p in lattice.points() {
        let t = p
            .iter()
            .map(|&x| colex_unrank(ColexRank::new(x)?, r))
            .collect::<Result<Tuple>>()?;
        fam.insert(t)?;
    }
    Ok(fam)
}

/// The rank image of the shadow: apply KK_r to every extreme point and
/// reduce back to an antichain.
pub fn shadow_lattice(lattice: &MonotoneLattice, r: usize) -> Result<MonotoneLattice> {
    let images = lattice.extreme.iter().map(|e| kk_vec(e, r)).collect::<Result<Vec<_>>>()?;
    Ok(MonotoneLattice { d: lattice.d, extreme: extr(&images) })
}

/// All monotone subsets of `N^d` of size exactly `s`, each once.
///
/// `d = 2` walks partitions of `s` with the largest parts first
/// (`[3], [2,1], [1,1,1]`); `d = 3` stacks nested partitions layer by layer.
pub fn enumerate_monotone(d: usize, s: u64) -> Result<Vec<MonotoneLattice>> {
    match d {
        1 => Ok(vec![MonotoneLattice::cube(1, s)]),
        2 => Ok(partitions(s, s)
            .into_iter()
            .map(|p| MonotoneLattice { d: 2, extreme: extr(&corners_2d(&p, None)) })
            .collect()),
        3 => {
            let mut out = Vec::new();
            let mut layers = Vec::new();
            plane_partitions(s, None, &mut layers, &mut out);
            Ok(out)
        }
        0 => invalid("dimension must be >= 1"),
        _ => Err(Error::Unsupported(format!("exhaustive enumeration in dimension {d}"))),
    }
}

/// Partitions of `n` with parts at most `max_part`, reverse lexicographic.
fn partitions(n: u64, max_part: u64) -> Vec<Vec<u64>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(n)).rev() {
        for mut tail in partitions(n - first, first) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// Partitions of `n` fitting inside `outer` (rows nonincreasing, row `i` at most `outer[i]`).
fn partitions_inside(n: u64, outer: &[u64], row: usize, max_part: u64) -> Vec<Vec<u64>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    if row >= outer.len() {
        return Vec::new();
    }
    let cap = max_part.min(outer[row]).min(n);
    let mut out = Vec::new();
    for part in (1..=cap).rev() {
        for mut tail in partitions_inside(n - part, outer, row + 1, part) {
            tail.insert(0, part);
            out.push(tail);
        }
    }
    out
}

/// Corner points `(row, row_length[, z])` of a Young diagram.
fn corners_2d(rows: &[u64], z: Option<u64>) -> Vec<LatticePoint> {
    rows.iter()
        .enumerate()
        .map(|(i, &len)| {
            let mut p = vec![i as u64 + 1, len];
            p.extend(z);
            p
        })
        .collect()
}

fn plane_partitions(
    remaining: u64,
    below: Option<&[u64]>,
    layers: &mut Vec<Vec<u64>>,
    out: &mut Vec<MonotoneLattice>,
) {
    if remaining == 0 {
        let candidates: Vec<LatticePoint> = layers
            .iter()
            .enumerate()
            .flat_map(|(z, rows)| corners_2d(rows, Some(z as u64 + 1)))
            .collect();
        out.push(MonotoneLattice { d: 3, extreme: extr(&candidates) });
        return;
    }
    let below_size: u64 = below.map_or(remaining, |b| b.iter().sum());
    for k in (1..=remaining.min(below_size)).rev() {
        let layer_options = match below {
            None => partitions(k, k),
            Some(b) => partitions_inside(k, b, 0, k),
        };
        for layer in layer_options {
            layers.push(layer);
            let top = layers.last().unwrap().clone();
            plane_partitions(remaining - k, Some(&top), layers, out);
            layers.pop();
        }
    }
}
