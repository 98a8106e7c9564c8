//! Coordinate compression and monotonization of tuple families.
//!
//! Compressing along coordinate `i` replaces every 1-dimensional section along
//! `i` by the colex initial segment of the same size. Each compression that
//! changes the family strictly lowers its [`weight`], so iterating over the
//! coordinates terminates in a monotone family.

use std::collections::BTreeSet;

use crate::colex::{colex_rank, initial_segment};
use crate::error::{invalid, Result};
use crate::shadow::{Tuple, TupleFamily};

/// Sum over members of the L1 norm of the coordinatewise colex ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(pub u64);

pub fn weight(family: &TupleFamily) -> Result<Weight> {
    let mut total = 0u64;
    for t in family.iter() {
        for s in t {
            total += colex_rank(s)?.get();
        }
    }
    Ok(Weight(total))
}

fn is_initial_segment(section: &[crate::RSet]) -> Result<bool> {
    // Sections come out of a BTreeSet walk, so they are already in colex order.
    for (i, s) in section.iter().enumerate() {
        if colex_rank(s)?.get() != i as u64 + 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff every 1-dimensional section is a colex initial segment.
pub fn is_monotone(family: &TupleFamily) -> Result<bool> {
    for coord in 0..family.d() {
        for section in family.sections_along(coord).values() {
            if !is_initial_segment(section)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Replaces each section along `coord` (0-based) with the initial segment of
/// the same length.
pub fn compress_coordinate(family: &TupleFamily, coord: usize) -> Result<TupleFamily> {
    if coord >= family.d() {
        return invalid(format!("coordinate {coord} out of range for d = {}", family.d()));
    }
    let mut members: BTreeSet<Tuple> = BTreeSet::new();
    for (key, section) in family.sections_along(coord) {
        for s in initial_segment(section.len() as u64, family.r())? {
            let mut t = key.clone();
            t.insert(coord, s);
            members.insert(t);
        }
    }
    Ok(TupleFamily::from_parts_unchecked(family.d(), family.r(), members))
}

/// Compresses coordinates `0, 1, …, d−1` cyclically until a full pass
/// changes nothing.
pub fn monotonize(family: &TupleFamily) -> Result<TupleFamily> {
    let mut cur = family.clone();
    let mut unchanged = 0;
    let mut coord = 0;
    while unchanged < cur.d() {
        let next = compress_coordinate(&cur, coord)?;
        if next == cur {
            unchanged += 1;
        } else {
            unchanged = 0;
            cur = next;
        }
        coord = (coord + 1) % cur.d();
    }
    Ok(cur)
}
