//! Colexicographic order on `r`-element subsets of the positive integers.
//!
//! `A` precedes `B` when the largest element of the symmetric difference lies
//! in `B`. Ranks are 1-based: the colex-minimal set `{1, …, r}` has rank 1.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::binom::{binomial, largest_with_binomial_at_most};
use crate::error::{invalid, Result};

/// A finite set of positive integers, stored sorted ascending.
///
/// `Ord` on `RSet` is colex order for sets of equal cardinality; sets of
/// different cardinality are ordered by cardinality first.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct RSet(Vec<u32>);

impl RSet {
    /// Builds a set from strictly increasing positive elements.
    ///
    /// Unsorted or repeated input is rejected, not normalized.
    pub fn new(elements: Vec<u32>) -> Result<Self> {
        if elements.contains(&0) {
            return invalid(format!("set elements must be >= 1, got {elements:?}"));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return invalid(format!("set elements must be strictly increasing, got {elements:?}"));
        }
        Ok(RSet(elements))
    }

    /// `{1, …, r}`
    pub fn first(r: usize) -> Self {
        RSet((1..=r as u32).collect())
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// The set with its `idx`-th smallest element removed.
    pub fn without_index(&self, idx: usize) -> RSet {
        let mut v = self.0.clone();
        v.remove(idx);
        RSet(v)
    }

    /// All sets obtained by deleting one element.
    pub fn shadow(&self) -> impl Iterator<Item = RSet> + '_ {
        (0..self.len()).map(move |i| self.without_index(i))
    }
}

impl TryFrom<Vec<u32>> for RSet {
    type Error = crate::Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        RSet::new(v)
    }
}

impl From<RSet> for Vec<u32> {
    fn from(s: RSet) -> Self {
        s.0
    }
}

impl fmt::Debug for RSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl Ord for RSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| colex_cmp_same_len(&self.0, &other.0))
    }
}

impl PartialOrd for RSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn colex_cmp_same_len(a: &[u32], b: &[u32]) -> Ordering {
    // The first difference from the top is the maximum of the symmetric difference.
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

/// 1-based position in colex order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColexRank(u64);

impl ColexRank {
    pub fn new(value: u64) -> Result<Self> {
        if value == 0 {
            return invalid("colex ranks start at 1");
        }
        Ok(ColexRank(value))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for ColexRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Colex comparison of two sets of the same cardinality.
pub fn colex_compare(a: &RSet, b: &RSet) -> Result<Ordering> {
    if a.len() != b.len() {
        return invalid(format!("cannot colex-compare a {}-set with a {}-set", a.len(), b.len()));
    }
    Ok(colex_cmp_same_len(&a.0, &b.0))
}

/// `1 + Σ C(s_i − 1, i)` over the sorted elements `s_1 < … < s_r`.
pub fn colex_rank(s: &RSet) -> Result<ColexRank> {
    if s.is_empty() {
        return invalid("the empty set has no colex rank");
    }
    let mut rank = 1u64;
    for (i, &e) in s.0.iter().enumerate() {
        let term = binomial(u64::from(e) - 1, i as u64 + 1)?;
        rank = rank
            .checked_add(term)
            .ok_or_else(|| crate::Error::Overflow(format!("colex rank of {s:?}")))?;
    }
    Ok(ColexRank(rank))
}

/// The `r`-set of the given colex rank.
///
/// Greedy from the top: the largest element `s_r` is the largest value with
/// `C(s_r − 1, r) < rank`, then recurse on the remainder with `r − 1`.
pub fn colex_unrank(rank: ColexRank, r: usize) -> Result<RSet> {
    if r == 0 {
        return invalid("unrank needs r >= 1");
    }
    let mut remainder = rank.0 - 1;
    let mut elems = vec![0u32; r];
    for j in (1..=r as u64).rev() {
        let c = largest_with_binomial_at_most(remainder, j, j - 1)?;
        remainder -= binomial(c, j)?;
        elems[j as usize - 1] = u32::try_from(c + 1)
            .map_err(|_| crate::Error::Overflow(format!("element of unrank({rank}, {r})")))?;
    }
    Ok(RSet(elems))
}

/// Colex successor of an `r`-set: the next set in the infinite colex order.
pub(crate) fn colex_successor(s: &RSet) -> RSet {
    let mut v = s.0.clone();
    // Find the lowest position that can be bumped without colliding.
    let mut i = 0;
    while i + 1 < v.len() && v[i] + 1 == v[i + 1] {
        i += 1;
    }
    v[i] += 1;
    for (j, slot) in v.iter_mut().enumerate().take(i) {
        *slot = j as u32 + 1;
    }
    RSet(v)
}

/// The first `m` `r`-sets in colex order.
pub fn initial_segment(m: u64, r: usize) -> Result<Vec<RSet>> {
    if m == 0 {
        return Ok(Vec::new());
    }
    if r == 0 {
        return invalid("initial segments of 0-sets are not defined");
    }
    let mut out = Vec::with_capacity(m as usize);
    let mut cur = RSet::first(r);
    for _ in 1..m {
        let next = colex_successor(&cur);
        out.push(cur);
        cur = next;
    }
    out.push(cur);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[u32]) -> RSet {
        RSet::new(v.to_vec()).unwrap()
    }

    /// Every r-subset of [n], by recursion on n; the independent oracle for ordering.
    fn all_subsets(n: u32, r: usize) -> Vec<RSet> {
        fn rec(start: u32, n: u32, r: usize, cur: &mut Vec<u32>, out: &mut Vec<RSet>) {
            if cur.len() == r {
                out.push(RSet(cur.clone()));
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

    /// Colex compare straight from the symmetric-difference definition.
    fn colex_by_definition(a: &RSet, b: &RSet) -> Ordering {
        let sym: Vec<u32> = a
            .0
            .iter()
            .filter(|x| !b.0.contains(x))
            .chain(b.0.iter().filter(|x| !a.0.contains(x)))
            .copied()
            .collect();
        match sym.iter().max() {
            None => Ordering::Equal,
            Some(m) if b.0.contains(m) => Ordering::Less,
            Some(_) => Ordering::Greater,
        }
    }

    #[test]
    fn compare_examples() {
        assert_eq!(colex_compare(&set(&[1, 3]), &set(&[2, 3])).unwrap(), Ordering::Less);
        assert_eq!(colex_compare(&set(&[1, 2]), &set(&[1, 2])).unwrap(), Ordering::Equal);
        assert_eq!(colex_compare(&set(&[3, 4]), &set(&[1, 5])).unwrap(), Ordering::Less);
        assert!(colex_compare(&set(&[1]), &set(&[1, 2])).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(colex_rank(&set(&[1, 2])).unwrap().get(), 1);
        assert_eq!(colex_rank(&set(&[2, 3])).unwrap().get(), 3);
        assert_eq!(colex_rank(&set(&[2, 4])).unwrap().get(), 5);
        assert!(colex_rank(&RSet::new(vec![]).unwrap()).is_err());
    }

    #[test]
    fn unrank_examples() {
        let rk = |v| ColexRank::new(v).unwrap();
        assert_eq!(colex_unrank(rk(1), 3).unwrap(), set(&[1, 2, 3]));
        assert_eq!(colex_unrank(rk(5), 2).unwrap(), set(&[2, 4]));
        assert_eq!(colex_unrank(rk(4), 3).unwrap(), set(&[2, 3, 4]));
    }

    #[test]
    fn initial_segment_examples() {
        assert_eq!(initial_segment(3, 2).unwrap(), vec![set(&[1, 2]), set(&[1, 3]), set(&[2, 3])]);
        assert!(initial_segment(0, 2).unwrap().is_empty());
        assert_eq!(initial_segment(1, 5).unwrap(), vec![set(&[1, 2, 3, 4, 5])]);
    }

    #[test]
    fn construction_rejects_unsorted() {
        assert!(RSet::new(vec![2, 1]).is_err());
        assert!(RSet::new(vec![1, 1]).is_err());
        assert!(RSet::new(vec![0, 1]).is_err());
        assert!(ColexRank::new(0).is_err());
    }

    #[test]
    fn order_agrees_with_rank_on_3_subsets_of_8() {
        let all = all_subsets(8, 3);
        for a in &all {
            for b in &all {
                let by_rank = colex_rank(a).unwrap().cmp(&colex_rank(b).unwrap());
                assert_eq!(colex_compare(a, b).unwrap(), by_rank);
                assert_eq!(colex_by_definition(a, b), by_rank);
            }
        }
    }

    #[test]
    fn sorted_enumeration_matches_ranks() {
        for r in 1..=4 {
            let mut all = all_subsets(9, r);
            all.sort_by(colex_by_definition);
            for (i, s) in all.iter().enumerate() {
                assert_eq!(colex_rank(s).unwrap().get(), i as u64 + 1);
            }
            assert_eq!(initial_segment(all.len() as u64, r).unwrap(), all);
        }
    }

    proptest! {
        #[test]
        fn unrank_then_rank(rank in 1u64..5_000_000, r in 1usize..8) {
            let s = colex_unrank(ColexRank::new(rank).unwrap(), r).unwrap();
            prop_assert_eq!(s.len(), r);
            prop_assert_eq!(colex_rank(&s).unwrap().get(), rank);
        }

        #[test]
        fn initial_segment_is_downward_closed(m in 0u64..200, r in 1usize..5) {
            let seg = initial_segment(m, r).unwrap();
            prop_assert_eq!(seg.len() as u64, m);
            for (i, s) in seg.iter().enumerate() {
                prop_assert_eq!(colex_rank(s).unwrap().get(), i as u64 + 1);
            }
        }
    }
}
