//! `d`-dimensional `r`-uniform families, sections, shadows and the
//! Kruskal–Katona function.

use std::collections::{BTreeMap, BTreeSet};

use crate::binom::{binomial, largest_with_binomial_at_most};
use crate::colex::{initial_segment, RSet};
use crate::error::{invalid, Error, Result};

/// One member of a [`TupleFamily`]: a `d`-tuple of sets.
pub type Tuple = Vec<RSet>;

/// A finite set of `d`-tuples of `r`-sets.
///
/// Members iterate in the canonical order: tuples compared lexicographically,
/// coordinates compared in colex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleFamily {
    d: usize,
    r: usize,
    members: BTreeSet<Tuple>,
}

impl TupleFamily {
    pub fn empty(d: usize, r: usize) -> Result<Self> {
        if d == 0 {
            return invalid("dimension must be >= 1");
        }
        Ok(TupleFamily { d, r, members: BTreeSet::new() })
    }

    /// Builds a family, checking every coordinate of every tuple. Duplicates collapse.
    pub fn new(d: usize, r: usize, members: impl IntoIterator<Item = Tuple>) -> Result<Self> {
        let mut fam = Self::empty(d, r)?;
        for t in members {
            fam.insert(t)?;
        }
        Ok(fam)
    }

    /// Convenience constructor from nested integer slices, for tests and examples.
    pub fn from_slices(d: usize, r: usize, members: &[&[&[u32]]]) -> Result<Self> {
        let tuples = members
            .iter()
            .map(|t| t.iter().map(|s| RSet::new(s.to_vec())).collect::<Result<Tuple>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, r, tuples)
    }

    /// The product family `A_1 × … × A_d`.
    pub fn product(r: usize, factors: &[Vec<RSet>]) -> Result<Self> {
        let mut fam = Self::empty(factors.len(), r)?;
        let mut tuples: Vec<Tuple> = vec![Vec::new()];
        for factor in factors {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    factor.iter().map(move |s| {
                        let mut t = t.clone();
                        t.push(s.clone());
                        t
                    })
                })
                .collect();
        }
        for t in tuples {
            fam.insert(t)?;
        }
        Ok(fam)
    }

    pub fn insert(&mut self, t: Tuple) -> Result<bool> {
        if t.len() != self.d {
            return invalid(format!("expected a {}-tuple, got {} coordinates", self.d, t.len()));
        }
        if let Some(bad) = t.iter().find(|s| s.len() != self.r) {
            return invalid(format!("coordinate {bad:?} does not have cardinality {}", self.r));
        }
        Ok(self.members.insert(t))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, t: &[RSet]) -> bool {
        self.members.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Tuple> {
        self.members.iter()
    }

    pub(crate) fn from_parts_unchecked(d: usize, r: usize, members: BTreeSet<Tuple>) -> Self {
        TupleFamily { d, r, members }
    }

    /// Groups members by all coordinates except `coord`.
    ///
    /// Each value is the 1-dimensional section along `coord` for that key.
    pub(crate) fn sections_along(&self, coord: usize) -> BTreeMap<Tuple, Vec<RSet>> {
        let mut map: BTreeMap<Tuple, Vec<RSet>> = BTreeMap::new();
        for t in &self.members {
            let mut key = t.clone();
            let s = key.remove(coord);
            map.entry(key).or_default().push(s);
        }
        map
    }
}

/// Fixed coordinates for [`section`]. Coordinates are 0-based.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SectionSelector {
    fixed: BTreeMap<usize, RSet>,
}

impl SectionSelector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fix(mut self, coord: usize, value: RSet) -> Self {
        self.fixed.insert(coord, value);
        self
    }
}

/// `{ S \ {x} : S ∈ family, x ∈ S }`
pub fn shadow_1d<'a>(family: impl IntoIterator<Item = &'a RSet>) -> Result<BTreeSet<RSet>> {
    let mut out = BTreeSet::new();
    let mut r = None;
    for s in family {
        match r {
            None => r = Some(s.len()),
            Some(r) if r != s.len() => return invalid("family is not uniform"),
            _ => {}
        }
        if s.is_empty() {
            return invalid("the shadow of 0-sets is not defined");
        }
        out.extend(s.shadow());
    }
    Ok(out)
}

/// Removes one element from every coordinate, in all possible ways.
pub fn shadow_multi(family: &TupleFamily) -> Result<TupleFamily> {
    if family.r == 0 {
        return invalid("the shadow of a 0-uniform family is not defined");
    }
    let mut out = BTreeSet::new();
    let d = family.d;
    let r = family.r;
    let mut choice = vec![0usize; d];
    for t in &family.members {
        choice.iter_mut().for_each(|c| *c = 0);
        'odometer: loop {
            out.insert(t.iter().zip(&choice).map(|(s, &i)| s.without_index(i)).collect::<Tuple>());
            for c in choice.iter_mut() {
                *c += 1;
                if *c < r {
                    continue 'odometer;
                }
                *c = 0;
            }
            break;
        }
    }
    Ok(TupleFamily::from_parts_unchecked(d, r - 1, out))
}

/// The section of `family` obtained by fixing the selected coordinates.
///
/// The result has dimension `d − |fixed|`. Fixing every coordinate is rejected
/// since a 0-dimensional family is not representable.
pub fn section(family: &TupleFamily, sel: &SectionSelector) -> Result<TupleFamily> {
    if let Some((&c, _)) = sel.fixed.iter().find(|(&c, _)| c >= family.d) {
        return invalid(format!("coordinate {c} out of range for d = {}", family.d));
    }
    if sel.fixed.len() >= family.d {
        return invalid("a section must leave at least one coordinate free");
    }
    if sel.fixed.values().any(|s| s.len() != family.r) {
        return invalid(format!("fixed values must have cardinality {}", family.r));
    }
    let members = family
        .members
        .iter()
        .filter(|t| sel.fixed.iter().all(|(&c, s)| &t[c] == s))
        .map(|t| {
            t.iter()
                .enumerate()
                .filter(|(c, _)| !sel.fixed.contains_key(c))
                .map(|(_, s)| s.clone())
                .collect::<Tuple>()
        })
        .collect();
    Ok(TupleFamily::from_parts_unchecked(family.d - sel.fixed.len(), family.r, members))
}

/// Size of the shadow of the colex initial segment of length `m`, by
/// building the segment and its shadow.
pub fn kk_oracle(m: u64, r: usize) -> Result<u64> {
    if r == 0 {
        return invalid("r must be >= 1");
    }
    let seg = initial_segment(m, r)?;
    Ok(shadow_1d(&seg)?.len() as u64)
}

/// The Kruskal–Katona function through the cascade representation
/// `m = C(a_r, r) + C(a_{r−1}, r−1) + … + C(a_s, s)`, giving
/// `C(a_r, r−1) + … + C(a_s, s−1)`.
pub fn kk(m: u64, r: usize) -> Result<u64> {
    if r == 0 {
        return invalid("r must be >= 1");
    }
    let mut rest = m;
    let mut total = 0u64;
    let mut j = r as u64;
    while rest > 0 && j >= 1 {
        let a = largest_with_binomial_at_most(rest, j, j)?;
        rest -= binomial(a, j)?;
        total = total
            .checked_add(binomial(a, j - 1)?)
            .ok_or_else(|| Error::Overflow(format!("kk({m}, {r})")))?;
        j -= 1;
    }
    debug_assert_eq!(rest, 0);
    Ok(total)
}

/// Coordinatewise [`kk`].
pub fn kk_vec(a: &[u64], r: usize) -> Result<Vec<u64>> {
    a.iter().map(|&m| kk(m, r)).collect()
}
