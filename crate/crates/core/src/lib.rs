//! Shadows of multidimensional uniform set families.
//!
//! A `d`-dimensional `r`-uniform family is a set of `d`-tuples of `r`-element
//! sets; its shadow deletes one element from every coordinate. If such a
//! family has `C(x, r)^d` members for a real `x >= r`, its shadow has at
//! least `C(x, r − 1)^d` members, with equality only for products
//! `C(Y_1, r) × … × C(Y_d, r)`. This crate implements every object involved in
//! that statement and its proof, and checks each step at desk scale:
//!
//! - [`colex`]: colex order, ranks and initial segments
//! - [`shadow`]: tuple families, sections, shadows, the Kruskal–Katona function
//! - [`compress`]: coordinate compression towards monotone families
//! - [`lattice`]: monotone subsets of `N^d` and the shadow formula on extreme points
//! - [`llr`]: real binomials and the smooth surrogate `LL_r`
//! - [`flow`]: step-profile regions, the area-preserving deformation, squarification
//! - [`verify`]: the verification harness
//!
//! The guide in `book/` walks through the same material with runnable examples.

// `!(x > 0.0)` rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod binom;
pub mod colex;
pub mod compress;
mod error;
pub mod flow;
pub mod io;
pub mod lattice;
pub mod llr;
pub mod shadow;
pub mod verify;

pub use colex::{colex_compare, colex_rank, colex_unrank, initial_segment, ColexRank, RSet};
pub use error::{Error, Result};
pub use shadow::{kk, kk_oracle, kk_vec, section, shadow_1d, shadow_multi, SectionSelector, TupleFamily};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/colex.md")]
    mod colex {}
    #[doc = include_str!("../../../book/src/shadows.md")]
    mod shadows {}
    #[doc = include_str!("../../../book/src/compression.md")]
    mod compression {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/surrogate.md")]
    mod surrogate {}
    #[doc = include_str!("../../../book/src/flow.md")]
    mod flow {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
