//! Exact integer binomial coefficients.
//!
//! Every count in the combinatorial modules goes through [`binomial`], which
//! reports overflow as an error instead of wrapping.

use crate::error::{Error, Result};

/// `C(n, k)` in `u64`, or [`Error::Overflow`] if the value does not fit.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc * (n - k + i) / i is exact: acc = C(n - k + i - 1, i - 1).
        acc = acc * u128::from(n - k + i) / u128::from(i);
        if acc > u128::from(u64::MAX) {
            return Err(Error::Overflow(format!("C({n}, {k})")));
        }
    }
    Ok(acc as u64)
}

/// Largest `a >= lo` with `C(a, k) <= m`, for `k >= 1`.
///
/// `C(a, k)` is nondecreasing in `a`, so a doubling search followed by
/// bisection finds it. Used by colex unranking and the cascade form of KK.
pub(crate) fn largest_with_binomial_at_most(m: u64, k: u64, lo: u64) -> Result<u64> {
    debug_assert!(k >= 1);
    let fits = |a: u64| -> Result<bool> {
        match binomial(a, k) {
            Ok(v) => Ok(v <= m),
            Err(Error::Overflow(_)) => Ok(false),
            Err(e) => Err(e),
        }
    };
    let mut lo = lo;
    let mut step = 1u64;
    let mut hi = lo + 1;
    while fits(hi)? {
        lo = hi;
        step = step.saturating_mul(2);
        hi = lo.checked_add(step).ok_or_else(|| Error::Overflow("cascade search".into()))?;
    }
    // fits(lo) holds, fits(hi) does not.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(0, 0).unwrap(), 1);
        assert_eq!(binomial(5, 2).unwrap(), 10);
        assert_eq!(binomial(5, 6).unwrap(), 0);
        assert_eq!(binomial(12, 6).unwrap(), 924);
        assert_eq!(binomial(67, 33).unwrap(), 14_226_520_737_620_288_370);
    }

    #[test]
    fn overflow_is_an_error() {
        assert!(matches!(binomial(68, 34), Err(Error::Overflow(_))));
    }

    #[test]
    fn pascal_rule() {
        for n in 1..40u64 {
            for k in 1..n {
                assert_eq!(
                    binomial(n, k).unwrap(),
                    binomial(n - 1, k - 1).unwrap() + binomial(n - 1, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn largest_search() {
        // C(4,2)=6 <= 9 < C(5,2)=10
        assert_eq!(largest_with_binomial_at_most(9, 2, 1).unwrap(), 4);
        assert_eq!(largest_with_binomial_at_most(10, 2, 1).unwrap(), 5);
        // C(a,3) = 0 for a < 3
        assert_eq!(largest_with_binomial_at_most(0, 3, 0).unwrap(), 2);
    }
}
