//! Truncated power-series arithmetic with exact rational coefficients, and
//! the composition-counting functions built on top of it.
//!
//! A [`Series`] is a polynomial in `x` truncated at a fixed order; all
//! operations stay within that order. Coefficients are `BigRational`, so the
//! alternating-sign expansions used elsewhere in the crate lose nothing to
//! rounding.

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};

/// Binomial coefficient C(n, k) as a big integer; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// A power series truncated at a fixed order.
///
/// `coeffs[i]` is the coefficient of `x^i`; the length is always
/// `truncation_order + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<BigRational>,
}

impl Series {
    /// The zero series at the given truncation order.
    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    /// The constant series 1.
    pub fn one(order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// Series from explicit coefficients; the truncation order is
    /// `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter {
                name: "coeffs",
                reason: "a series needs at least the constant coefficient".into(),
            });
        }
        Ok(Series { coeffs })
    }

    /// `coeff * x^k`, truncated at `order` (zero series when `k > order`).
    pub fn monomial(order: usize, k: usize, coeff: BigRational) -> Self {
        let mut s = Series::zero(order);
        if k <= order {
            s.coeffs[k] = coeff;
        }
        s
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^n`.
    pub fn coeff(&self, n: usize) -> Result<&BigRational> {
        self.coeffs.get(n).ok_or(Error::CoefficientOutOfRange {
            index: n,
            order: self.truncation_order(),
        })
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn check_order(&self, other: &Series) -> Result<()> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::TruncationMismatch {
                left: self.truncation_order(),
                right: other.truncation_order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Series { coeffs })
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Series { coeffs })
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        let order = self.truncation_order();
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        Ok(Series { coeffs })
    }

    /// `self^k` by binary exponentiation.
    pub fn pow(&self, k: u32) -> Series {
        let order = self.truncation_order();
        let mut result = Series::one(order);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base).expect("orders match");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("orders match");
            }
        }
        result
    }

    /// Multiplicative inverse modulo `x^{order+1}`; requires a nonzero
    /// constant term.
    pub fn reciprocal(&self) -> Result<Series> {
        if self.coeffs[0].is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let order = self.truncation_order();
        let inv0 = self.coeffs[0].recip();
        let mut coeffs = vec![BigRational::zero(); order + 1];
        coeffs[0] = inv0.clone();
        for m in 1..=order {
            let mut acc = BigRational::zero();
            for i in 1..=m {
                if self.coeffs[i].is_zero() {
                    continue;
                }
                acc += &self.coeffs[i] * &coeffs[m - i];
            }
            coeffs[m] = -acc * &inv0;
        }
        Ok(Series { coeffs })
    }

    pub fn scale(&self, factor: &BigRational) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }
}

/// `x + x^2 + ... - x^r` truncated at `order`: the generating function of a
/// single positive part not equal to `r`.
fn part_not_equal(order: usize, r: u64) -> Series {
    let mut s = Series::zero(order);
    for i in 1..=order {
        s.coeffs[i] = BigRational::one();
    }
    if r as usize <= order {
        s.coeffs[r as usize] = BigRational::zero();
    }
    s
}

/// Number of ordered compositions of `n` into `k` positive parts of which
/// exactly `s` parts equal `r`.
///
/// Extracted as the coefficient of `x^n` in
/// `C(k,s) * x^{rs} * (x + x^2 + ... - x^r)^{k-s}`.
/// Returns 0 whenever no such composition exists.
pub fn num_compositions(n: u64, k: u64, r: u64, s: u64) -> Result<BigInt> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: format!("need 1 <= k <= n, got k={k}, n={n}"),
        });
    }
    if s > k {
        return Err(Error::InvalidParameter {
            name: "s",
            reason: format!("need s <= k, got s={s}, k={k}"),
        });
    }
    if r == 0 {
        return Err(Error::InvalidParameter {
            name: "r",
            reason: "parts are positive, need r >= 1".into(),
        });
    }

    let Some(rest) = n.checked_sub(r * s) else {
        return Ok(BigInt::zero());
    };
    let choose = binomial(k, s);
    if s == k {
        return Ok(if rest == 0 { choose } else { BigInt::zero() });
    }

    let order = rest as usize;
    let others = part_not_equal(order, r).pow((k - s) as u32);
    let c = others.coeff(order).expect("order in range");
    debug_assert!(c.is_integer());
    Ok(choose * c.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::Ratio;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        Ratio::new(n.into(), d.into())
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn product_of_conjugates() {
        // (1 + x)(1 - x) = 1 - x^2
        let a = Series::from_coeffs(vec![int(1), int(1), int(0)]).unwrap();
        let b = Series::from_coeffs(vec![int(1), int(-1), int(0)]).unwrap();
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.coeffs(), &[int(1), int(0), int(-1)]);
    }

    #[test]
    fn squared_positive_parts_counts_compositions() {
        // coefficient of x^4 in (x + x^2 + ...)^2 = #{(1,3),(2,2),(3,1)} = 3
        let mut s = Series::zero(4);
        for i in 1..=4 {
            s.coeffs[i] = BigRational::one();
        }
        let sq = s.pow(2);
        assert_eq!(*sq.coeff(4).unwrap(), int(3));
    }

    #[test]
    fn reciprocal_of_one_minus_x_is_geometric() {
        let a = Series::from_coeffs(vec![int(1), int(-1), int(0), int(0), int(0)]).unwrap();
        let inv = a.reciprocal().unwrap();
        assert!(inv.coeffs().iter().all(|c| *c == int(1)));
    }

    #[test]
    fn reciprocal_matches_geometric_rate_two() {
        // 1/(1 - x(1 + (1-p)/p)) at p = 1/2 has coefficients 2^k.
        let rate = int(1) + r(1, 2) / r(1, 2);
        let order = 8;
        let mut a = Series::zero(order);
        a.coeffs[0] = int(1);
        a.coeffs[1] = -rate;
        let inv = a.reciprocal().unwrap();
        for k in 0..=order {
            assert_eq!(*inv.coeff(k).unwrap(), int(1 << k));
        }
    }

    #[test]
    fn reciprocal_is_involutive() {
        let a = Series::from_coeffs(vec![r(2, 3), int(1), r(-1, 4), int(5)]).unwrap();
        let back = a.reciprocal().unwrap().reciprocal().unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn mismatched_orders_error() {
        let a = Series::zero(3);
        let b = Series::zero(4);
        assert!(matches!(
            a.add(&b),
            Err(Error::TruncationMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn reciprocal_needs_constant_term() {
        let a = Series::from_coeffs(vec![int(0), int(1)]).unwrap();
        assert!(matches!(a.reciprocal(), Err(Error::ZeroConstantTerm)));
    }

    #[test]
    fn coeff_out_of_range_errors() {
        let a = Series::zero(3);
        assert!(matches!(
            a.coeff(4),
            Err(Error::CoefficientOutOfRange { index: 4, order: 3 })
        ));
    }

    #[test]
    fn composition_examples() {
        assert_eq!(num_compositions(5, 2, 2, 1).unwrap(), BigInt::from(2)); // (2,3),(3,2)
        assert_eq!(num_compositions(4, 2, 2, 2).unwrap(), BigInt::from(1)); // (2,2)
        assert_eq!(num_compositions(4, 2, 2, 1).unwrap(), BigInt::from(0));
    }

    #[test]
    fn composition_preconditions() {
        assert!(num_compositions(4, 0, 2, 0).is_err());
        assert!(num_compositions(4, 5, 2, 0).is_err());
        assert!(num_compositions(4, 2, 0, 0).is_err());
        assert!(num_compositions(4, 2, 2, 3).is_err());
    }

    /// Brute-force: enumerate compositions of `n` into `k` parts and
    /// histogram how many parts equal `r` in each.
    fn composition_hit_histogram(n: u64, k: u64, r: u64) -> std::collections::HashMap<u64, u64> {
        fn go(
            remaining: u64,
            parts_left: u64,
            r: u64,
            hits: u64,
            acc: &mut std::collections::HashMap<u64, u64>,
        ) {
            if parts_left == 0 {
                if remaining == 0 {
                    *acc.entry(hits).or_insert(0) += 1;
                }
                return;
            }
            for part in 1..=remaining.saturating_sub(parts_left - 1) {
                go(
                    remaining - part,
                    parts_left - 1,
                    r,
                    hits + u64::from(part == r),
                    acc,
                );
            }
        }
        let mut acc = std::collections::HashMap::new();
        go(n, k, r, 0, &mut acc);
        acc
    }

    #[test]
    fn compositions_match_enumeration() {
        for n in 1..=12u64 {
            for k in 1..=n {
                for r in 1..=n {
                    let hist = composition_hit_histogram(n, k, r);
                    for s in 0..=k {
                        let expected = hist.get(&s).copied().unwrap_or(0);
                        let got = num_compositions(n, k, r, s).unwrap();
                        assert_eq!(got, BigInt::from(expected), "n={n} k={k} r={r} s={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn compositions_sum_to_binomial() {
        // Summing over s recovers the total count of compositions C(n-1, k-1).
        for n in 1..=20u64 {
            for k in 1..=n {
                for r in [1u64, 2, 3, 7] {
                    let total: BigInt = (0..=k)
                        .map(|s| num_compositions(n, k, r, s).unwrap())
                        .sum();
                    assert_eq!(total, binomial(n - 1, k - 1), "n={n} k={k} r={r}");
                }
            }
        }
    }

    fn small_series(order: usize) -> impl Strategy<Value = Series> {
        prop::collection::vec((-6i64..=6, 1i64..=4), order + 1).prop_map(|pairs| {
            Series::from_coeffs(pairs.into_iter().map(|(n, d)| r(n, d)).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn mul_distributes_over_add(a in small_series(6), b in small_series(6), c in small_series(6)) {
            let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
            let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn series_times_reciprocal_is_one(a in small_series(6)) {
            prop_assume!(!a.coeffs()[0].is_zero());
            let prod = a.mul(&a.reciprocal().unwrap()).unwrap();
            prop_assert_eq!(prod, Series::one(6));
        }
    }
}
