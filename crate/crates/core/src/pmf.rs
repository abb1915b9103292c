//! Probability mass functions over integer support with exact rational
//! probabilities.
//!
//! Every distribution in this crate — closed-form, enumerated, or empirical —
//! is representable as a [`Pmf`]. Probabilities are `BigRational` so that
//! normalization holds exactly, not merely to rounding error; the enumeration
//! oracle depends on this.

use std::fmt;
use std::ops::RangeInclusive;

use num::{BigRational, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Where a PMF came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmfSource {
    /// Closed-form expression.
    Analytic,
    /// Exhaustive enumeration of link patterns.
    Oracle,
    /// Histogram of simulated trials.
    Empirical,
}

impl fmt::Display for PmfSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PmfSource::Analytic => write!(f, "analytic"),
            PmfSource::Oracle => write!(f, "oracle"),
            PmfSource::Empirical => write!(f, "empirical"),
        }
    }
}

/// Mean and variance as `f64`, with tiny negative variances (summation
/// round-off) clamped to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

impl Moments {
    pub fn new(mean: f64, variance: f64) -> Self {
        let variance = if variance < 0.0 && variance >= -1e-12 {
            0.0
        } else {
            variance
        };
        Moments { mean, variance }
    }
}

/// Mean and variance in exact rational arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMoments {
    pub mean: BigRational,
    pub variance: BigRational,
}

impl ExactMoments {
    pub fn to_f64(&self) -> Moments {
        Moments::new(
            self.mean.to_f64().unwrap_or(f64::NAN),
            self.variance.to_f64().unwrap_or(f64::NAN),
        )
    }
}

/// A probability mass function on a contiguous integer support.
///
/// The support is stored as `support_min..=support_min + probs.len() - 1`
/// with explicit zeros for impossible values, so serialized tables always
/// cover the full range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pmf {
    support_min: i64,
    probs: Vec<BigRational>,
    source: PmfSource,
}

impl Pmf {
    /// Builds a PMF, checking that every probability lies in [0, 1] and that
    /// the total is exactly 1.
    pub fn new(support_min: i64, probs: Vec<BigRational>, source: PmfSource) -> Result<Self> {
        let one = BigRational::from_integer(1.into());
        let mut sum = BigRational::zero();
        for (i, q) in probs.iter().enumerate() {
            if q.is_negative() || *q > one {
                return Err(Error::PmfProbabilityRange {
                    point: support_min + i as i64,
                    value: q.to_string(),
                });
            }
            sum += q;
        }
        if sum != one {
            return Err(Error::PmfNotNormalized {
                sum: sum.to_string(),
            });
        }
        Ok(Pmf {
            support_min,
            probs,
            source,
        })
    }

    pub fn source(&self) -> PmfSource {
        self.source
    }

    pub fn support(&self) -> RangeInclusive<i64> {
        self.support_min..=self.support_min + self.probs.len() as i64 - 1
    }

    /// Probability at `r`; zero outside the stored support.
    pub fn prob(&self, r: i64) -> BigRational {
        if r < self.support_min {
            return BigRational::zero();
        }
        match usize::try_from(r - self.support_min) {
            Ok(i) if i < self.probs.len() => self.probs[i].clone(),
            _ => BigRational::zero(),
        }
    }

    pub fn prob_f64(&self, r: i64) -> f64 {
        self.prob(r).to_f64().unwrap_or(f64::NAN)
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    /// `(support point, probability)` pairs in increasing support order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, q)| (self.support_min + i as i64, q))
    }

    pub fn mean(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for (r, q) in self.iter() {
            acc += q * BigRational::from_integer(r.into());
        }
        acc
    }

    pub fn variance(&self) -> BigRational {
        let mean = self.mean();
        let mut acc = BigRational::zero();
        for (r, q) in self.iter() {
            let r = BigRational::from_integer(r.into());
            acc += q * &r * &r;
        }
        acc - &mean * &mean
    }

    pub fn exact_moments(&self) -> ExactMoments {
        ExactMoments {
            mean: self.mean(),
            variance: self.variance(),
        }
    }

    pub fn moments(&self) -> Moments {
        self.exact_moments().to_f64()
    }

    /// Total-variation distance: half the L1 distance over the union of the
    /// two supports.
    pub fn tv_distance(&self, other: &Pmf) -> f64 {
        let lo = (*self.support().start()).min(*other.support().start());
        let hi = (*self.support().end()).max(*other.support().end());
        let mut acc = 0.0;
        for r in lo..=hi {
            acc += (self.prob_f64(r) - other.prob_f64(r)).abs();
        }
        0.5 * acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::Ratio;

    fn r(n: i64, d: i64) -> BigRational {
        Ratio::new(n.into(), d.into())
    }

    #[test]
    fn rejects_unnormalized() {
        let err = Pmf::new(0, vec![r(1, 2), r(1, 4)], PmfSource::Analytic);
        assert!(matches!(err, Err(Error::PmfNotNormalized { .. })));
    }

    #[test]
    fn rejects_out_of_range_probability() {
        let err = Pmf::new(0, vec![r(3, 2), r(-1, 2)], PmfSource::Analytic);
        assert!(matches!(err, Err(Error::PmfProbabilityRange { .. })));
    }

    #[test]
    fn moments_of_fair_coin() {
        let pmf = Pmf::new(0, vec![r(1, 2), r(1, 2)], PmfSource::Analytic).unwrap();
        assert_eq!(pmf.mean(), r(1, 2));
        assert_eq!(pmf.variance(), r(1, 4));
        assert_eq!(pmf.prob(5), BigRational::zero());
        assert_eq!(pmf.prob(-1), BigRational::zero());
    }

    #[test]
    fn tv_distance_handles_disjoint_support() {
        let a = Pmf::new(0, vec![r(1, 1)], PmfSource::Analytic).unwrap();
        let b = Pmf::new(3, vec![r(1, 1)], PmfSource::Oracle).unwrap();
        assert_eq!(a.tv_distance(&b), 1.0);
        assert_eq!(a.tv_distance(&a), 0.0);
    }
}
