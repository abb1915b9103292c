//! Closed-form PMFs and moments of the four connectivity statistics as
//! functions of (n, p).
//!
//! Everything here is evaluated in exact rational arithmetic: the
//! longest-run CDF and the idle-car expansion mix large binomials with
//! alternating signs, which cancel catastrophically in floating point. A
//! floating-point fast path for large `n` lives in [`float`].

use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gfseries::{binomial, Series};
use crate::pmf::{ExactMoments, Moments, Pmf, PmfSource};

pub mod float;

/// Largest `n` for the rational PMF constructors.
pub const MAX_ANALYTIC_N: u32 = 64;

/// Euler–Mascheroni constant, to the precision used by the asymptotic
/// biggest-cluster mean.
pub const EULER_GAMMA: f64 = 0.5772156649;

fn check_n(n: u32) -> Result<()> {
    if !(2..=MAX_ANALYTIC_N).contains(&n) {
        return Err(Error::NetworkSize {
            n,
            min: 2,
            max: MAX_ANALYTIC_N,
        });
    }
    Ok(())
}

fn check_p(p: &BigRational) -> Result<()> {
    if p.is_negative() || *p > BigRational::one() {
        return Err(Error::ProbabilityRange(p.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

fn rat_pow(base: &BigRational, exp: u32) -> BigRational {
    num::pow::pow(base.clone(), exp as usize)
}

fn rat_u32(v: u32) -> BigRational {
    BigRational::from_integer(v.into())
}

/// PMF of the number of clusters: `P(r) = C(n-1, r-1) p^{n-r} (1-p)^{r-1}`
/// on support 1..=n. One cluster boundary per failed link makes the count
/// binomial.
pub fn clust_num_pmf(n: u32, p: &BigRational) -> Result<Pmf> {
    check_n(n)?;
    check_p(p)?;
    let q = BigRational::one() - p;
    let probs = (1..=n)
        .map(|r| {
            BigRational::from_integer(binomial(u64::from(n) - 1, u64::from(r) - 1))
                * rat_pow(p, n - r)
                * rat_pow(&q, r - 1)
        })
        .collect();
    Pmf::new(1, probs, PmfSource::Analytic)
}

/// Mean `1 + (n-1)(1-p)` and variance `(n-1)p(1-p)` of the cluster count.
pub fn clust_num_moments(n: u32, p: &BigRational) -> Result<ExactMoments> {
    check_p(p)?;
    if n < 2 {
        return Err(Error::NetworkSize {
            n,
            min: 2,
            max: u32::MAX,
        });
    }
    let q = BigRational::one() - p;
    let n1 = rat_u32(n - 1);
    Ok(ExactMoments {
        mean: BigRational::one() + &n1 * &q,
        variance: n1 * p * &q,
    })
}

/// Mean number of clusters containing at least two vehicles:
/// the cluster-count mean minus the mean number of idle vehicles.
pub fn connected_clust_num_mean(n: u32, p: &BigRational) -> Result<BigRational> {
    check_p(p)?;
    if n < 2 {
        return Err(Error::NetworkSize {
            n,
            min: 2,
            max: u32::MAX,
        });
    }
    let q = BigRational::one() - p;
    let two = rat_u32(2);
    Ok(BigRational::one() + rat_u32(n - 1) * &q - &two * &q - rat_u32(n - 2) * &q * &q)
}

/// PMF of the size of a uniformly chosen cluster:
/// `P(r) = p^{r-1}(1-p)` for `r < n`, `P(n) = p^{n-1}`.
pub fn clust_size_pmf(n: u32, p: &BigRational) -> Result<Pmf> {
    check_n(n)?;
    check_p(p)?;
    let q = BigRational::one() - p;
    let mut probs: Vec<BigRational> = (1..n).map(|r| rat_pow(p, r - 1) * &q).collect();
    probs.push(rat_pow(p, n - 1));
    Pmf::new(1, probs, PmfSource::Analytic)
}

/// Cluster-size mean `(1-p^n)/(1-p)` and its variance. The removable
/// singularity at `p = 1` is handled as the limit (mean `n`, variance 0).
pub fn clust_size_moments(n: u32, p: &BigRational) -> Result<ExactMoments> {
    check_p(p)?;
    if n < 2 {
        return Err(Error::NetworkSize {
            n,
            min: 2,
            max: u32::MAX,
        });
    }
    let one = BigRational::one();
    if p == &one {
        return Ok(ExactMoments {
            mean: rat_u32(n),
            variance: BigRational::zero(),
        });
    }
    let q = &one - p;
    let nn = rat_u32(n);
    let pn = rat_pow(p, n);
    let pn1 = &pn * p;
    let mean = (&one - &pn) / &q;
    // (2np^{n+1} - 2np^n - p^{2n} - p^{n+1} + p^n + p) / (1-p)^2
    let numer = rat_u32(2) * &nn * &pn1 - rat_u32(2) * &nn * &pn - &pn * &pn - &pn1 + &pn + p;
    let variance = numer / (&q * &q);
    Ok(ExactMoments { mean, variance })
}

/// CDF of the longest success run over the chain's `n-1` links:
/// `g(k) = P(longest run <= k - 1)`, i.e. the probability that the biggest
/// cluster has at most `k` vehicles. Exact alternating-sum evaluation.
pub fn longest_run_cdf(n: u32, p: &BigRational, k: u32) -> Result<BigRational> {
    check_p(p)?;
    if n < 2 {
        return Err(Error::NetworkSize {
            n,
            min: 2,
            max: u32::MAX,
        });
    }
    if !(1..n).contains(&k) {
        return Err(Error::RunLengthRange { k, max: n - 1 });
    }
    let q = BigRational::one() - p;
    let mut acc = BigRational::zero();
    for m in 1..=n / (k + 1) {
        let term = BigRational::from_integer(binomial(
            u64::from(n - 1 - m * k),
            u64::from(m) - 1,
        )) * rat_pow(p, m * k)
            * rat_pow(&q, m - 1);
        if m % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    for m in 0..=(n - 1) / (k + 1) {
        let term = BigRational::from_integer(binomial(
            u64::from(n - 1 - m * k),
            u64::from(m),
        )) * rat_pow(p, m * k)
            * rat_pow(&q, m);
        if m % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    Ok(acc)
}

/// PMF of the biggest cluster size: `P(1) = (1-p)^{n-1}`, `P(n) = p^{n-1}`,
/// and `P(r) = g(r) - g(r-1)` in between.
pub fn biggest_clust_pmf(n: u32, p: &BigRational) -> Result<Pmf> {
    check_n(n)?;
    check_p(p)?;
    let q = BigRational::one() - p;
    let mut probs = Vec::with_capacity(n as usize);
    probs.push(rat_pow(&q, n - 1));
    if n > 2 {
        let mut prev = longest_run_cdf(n, p, 1)?;
        for r in 2..n {
            let cur = longest_run_cdf(n, p, r)?;
            probs.push(&cur - &prev);
            prev = cur;
        }
    }
    probs.push(rat_pow(p, n - 1));
    Pmf::new(1, probs, PmfSource::Analytic)
}

/// Exact mean and variance of the biggest cluster, by summing the CDF:
/// `E[X] = n - sum g(r)` and `E[X^2] = n^2 - sum (2r+1) g(r)`, which is the
/// PMF summation after telescoping. Works for any `n >= 2`.
pub fn biggest_clust_moments_exact(n: u32, p: &BigRational) -> Result<ExactMoments> {
    check_p(p)?;
    if n < 2 {
        return Err(Error::NetworkSize {
            n,
            min: 2,
            max: u32::MAX,
        });
    }
    let mut sum_g = BigRational::zero();
    let mut sum_wg = BigRational::zero();
    for r in 1..n {
        let g = longest_run_cdf(n, p, r)?;
        sum_wg += rat_u32(2 * r + 1) * &g;
        sum_g += g;
    }
    let mean = rat_u32(n) - sum_g;
    let second = rat_u32(n) * rat_u32(n) - sum_wg;
    let variance = second - &mean * &mean;
    Ok(ExactMoments { mean, variance })
}

/// Large-`n` approximation of the biggest-cluster moments:
/// mean `log_{1/p}((n-1)(1-p)) + gamma/ln(1/p) + 1/2`,
/// variance `pi^2/ln^2(1/p) + 1/12`.
pub fn biggest_clust_moments_asymptotic(n: u32, p: f64) -> Result<Moments> {
    if n < 3 {
        return Err(Error::NetworkSize {
            n,
            min: 3,
            max: u32::MAX,
        });
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ProbabilityRange(p));
    }
    let ln_inv_p = (1.0 / p).ln();
    let mean = (f64::from(n - 1) * (1.0 - p)).ln() / ln_inv_p + EULER_GAMMA / ln_inv_p + 0.5;
    let variance = std::f64::consts::PI.powi(2) / (ln_inv_p * ln_inv_p) + 1.0 / 12.0;
    Ok(Moments::new(mean, variance))
}

/// PMF of the number of idle vehicles on support 0..=n.
///
/// For 0 < p < 1 the probability of `r` idle vehicles is the Maclaurin
/// coefficient
/// `P(r) = p^{n+1}/(1-p)^2 * coeff_{x^{n-r}} [(1-x) / ((1-x)p/(1-p) - x^2)]^{r+1}`,
/// extracted by truncated-series arithmetic (a k-th derivative at 0 over k!
/// is exactly a series coefficient, so no differentiation is involved).
pub fn idle_cars_pmf(n: u32, p: &BigRational) -> Result<Pmf> {
    check_n(n)?;
    check_p(p)?;
    let nu = n as usize;
    let one = BigRational::one();

    if p.is_zero() || p == &one {
        // p = 0: every vehicle idle; p = 1: none.
        let mut probs = vec![BigRational::zero(); nu + 1];
        let hit = if p.is_zero() { nu } else { 0 };
        probs[hit] = BigRational::one();
        return Pmf::new(0, probs, PmfSource::Analytic);
    }

    let q = &one - p;
    let c = p / &q;
    let order = nu;

    // D(x) = c - c x - x^2, the denominator of the rational function.
    let mut d_coeffs = vec![BigRational::zero(); order + 1];
    d_coeffs[0] = c.clone();
    d_coeffs[1] = -c;
    d_coeffs[2] = -BigRational::one();
    let denom = Series::from_coeffs(d_coeffs)?;

    // T(x) = (1 - x) / D(x); P(r) needs coeff_{x^{n-r}} of T^{r+1}.
    let mut n_coeffs = vec![BigRational::zero(); order + 1];
    n_coeffs[0] = BigRational::one();
    n_coeffs[1] = -BigRational::one();
    let base = Series::from_coeffs(n_coeffs)?.mul(&denom.reciprocal()?)?;

    let prefactor = rat_pow(p, n + 1) / (&q * &q);
    let mut probs = vec![BigRational::zero(); nu + 1];
    let mut t_pow = base.clone(); // T^{r+1} for the current r
    for r in 0..=nu {
        let m = nu - r;
        probs[r] = &prefactor * t_pow.coeff(m)?;
        if r < nu {
            t_pow = t_pow.mul(&base)?;
        }
    }
    Pmf::new(0, probs, PmfSource::Analytic)
}

/// Mean `2(1-p) + (n-2)(1-p)^2` and the closed-form polynomial variance of
/// the idle-vehicle count.
pub fn idle_cars_moments(n: u32, p: &BigRational) -> Result<ExactMoments> {
    check_p(p)?;
    if n < 2 {
        return Err(Error::NetworkSize {
            n,
            min: 2,
            max: u32::MAX,
        });
    }
    let q = BigRational::one() - p;
    let mean = rat_u32(2) * &q + rat_u32(n - 2) * &q * &q;
    // The polynomial below needs the two boundary vehicles to have distinct
    // neighbor pairs, so n = 2 (where both vehicles are idle together) is a
    // separate case: the count is 2 * Bernoulli(1-p), variance 4p(1-p).
    let variance = if n == 2 {
        rat_u32(4) * p * &q
    } else {
        let nn = rat_u32(n);
        let p2 = p * p;
        let p3 = &p2 * p;
        let p4 = &p3 * p;
        -rat_u32(3) * &nn * &p4 + rat_u32(10) * &nn * &p3 - rat_u32(11) * &nn * &p2
            + rat_u32(4) * &nn * p
            + rat_u32(8) * &p4
            - rat_u32(22) * &p3
            + rat_u32(18) * &p2
            - rat_u32(4) * p
    };
    Ok(ExactMoments { mean, variance })
}
