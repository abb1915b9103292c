//! Floating-point fast path for network sizes beyond the rational range.
//!
//! The longest-run CDF is evaluated with a renewal recurrence over the link
//! sequence rather than the alternating closed form: the alternating terms
//! grow to ~exp(n(1-p)p^k) before cancelling, which no summation order can
//! recover in f64, while the recurrence only ever adds nonnegative numbers.
//! Agreement with the exact rational path is tested on the overlap range.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::pmf::Moments;

fn check_np(n: u32, p: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::NetworkSize {
            n,
            min: 2,
            max: u32::MAX,
        });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityRange(p));
    }
    Ok(())
}

fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_gamma((n + 1) as f64) - ln_gamma((k + 1) as f64) - ln_gamma((n - k + 1) as f64)
}

/// Cluster-count PMF as `probs[r]` for `r` in 1..=n (`probs[0]` is unused
/// and zero). Evaluated in log space so binomials stay finite for large `n`.
pub fn clust_num_pmf(n: u32, p: f64) -> Result<Vec<f64>> {
    check_np(n, p)?;
    let nu = n as usize;
    let mut probs = vec![0.0; nu + 1];
    if p == 1.0 {
        probs[1] = 1.0;
    } else if p == 0.0 {
        probs[nu] = 1.0;
    } else {
        let (lp, lq) = (p.ln(), (1.0 - p).ln());
        for r in 1..=nu {
            let ln_prob = ln_binomial(u64::from(n) - 1, r as u64 - 1)
                + (nu - r) as f64 * lp
                + (r - 1) as f64 * lq;
            probs[r] = ln_prob.exp();
        }
    }
    Ok(probs)
}

/// Cluster-size PMF as `probs[r]` for `r` in 1..=n.
pub fn clust_size_pmf(n: u32, p: f64) -> Result<Vec<f64>> {
    check_np(n, p)?;
    let nu = n as usize;
    let q = 1.0 - p;
    let mut probs = vec![0.0; nu + 1];
    for r in 1..nu {
        probs[r] = p.powi(r as i32 - 1) * q;
    }
    probs[nu] = p.powi(nu as i32 - 1);
    Ok(probs)
}

pub fn clust_num_moments(n: u32, p: f64) -> Result<Moments> {
    check_np(n, p)?;
    let q = 1.0 - p;
    let n1 = f64::from(n - 1);
    Ok(Moments::new(1.0 + n1 * q, n1 * p * q))
}

pub fn clust_size_moments(n: u32, p: f64) -> Result<Moments> {
    check_np(n, p)?;
    if p == 1.0 {
        return Ok(Moments::new(f64::from(n), 0.0));
    }
    let q = 1.0 - p;
    let nf = f64::from(n);
    let pn = p.powi(n as i32);
    let pn1 = pn * p;
    let mean = (1.0 - pn) / q;
    let variance = (2.0 * nf * pn1 - 2.0 * nf * pn - pn * pn - pn1 + pn + p) / (q * q);
    Ok(Moments::new(mean, variance))
}

pub fn connected_clust_num_mean(n: u32, p: f64) -> Result<f64> {
    check_np(n, p)?;
    let q = 1.0 - p;
    Ok(1.0 + f64::from(n - 1) * q - 2.0 * q - f64::from(n - 2) * q * q)
}

pub fn idle_cars_moments(n: u32, p: f64) -> Result<Moments> {
    check_np(n, p)?;
    let q = 1.0 - p;
    let nf = f64::from(n);
    let mean = 2.0 * q + (nf - 2.0) * q * q;
    // n = 2 is a separate case; see the rational implementation.
    let variance = if n == 2 {
        4.0 * p * q
    } else {
        -3.0 * nf * p.powi(4) + 10.0 * nf * p.powi(3) - 11.0 * nf * p.powi(2) + 4.0 * nf * p
            + 8.0 * p.powi(4)
            - 22.0 * p.powi(3)
            + 18.0 * p.powi(2)
            - 4.0 * p
    };
    Ok(Moments::new(mean, variance))
}

/// `g(k) = P(longest success run over n-1 links <= k-1)` via the renewal
/// recurrence `A(m) = sum_{i=1..k} p^{i-1}(1-p) A(m-i)` with `A(m) = 1` for
/// `m < k`, conditioning on the position of the first failed link.
pub fn longest_run_cdf(n: u32, p: f64, k: u32) -> Result<f64> {
    check_np(n, p)?;
    if !(1..n).contains(&k) {
        return Err(Error::RunLengthRange { k, max: n - 1 });
    }
    Ok(no_long_run_prob((n - 1) as usize, p, k as usize))
}

fn no_long_run_prob(trials: usize, p: f64, k: usize) -> f64 {
    let q = 1.0 - p;
    let mut a = vec![1.0f64; trials + 1];
    let mut p_pow = vec![1.0f64; k];
    for i in 1..k {
        p_pow[i] = p_pow[i - 1] * p;
    }
    for m in k..=trials {
        let mut acc = 0.0;
        for i in 1..=k {
            acc += p_pow[i - 1] * q * a[m - i];
        }
        a[m] = acc;
    }
    a[trials]
}

/// `g(r)` for every `r` in 1..=n-1, with the flat tail (`1 - g < 1e-16`)
/// filled without further recurrences.
fn longest_run_cdf_profile(n: u32, p: f64) -> Vec<f64> {
    let trials = (n - 1) as usize;
    let mut gs = Vec::with_capacity(trials);
    for r in 1..=trials {
        let g = no_long_run_prob(trials, p, r);
        gs.push(g);
        if 1.0 - g < 1e-16 {
            gs.resize(trials, 1.0);
            break;
        }
    }
    gs
}

/// Biggest-cluster PMF as `probs[r]` for `r` in 1..=n.
pub fn biggest_clust_pmf(n: u32, p: f64) -> Result<Vec<f64>> {
    check_np(n, p)?;
    let nu = n as usize;
    let gs = longest_run_cdf_profile(n, p);
    let mut probs = vec![0.0; nu + 1];
    probs[1] = gs[0];
    for r in 2..nu {
        probs[r] = (gs[r - 1] - gs[r - 2]).max(0.0);
    }
    probs[nu] = 1.0 - gs[nu - 2];
    Ok(probs)
}

/// Biggest-cluster mean and variance by CDF summation:
/// `E[X] = n - sum g(r)`, `E[X^2] = n^2 - sum (2r+1) g(r)`.
pub fn biggest_clust_moments(n: u32, p: f64) -> Result<Moments> {
    check_np(n, p)?;
    let gs = longest_run_cdf_profile(n, p);
    let nf = f64::from(n);
    let mut sum_g = 0.0;
    let mut sum_wg = 0.0;
    for (i, g) in gs.iter().enumerate() {
        let r = (i + 1) as f64;
        sum_g += g;
        sum_wg += (2.0 * r + 1.0) * g;
    }
    let mean = nf - sum_g;
    let second = nf * nf - sum_wg;
    Ok(Moments::new(mean, second - mean * mean))
}

/// Asymptotic biggest-cluster moments; see
/// [`super::biggest_clust_moments_asymptotic`].
pub fn biggest_clust_moments_asymptotic(n: u32, p: f64) -> Result<Moments> {
    super::biggest_clust_moments_asymptotic(n, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn degenerate_p_cluster_count() {
        let probs = clust_num_pmf(10, 1.0).unwrap();
        assert_eq!(probs[1], 1.0);
        let probs = clust_num_pmf(10, 0.0).unwrap();
        assert_eq!(probs[10], 1.0);
    }

    #[test]
    fn pmfs_normalize_for_large_n() {
        for n in [100u32, 500, 1000] {
            for p in [0.1, 0.5, 0.9] {
                let total: f64 = clust_num_pmf(n, p).unwrap().iter().sum();
                assert_abs_diff_eq!(total, 1.0, epsilon = 1e-9);
                let total: f64 = clust_size_pmf(n, p).unwrap().iter().sum();
                assert_abs_diff_eq!(total, 1.0, epsilon = 1e-9);
                let total: f64 = biggest_clust_pmf(n, p).unwrap().iter().sum();
                assert_abs_diff_eq!(total, 1.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn longest_run_cdf_boundary_values() {
        // g(n-1) = 1 - p^{n-1}; g(1) = (1-p)^{n-1}
        for n in [5u32, 20, 200] {
            for p in [0.2, 0.5, 0.9] {
                let g_top = longest_run_cdf(n, p, n - 1).unwrap();
                assert_abs_diff_eq!(g_top, 1.0 - p.powi(n as i32 - 1), epsilon = 1e-12);
                let g1 = longest_run_cdf(n, p, 1).unwrap();
                assert_abs_diff_eq!(g1, (1.0 - p).powi(n as i32 - 1), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn moments_match_pmf_summation() {
        let n = 200;
        let p = 0.6;
        let probs = biggest_clust_pmf(n, p).unwrap();
        let mean: f64 = probs.iter().enumerate().map(|(r, q)| r as f64 * q).sum();
        let second: f64 = probs
            .iter()
            .enumerate()
            .map(|(r, q)| (r * r) as f64 * q)
            .sum();
        let m = biggest_clust_moments(n, p).unwrap();
        assert_abs_diff_eq!(m.mean, mean, epsilon = 1e-9);
        assert_abs_diff_eq!(m.variance, second - mean * mean, epsilon = 1e-9);
    }

    #[test]
    fn run_length_bounds_checked() {
        assert!(longest_run_cdf(10, 0.5, 0).is_err());
        assert!(longest_run_cdf(10, 0.5, 10).is_err());
        assert!(longest_run_cdf(10, 1.5, 3).is_err());
    }
}
