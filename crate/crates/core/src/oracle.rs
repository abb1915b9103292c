//! Brute-force ground truth by exhaustive enumeration.
//!
//! For a chain of `n` vehicles there are `2^(n-1)` link patterns. Each
//! pattern is weighted `p^#up * (1-p)^#down` and the four connectivity
//! statistics are read off directly, in exact rational arithmetic. Closed
//! forms elsewhere in the crate are tested against these PMFs for equality,
//! not approximate agreement.

use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::pmf::{Pmf, PmfSource};

/// Largest `n` the oracle will enumerate (2^15 patterns).
pub const MAX_ORACLE_N: u32 = 16;

/// The four exact PMFs produced by enumeration.
#[derive(Debug, Clone)]
pub struct OraclePmfs {
    pub clust_num: Pmf,
    pub clust_size: Pmf,
    pub biggest_clust: Pmf,
    pub idle_cars: Pmf,
}

/// Connectivity statistics of one link pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternStats {
    pub clust_num: u32,
    pub biggest_clust: u32,
    pub idle_cars: u32,
}

/// Decomposes a link pattern (bit i = link between vehicles i and i+1 up)
/// into maximal cluster sizes, in chain order.
pub fn cluster_sizes(n: u32, pattern: u32) -> Vec<u32> {
    let mut sizes = Vec::new();
    let mut current = 1u32;
    for gap in 0..n - 1 {
        if pattern >> gap & 1 == 1 {
            current += 1;
        } else {
            sizes.push(current);
            current = 1;
        }
    }
    sizes.push(current);
    sizes
}

/// Summary statistics of one pattern. An isolated vehicle counts as a
/// cluster of size 1, and a vehicle is idle exactly when it sits in such a
/// cluster.
pub fn pattern_stats(n: u32, pattern: u32) -> PatternStats {
    let sizes = cluster_sizes(n, pattern);
    PatternStats {
        clust_num: sizes.len() as u32,
        biggest_clust: *sizes.iter().max().expect("at least one cluster"),
        idle_cars: sizes.iter().filter(|&&s| s == 1).count() as u32,
    }
}

/// Enumerates all link patterns and returns the exact PMFs of cluster count,
/// cluster size, biggest cluster, and idle-vehicle count.
///
/// The cluster-size PMF is the distribution of the size of a cluster chosen
/// uniformly at random among the pattern's clusters: pattern weight times
/// `count(r) / clust` goes to size `r`.
pub fn enumerate_pmfs(n: u32, p: &BigRational) -> Result<OraclePmfs> {
    if !(2..=MAX_ORACLE_N).contains(&n) {
        return Err(Error::NetworkSize {
            n,
            min: 2,
            max: MAX_ORACLE_N,
        });
    }
    if p.is_negative() || *p > BigRational::one() {
        return Err(Error::ProbabilityRange(p.to_f64().unwrap_or(f64::NAN)));
    }

    let links = (n - 1) as usize;
    let q = BigRational::one() - p;
    let mut p_pow = vec![BigRational::one(); links + 1];
    let mut q_pow = vec![BigRational::one(); links + 1];
    for i in 1..=links {
        p_pow[i] = &p_pow[i - 1] * p;
        q_pow[i] = &q_pow[i - 1] * &q;
    }

    let nu = n as usize;
    let mut clust_num = vec![BigRational::zero(); nu]; // support 1..=n
    let mut clust_size = vec![BigRational::zero(); nu]; // support 1..=n
    let mut biggest = vec![BigRational::zero(); nu]; // support 1..=n
    let mut idle = vec![BigRational::zero(); nu + 1]; // support 0..=n

    for pattern in 0u32..1 << links {
        let up = pattern.count_ones() as usize;
        let weight = &p_pow[up] * &q_pow[links - up];

        let sizes = cluster_sizes(n, pattern);
        let clusters = sizes.len();
        let biggest_size = *sizes.iter().max().expect("nonempty") as usize;
        let idle_count = sizes.iter().filter(|&&s| s == 1).count();

        clust_num[clusters - 1] += &weight;
        biggest[biggest_size - 1] += &weight;
        idle[idle_count] += &weight;

        // count(r; pattern) / clust(pattern), folded in one pass
        let per_cluster = weight / BigRational::from_integer(clusters.into());
        for &s in &sizes {
            clust_size[s as usize - 1] += &per_cluster;
        }
    }

    Ok(OraclePmfs {
        clust_num: Pmf::new(1, clust_num, PmfSource::Oracle)?,
        clust_size: Pmf::new(1, clust_size, PmfSource::Oracle)?,
        biggest_clust: Pmf::new(1, biggest, PmfSource::Oracle)?,
        idle_cars: Pmf::new(0, idle, PmfSource::Oracle)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::Ratio;

    fn r(n: i64, d: i64) -> BigRational {
        Ratio::new(n.into(), d.into())
    }

    #[test]
    fn rejects_out_of_range_n() {
        assert!(enumerate_pmfs(1, &r(1, 2)).is_err());
        assert!(enumerate_pmfs(17, &r(1, 2)).is_err());
    }

    #[test]
    fn pattern_decomposition() {
        // n=5, links 1101 (lsb first: up, down, up, up): clusters [2, 3]
        assert_eq!(cluster_sizes(5, 0b1101), vec![2, 3]);
        let stats = pattern_stats(5, 0b1101);
        assert_eq!(stats.clust_num, 2);
        assert_eq!(stats.biggest_clust, 3);
        assert_eq!(stats.idle_cars, 0);
        assert_eq!(cluster_sizes(4, 0), vec![1, 1, 1, 1]);
        assert_eq!(pattern_stats(4, 0b111).biggest_clust, 4);
    }

    #[test]
    fn single_link_chain() {
        let pmfs = enumerate_pmfs(2, &r(3, 10)).unwrap();
        assert_eq!(pmfs.clust_num.prob(1), r(3, 10));
        assert_eq!(pmfs.clust_num.prob(2), r(7, 10));
    }

    #[test]
    fn three_cars_fair_links_idle_pmf() {
        let pmfs = enumerate_pmfs(3, &r(1, 2)).unwrap();
        assert_eq!(pmfs.idle_cars.prob(0), r(1, 4));
        assert_eq!(pmfs.idle_cars.prob(1), r(1, 2));
        assert_eq!(pmfs.idle_cars.prob(2), BigRational::zero());
        assert_eq!(pmfs.idle_cars.prob(3), r(1, 4));
    }

    #[test]
    fn four_cars_fair_links_cluster_count() {
        let pmfs = enumerate_pmfs(4, &r(1, 2)).unwrap();
        assert_eq!(pmfs.clust_num.prob(1), r(1, 8));
        assert_eq!(pmfs.clust_num.prob(2), r(3, 8));
        assert_eq!(pmfs.clust_num.prob(3), r(3, 8));
        assert_eq!(pmfs.clust_num.prob(4), r(1, 8));
    }

    #[test]
    fn cluster_size_mean_matches_closed_form() {
        // E[ClustSize] = (1 - p^n) / (1 - p), exercised across n and p.
        for n in 2..=12u32 {
            for p in [r(1, 10), r(1, 2), r(9, 10)] {
                let pmfs = enumerate_pmfs(n, &p).unwrap();
                let one = BigRational::one();
                let expected =
                    (&one - num::pow::pow(p.clone(), n as usize)) / (&one - &p);
                assert_eq!(pmfs.clust_size.mean(), expected, "n={n}");
            }
        }
    }

    #[test]
    fn idle_variance_three_cars() {
        let pmfs = enumerate_pmfs(3, &r(1, 2)).unwrap();
        assert_eq!(pmfs.idle_cars.variance(), r(19, 16));
    }

    #[test]
    fn degenerate_probabilities() {
        let pmfs = enumerate_pmfs(5, &BigRational::one()).unwrap();
        assert_eq!(pmfs.clust_num.prob(1), BigRational::one());
        assert_eq!(pmfs.idle_cars.prob(0), BigRational::one());
        let pmfs = enumerate_pmfs(5, &BigRational::zero()).unwrap();
        assert_eq!(pmfs.clust_num.prob(5), BigRational::one());
        assert_eq!(pmfs.idle_cars.prob(5), BigRational::one());
        assert_eq!(pmfs.biggest_clust.prob(1), BigRational::one());
    }
}
