//! Closed forms vs. exhaustive enumeration, as exact rational equality.
//!
//! Any formula bug — an index convention, a sign, a boundary case — shows up
//! here as a hard mismatch rather than a tolerance failure.

use num::rational::Ratio;
use num::BigRational;
use vanet_core::{analytic, oracle};

fn grid_p() -> Vec<BigRational> {
    vec![
        Ratio::new(1.into(), 10.into()),
        Ratio::new(1.into(), 2.into()),
        Ratio::new(9.into(), 10.into()),
    ]
}

#[test]
fn clust_num_pmf_equals_oracle() {
    for n in 2..=12 {
        for p in grid_p() {
            let exact = oracle::enumerate_pmfs(n, &p).unwrap();
            let closed = analytic::clust_num_pmf(n, &p).unwrap();
            assert_eq!(closed.probs(), exact.clust_num.probs(), "n={n} p={p}");
        }
    }
}

#[test]
fn clust_size_pmf_equals_oracle() {
    for n in 2..=12 {
        for p in grid_p() {
            let exact = oracle::enumerate_pmfs(n, &p).unwrap();
            let closed = analytic::clust_size_pmf(n, &p).unwrap();
            assert_eq!(closed.probs(), exact.clust_size.probs(), "n={n} p={p}");
        }
    }
}

#[test]
fn biggest_clust_pmf_equals_oracle() {
    for n in 2..=12 {
        for p in grid_p() {
            let exact = oracle::enumerate_pmfs(n, &p).unwrap();
            let closed = analytic::biggest_clust_pmf(n, &p).unwrap();
            assert_eq!(closed.probs(), exact.biggest_clust.probs(), "n={n} p={p}");
        }
    }
}

#[test]
fn idle_cars_pmf_equals_oracle() {
    for n in 2..=12 {
        for p in grid_p() {
            let exact = oracle::enumerate_pmfs(n, &p).unwrap();
            let closed = analytic::idle_cars_pmf(n, &p).unwrap();
            assert_eq!(closed.probs(), exact.idle_cars.probs(), "n={n} p={p}");
        }
    }
}

#[test]
fn oracle_moments_match_closed_forms_exactly() {
    for n in 2..=10 {
        for p in grid_p() {
            let exact = oracle::enumerate_pmfs(n, &p).unwrap();
            assert_eq!(
                exact.clust_num.exact_moments(),
                analytic::clust_num_moments(n, &p).unwrap(),
                "clust_num n={n}"
            );
            assert_eq!(
                exact.clust_size.exact_moments(),
                analytic::clust_size_moments(n, &p).unwrap(),
                "clust_size n={n}"
            );
            assert_eq!(
                exact.idle_cars.exact_moments(),
                analytic::idle_cars_moments(n, &p).unwrap(),
                "idle n={n}"
            );
            assert_eq!(
                exact.biggest_clust.exact_moments(),
                analytic::biggest_clust_moments_exact(n, &p).unwrap(),
                "biggest n={n}"
            );
        }
    }
}
