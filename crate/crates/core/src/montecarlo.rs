//! Seeded stochastic simulator.
//!
//! Each trial draws the n-1 link states (either from the physical
//! channel/spacing model or a fixed link probability), then records the
//! cluster count, the size of one uniformly chosen cluster, the biggest
//! cluster, and the idle-vehicle count. Trials are independent; every trial
//! derives its RNG stream from `(seed, trial index)`, so the result is
//! bit-identical no matter how trials are sharded across threads.

use rayon::prelude::*;

use crate::channel::{self, ChannelParams, DerivedChannel};
use crate::error::{Error, Result};
use crate::pmf::{Moments, Pmf, PmfSource};
use crate::rng::TrialRng;
use crate::spacing::SpacingModel;

/// How consecutive vehicles connect.
#[derive(Debug, Clone, PartialEq)]
pub enum LinkModel {
    /// Distances drawn from `spacing`, links realized through the fading
    /// channel.
    Physical {
        channel: ChannelParams,
        spacing: SpacingModel,
    },
    /// Every link is an independent Bernoulli(p).
    FixedP(f64),
}

/// Two equivalent ways to realize a physical link; both leave the link up
/// with probability `exp(-Psi/gamma_bar(d))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinkRealization {
    /// Compare one uniform draw against the closed-form exceedance
    /// probability.
    #[default]
    ThresholdProb,
    /// Draw the instantaneous SNR (exponential with the distance-dependent
    /// mean) and compare it against the threshold.
    SnrDraw,
}

/// One simulation configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub n: u32,
    pub trials: u64,
    pub seed: u64,
    pub link_model: LinkModel,
    pub realization: LinkRealization,
}

impl Scenario {
    pub fn new(n: u32, trials: u64, seed: u64, link_model: LinkModel) -> Result<Self> {
        let scenario = Scenario {
            n,
            trials,
            seed,
            link_model,
            realization: LinkRealization::default(),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn with_realization(mut self, realization: LinkRealization) -> Self {
        self.realization = realization;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::NetworkSize {
                n: self.n,
                min: 2,
                max: u32::MAX,
            });
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter {
                name: "trials",
                reason: "need at least one trial".into(),
            });
        }
        match &self.link_model {
            LinkModel::Physical { channel, spacing } => {
                channel.validate()?;
                spacing.validate()
            }
            LinkModel::FixedP(p) => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::ProbabilityRange(*p));
                }
                Ok(())
            }
        }
    }

    /// Marginal link probability implied by the model (by quadrature in
    /// physical mode).
    pub fn link_prob(&self) -> Result<f64> {
        match &self.link_model {
            LinkModel::Physical { channel, spacing } => {
                let derived = channel::derive_channel(channel)?;
                channel::connection_prob(&derived, channel, spacing)
            }
            LinkModel::FixedP(p) => Ok(*p),
        }
    }
}

/// Counts over a contiguous integer support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    support_min: i64,
    counts: Vec<u64>,
}

impl Histogram {
    fn new(support_min: i64, len: usize) -> Self {
        Histogram {
            support_min,
            counts: vec![0; len],
        }
    }

    pub fn support_min(&self) -> i64 {
        self.support_min
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Exact empirical PMF (`count / total` per support point).
    pub fn to_pmf(&self) -> Result<Pmf> {
        let total = self.total();
        if total == 0 {
            return Err(Error::InvalidParameter {
                name: "histogram",
                reason: "no observations".into(),
            });
        }
        let probs = self
            .counts
            .iter()
            .map(|&c| num::BigRational::new(c.into(), total.into()))
            .collect();
        Pmf::new(self.support_min, probs, PmfSource::Empirical)
    }

    /// Sample mean and unbiased (n-1 denominator) sample variance.
    pub fn sample_moments(&self) -> Moments {
        let total = self.total();
        let tf = total as f64;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for (i, &c) in self.counts.iter().enumerate() {
            let value = (self.support_min + i as i64) as f64;
            let cf = c as f64;
            sum += cf * value;
            sum_sq += cf * value * value;
        }
        let mean = sum / tf;
        let variance = if total > 1 {
            (sum_sq - tf * mean * mean) / (tf - 1.0)
        } else {
            0.0
        };
        Moments::new(mean, variance)
    }

    fn merge(mut self, other: Histogram) -> Histogram {
        debug_assert_eq!(self.support_min, other.support_min);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self
    }
}

/// Empirical distributions of the four statistics for one scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalResult {
    pub n: u32,
    pub trials: u64,
    pub seed: u64,
    pub clust_num: Histogram,
    pub clust_size: Histogram,
    pub biggest_clust: Histogram,
    pub idle_cars: Histogram,
}

struct Accum {
    clust_num: Histogram,
    clust_size: Histogram,
    biggest_clust: Histogram,
    idle_cars: Histogram,
}

impl Accum {
    fn new(n: u32) -> Self {
        let nu = n as usize;
        Accum {
            clust_num: Histogram::new(1, nu),
            clust_size: Histogram::new(1, nu),
            biggest_clust: Histogram::new(1, nu),
            idle_cars: Histogram::new(0, nu + 1),
        }
    }

    fn merge(self, other: Accum) -> Accum {
        Accum {
            clust_num: self.clust_num.merge(other.clust_num),
            clust_size: self.clust_size.merge(other.clust_size),
            biggest_clust: self.biggest_clust.merge(other.biggest_clust),
            idle_cars: self.idle_cars.merge(other.idle_cars),
        }
    }
}

/// Per-gap link realizer with everything precomputed.
enum LinkSampler<'a> {
    Fixed(f64),
    Threshold {
        spacing: &'a SpacingModel,
        decay: f64,
        alpha: f64,
    },
    Snr {
        spacing: &'a SpacingModel,
        params: &'a ChannelParams,
        derived: DerivedChannel,
    },
}

impl LinkSampler<'_> {
    #[inline]
    fn draw(&self, rng: &mut TrialRng) -> bool {
        match self {
            LinkSampler::Fixed(p) => rng.next_bool(*p),
            LinkSampler::Threshold {
                spacing,
                decay,
                alpha,
            } => {
                let d = spacing.sample(rng);
                let up_prob = (-decay * d.powf(*alpha)).exp();
                rng.next_bool(up_prob)
            }
            LinkSampler::Snr {
                spacing,
                params,
                derived,
            } => {
                let d = spacing.sample(rng);
                let gamma_bar = channel::mean_snr(derived, params, d).expect("positive distance");
                let u = 1.0 - rng.next_f64(); // (0, 1]
                let snr = -gamma_bar * u.ln();
                snr > params.snr_threshold
            }
        }
    }
}

/// Runs every trial of the scenario (in parallel) and accumulates the four
/// histograms.
pub fn run(scenario: &Scenario) -> Result<EmpiricalResult> {
    scenario.validate()?;

    let sampler = match (&scenario.link_model, scenario.realization) {
        (LinkModel::FixedP(p), _) => LinkSampler::Fixed(*p),
        (LinkModel::Physical { channel, spacing }, LinkRealization::ThresholdProb) => {
            let derived = channel::derive_channel(channel)?;
            LinkSampler::Threshold {
                spacing,
                decay: channel.snr_threshold * derived.noise_power
                    / (channel.tx_power * derived.k_const),
                alpha: channel.path_loss_exp,
            }
        }
        (LinkModel::Physical { channel, spacing }, LinkRealization::SnrDraw) => {
            let derived = channel::derive_channel(channel)?;
            LinkSampler::Snr {
                spacing,
                params: channel,
                derived,
            }
        }
    };

    let n = scenario.n;
    let accum = (0..scenario.trials)
        .into_par_iter()
        .fold(
            || Accum::new(n),
            |mut acc, trial| {
                let mut rng = TrialRng::for_trial(scenario.seed, trial);
                run_trial(n, &sampler, &mut rng, &mut acc);
                acc
            },
        )
        .reduce(|| Accum::new(n), Accum::merge);

    Ok(EmpiricalResult {
        n,
        trials: scenario.trials,
        seed: scenario.seed,
        clust_num: accum.clust_num,
        clust_size: accum.clust_size,
        biggest_clust: accum.biggest_clust,
        idle_cars: accum.idle_cars,
    })
}

fn run_trial(n: u32, sampler: &LinkSampler<'_>, rng: &mut TrialRng, acc: &mut Accum) {
    let mut sizes: Vec<u32> = Vec::with_capacity(n as usize);
    let mut current = 1u32;
    for _ in 0..n - 1 {
        if sampler.draw(rng) {
            current += 1;
        } else {
            sizes.push(current);
            current = 1;
        }
    }
    sizes.push(current);

    let clust_num = sizes.len();
    let biggest = *sizes.iter().max().expect("at least one cluster") as usize;
    let idle = sizes.iter().filter(|&&s| s == 1).count();
    // One uniformly chosen cluster per trial keeps the size histogram
    // aligned with the count(r)/clust weighting of the analytic PMF.
    let chosen = sizes[rng.next_index(clust_num)] as usize;

    acc.clust_num.counts[clust_num - 1] += 1;
    acc.clust_size.counts[chosen - 1] += 1;
    acc.biggest_clust.counts[biggest - 1] += 1;
    acc.idle_cars.counts[idle] += 1;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;
    use crate::oracle;
    use num::BigRational;

    fn fixed(n: u32, trials: u64, seed: u64, p: f64) -> Scenario {
        Scenario::new(n, trials, seed, LinkModel::FixedP(p)).unwrap()
    }

    #[test]
    fn validation_rejects_bad_scenarios() {
        assert!(Scenario::new(1, 10, 0, LinkModel::FixedP(0.5)).is_err());
        assert!(Scenario::new(5, 0, 0, LinkModel::FixedP(0.5)).is_err());
        assert!(Scenario::new(5, 10, 0, LinkModel::FixedP(1.5)).is_err());
    }

    #[test]
    fn fully_connected_when_p_is_one() {
        let result = run(&fixed(9, 500, 3, 1.0)).unwrap();
        assert_eq!(result.clust_num.counts()[0], 500);
        assert_eq!(result.idle_cars.counts()[0], 500);
        assert_eq!(result.biggest_clust.counts()[8], 500);
        assert_eq!(result.clust_size.counts()[8], 500);
    }

    #[test]
    fn identical_seeds_are_bit_identical() {
        let scenario = fixed(10, 20_000, 99, 0.6);
        let a = run(&scenario).unwrap();
        let b = run(&scenario).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn result_independent_of_thread_count() {
        let scenario = fixed(8, 30_000, 17, 0.4);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = pool.install(|| run(&scenario)).unwrap();
        let parallel = run(&scenario).unwrap();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn histogram_totals_match_trials() {
        let result = run(&fixed(7, 12_345, 5, 0.3)).unwrap();
        for h in [
            &result.clust_num,
            &result.clust_size,
            &result.biggest_clust,
            &result.idle_cars,
        ] {
            assert_eq!(h.total(), 12_345);
        }
    }

    #[test]
    fn converges_to_oracle_distributions() {
        let n = 8;
        let p = 0.55;
        let result = run(&fixed(n, 100_000, 42, p)).unwrap();
        let exact = oracle::enumerate_pmfs(n, &BigRational::from_float(p).unwrap()).unwrap();
        assert!(result.clust_num.to_pmf().unwrap().tv_distance(&exact.clust_num) < 0.01);
        assert!(result.clust_size.to_pmf().unwrap().tv_distance(&exact.clust_size) < 0.01);
        assert!(
            result
                .biggest_clust
                .to_pmf()
                .unwrap()
                .tv_distance(&exact.biggest_clust)
                < 0.01
        );
        assert!(result.idle_cars.to_pmf().unwrap().tv_distance(&exact.idle_cars) < 0.01);
    }

    #[test]
    fn realizations_agree_in_distribution() {
        let channel = ChannelParams::dsrc_short_range();
        let spacing = SpacingModel::Exponential { rate: 0.01 };
        let base = Scenario::new(
            10,
            60_000,
            11,
            LinkModel::Physical {
                channel,
                spacing,
            },
        )
        .unwrap();
        let threshold = run(&base).unwrap();
        let snr = run(&base.clone().with_realization(LinkRealization::SnrDraw)).unwrap();
        for (a, b) in [
            (&threshold.clust_num, &snr.clust_num),
            (&threshold.biggest_clust, &snr.biggest_clust),
            (&threshold.idle_cars, &snr.idle_cars),
            (&threshold.clust_size, &snr.clust_size),
        ] {
            let tv = a.to_pmf().unwrap().tv_distance(&b.to_pmf().unwrap());
            assert!(tv < 0.015, "realizations diverge: tv = {tv}");
        }
    }

    #[test]
    fn point_mass_matches_fixed_probability() {
        let channel = ChannelParams::dsrc_short_range();
        let derived = channel::derive_channel(&channel).unwrap();
        let d0 = 90.0;
        let p = channel::link_connect_prob(&derived, &channel, d0).unwrap();
        let physical = run(&Scenario::new(
            9,
            100_000,
            8,
            LinkModel::Physical {
                channel: channel.clone(),
                spacing: SpacingModel::PointMass { distance: d0 },
            },
        )
        .unwrap())
        .unwrap();
        let direct = run(&fixed(9, 100_000, 9, p)).unwrap();
        let tv = physical
            .biggest_clust
            .to_pmf()
            .unwrap()
            .tv_distance(&direct.biggest_clust.to_pmf().unwrap());
        assert!(tv < 0.01, "tv = {tv}");
    }

    #[test]
    fn sample_moments_track_analytic() {
        let n = 12;
        let p = 0.7;
        let result = run(&fixed(n, 200_000, 21, p)).unwrap();
        let m = result.clust_num.sample_moments();
        let exact = analytic::float::clust_num_moments(n, p).unwrap();
        assert!((m.mean - exact.mean).abs() < 0.02, "{} vs {}", m.mean, exact.mean);
        assert!((m.variance - exact.variance).abs() < 0.05);
    }
}
