//! Intervehicle distance distributions.
//!
//! The families cover the usual headway models: exponential for sparse
//! traffic, normal (truncated to positive distances) for dense traffic,
//! gamma and log-normal in between, plus a point mass for degenerate
//! fixed-spacing checks. Gamma uses the shape/scale parameterization and
//! log-normal takes the mean and standard deviation of `ln d`.

use rand_distr::Distribution;
use statrs::distribution::ContinuousCDF;

use crate::error::{Error, Result};
use crate::rng::TrialRng;

#[derive(Debug, Clone, PartialEq)]
pub enum SpacingModel {
    /// Density `rho * exp(-rho x)`; mean `1/rho` meters.
    Exponential { rate: f64 },
    /// Shape/scale gamma; mean `shape * scale`.
    Gamma { shape: f64, scale: f64 },
    /// `exp(N(mu, sigma^2))`; mu and sigma act on `ln d`.
    LogNormal { mu: f64, sigma: f64 },
    /// Normal truncated to d > 0 and renormalized.
    TruncatedNormal { mean: f64, std_dev: f64 },
    /// All probability at one distance.
    PointMass { distance: f64 },
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("must be positive and finite, got {value}"),
        });
    }
    Ok(())
}

impl SpacingModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SpacingModel::Exponential { rate } => require_positive("spacing.rho", rate),
            SpacingModel::Gamma { shape, scale } => {
                require_positive("spacing.shape", shape)?;
                require_positive("spacing.scale", scale)
            }
            SpacingModel::LogNormal { mu, sigma } => {
                if !mu.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "spacing.mu",
                        reason: format!("must be finite, got {mu}"),
                    });
                }
                require_positive("spacing.sigma", sigma)
            }
            SpacingModel::TruncatedNormal { mean, std_dev } => {
                require_positive("spacing.mean", mean)?;
                require_positive("spacing.sd", std_dev)
            }
            SpacingModel::PointMass { distance } => require_positive("spacing.d0", distance),
        }
    }

    /// Density at `x > 0` (per meter). A point mass has no density.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Err(Error::NonPositiveDistance(x));
        }
        match *self {
            SpacingModel::Exponential { rate } => Ok(rate * (-rate * x).exp()),
            SpacingModel::Gamma { shape, scale } => {
                use statrs::distribution::Continuous;
                let d = statrs::distribution::Gamma::new(shape, 1.0 / scale)
                    .map_err(|e| stats_err("spacing.gamma", e))?;
                Ok(d.pdf(x))
            }
            SpacingModel::LogNormal { mu, sigma } => {
                use statrs::distribution::Continuous;
                let d = statrs::distribution::LogNormal::new(mu, sigma)
                    .map_err(|e| stats_err("spacing.lognormal", e))?;
                Ok(d.pdf(x))
            }
            SpacingModel::TruncatedNormal { mean, std_dev } => {
                use statrs::distribution::Continuous;
                let d = statrs::distribution::Normal::new(mean, std_dev)
                    .map_err(|e| stats_err("spacing.truncated_normal", e))?;
                let mass_above_zero = 1.0 - d.cdf(0.0);
                Ok(d.pdf(x) / mass_above_zero)
            }
            SpacingModel::PointMass { .. } => Err(Error::PointMassDensity),
        }
    }

    /// CDF at `x > 0`; the point mass is the step function at its atom.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Err(Error::NonPositiveDistance(x));
        }
        match *self {
            SpacingModel::Exponential { rate } => Ok(1.0 - (-rate * x).exp()),
            SpacingModel::Gamma { shape, scale } => {
                let d = statrs::distribution::Gamma::new(shape, 1.0 / scale)
                    .map_err(|e| stats_err("spacing.gamma", e))?;
                Ok(d.cdf(x))
            }
            SpacingModel::LogNormal { mu, sigma } => {
                let d = statrs::distribution::LogNormal::new(mu, sigma)
                    .map_err(|e| stats_err("spacing.lognormal", e))?;
                Ok(d.cdf(x))
            }
            SpacingModel::TruncatedNormal { mean, std_dev } => {
                let d = statrs::distribution::Normal::new(mean, std_dev)
                    .map_err(|e| stats_err("spacing.truncated_normal", e))?;
                let below_zero = d.cdf(0.0);
                Ok((d.cdf(x) - below_zero) / (1.0 - below_zero))
            }
            SpacingModel::PointMass { distance } => Ok(if x >= distance { 1.0 } else { 0.0 }),
        }
    }

    /// Mean distance in meters.
    pub fn mean(&self) -> f64 {
        match *self {
            SpacingModel::Exponential { rate } => 1.0 / rate,
            SpacingModel::Gamma { shape, scale } => shape * scale,
            SpacingModel::LogNormal { mu, sigma } => (mu + 0.5 * sigma * sigma).exp(),
            SpacingModel::TruncatedNormal { mean, std_dev } => {
                let normal = statrs::distribution::Normal::new(0.0, 1.0).expect("unit normal");
                use statrs::distribution::Continuous;
                let alpha = -mean / std_dev;
                let z = 1.0 - normal.cdf(alpha);
                mean + std_dev * normal.pdf(alpha) / z
            }
            SpacingModel::PointMass { distance } => distance,
        }
    }

    /// One positive draw. Exponential inverts the CDF; gamma and log-normal
    /// use the standard transforms; truncated normal rejects nonpositive
    /// draws from the untruncated normal.
    pub fn sample(&self, rng: &mut TrialRng) -> f64 {
        match *self {
            SpacingModel::Exponential { rate } => {
                let u = 1.0 - rng.next_f64(); // in (0, 1]
                -u.ln() / rate
            }
            SpacingModel::Gamma { shape, scale } => {
                let d = rand_distr::Gamma::new(shape, scale).expect("validated parameters");
                d.sample(rng)
            }
            SpacingModel::LogNormal { mu, sigma } => {
                let d = rand_distr::LogNormal::new(mu, sigma).expect("validated parameters");
                d.sample(rng)
            }
            SpacingModel::TruncatedNormal { mean, std_dev } => {
                let d = rand_distr::Normal::new(mean, std_dev).expect("validated parameters");
                loop {
                    let x = d.sample(rng);
                    if x > 0.0 {
                        return x;
                    }
                }
            }
            SpacingModel::PointMass { distance } => distance,
        }
    }
}

fn stats_err(name: &'static str, e: impl std::fmt::Display) -> Error {
    Error::InvalidParameter {
        name,
        reason: e.to_string(),
    }
}
