//! Rayleigh-fading link model.
//!
//! The mean SNR over a gap of `d` meters is `P_tx K / (d^alpha W)` with the
//! path-loss constant `K = G_T G_R C^2 / (4 pi f_c)^2` and thermal noise
//! `W = k_B T0 B`. Under Rayleigh fading the instantaneous SNR is
//! exponential with that mean, so a link comes up with probability
//! `exp(-Psi d^alpha W / (P_tx K))`; averaging over the spacing density
//! gives the marginal connection probability `p`.

use crate::error::{Error, Result};
use crate::quad;
use crate::spacing::SpacingModel;

pub const SPEED_OF_LIGHT: f64 = 2.99792458e8;
/// Boltzmann constant as rounded in the reference parameter tables; kept at
/// this precision so derived probabilities match the published scenarios.
pub const BOLTZMANN: f64 = 1.38e-23;

/// Absolute tolerance for the spacing-average integration.
pub const CONNECTION_PROB_TOL: f64 = 1e-7;

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * (watts * 1e3).log10()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Physical-layer parameters, all in linear SI units. Use [`dbm_to_watts`]
/// and [`db_to_linear`] when ingesting dBm/dB figures.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    /// Transmit power in watts.
    pub tx_power: f64,
    pub gain_tx: f64,
    pub gain_rx: f64,
    /// Carrier frequency in hertz.
    pub carrier_freq: f64,
    /// Path-loss exponent alpha.
    pub path_loss_exp: f64,
    /// Linear SNR threshold Psi.
    pub snr_threshold: f64,
    /// Ambient temperature in kelvin.
    pub temperature: f64,
    /// Bandwidth in hertz.
    pub bandwidth: f64,
}

impl ChannelParams {
    /// Short-range 5.9 GHz parameter set used by the bundled scenarios:
    /// unit antenna gains, alpha = 2.5, 300 K, 10 MHz, 10 dB threshold,
    /// 4 dBm transmit power.
    pub fn dsrc_short_range() -> Self {
        ChannelParams {
            tx_power: dbm_to_watts(4.0),
            gain_tx: 1.0,
            gain_rx: 1.0,
            carrier_freq: 5.9e9,
            path_loss_exp: 2.5,
            snr_threshold: db_to_linear(10.0),
            temperature: 300.0,
            bandwidth: 10e6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("channel.tx_power", self.tx_power),
            ("channel.gain_tx", self.gain_tx),
            ("channel.gain_rx", self.gain_rx),
            ("channel.carrier_freq", self.carrier_freq),
            ("channel.path_loss_exp", self.path_loss_exp),
            ("channel.snr_threshold", self.snr_threshold),
            ("channel.temperature", self.temperature),
            ("channel.bandwidth", self.bandwidth),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be positive and finite, got {value}"),
                });
            }
        }
        if self.path_loss_exp < 1.0 {
            return Err(Error::InvalidParameter {
                name: "channel.path_loss_exp",
                reason: format!("must be >= 1, got {}", self.path_loss_exp),
            });
        }
        Ok(())
    }
}

/// Quantities derived once from [`ChannelParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedChannel {
    /// Path-loss constant K (dimensionless).
    pub k_const: f64,
    /// Thermal noise power W in watts.
    pub noise_power: f64,
}

pub fn derive_channel(params: &ChannelParams) -> Result<DerivedChannel> {
    params.validate()?;
    let k_const = params.gain_tx * params.gain_rx * SPEED_OF_LIGHT * SPEED_OF_LIGHT
        / (4.0 * std::f64::consts::PI * params.carrier_freq).powi(2);
    let noise_power = BOLTZMANN * params.temperature * params.bandwidth;
    Ok(DerivedChannel {
        k_const,
        noise_power,
    })
}

/// Mean SNR at separation `distance` meters: `P_tx K / (d^alpha W)`.
pub fn mean_snr(derived: &DerivedChannel, params: &ChannelParams, distance: f64) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::NonPositiveDistance(distance));
    }
    Ok(params.tx_power * derived.k_const / (distance.powf(params.path_loss_exp) * derived.noise_power))
}

/// Probability the instantaneous SNR exceeds the threshold at a fixed
/// separation: `exp(-Psi d^alpha W / (P_tx K))`.
pub fn link_connect_prob(
    derived: &DerivedChannel,
    params: &ChannelParams,
    distance: f64,
) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::NonPositiveDistance(distance));
    }
    let exponent = params.snr_threshold * distance.powf(params.path_loss_exp)
        * derived.noise_power
        / (params.tx_power * derived.k_const);
    Ok((-exponent).exp())
}

/// Marginal connection probability `p`: the threshold-exceedance probability
/// averaged over the spacing density by adaptive quadrature (absolute
/// tolerance [`CONNECTION_PROB_TOL`]). A point-mass spacing reduces to
/// [`link_connect_prob`] at the atom.
pub fn connection_prob(
    derived: &DerivedChannel,
    params: &ChannelParams,
    spacing: &SpacingModel,
) -> Result<f64> {
    connection_prob_with_budget(derived, params, spacing, quad::DEFAULT_MAX_EVALS)
}

/// [`connection_prob`] with an explicit integrand-evaluation budget.
pub fn connection_prob_with_budget(
    derived: &DerivedChannel,
    params: &ChannelParams,
    spacing: &SpacingModel,
    max_evals: usize,
) -> Result<f64> {
    spacing.validate()?;
    if let SpacingModel::PointMass { distance } = *spacing {
        return link_connect_prob(derived, params, distance);
    }
    let rate = params.snr_threshold * derived.noise_power / (params.tx_power * derived.k_const);
    let alpha = params.path_loss_exp;
    let result = quad::integrate_semi_infinite(
        |x| {
            if x <= 0.0 {
                return 0.0;
            }
            let density = spacing.pdf(x).expect("positive x");
            if density == 0.0 {
                0.0
            } else {
                (-rate * x.powf(alpha)).exp() * density
            }
        },
        CONNECTION_PROB_TOL,
        max_evals,
    )?;

    let slack = CONNECTION_PROB_TOL + result.error_bound;
    let p = result.value;
    if p < 0.0 {
        return if -p <= slack { Ok(0.0) } else { Err(improper_density(p)) };
    }
    if p > 1.0 {
        return if p - 1.0 <= slack { Ok(1.0) } else { Err(improper_density(p)) };
    }
    Ok(p)
}

fn improper_density(p: f64) -> Error {
    Error::InvalidParameter {
        name: "spacing",
        reason: format!(
            "averaged connection probability {p} is outside [0, 1]; the density does not integrate to 1"
        ),
    }
}
