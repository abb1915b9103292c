//! Scenario resolution: flat key=value config files with CLI-flag overrides.
//!
//! Config files are diff-able experiment records: one `key = value` per
//! line, `#` comments. Flags always win over file entries. The fully
//! resolved set is echoed into every output header.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use vanet_core::channel::{db_to_linear, dbm_to_watts};
use vanet_core::montecarlo::{LinkModel, LinkRealization, Scenario};
use vanet_core::{channel, ChannelParams, SpacingModel};

/// Keys understood in config files; anything else is rejected.
const KNOWN_KEYS: &[&str] = &[
    "n",
    "p",
    "trials",
    "seed",
    "realization",
    "channel",
    "channel.tx_power_dbm",
    "channel.gain_tx",
    "channel.gain_rx",
    "channel.carrier_freq_hz",
    "channel.path_loss_exp",
    "channel.snr_threshold_db",
    "channel.temperature_k",
    "channel.bandwidth_hz",
    "spacing.family",
    "spacing.rho",
    "spacing.shape",
    "spacing.scale",
    "spacing.mu",
    "spacing.sigma",
    "spacing.mean",
    "spacing.sd",
    "spacing.d0",
];

pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{}:{}: expected `key = value`", path.display(), lineno + 1);
        };
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            bail!("{}:{}: unknown key `{key}`", path.display(), lineno + 1);
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// `family:params` spacing syntax used on the command line.
pub fn parse_spacing_flag(text: &str) -> Result<SpacingModel> {
    let (family, params) = text
        .split_once(':')
        .with_context(|| format!("spacing `{text}` is not family:params"))?;
    let values: Vec<f64> = params
        .split(',')
        .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad number `{v}` in spacing `{text}`")))
        .collect::<Result<_>>()?;
    let expect = |count: usize| -> Result<()> {
        if values.len() != count {
            bail!("spacing family `{family}` takes {count} parameter(s), got {}", values.len());
        }
        Ok(())
    };
    let model = match family {
        "exp" | "exponential" => {
            expect(1)?;
            SpacingModel::Exponential { rate: values[0] }
        }
        "gamma" => {
            expect(2)?;
            SpacingModel::Gamma {
                shape: values[0],
                scale: values[1],
            }
        }
        "lognormal" => {
            expect(2)?;
            SpacingModel::LogNormal {
                mu: values[0],
                sigma: values[1],
            }
        }
        "truncnormal" | "normal" => {
            expect(2)?;
            SpacingModel::TruncatedNormal {
                mean: values[0],
                std_dev: values[1],
            }
        }
        "point" => {
            expect(1)?;
            SpacingModel::PointMass { distance: values[0] }
        }
        other => bail!("unknown spacing family `{other}`"),
    };
    model.validate()?;
    Ok(model)
}

fn spacing_from_entries(entries: &BTreeMap<String, String>) -> Result<Option<SpacingModel>> {
    let Some(family) = entries.get("spacing.family") else {
        return Ok(None);
    };
    let get = |key: &str| -> Result<f64> {
        entries
            .get(key)
            .with_context(|| format!("spacing.family = {family} needs `{key}`"))?
            .parse::<f64>()
            .with_context(|| format!("bad number for `{key}`"))
    };
    let model = match family.as_str() {
        "exp" | "exponential" => SpacingModel::Exponential {
            rate: get("spacing.rho")?,
        },
        "gamma" => SpacingModel::Gamma {
            shape: get("spacing.shape")?,
            scale: get("spacing.scale")?,
        },
        "lognormal" => SpacingModel::LogNormal {
            mu: get("spacing.mu")?,
            sigma: get("spacing.sigma")?,
        },
        "truncnormal" | "normal" => SpacingModel::TruncatedNormal {
            mean: get("spacing.mean")?,
            std_dev: get("spacing.sd")?,
        },
        "point" => SpacingModel::PointMass {
            distance: get("spacing.d0")?,
        },
        other => bail!("unknown spacing.family `{other}`"),
    };
    model.validate()?;
    Ok(Some(model))
}

/// Builds the channel from the preset name plus any `channel.*` overrides
/// (dBm/dB figures are converted to linear SI once, here).
fn channel_from_entries(
    preset: Option<&str>,
    entries: &BTreeMap<String, String>,
) -> Result<ChannelParams> {
    let mut params = match preset.unwrap_or("paper-sec4") {
        "paper-sec4" | "default" => ChannelParams::dsrc_short_range(),
        other => bail!("unknown channel preset `{other}` (expected `paper-sec4` or `default`)"),
    };
    let num = |key: &str| -> Result<Option<f64>> {
        entries
            .get(key)
            .map(|v| v.parse::<f64>().with_context(|| format!("bad number for `{key}`")))
            .transpose()
    };
    if let Some(v) = num("channel.tx_power_dbm")? {
        params.tx_power = dbm_to_watts(v);
    }
    if let Some(v) = num("channel.gain_tx")? {
        params.gain_tx = v;
    }
    if let Some(v) = num("channel.gain_rx")? {
        params.gain_rx = v;
    }
    if let Some(v) = num("channel.carrier_freq_hz")? {
        params.carrier_freq = v;
    }
    if let Some(v) = num("channel.path_loss_exp")? {
        params.path_loss_exp = v;
    }
    if let Some(v) = num("channel.snr_threshold_db")? {
        params.snr_threshold = db_to_linear(v);
    }
    if let Some(v) = num("channel.temperature_k")? {
        params.temperature = v;
    }
    if let Some(v) = num("channel.bandwidth_hz")? {
        params.bandwidth = v;
    }
    params.validate()?;
    Ok(params)
}

/// Everything a subcommand needs, after merging config file and flags.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub n: u32,
    pub trials: u64,
    pub seed: u64,
    pub fixed_p: Option<f64>,
    pub spacing: Option<SpacingModel>,
    pub channel: ChannelParams,
    pub realization: LinkRealization,
    /// Resolved key=value pairs echoed into output headers.
    pub entries: BTreeMap<String, String>,
}

/// Raw inputs from the command line (already parsed by clap).
#[derive(Debug, Default, Clone)]
pub struct RawInputs {
    pub config: Option<std::path::PathBuf>,
    pub n: Option<u32>,
    pub p: Option<f64>,
    pub spacing: Option<String>,
    pub channel: Option<String>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub snr_draw: bool,
}

pub fn resolve(raw: &RawInputs) -> Result<Resolved> {
    let mut entries = match &raw.config {
        Some(path) => parse_config_file(path)?,
        None => BTreeMap::new(),
    };

    if raw.p.is_some() && raw.spacing.is_some() {
        bail!("give either --p or --spacing, not both");
    }
    if let Some(n) = raw.n {
        entries.insert("n".into(), n.to_string());
    }
    if let Some(p) = raw.p {
        entries.insert("p".into(), p.to_string());
        // An explicit p shadows any file-provided spacing model.
        entries.retain(|k, _| !k.starts_with("spacing."));
    }
    if let Some(spacing) = &raw.spacing {
        entries.retain(|k, _| !k.starts_with("spacing."));
        entries.remove("p");
        store_spacing(&mut entries, parse_spacing_flag(spacing)?);
    }
    if let Some(channel) = &raw.channel {
        entries.insert("channel".into(), channel.clone());
    }
    if let Some(trials) = raw.trials {
        entries.insert("trials".into(), trials.to_string());
    }
    if let Some(seed) = raw.seed {
        entries.insert("seed".into(), seed.to_string());
    }
    if raw.snr_draw {
        entries.insert("realization".into(), "snr".into());
    }

    let n = entries
        .get("n")
        .context("network size missing: pass --n or set `n` in the config file")?
        .parse::<u32>()
        .context("bad value for n")?;
    let trials = entries
        .get("trials")
        .map(|v| v.parse::<u64>().context("bad value for trials"))
        .transpose()?
        .unwrap_or(100_000);
    let seed = entries
        .get("seed")
        .map(|v| v.parse::<u64>().context("bad value for seed"))
        .transpose()?
        .unwrap_or(1);
    let fixed_p = entries
        .get("p")
        .map(|v| v.parse::<f64>().context("bad value for p"))
        .transpose()?;
    if let Some(p) = fixed_p {
        if !(0.0..=1.0).contains(&p) {
            bail!("p = {p} outside [0, 1]");
        }
    }
    let realization = match entries.get("realization").map(String::as_str) {
        None | Some("threshold") => LinkRealization::ThresholdProb,
        Some("snr") => LinkRealization::SnrDraw,
        Some(other) => bail!("unknown realization `{other}` (expected threshold or snr)"),
    };
    let spacing = spacing_from_entries(&entries)?;
    let channel = channel_from_entries(entries.get("channel").map(String::as_str), &entries)?;

    if fixed_p.is_none() && spacing.is_none() {
        bail!("link model missing: pass --p or --spacing (or set them in the config file)");
    }

    Ok(Resolved {
        n,
        trials,
        seed,
        fixed_p,
        spacing,
        channel,
        realization,
        entries,
    })
}

fn store_spacing(entries: &mut BTreeMap<String, String>, model: SpacingModel) {
    let mut put = |k: &str, v: String| entries.insert(k.into(), v);
    match model {
        SpacingModel::Exponential { rate } => {
            put("spacing.family", "exponential".into());
            put("spacing.rho", rate.to_string());
        }
        SpacingModel::Gamma { shape, scale } => {
            put("spacing.family", "gamma".into());
            put("spacing.shape", shape.to_string());
            put("spacing.scale", scale.to_string());
        }
        SpacingModel::LogNormal { mu, sigma } => {
            put("spacing.family", "lognormal".into());
            put("spacing.mu", mu.to_string());
            put("spacing.sigma", sigma.to_string());
        }
        SpacingModel::TruncatedNormal { mean, std_dev } => {
            put("spacing.family", "truncnormal".into());
            put("spacing.mean", mean.to_string());
            put("spacing.sd", std_dev.to_string());
        }
        SpacingModel::PointMass { distance } => {
            put("spacing.family", "point".into());
            put("spacing.d0", distance.to_string());
        }
    }
}

impl Resolved {
    /// Marginal link probability and how it was obtained.
    pub fn link_probability(&self) -> Result<(f64, &'static str)> {
        if let Some(p) = self.fixed_p {
            return Ok((p, "fixed"));
        }
        let spacing = self.spacing.as_ref().expect("resolve() guarantees a link model");
        let derived = channel::derive_channel(&self.channel)?;
        let p = channel::connection_prob(&derived, &self.channel, spacing)?;
        Ok((p, "derived"))
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let link_model = match (self.fixed_p, &self.spacing) {
            (Some(p), _) => LinkModel::FixedP(p),
            (None, Some(spacing)) => LinkModel::Physical {
                channel: self.channel.clone(),
                spacing: spacing.clone(),
            },
            (None, None) => unreachable!("resolve() guarantees a link model"),
        };
        Ok(Scenario::new(self.n, self.trials, self.seed, link_model)?
            .with_realization(self.realization))
    }
}
