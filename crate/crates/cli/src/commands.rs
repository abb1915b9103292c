//! Subcommand implementations.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use num::BigRational;
use num::ToPrimitive;

use vanet_core::montecarlo::{self, EmpiricalResult};
use vanet_core::pmf::Pmf;
use vanet_core::{analytic, oracle};

use crate::config::Resolved;
use crate::output::{Format, MomentRow, OutputDoc, StatBlock};

fn to_f64_vec(pmf: &Pmf) -> Vec<f64> {
    pmf.probs()
        .iter()
        .map(|q| q.to_f64().unwrap_or(f64::NAN))
        .collect()
}

fn rational_p(p: f64) -> Result<BigRational> {
    BigRational::from_float(p).context("link probability is not finite")
}

struct AnalyticSet {
    clust_num: Pmf,
    clust_size: Pmf,
    biggest_clust: Pmf,
    idle_cars: Pmf,
}

fn analytic_set(n: u32, p: &BigRational) -> Result<AnalyticSet> {
    Ok(AnalyticSet {
        clust_num: analytic::clust_num_pmf(n, p)?,
        clust_size: analytic::clust_size_pmf(n, p)?,
        biggest_clust: analytic::biggest_clust_pmf(n, p)?,
        idle_cars: analytic::idle_cars_pmf(n, p)?,
    })
}

impl AnalyticSet {
    fn by_name(&self, name: &str) -> &Pmf {
        match name {
            "clust_num" => &self.clust_num,
            "clust_size" => &self.clust_size,
            "biggest_clust" => &self.biggest_clust,
            "idle_cars" => &self.idle_cars,
            other => unreachable!("unknown statistic {other}"),
        }
    }
}

// idle_cars spans 0..=n, the other statistics 1..=n
fn stat_blocks_template() -> Vec<StatBlock> {
    vec![
        StatBlock::new("clust_num", 1),
        StatBlock::new("clust_size", 1),
        StatBlock::new("biggest_clust", 1),
        StatBlock::new("idle_cars", 0),
    ]
}

fn fill_analytic(blocks: &mut [StatBlock], set: &AnalyticSet) {
    for block in blocks.iter_mut() {
        block.analytic = Some(to_f64_vec(set.by_name(&block.name)));
    }
}

fn empirical_pmfs(result: &EmpiricalResult) -> Result<[Pmf; 4]> {
    Ok([
        result.clust_num.to_pmf()?,
        result.clust_size.to_pmf()?,
        result.biggest_clust.to_pmf()?,
        result.idle_cars.to_pmf()?,
    ])
}

fn fill_empirical(blocks: &mut [StatBlock], pmfs: &[Pmf; 4]) {
    for (block, pmf) in blocks.iter_mut().zip(pmfs) {
        block.empirical = Some(to_f64_vec(pmf));
    }
}

fn analytic_moment_rows(n: u32, p: &BigRational, pf: f64, set: &AnalyticSet) -> Result<Vec<MomentRow>> {
    let mut rows = Vec::new();
    let mut push = |statistic: &str, source: &str, mean: f64, variance: Option<f64>| {
        rows.push(MomentRow {
            statistic: statistic.into(),
            source: source.into(),
            mean,
            variance,
        });
    };

    let closed = analytic::clust_num_moments(n, p)?.to_f64();
    push("clust_num", "closed_form", closed.mean, Some(closed.variance));
    let summed = set.clust_num.moments();
    push("clust_num", "pmf", summed.mean, Some(summed.variance));

    let closed = analytic::clust_size_moments(n, p)?.to_f64();
    push("clust_size", "closed_form", closed.mean, Some(closed.variance));
    let summed = set.clust_size.moments();
    push("clust_size", "pmf", summed.mean, Some(summed.variance));

    let summed = set.biggest_clust.moments();
    push("biggest_clust", "pmf", summed.mean, Some(summed.variance));
    if n >= 3 && pf > 0.0 && pf < 1.0 {
        let asym = analytic::biggest_clust_moments_asymptotic(n, pf)?;
        push("biggest_clust", "asymptotic", asym.mean, Some(asym.variance));
    }

    let closed = analytic::idle_cars_moments(n, p)?.to_f64();
    push("idle_cars", "closed_form", closed.mean, Some(closed.variance));
    let summed = set.idle_cars.moments();
    push("idle_cars", "pmf", summed.mean, Some(summed.variance));

    let connected = analytic::connected_clust_num_mean(n, p)?;
    push(
        "connected_clust_num",
        "closed_form",
        connected.to_f64().unwrap_or(f64::NAN),
        None,
    );
    Ok(rows)
}

fn empirical_moment_rows(result: &EmpiricalResult) -> Vec<MomentRow> {
    [
        ("clust_num", &result.clust_num),
        ("clust_size", &result.clust_size),
        ("biggest_clust", &result.biggest_clust),
        ("idle_cars", &result.idle_cars),
    ]
    .into_iter()
    .map(|(name, hist)| {
        let m = hist.sample_moments();
        MomentRow {
            statistic: name.into(),
            source: "empirical".into(),
            mean: m.mean,
            variance: Some(m.variance),
        }
    })
    .collect()
}

fn base_doc(command: &str, resolved: &Resolved) -> Result<(OutputDoc, f64)> {
    let (p, p_source) = resolved.link_probability()?;
    let mut doc = OutputDoc::new(command, &resolved.entries);
    doc.set_meta("n", resolved.n);
    doc.set_meta("p", format!("{p:.10}"));
    doc.set_meta("p_source", p_source);
    doc.set_meta("seed", resolved.seed);
    Ok((doc, p))
}

/// Closed-form tables for one scenario.
pub fn analyze(resolved: &Resolved, out: Option<&Path>, format: Format) -> Result<()> {
    let doc = build_analyze_doc(resolved)?;
    doc.write(out, format)?;
    Ok(())
}

fn build_analyze_doc(resolved: &Resolved) -> Result<OutputDoc> {
    let (mut doc, p) = base_doc("analyze", resolved)?;
    let pr = rational_p(p)?;
    let set = analytic_set(resolved.n, &pr)?;
    let mut blocks = stat_blocks_template();
    fill_analytic(&mut blocks, &set);
    doc.statistics = blocks;
    doc.moments = analytic_moment_rows(resolved.n, &pr, p, &set)?;
    Ok(doc)
}

/// Monte Carlo tables; `--compare` co-emits the analytic columns and
/// per-statistic total-variation distances.
pub fn simulate(
    resolved: &Resolved,
    compare: bool,
    out: Option<&Path>,
    format: Format,
) -> Result<()> {
    let (mut doc, p) = base_doc("simulate", resolved)?;
    doc.set_meta("trials", resolved.trials);
    doc.set_meta("variance_estimator", "unbiased (n-1 denominator)");
    let scenario = resolved.scenario()?;
    let result = montecarlo::run(&scenario)?;
    let pmfs = empirical_pmfs(&result)?;
    let mut blocks = stat_blocks_template();
    fill_empirical(&mut blocks, &pmfs);
    doc.moments = empirical_moment_rows(&result);

    if compare {
        let pr = rational_p(p)?;
        let set = analytic_set(resolved.n, &pr)
            .context("--compare needs the closed forms, which support n <= 64")?;
        fill_analytic(&mut blocks, &set);
        for (block, empirical) in blocks.iter().zip(&pmfs) {
            let tv = empirical.tv_distance(set.by_name(&block.name));
            doc.tv_distance.insert(block.name.clone(), tv);
        }
        doc.moments
            .extend(analytic_moment_rows(resolved.n, &pr, p, &set)?);
    }

    doc.statistics = blocks;
    doc.write(out, format)?;
    Ok(())
}

/// Exhaustive-enumeration tables (n <= 16).
pub fn oracle_cmd(resolved: &Resolved, out: Option<&Path>, format: Format) -> Result<()> {
    let (mut doc, p) = base_doc("oracle", resolved)?;
    let pr = rational_p(p)?;
    let pmfs = oracle::enumerate_pmfs(resolved.n, &pr)?;
    let named = [
        ("clust_num", &pmfs.clust_num),
        ("clust_size", &pmfs.clust_size),
        ("biggest_clust", &pmfs.biggest_clust),
        ("idle_cars", &pmfs.idle_cars),
    ];
    let mut blocks = stat_blocks_template();
    for (block, (name, pmf)) in blocks.iter_mut().zip(named) {
        debug_assert_eq!(block.name, name);
        block.oracle = Some(to_f64_vec(pmf));
        let m = pmf.moments();
        doc.moments.push(MomentRow {
            statistic: name.into(),
            source: "oracle".into(),
            mean: m.mean,
            variance: Some(m.variance),
        });
    }
    doc.statistics = blocks;
    doc.write(out, format)?;
    Ok(())
}

/// All three routes side by side with TV distances.
pub fn compare(resolved: &Resolved, out: Option<&Path>, format: Format) -> Result<()> {
    let (mut doc, p) = base_doc("compare", resolved)?;
    doc.set_meta("trials", resolved.trials);
    let pr = rational_p(p)?;

    let set = analytic_set(resolved.n, &pr)?;
    let result = montecarlo::run(&resolved.scenario()?)?;
    let pmfs = empirical_pmfs(&result)?;

    let mut blocks = stat_blocks_template();
    fill_analytic(&mut blocks, &set);
    fill_empirical(&mut blocks, &pmfs);
    for (block, empirical) in blocks.iter().zip(&pmfs) {
        doc.tv_distance
            .insert(block.name.clone(), empirical.tv_distance(set.by_name(&block.name)));
    }

    if resolved.n <= oracle::MAX_ORACLE_N {
        let exact = oracle::enumerate_pmfs(resolved.n, &pr)?;
        let named = [
            &exact.clust_num,
            &exact.clust_size,
            &exact.biggest_clust,
            &exact.idle_cars,
        ];
        for (block, pmf) in blocks.iter_mut().zip(named) {
            block.oracle = Some(to_f64_vec(pmf));
        }
    } else {
        doc.set_meta("oracle", "skipped (n > 16)");
    }

    doc.moments = analytic_moment_rows(resolved.n, &pr, p, &set)?;
    doc.moments.extend(empirical_moment_rows(&result));
    doc.statistics = blocks;
    doc.write(out, format)?;
    Ok(())
}

/// Which parameter a sweep varies.
pub enum SweepAxis {
    P(Vec<f64>),
    Rho(Vec<f64>),
    N(Vec<u32>),
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::P(_) => "p",
            SweepAxis::Rho(_) => "rho",
            SweepAxis::N(_) => "n",
        }
    }

    fn len(&self) -> usize {
        match self {
            SweepAxis::P(v) | SweepAxis::Rho(v) => v.len(),
            SweepAxis::N(v) => v.len(),
        }
    }
}

/// `start:stop:count` inclusive grid.
pub fn parse_float_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        bail!("grid `{text}` is not start:stop:count");
    }
    let start: f64 = parts[0].parse().context("bad grid start")?;
    let stop: f64 = parts[1].parse().context("bad grid stop")?;
    let count: usize = parts[2].parse().context("bad grid count")?;
    if count == 0 {
        bail!("grid count must be at least 1");
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

/// `start:stop:step` inclusive integer grid.
pub fn parse_int_grid(text: &str) -> Result<Vec<u32>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        bail!("grid `{text}` is not start:stop:step");
    }
    let start: u32 = parts[0].parse().context("bad grid start")?;
    let stop: u32 = parts[1].parse().context("bad grid stop")?;
    let step: u32 = parts[2].parse().context("bad grid step")?;
    if step == 0 {
        bail!("grid step must be positive");
    }
    Ok((start..=stop).step_by(step as usize).collect())
}

/// One analyze output per grid point plus an index file.
pub fn sweep(resolved: &Resolved, axis: &SweepAxis, dir: &Path, format: Format) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut index = csv::Writer::from_writer(Vec::new());
    index.write_record(["point", "axis", "value", "n", "p", "file"])?;

    for i in 0..axis.len() {
        let mut point = resolved.clone();
        let value = match axis {
            SweepAxis::P(values) => {
                let p = values[i];
                if !(0.0..=1.0).contains(&p) {
                    bail!("swept p = {p} outside [0, 1]");
                }
                point.fixed_p = Some(p);
                point.spacing = None;
                point.entries.retain(|k, _| !k.starts_with("spacing."));
                point.entries.insert("p".into(), p.to_string());
                p
            }
            SweepAxis::Rho(values) => {
                let rho = values[i];
                point.fixed_p = None;
                point.spacing = Some(vanet_core::SpacingModel::Exponential { rate: rho });
                point.entries.remove("p");
                point.entries.insert("spacing.family".into(), "exponential".into());
                point.entries.insert("spacing.rho".into(), rho.to_string());
                rho
            }
            SweepAxis::N(values) => {
                point.n = values[i];
                point.entries.insert("n".into(), values[i].to_string());
                f64::from(values[i])
            }
        };

        let ext = match format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        let file: PathBuf = dir.join(format!("point_{i:03}.{ext}"));
        let doc = build_analyze_doc(&point)?;
        doc.write(Some(&file), format)?;
        let (p, _) = point.link_probability()?;
        index.write_record([
            i.to_string(),
            axis.name().to_string(),
            value.to_string(),
            point.n.to_string(),
            format!("{p:.10}"),
            file.file_name().unwrap().to_string_lossy().into_owned(),
        ])?;
    }

    let index_text = String::from_utf8(index.into_inner()?)?;
    let mut header = String::new();
    header.push_str(&format!("# tool = vanet\n# version = {}\n# command = sweep\n# axis = {}\n", env!("CARGO_PKG_VERSION"), axis.name()));
    std::fs::write(dir.join("index.csv"), format!("{header}{index_text}"))
        .with_context(|| format!("cannot write {}", dir.join("index.csv").display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_grid_is_inclusive() {
        let g = parse_float_grid("0.1:0.9:9").unwrap();
        assert_eq!(g.len(), 9);
        assert!((g[0] - 0.1).abs() < 1e-12);
        assert!((g[8] - 0.9).abs() < 1e-12);
        assert!(parse_float_grid("0.1:0.9").is_err());
        assert!(parse_float_grid("0.1:0.9:0").is_err());
    }

    #[test]
    fn int_grid_steps() {
        assert_eq!(parse_int_grid("2:10:4").unwrap(), vec![2, 6, 10]);
        assert!(parse_int_grid("2:10:0").is_err());
    }
}
