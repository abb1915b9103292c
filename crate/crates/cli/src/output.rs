//! Machine-readable outputs.
//!
//! CSV files open with `# key = value` metadata lines (tool version, the
//! fully resolved configuration, derived p, seed) so every file is a
//! self-contained experiment record; no timestamps, so identical runs give
//! identical bytes. The JSON format carries the same content as one object.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct StatBlock {
    pub name: String,
    pub support_min: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<f64>>,
}

impl StatBlock {
    pub fn new(name: &str, support_min: i64) -> Self {
        StatBlock {
            name: name.to_string(),
            support_min,
            analytic: None,
            empirical: None,
            oracle: None,
        }
    }

    fn len(&self) -> usize {
        self.analytic
            .as_ref()
            .or(self.empirical.as_ref())
            .or(self.oracle.as_ref())
            .map_or(0, Vec::len)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentRow {
    pub statistic: String,
    pub source: String,
    pub mean: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variance: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputDoc {
    pub meta: BTreeMap<String, String>,
    pub statistics: Vec<StatBlock>,
    pub moments: Vec<MomentRow>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub tv_distance: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl OutputDoc {
    pub fn new(command: &str, entries: &BTreeMap<String, String>) -> Self {
        let mut meta = BTreeMap::new();
        meta.insert("tool".into(), "vanet".into());
        meta.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        meta.insert("command".into(), command.into());
        for (k, v) in entries {
            meta.insert(format!("config.{k}"), v.clone());
        }
        OutputDoc {
            meta,
            statistics: Vec::new(),
            moments: Vec::new(),
            tv_distance: BTreeMap::new(),
        }
    }

    pub fn set_meta(&mut self, key: &str, value: impl std::fmt::Display) {
        self.meta.insert(key.into(), value.to_string());
    }

    fn header_lines(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            s.push_str(&format!("# {k} = {v}\n"));
        }
        for (k, v) in &self.tv_distance {
            s.push_str(&format!("# tv_distance.{k} = {v:.6}\n"));
        }
        s
    }

    fn pmf_csv(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["statistic", "r", "prob_analytic", "prob_empirical", "prob_oracle"])?;
        let fmt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.12e}"));
        for block in &self.statistics {
            for i in 0..block.len() {
                let r = block.support_min + i as i64;
                wtr.write_record([
                    block.name.clone(),
                    r.to_string(),
                    fmt(block.analytic.as_ref().map(|v| v[i])),
                    fmt(block.empirical.as_ref().map(|v| v[i])),
                    fmt(block.oracle.as_ref().map(|v| v[i])),
                ])?;
            }
        }
        Ok(String::from_utf8(wtr.into_inner()?)?)
    }

    fn moments_csv(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["statistic", "source", "mean", "variance"])?;
        for row in &self.moments {
            wtr.write_record([
                row.statistic.clone(),
                row.source.clone(),
                format!("{:.12e}", row.mean),
                row.variance.map_or(String::new(), |v| format!("{v:.12e}")),
            ])?;
        }
        Ok(String::from_utf8(wtr.into_inner()?)?)
    }

    /// Writes the document. CSV produces `<out>` plus a sibling
    /// `<stem>.moments.csv`; JSON produces a single file. Without `--out`,
    /// everything goes to stdout.
    pub fn write(&self, out: Option<&Path>, format: Format) -> Result<Vec<PathBuf>> {
        match (out, format) {
            (Some(path), Format::Csv) => {
                let pmf_text = format!("{}{}", self.header_lines(), self.pmf_csv()?);
                write_file(path, &pmf_text)?;
                let moments_path = sibling(path, "moments.csv");
                let moments_text = format!("{}{}", self.header_lines(), self.moments_csv()?);
                write_file(&moments_path, &moments_text)?;
                Ok(vec![path.to_path_buf(), moments_path])
            }
            (Some(path), Format::Json) => {
                let text = serde_json::to_string_pretty(self)?;
                write_file(path, &text)?;
                Ok(vec![path.to_path_buf()])
            }
            (None, Format::Csv) => {
                let mut stdout = std::io::stdout().lock();
                write!(
                    stdout,
                    "{}{}\n{}",
                    self.header_lines(),
                    self.pmf_csv()?,
                    self.moments_csv()?
                )?;
                Ok(vec![])
            }
            (None, Format::Json) => {
                let mut stdout = std::io::stdout().lock();
                writeln!(stdout, "{}", serde_json::to_string_pretty(self)?)?;
                Ok(vec![])
            }
        }
    }
}

/// `dir/name.csv -> dir/name.moments.csv`
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("cannot create {}", parent.display()))?;
        }
    }
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sibling_renames_extension() {
        assert_eq!(
            sibling(Path::new("/tmp/run.csv"), "moments.csv"),
            PathBuf::from("/tmp/run.moments.csv")
        );
    }

    #[test]
    fn csv_has_schema_and_headers() {
        let mut doc = OutputDoc::new("analyze", &BTreeMap::new());
        doc.set_meta("p", 0.5);
        doc.statistics.push(StatBlock {
            name: "clust_num".into(),
            support_min: 1,
            analytic: Some(vec![0.25, 0.75]),
            empirical: None,
            oracle: None,
        });
        let text = format!("{}{}", doc.header_lines(), doc.pmf_csv().unwrap());
        assert!(text.starts_with("# command = analyze\n"));
        assert!(text.contains("statistic,r,prob_analytic,prob_empirical,prob_oracle"));
        assert!(text.contains("clust_num,1,2.5"));
        assert!(text.contains(",,")); // absent sources stay empty
    }
}
