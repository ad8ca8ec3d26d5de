//! Replayable numerical experiments. Each one is a pure function of its name and
//! configuration; randomness comes from [`crate::rng::task_rng`] streams derived
//! from the `seed` key.

mod bounds;
mod local;
mod sobolev;
mod walk;

pub use bounds::{dyadic_knots, key_area_inequality, key_path_inequality, Sides};
pub use local::area_blowup_profile;
pub use walk::walk_two_var_samples;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXPERIMENTS: &[&str] = &[
    "theorem1",
    "lemma_local_2var",
    "lemma_36",
    "theorem2",
    "mr_maximal",
    "example_local",
    "walk_growth",
    "area_blowup",
    "sobolev_equiv",
];

/// One labelled comparison inside a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detail {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl Detail {
    pub fn new(label: impl Into<String>, lhs: f64, rhs: f64, pass: bool) -> Self {
        Self {
            label: label.into(),
            lhs,
            rhs,
            pass,
        }
    }

    /// `lhs <= rhs`.
    pub fn bound(label: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::new(label, lhs, rhs, lhs <= rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub name: String,
    /// Every parameter the run used, defaults included.
    pub config: BTreeMap<String, String>,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub pass: bool,
    pub runtime_ms: u64,
    pub notes: Vec<String>,
    pub details: Vec<Detail>,
}

impl ExperimentReport {
    /// Copy with the wall-clock field zeroed, for byte-level comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            runtime_ms: 0,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Summary row followed by one row per detail, header
    /// `name,label,lhs,rhs,ratio,pass`.
    pub fn to_csv(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["name", "label", "lhs", "rhs", "ratio", "pass"])?;
        let row = |label: &str, lhs: f64, rhs: f64, pass: bool| {
            [
                self.name.clone(),
                label.to_string(),
                format!("{lhs:?}"),
                format!("{rhs:?}"),
                format!("{:?}", lhs / rhs),
                pass.to_string(),
            ]
        };
        wtr.write_record(row("summary", self.lhs, self.rhs, self.pass))?;
        for d in &self.details {
            wtr.write_record(row(&d.label, d.lhs, d.rhs, d.pass))?;
        }
        let bytes = wtr
            .into_inner()
            .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Write `<dir>/<name>.<ext>` and return its path.
pub fn write_report(report: &ExperimentReport, dir: &Path, format: OutputFormat) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let (ext, body) = match format {
        OutputFormat::Json => ("json", report.to_json()? + "\n"),
        OutputFormat::Csv => ("csv", report.to_csv()?),
    };
    let path = dir.join(format!("{}.{ext}", report.name));
    let mut file = fs::File::create(&path)?;
    file.write_all(body.as_bytes())?;
    Ok(path)
}

/// String-keyed experiment parameters. Lookups record the value actually used so
/// the report shows defaults too; keys that no lookup consumed are rejected.
#[derive(Debug, Clone, Default)]
pub struct Params {
    given: BTreeMap<String, String>,
    used: BTreeMap<String, String>,
}

impl Params {
    pub fn new(given: BTreeMap<String, String>) -> Self {
        Self {
            given,
            used: BTreeMap::new(),
        }
    }

    pub fn from_pairs<K: Into<String>, V: Into<String>>(pairs: impl IntoIterator<Item = (K, V)>) -> Self {
        Self::new(pairs.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }

    fn raw(&mut self, key: &str, default: String) -> String {
        let value = self.given.get(key).cloned().unwrap_or(default);
        self.used.insert(key.to_string(), value.clone());
        value
    }

    fn parse<T>(&mut self, key: &str, default: T) -> Result<T>
    where
        T: std::str::FromStr + ToString,
        T::Err: std::fmt::Display,
    {
        let raw = self.raw(key, default.to_string());
        raw.trim()
            .parse()
            .map_err(|e| Error::InvalidArgument(format!("parameter `{key}` = `{raw}`: {e}")))
    }

    pub fn u64(&mut self, key: &str, default: u64) -> Result<u64> {
        self.parse(key, default)
    }

    pub fn usize(&mut self, key: &str, default: usize) -> Result<usize> {
        self.parse(key, default)
    }

    pub fn u32(&mut self, key: &str, default: u32) -> Result<u32> {
        self.parse(key, default)
    }

    pub fn f64(&mut self, key: &str, default: f64) -> Result<f64> {
        let v: f64 = self.parse(key, default)?;
        if !v.is_finite() {
            return Err(Error::InvalidArgument(format!("parameter `{key}` must be finite")));
        }
        Ok(v)
    }

    pub fn bool(&mut self, key: &str, default: bool) -> Result<bool> {
        self.parse(key, default)
    }

    /// Comma-separated list.
    pub fn list<T: std::str::FromStr + ToString>(&mut self, key: &str, default: &[T]) -> Result<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        let joined = default.iter().map(T::to_string).collect::<Vec<_>>().join(",");
        let raw = self.raw(key, joined);
        raw.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|e| Error::InvalidArgument(format!("parameter `{key}` item `{s}`: {e}")))
            })
            .collect()
    }

    fn finish(self) -> Result<BTreeMap<String, String>> {
        if let Some(extra) = self.given.keys().find(|k| !self.used.contains_key(*k)) {
            return Err(Error::InvalidArgument(format!("unknown parameter `{extra}`")));
        }
        Ok(self.used)
    }
}

/// Partial report filled by an experiment body.
pub(crate) struct Outcome {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
    pub notes: Vec<String>,
    pub details: Vec<Detail>,
}

impl Outcome {
    /// Summary taken from the detail with the largest `lhs / rhs`.
    pub fn worst_of(details: Vec<Detail>, notes: Vec<String>) -> Self {
        let pass = details.iter().all(|d| d.pass);
        let worst = details
            .iter()
            .max_by(|a, b| (a.lhs / a.rhs).total_cmp(&(b.lhs / b.rhs)))
            .map_or((0.0, 0.0), |d| (d.lhs, d.rhs));
        Self {
            lhs: worst.0,
            rhs: worst.1,
            pass,
            notes,
            details,
        }
    }
}

pub fn run_experiment(name: &str, params: Params) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut params = params;
    let outcome = match name {
        "theorem1" => bounds::theorem1(&mut params)?,
        "lemma_local_2var" => bounds::lemma_local_2var(&mut params)?,
        "lemma_36" => bounds::lemma_36(&mut params)?,
        "theorem2" => bounds::theorem2(&mut params)?,
        "mr_maximal" => bounds::mr_maximal(&mut params)?,
        "example_local" => local::example_local(&mut params)?,
        "area_blowup" => local::area_blowup(&mut params)?,
        "walk_growth" => walk::walk_growth(&mut params)?,
        "sobolev_equiv" => sobolev::sobolev_equiv(&mut params)?,
        other => return Err(Error::UnknownExperiment(other.to_string())),
    };
    let config = params.finish()?;
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        name: name.to_string(),
        config,
        lhs: outcome.lhs,
        rhs: outcome.rhs,
        ratio: outcome.lhs / outcome.rhs,
        pass: outcome.pass,
        runtime_ms: start.elapsed().as_millis() as u64,
        notes: outcome.notes,
        details: outcome.details,
    })
}
