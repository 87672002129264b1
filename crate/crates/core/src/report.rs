//! Verification reports: JSON `{meta, grid, summary}` with a flat CSV mirror.
//!
//! Everything but the top-level `timestamp` is a function of the config and
//! the build, so two runs can be diffed after dropping that key.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::{Error, Result};

pub const BUILD_ID: &str = env!("GRASSMANN_HARMONICS_BUILD_ID");
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub check: String,
    pub schema: u32,
    pub build: String,
    pub config: RunConfig,
    pub seeds: Vec<u64>,
    /// Names of the coordinates of `grid[].point`.
    pub point_labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub point: Vec<f64>,
    pub value: f64,
    #[serde(default)]
    pub aux: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub fitted_constants: BTreeMap<String, f64>,
    pub pass: bool,
    /// One line per failed assertion, naming the witness point.
    #[serde(default)]
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub grid: Vec<GridPoint>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl Report {
    pub fn new(check: &str, config: &RunConfig, point_labels: &[&str]) -> Self {
        Report {
            meta: Meta {
                check: check.to_string(),
                schema: SCHEMA_VERSION,
                build: BUILD_ID.to_string(),
                config: config.clone(),
                seeds: vec![config.seed],
                point_labels: point_labels.iter().map(|s| s.to_string()).collect(),
            },
            grid: Vec::new(),
            summary: Summary {
                fitted_constants: BTreeMap::new(),
                pass: true,
                failures: Vec::new(),
            },
            timestamp: None,
        }
    }

    pub fn push(&mut self, point: Vec<f64>, value: f64, aux: &[(&str, f64)]) {
        self.grid.push(GridPoint {
            point,
            value,
            aux: aux.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        });
    }

    pub fn constant(&mut self, name: &str, v: f64) {
        self.summary.fitted_constants.insert(name.to_string(), v);
    }

    /// Records an assertion; a failure keeps `detail` as the witness.
    pub fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.summary.pass = false;
            self.summary.failures.push(detail());
        }
    }

    pub fn fail(&mut self, detail: String) {
        self.summary.pass = false;
        self.summary.failures.push(detail);
    }

    pub fn pass(&self) -> bool {
        self.summary.pass
    }

    pub fn stamp(&mut self) {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self.timestamp = Some(format!("unix:{now}"));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Flat CSV: `point` coordinates under their labels, `value`, then the
    /// union of `aux` keys in sorted order (blank where absent).
    pub fn to_csv(&self) -> Result<String> {
        let width = self.grid.iter().map(|p| p.point.len()).max().unwrap_or(0);
        let labels: Vec<String> = (0..width)
            .map(|i| self.meta.point_labels.get(i).cloned().unwrap_or_else(|| format!("p{i}")))
            .collect();
        let keys: BTreeSet<&String> = self.grid.iter().flat_map(|p| p.aux.keys()).collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<String> = labels;
        header.push("value".into());
        header.extend(keys.iter().map(|k| k.to_string()));
        w.write_record(&header).map_err(csv_err)?;
        for p in &self.grid {
            let mut row: Vec<String> = (0..width).map(|i| p.point.get(i).map(fmt).unwrap_or_default()).collect();
            row.push(fmt(&p.value));
            row.extend(keys.iter().map(|k| p.aux.get(*k).map(fmt).unwrap_or_default()));
            w.write_record(&row).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    /// Writes `<dir>/<check>.json` and `<dir>/<check>.csv`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let stem = self.meta.check.replace(' ', "-");
        let json = dir.join(format!("{stem}.json"));
        let csv = dir.join(format!("{stem}.csv"));
        std::fs::write(&json, self.to_json())?;
        std::fs::write(&csv, self.to_csv()?)?;
        Ok((json, csv))
    }
}

fn fmt(x: &f64) -> String {
    format!("{x:e}")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("lemma-a", &RunConfig::default(), &["R"]);
        r.push(vec![5.0], 1e-3, &[("slope", -0.5)]);
        r.push(vec![10.0], 1e-5, &[]);
        r.constant("c", 2.0);
        r
    }

    #[test]
    fn json_round_trip_and_timestamp_key() {
        let mut r = sample();
        let a = r.to_json();
        assert!(!a.contains("timestamp"));
        r.stamp();
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["meta", "grid", "summary", "timestamp"] {
            assert!(v.get(key).is_some());
        }
        assert!(v["summary"]["fitted_constants"]["c"].is_number());
        assert_eq!(v["meta"]["build"], BUILD_ID);
    }

    #[test]
    fn csv_mirror_columns() {
        let csv = sample().to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "R,value,slope");
        assert_eq!(lines[1], "5e0,1e-3,-5e-1");
        assert_eq!(lines[2], "1e1,1e-5,");
    }

    #[test]
    fn failures_flip_pass() {
        let mut r = sample();
        r.check(true, || unreachable!());
        assert!(r.pass());
        r.check(false, || "witness R = 5".into());
        assert!(!r.pass());
        assert_eq!(r.summary.failures, vec!["witness R = 5".to_string()]);
    }
}
