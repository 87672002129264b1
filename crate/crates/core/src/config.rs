//! Run configuration for the verification drivers, read from TOML and
//! overridden by command line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::geometry::Geometry;
use crate::{Error, Result};

/// Largest `b` and `|l|` accepted; the drivers are sized for desk scale.
pub const MAX_B: usize = 8;
pub const MAX_L: i64 = 6;
pub const MAX_RANK: usize = 2;
/// Bounds on grid sizes and radii so a config cannot request unbounded work.
pub const MAX_GRID_COUNT: usize = 100_000;
pub const MAX_RADIUS: f64 = 1e4;
pub const MIN_RADIUS_STEP: f64 = 1e-3;

/// `lambda` values: a list of magnitudes, explicit vectors, or a grid.
///
/// A magnitude `mu` stands for `mu (r, r-1, ..., 1)`, a regular point of the
/// positive chamber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    List(Vec<f64>),
    Points(Vec<Vec<f64>>),
    Grid {
        min: f64,
        max: f64,
        count: usize,
        #[serde(default)]
        log: bool,
    },
}

impl LambdaSpec {
    pub fn magnitudes(&self) -> Vec<f64> {
        match self {
            LambdaSpec::List(v) => v.clone(),
            LambdaSpec::Points(p) => p.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt()).collect(),
            &LambdaSpec::Grid { min, max, count, log } => (0..count)
                .map(|k| {
                    let s = if count == 1 { 0.0 } else { k as f64 / (count - 1) as f64 };
                    if log {
                        min * (max / min).powf(s)
                    } else {
                        min + (max - min) * s
                    }
                })
                .collect(),
        }
    }

    /// Points of `a*` in rank `r`.
    pub fn points(&self, r: usize) -> Vec<Vec<f64>> {
        match self {
            LambdaSpec::Points(p) => p.clone(),
            _ => self.magnitudes().into_iter().map(|mu| direction(r, mu)).collect(),
        }
    }

    fn validate(&self, r: usize) -> Result<()> {
        match self {
            LambdaSpec::List(v) if v.is_empty() => return Err(Error::Config("lambda list is empty".into())),
            LambdaSpec::Points(p) => {
                if p.is_empty() {
                    return Err(Error::Config("lambda list is empty".into()));
                }
                if let Some(v) = p.iter().find(|v| v.len() != r) {
                    return Err(Error::Config(format!("lambda point {v:?} has {} entries, rank is {r}", v.len())));
                }
            }
            &LambdaSpec::Grid { min, max, count, log } => {
                if count > MAX_GRID_COUNT {
                    return Err(Error::Config(format!("lambda grid count {count} exceeds {MAX_GRID_COUNT}")));
                }
                if count == 0 || !(min <= max) || (log && !(min > 0.0)) {
                    return Err(Error::Config(format!(
                        "lambda grid needs count >= 1, min <= max{}",
                        if log { " and min > 0 for a log grid" } else { "" }
                    )));
                }
            }
            _ => {}
        }
        let bad = self.points(r).into_iter().flatten().find(|x| !x.is_finite());
        match bad {
            Some(x) => Err(Error::Config(format!("lambda entry {x} is not finite"))),
            None => Ok(()),
        }
    }
}

pub(crate) fn direction(r: usize, mu: f64) -> Vec<f64> {
    (0..r).map(|j| mu * (r - j) as f64).collect()
}

/// How radii (`R_max`, `R_step`) are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Killing-form distance `2 sqrt(n) |t|`.
    #[default]
    Killing,
    /// Euclidean `|t|` on chamber coordinates.
    Unit,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolOverrides {
    /// Assertion tolerance of the selected check.
    pub assert: Option<f64>,
    /// Quadrature tolerances.
    pub abs: Option<f64>,
    pub rel: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub r: usize,
    pub b: usize,
    pub l: i64,
    /// Several bundle indices for checks that sweep `l`; `l` alone otherwise.
    pub l_sweep: Option<Vec<i64>>,
    pub lambda: Option<LambdaSpec>,
    #[serde(rename = "R_max", alias = "r_max")]
    pub r_max: Option<f64>,
    #[serde(rename = "R_step", alias = "r_step")]
    pub r_step: Option<f64>,
    pub tol: TolOverrides,
    pub seed: u64,
    pub normalization: Normalization,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            r: 1,
            b: 0,
            l: 0,
            l_sweep: None,
            lambda: None,
            r_max: None,
            r_step: None,
            tol: TolOverrides::default(),
            seed: 0,
            normalization: Normalization::Killing,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(s).map_err(|e| Error::Config(e.message().to_string()))?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&s)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::Config("r must be at least 1".into()));
        }
        if self.r > MAX_RANK {
            return Err(Error::Config(format!("r = {} exceeds the supported rank {MAX_RANK}", self.r)));
        }
        if self.b > MAX_B {
            return Err(Error::Config(format!("b = {} exceeds {MAX_B}", self.b)));
        }
        for &l in std::iter::once(&self.l).chain(self.l_sweep.iter().flatten()) {
            if l.abs() > MAX_L {
                return Err(Error::Config(format!("|l| = {} exceeds {MAX_L}", l.abs())));
            }
        }
        if matches!(&self.l_sweep, Some(v) if v.is_empty()) {
            return Err(Error::Config("l_sweep is empty".into()));
        }
        if let Some(spec) = &self.lambda {
            spec.validate(self.r)?;
        }
        for (name, v) in [("R_max", self.r_max), ("R_step", self.r_step)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::Config(format!("{name} = {v} must be positive and finite")));
                }
            }
        }
        if matches!(self.r_max, Some(m) if m > MAX_RADIUS) {
            return Err(Error::Config(format!("R_max exceeds {MAX_RADIUS}")));
        }
        if matches!(self.r_step, Some(s) if s < MIN_RADIUS_STEP) {
            return Err(Error::Config(format!("R_step below {MIN_RADIUS_STEP}")));
        }
        if let (Some(m), Some(s)) = (self.r_max, self.r_step) {
            if m / s < 4.0 {
                return Err(Error::Config(format!("R_max / R_step = {} gives fewer than 4 radii", m / s)));
            }
            if m / s > 1e5 {
                return Err(Error::Config("R_max / R_step too large".into()));
            }
        }
        if i64::try_from(self.seed).is_err() {
            return Err(Error::Config(format!("seed {} does not fit a TOML integer", self.seed)));
        }
        for (name, v) in [("tol.assert", self.tol.assert), ("tol.abs", self.tol.abs), ("tol.rel", self.tol.rel)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::Config(format!("{name} = {v} must be positive and finite")));
                }
            }
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<Geometry> {
        Geometry::new(self.r, self.b).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn l_values(&self) -> Vec<i64> {
        self.l_sweep.clone().unwrap_or_else(|| vec![self.l])
    }

    /// Radii in Killing units for a check whose defaults are given in
    /// Killing units.
    pub fn radii(&self, default_max: f64, default_step: f64) -> Vec<f64> {
        let scale = match self.normalization {
            Normalization::Killing => 1.0,
            Normalization::Unit => self.geometry().map(|g| g.killing_unit()).unwrap_or(1.0),
        };
        let (max, step) = match (self.r_max, self.r_step) {
            (Some(m), Some(s)) => (m * scale, s * scale),
            (Some(m), None) => (m * scale, default_step),
            (None, Some(s)) => (default_max, s * scale),
            (None, None) => (default_max, default_step),
        };
        let n = (max / step + 1e-9).floor() as usize;
        (1..=n).map(|k| k as f64 * step).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let cfg = RunConfig::from_toml_str(
            r#"
            r = 2
            b = 1
            l = -2
            lambda = [0.7, 1.3]
            R_max = 40.0
            R_step = 5.0
            seed = 9
            normalization = "unit"
            output = "out"
            [tol]
            assert = 1e-3
            "#,
        )
        .unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.lambda.as_ref().unwrap().points(2), vec![vec![1.4, 0.7], vec![2.6, 1.3]]);
        assert_eq!(cfg.tol.assert, Some(1e-3));
        assert_eq!(cfg.normalization, Normalization::Unit);
        let ku = cfg.geometry().unwrap().killing_unit();
        let radii = cfg.radii(1.0, 1.0);
        assert_eq!(radii.len(), 8);
        assert!((radii[7] - 40.0 * ku).abs() < 1e-12);
    }

    #[test]
    fn lambda_forms() {
        let g: RunConfig = RunConfig::from_toml_str("lambda = { min = 0.2, max = 30.0, count = 3, log = true }").unwrap();
        let m = g.lambda.unwrap().magnitudes();
        assert!((m[1] - (0.2f64 * 30.0).sqrt()).abs() < 1e-12);
        let p: RunConfig = RunConfig::from_toml_str("r = 2\nlambda = [[2.0, 1.0], [3.0, 0.5]]").unwrap();
        p.validate().unwrap();
        assert_eq!(p.lambda.unwrap().points(2)[1], vec![3.0, 0.5]);
    }

    #[test]
    fn rejects_bad_values() {
        for s in [
            "r = 0",
            "r = 3",
            "b = 99",
            "l = 7",
            "lambda = []",
            "r = 2\nlambda = [[1.0]]",
            "R_max = -1.0",
            "R_max = 10.0\nR_step = 5.0",
            "[tol]\nassert = 0.0",
            "l_sweep = []",
            "lambda = { min = 0.0, max = 1.0, count = 1000000000 }",
            "R_max = 1e300",
            "R_step = 1e-9",
        ] {
            let e = RunConfig::from_toml_str(s).and_then(|c| c.validate());
            assert!(matches!(e, Err(Error::Config(_))), "{s}: {e:?}");
        }
        assert!(RunConfig::from_toml_str("bogus = 1").is_err());
        assert!(RunConfig::from_toml_str("r = \"one\"").is_err());
    }

    #[test]
    fn round_trips_through_toml() {
        let cfg = RunConfig {
            r: 2,
            lambda: Some(LambdaSpec::List(vec![0.5])),
            r_max: Some(20.0),
            ..RunConfig::default()
        };
        assert_eq!(RunConfig::from_toml_str(&cfg.to_toml_string()).unwrap(), cfg);
    }
}
