//! Sweep of the Key Lemma ratio `|pi(lambda) u^l phi| e^{rho(l)(H)} (1+|lambda|^2)^{-d}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::phi_ul;
use crate::geometry::{ChamberPoint, Geometry};
use crate::specfun::{pi_short, SpectralParam};
use crate::{Error, Result, C64};

/// A fitted growth exponent up to this much above an integer is read as
/// that integer (log factors and grid noise).
const EXPONENT_SLACK: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyLemmaPoint {
    pub lambda: Vec<f64>,
    pub t: Vec<f64>,
    /// `|pi(lambda) u^l phi| e^{rho(l)(H)}` before the `(1+|lambda|^2)^d` factor.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyLemmaReport {
    pub r: usize,
    pub b: usize,
    pub l: i64,
    pub lambda_max: f64,
    pub t_max: f64,
    pub n_lambda: usize,
    pub n_t: usize,
    /// Maximum of the ratio for each `d = 0..=d_max`.
    pub max_by_d: Vec<f64>,
    /// Least-squares slope of `log max_shell` against `log(1+|lambda|^2)`
    /// over the outer quarter of the `lambda`-grid.
    pub growth_exponent: f64,
    /// Smallest `d` at or above the growth exponent (up to a slack).
    pub fitted_d: usize,
    pub converged: bool,
    /// Maximum ratio at `fitted_d` (the fitted constant).
    pub max_ratio: f64,
    pub witness: KeyLemmaPoint,
    pub points: Vec<KeyLemmaPoint>,
}

pub fn key_lemma_sweep(
    geom: Geometry,
    l: i64,
    lambda_grid: &[Vec<f64>],
    t_grid: &[Vec<f64>],
    d_max: usize,
) -> Result<KeyLemmaReport> {
    if lambda_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::Domain {
            function: "key_lemma_sweep",
            detail: "empty grid".into(),
        });
    }
    let rho_l = geom.rho_l(l);
    let jobs: Vec<(usize, usize)> = (0..lambda_grid.len())
        .flat_map(|i| (0..t_grid.len()).map(move |j| (i, j)))
        .collect();
    let points: Vec<KeyLemmaPoint> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let lam = SpectralParam::real(&lambda_grid[i], l);
            let t = ChamberPoint(t_grid[j].clone());
            let g = phi_ul(geom, &lam, &t)?.value;
            let z: Vec<C64> = lam.lambda.clone();
            let e: f64 = rho_l.iter().zip(t.t()).map(|(a, b)| a * b).sum();
            Ok(KeyLemmaPoint {
                lambda: lambda_grid[i].clone(),
                t: t_grid[j].clone(),
                value: (pi_short(geom, &z) * g).norm() * e.exp(),
            })
        })
        .collect::<Result<_>>()?;
    if let Some(p) = points.iter().find(|p| !p.value.is_finite()) {
        return Err(Error::Domain {
            function: "key_lemma_sweep",
            detail: format!("non-finite ratio at lambda {:?}, t {:?}", p.lambda, p.t),
        });
    }
    let norm2 = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
    let lambda_max = lambda_grid.iter().map(|v| norm2(v).sqrt()).fold(0.0, f64::max);
    let t_max = t_grid.iter().map(|v| norm2(v).sqrt()).fold(0.0, f64::max);
    let ratio = |p: &KeyLemmaPoint, d: usize| p.value / (1.0 + norm2(&p.lambda)).powi(d as i32);
    let max_by_d: Vec<f64> = (0..=d_max)
        .map(|d| points.iter().map(|p| ratio(p, d)).fold(0.0, f64::max))
        .collect();
    let growth_exponent = growth_exponent(&points, lambda_grid.len(), geom.r);
    let fit = (growth_exponent - EXPONENT_SLACK).ceil().max(0.0) as usize;
    let converged = growth_exponent.is_finite() && fit <= d_max;
    let fitted_d = fit.min(d_max);
    let witness = points
        .iter()
        .max_by(|a, b| ratio(a, fitted_d).total_cmp(&ratio(b, fitted_d)))
        .cloned()
        .expect("non-empty grid");
    Ok(KeyLemmaReport {
        r: geom.r,
        b: geom.b,
        l,
        lambda_max,
        t_max,
        n_lambda: lambda_grid.len(),
        n_t: t_grid.len(),
        max_by_d,
        growth_exponent,
        fitted_d,
        converged,
        max_ratio: ratio(&witness, fitted_d),
        witness,
        points,
    })
}

/// Shell maxima of the ratio at `d = 0`, binned in `max_j |lambda_j|` (the
/// sup-norm shells of a chamber grid are complete), and the slope of their
/// logs against `log(1+|lambda|^2)` on the outer half of the grid.
fn shell_slope<'a>(points: impl Iterator<Item = &'a KeyLemmaPoint>, lambda_max: f64, bins: usize) -> f64 {
    let mut best: Vec<Option<(f64, f64)>> = vec![None; bins];
    for p in points {
        let n = sup(&p.lambda);
        let k = ((n / lambda_max * bins as f64) as usize).min(bins - 1);
        if best[k].is_none_or(|(_, v)| p.value > v) {
            best[k] = Some((n, p.value));
        }
    }
    let xy: Vec<(f64, f64)> = best[bins / 2..]
        .iter()
        .flatten()
        .filter(|(_, v)| *v > 0.0)
        .map(|&(n, v)| ((1.0 + n * n).ln(), v.ln()))
        .collect();
    if xy.len() < 2 {
        return f64::NEG_INFINITY;
    }
    let m = xy.len() as f64;
    let (mx, my) = xy.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / m, b + y / m));
    let sxy: f64 = xy.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xy.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Growth exponent of `sup_t` of the ratio in `1+|lambda|^2`. The overall
/// shell fit can sit in a pre-asymptotic regime where large constants at
/// small `lambda` mask faster growth elsewhere; `sup_t` grows at least as
/// fast as every fixed-`t` row, so row slopes are lower bounds too. Only rows
/// with `|t| lambda_max <= pi` are used: they do not oscillate across the
/// grid, so their shell maxima follow the envelope.
fn growth_exponent(points: &[KeyLemmaPoint], n_lambda: usize, r: usize) -> f64 {
    let lambda_max = points.iter().map(|p| sup(&p.lambda)).fold(0.0, f64::max);
    let bins = ((n_lambda as f64).powf(1.0 / r as f64).round() as usize).max(4);
    let mut rows: Vec<&[f64]> = points.iter().map(|p| p.t.as_slice()).collect();
    rows.sort_by(|a, b| a.partial_cmp(b).unwrap());
    rows.dedup();
    rows.retain(|t| sup(t) * lambda_max <= std::f64::consts::PI);
    let overall = shell_slope(points.iter(), lambda_max, bins);
    let exponent = rows
        .iter()
        .map(|t| shell_slope(points.iter().filter(|p| p.t.as_slice() == *t), lambda_max, bins))
        .fold(overall, f64::max);
    if exponent.is_finite() {
        exponent
    } else {
        f64::NAN
    }
}
