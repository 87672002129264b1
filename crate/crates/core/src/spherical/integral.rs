//! The defining integral of `phi` over `K`, used as an oracle.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{boundary_pair, make_a, tau, ChamberPoint, Geometry, GroupElement, KElement};
use crate::numerics::haar::haar_k_from_rng;
use crate::numerics::seeded_rng;
use crate::specfun::SpectralParam;
use crate::{Error, Result, C64};

const CHUNK: usize = 4096;

/// Quadrature over `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DefiningQuadrature {
    /// Trapezoid rule on `k = diag(e^{i theta}, e^{-i theta})`; exact
    /// description of `K` for `r = 1`, `b = 0`.
    Torus { nodes: usize },
    /// Haar Monte-Carlo; errors when `tol` is given and the standard error
    /// exceeds it.
    MonteCarlo {
        samples: usize,
        seed: u64,
        tol: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleValue {
    pub value: C64,
    pub err: f64,
}

fn integrand(lam: &SpectralParam, rho: &[f64], g: &GroupElement, k: &KElement) -> Result<C64> {
    let (h, kappa) = boundary_pair(g, k)?;
    let expo: C64 = h
        .iter()
        .zip(&lam.lambda)
        .zip(rho)
        .map(|((hj, lj), rj)| -(C64::new(0.0, 1.0) * lj + rj) * hj)
        .sum();
    Ok(expo.exp() * tau(k, lam.l).conj() * tau(&kappa, lam.l))
}

pub(crate) fn torus_element(theta: f64) -> KElement {
    KElement {
        a: DMatrix::from_element(1, 1, C64::from_polar(1.0, theta)),
        d: DMatrix::from_element(1, 1, C64::from_polar(1.0, -theta)),
    }
}

/// `int_K e^{-(i lambda + rho) H(g^{-1} k)} tau_l(k^{-1} kappa(g^{-1} k)) dk`.
pub fn phi_defining_integral_at(
    geom: Geometry,
    lam: &SpectralParam,
    g: &GroupElement,
    quad: DefiningQuadrature,
) -> Result<OracleValue> {
    let rho = geom.rho();
    match quad {
        DefiningQuadrature::Torus { nodes } => {
            if geom.r != 1 || geom.b != 0 || nodes < 2 {
                return Err(Error::Domain {
                    function: "phi_defining_integral",
                    detail: "torus rule needs r = 1, b = 0 and at least 2 nodes".into(),
                });
            }
            let vals: Vec<C64> = (0..nodes)
                .into_par_iter()
                .map(|j| integrand(lam, &rho, g, &torus_element(TAU * j as f64 / nodes as f64)))
                .collect::<Result<_>>()?;
            let full = vals.iter().sum::<C64>() / nodes as f64;
            let half = vals.iter().step_by(2).sum::<C64>() / vals.iter().step_by(2).count() as f64;
            Ok(OracleValue {
                value: full,
                err: (full - half).norm(),
            })
        }
        DefiningQuadrature::MonteCarlo { samples, seed, tol } => {
            if samples == 0 {
                return Err(Error::Budget { evals: 0, estimate: f64::INFINITY });
            }
            let chunks = samples.div_ceil(CHUNK);
            let parts: Vec<(C64, f64)> = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut rng = seeded_rng(seed ^ (c as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                    let count = CHUNK.min(samples - c * CHUNK);
                    let mut sum = C64::new(0.0, 0.0);
                    let mut sq = 0.0;
                    for _ in 0..count {
                        let k = haar_k_from_rng(geom, &mut rng);
                        let v = integrand(lam, &rho, g, &k)?;
                        sum += v;
                        sq += v.norm_sqr();
                    }
                    Ok((sum, sq))
                })
                .collect::<Result<_>>()?;
            let n = samples as f64;
            let (sum, sq) = parts
                .iter()
                .fold((C64::new(0.0, 0.0), 0.0), |(s, q), (a, b)| (s + a, q + b));
            let mean = sum / n;
            let var = (sq / n - mean.norm_sqr()).max(0.0);
            let err = (var / n).sqrt();
            if let Some(tol) = tol {
                if err > tol {
                    return Err(Error::Budget {
                        evals: samples,
                        estimate: err,
                    });
                }
            }
            Ok(OracleValue { value: mean, err })
        }
    }
}

/// The defining integral at `g = a_T`.
pub fn phi_defining_integral(
    geom: Geometry,
    lam: &SpectralParam,
    t: &ChamberPoint,
    quad: DefiningQuadrature,
) -> Result<OracleValue> {
    let g = make_a(geom, t.t())?;
    phi_defining_integral_at(geom, lam, &g, quad)
}
