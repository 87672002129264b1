use serde::{Deserialize, Serialize};

use crate::geometry::{iwasawa, make_a, tau, ChamberPoint, KElement};
use crate::numerics::QuadSpec;
use crate::specfun::hc_c;
use crate::spherical::phi;
use crate::{Error, Result, C64};

use super::ball::{ball_integral, KScheme};
use super::cyclic::{poisson, CyclicBoundaryFn};

/// `f_R(k)` on a radius grid and its extrapolated limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InversionReport {
    pub radii: Vec<f64>,
    pub values: Vec<C64>,
    pub limit: C64,
    pub limit_err: f64,
    pub c_abs_sq: f64,
    /// `limit / |c(lambda,l)|^2`; divide by the calibrated volume constant
    /// to recover `f(k)`.
    pub normalized: C64,
}

/// `f_R(k) = (1/R^r) int_{B(R)} e^{(i lambda - rho) H(g^{-1} k)}
/// tau_{-l}(kappa(g^{-1} k)) P f(g) dg`.
///
/// With [`KScheme::Invariant`] `f` must be elementary; the `K`-integral is
/// then done exactly, since for `F = phi` it equals `conj(phi(a)) phi(a)`.
/// Other schemes integrate over `K` directly, which is only resolved while
/// the kernel width `e^{-2t}` stays above the node spacing.
pub fn boundary_inversion(
    f: &CyclicBoundaryFn,
    k: &KElement,
    radii: &[f64],
    scheme: KScheme,
    spec: &QuadSpec,
) -> Result<InversionReport> {
    let geom = f.geom();
    let lam = &f.lam;
    if !lam.is_real() || !lam.is_regular(1e-12) {
        return Err(Error::Domain {
            function: "boundary_inversion",
            detail: "lambda must be real and regular".into(),
        });
    }
    let rho = geom.rho();
    let vals: Vec<(f64, C64, f64)> = match scheme {
        KScheme::Invariant => {
            if !f.is_elementary() {
                return Err(Error::Domain {
                    function: "boundary_inversion",
                    detail: "the invariant scheme needs elementary data".into(),
                });
            }
            let a: C64 = f.terms.iter().map(|(a, _)| a).sum();
            let w = a * tau(k, lam.l).conj();
            ball_integral(
                geom,
                |t| Ok(w * phi(geom, lam, &ChamberPoint(t.to_vec()))?.value.norm_sqr()),
                radii,
                spec,
            )?
        }
        _ => ball_integral(
            geom,
            |t| {
                let at = make_a(geom, t)?;
                scheme.k_average(geom, |k1| {
                    let g = k1.to_group().mul(&at);
                    let x = g.inverse().mul(&k.to_group());
                    let iw = iwasawa(&x)?;
                    let expo: C64 = iw
                        .h
                        .iter()
                        .zip(&lam.lambda)
                        .zip(&rho)
                        .map(|((hj, lj), rj)| (C64::new(0.0, 1.0) * lj - rj) * hj)
                        .sum();
                    Ok(expo.exp() * tau(&iw.k, lam.l).conj() * poisson(f, &g)?)
                })
            },
            radii,
            spec,
        )?,
    };
    let radii: Vec<f64> = vals.iter().map(|v| v.0).collect();
    let values: Vec<C64> = vals.iter().map(|v| v.1).collect();
    let re: Vec<f64> = values.iter().map(|v| v.re).collect();
    let im: Vec<f64> = values.iter().map(|v| v.im).collect();
    let (lr, er) = super::extrapolate(&radii, &re)?;
    let (li, ei) = super::extrapolate(&radii, &im)?;
    let limit = C64::new(lr, li);
    let c_abs_sq = hc_c(geom, lam)?.norm_sqr();
    Ok(InversionReport {
        radii,
        values,
        limit,
        limit_err: er.hypot(ei),
        c_abs_sq,
        normalized: limit / c_abs_sq,
    })
}
