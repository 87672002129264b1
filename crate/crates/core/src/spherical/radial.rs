//! Finite-difference check of the radial eigen-equation.

use super::phi_ul;
use crate::geometry::{ChamberPoint, Geometry};
use crate::specfun::SpectralParam;
use crate::{Error, Result, C64};

/// Applies the radial part of the Laplacian to `G = u^l phi` at `t`:
/// `sum_j [d_j^2 + ((2b+1) coth t_j + (1-2l) tanh t_j) d_j]
///  + 4 sum_{j<k} (sinh 2t_j d_j - sinh 2t_k d_k) / (cosh 2t_j - cosh 2t_k)`.
/// Derivatives are central differences with one Richardson step.
/// Returns `(L G, G)`.
pub fn radial_operator(
    geom: Geometry,
    lam: &SpectralParam,
    t: &ChamberPoint,
    h: f64,
) -> Result<(C64, C64)> {
    let ts = t.t();
    let r = geom.r;
    if ts.len() != r {
        return Err(Error::Dimension { expected: r, got: ts.len() });
    }
    let min_gap = ts
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(ts[r - 1], f64::min);
    if !(h > 0.0 && h.is_finite() && 2.0 * h < min_gap) {
        return Err(Error::Step(h));
    }
    let g_at = |shift: &[f64]| -> Result<C64> {
        let p: Vec<f64> = ts.iter().zip(shift).map(|(a, b)| a + b).collect();
        Ok(phi_ul(geom, lam, &ChamberPoint(p))?.value)
    };
    let zero = vec![0.0; r];
    let g0 = g_at(&zero)?;
    let mut d1 = vec![C64::new(0.0, 0.0); r];
    let mut d2 = vec![C64::new(0.0, 0.0); r];
    for j in 0..r {
        let est = |step: f64| -> Result<(C64, C64)> {
            let mut e = zero.clone();
            e[j] = step;
            let p = g_at(&e)?;
            e[j] = -step;
            let m = g_at(&e)?;
            Ok(((p - m) / (2.0 * step), (p - 2.0 * g0 + m) / (step * step)))
        };
        let (a1, a2) = est(h)?;
        let (b1, b2) = est(h / 2.0)?;
        d1[j] = (4.0 * b1 - a1) / 3.0;
        d2[j] = (4.0 * b2 - a2) / 3.0;
    }
    let (b, l) = (geom.b as f64, lam.l as f64);
    let mut lg = C64::new(0.0, 0.0);
    for j in 0..r {
        let tj = ts[j];
        lg += d2[j] + ((2.0 * b + 1.0) / tj.tanh() + (1.0 - 2.0 * l) * tj.tanh()) * d1[j];
        for k in j + 1..r {
            let tk = ts[k];
            lg += 4.0 * ((2.0 * tj).sinh() * d1[j] - (2.0 * tk).sinh() * d1[k])
                / ((2.0 * tj).cosh() - (2.0 * tk).cosh());
        }
    }
    Ok((lg, g0))
}

/// `|L G + (sum lambda_j^2 + |rho(l)|^2) G| / |G|`.
pub fn radial_residual(geom: Geometry, lam: &SpectralParam, t: &ChamberPoint, h: f64) -> Result<f64> {
    let (lg, g) = radial_operator(geom, lam, t, h)?;
    let lam2: C64 = lam.lambda.iter().map(|z| z * z).sum();
    let rho2: f64 = geom.rho_l(lam.l).iter().map(|x| x * x).sum();
    Ok((lg + (lam2 + rho2) * g).norm() / g.norm())
}
