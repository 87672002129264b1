//! Harish-Chandra series and its leading asymptotic term.

use crate::geometry::{weyl_density, ChamberPoint, Geometry, WeylElement};
use crate::specfun::{hc_c, psi_w, JacobiOrder, SpectralParam};
use crate::{Error, Result, C64};

fn require_real_regular(lam: &SpectralParam, function: &'static str) -> Result<()> {
    if !lam.is_real() || !lam.is_regular(1e-12) {
        return Err(Error::Domain {
            function,
            detail: format!("lambda = {:?} must be real and regular", lam.lambda),
        });
    }
    Ok(())
}

/// `u^{-l} sum_{s in W} c(s lambda, l) prod_j psi_{(s lambda)_j}(t_j) / omega`,
/// for `t` inside the chamber with `sinh t_r > 1`.
pub fn phi_series(geom: Geometry, lam: &SpectralParam, t: &ChamberPoint) -> Result<C64> {
    require_real_regular(lam, "phi_series")?;
    let ts = t.t();
    if ts.len() != geom.r
        || !t.in_open_chamber()
        || ts[geom.r - 1].sinh() < 1.0
        || ts.windows(2).any(|w| w[0] - w[1] < 1e-6)
    {
        return Err(Error::Domain {
            function: "phi_series",
            detail: format!("t = {ts:?} too close to a wall"),
        });
    }
    let order = JacobiOrder::new(geom.b, lam.l);
    let dens = weyl_density(geom, t);
    let mut acc = C64::new(0.0, 0.0);
    for s in WeylElement::all(geom.r) {
        let sl = lam.with_lambda(s.apply(&lam.lambda));
        let mut term = hc_c(geom, &sl)?;
        for (mu, &tj) in sl.lambda.iter().zip(ts) {
            term *= psi_w(*mu, C64::from(-tj.sinh().powi(2)), order)?;
        }
        acc += term;
    }
    Ok(acc / dens.omega / dens.u.powf(lam.l as f64))
}

/// `u^{-l} sum_{s in W} c(s lambda, l) e^{(i s lambda - rho(l))(H_T)}`.
pub fn phi_asym(geom: Geometry, lam: &SpectralParam, t: &ChamberPoint) -> Result<C64> {
    require_real_regular(lam, "phi_asym")?;
    let ts = t.t();
    let rho_l = geom.rho_l(lam.l);
    let u = weyl_density(geom, t).u;
    let mut acc = C64::new(0.0, 0.0);
    for s in WeylElement::all(geom.r) {
        let sl = lam.with_lambda(s.apply(&lam.lambda));
        let expo: C64 = sl
            .lambda
            .iter()
            .zip(ts)
            .zip(&rho_l)
            .map(|((z, &tj), &rj)| (C64::new(0.0, 1.0) * z - rj) * tj)
            .sum();
        acc += hc_c(geom, &sl)? * expo.exp();
    }
    Ok(acc / u.powf(lam.l as f64))
}
