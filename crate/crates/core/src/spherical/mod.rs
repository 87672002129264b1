//! The elementary `tau_{-l}`-spherical function `phi_{lambda,l}` on `G`.

mod determinant;
mod integral;
mod key_lemma;
mod radial;
mod series;

pub(crate) use integral::torus_element;
pub use integral::{phi_defining_integral, phi_defining_integral_at, DefiningQuadrature, OracleValue};
pub use key_lemma::{key_lemma_sweep, KeyLemmaReport};
pub use radial::{radial_operator, radial_residual};
pub use series::{phi_asym, phi_series};

use serde::{Deserialize, Serialize};

use crate::geometry::{cartan, tau, weyl_density, ChamberPoint, Geometry, GroupElement};
use crate::specfun::{JacobiOrder, SpectralParam};
use crate::{Error, Result, C64};

/// How a value of `phi` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Determinant,
    Confluent,
    DefiningIntegral,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalEval {
    pub value: C64,
    pub method: Method,
    /// Hadamard ratio of the divided-difference matrix (1 for rank one).
    pub condition_estimate: f64,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// `(-1)^{r(r-1)/2} 2^{2r(r-1)} 2^{rl} prod_{j=1}^r (b+j)^{r-j} (j-1)!`,
/// fixed by `phi(e) = 1`.
pub(crate) fn det_constant(geom: Geometry, l: i64) -> f64 {
    let (r, b) = (geom.r, geom.b);
    let sign = if (r * (r - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let mut c = sign * 2f64.powi((2 * r * (r - 1)) as i32) * 2f64.powf((r as i64 * l) as f64);
    for j in 1..=r {
        c *= ((b + j) as f64).powi((r - j) as i32) * factorial(j - 1);
    }
    c
}

fn check(geom: Geometry, lam: &SpectralParam, t: &ChamberPoint) -> Result<()> {
    if lam.r() != geom.r {
        return Err(Error::Dimension {
            expected: geom.r,
            got: lam.r(),
        });
    }
    if t.t().len() != geom.r {
        return Err(Error::Dimension {
            expected: geom.r,
            got: t.t().len(),
        });
    }
    if !t.in_closed_chamber() || t.t().iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain {
            function: "phi",
            detail: format!("t = {:?} outside the closed chamber", t.t()),
        });
    }
    Ok(())
}

/// `u^l phi_{lambda,l}(a_T)`, the quantity the determinant formula gives
/// directly; also returns the method and condition estimate.
pub fn phi_ul(geom: Geometry, lam: &SpectralParam, t: &ChamberPoint) -> Result<SphericalEval> {
    check(geom, lam, t)?;
    let r = geom.r;
    let x: Vec<f64> = t.t().iter().map(|&s| (2.0 * s).cosh()).collect();
    let y: Vec<C64> = lam.lambda.iter().map(|z| z * z).collect();
    let order = JacobiOrder::new(geom.b, lam.l);
    let d = determinant::divided_determinant(&x, &y, order)?;
    let value = det_constant(geom, lam.l) * d.det / 2f64.powi((r * (r - 1) / 2) as i32);
    Ok(SphericalEval {
        value,
        method: if d.confluent {
            Method::Confluent
        } else {
            Method::Determinant
        },
        condition_estimate: if r == 1 { 1.0 } else { d.condition },
    })
}

/// `phi_{lambda,l}(a_T)` on the closed chamber.
pub fn phi(geom: Geometry, lam: &SpectralParam, t: &ChamberPoint) -> Result<SphericalEval> {
    let mut e = phi_ul(geom, lam, t)?;
    let u = weyl_density(geom, t).u;
    e.value /= u.powf(lam.l as f64);
    Ok(e)
}

/// `phi(g) = tau_l(pi_0(g))^{-1} phi(A^+(g))`.
pub fn phi_group(geom: Geometry, lam: &SpectralParam, g: &GroupElement) -> Result<C64> {
    let c = cartan(g)?;
    let v = phi(geom, lam, &c.h)?.value;
    let k = c.k1.mul(&c.k2);
    Ok(v / tau(&k, lam.l))
}

#[cfg(test)]
mod tests;
