//! Jacobi functions of order `(alpha, beta) = (b, -l)`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::gamma::{ln_gamma, rgamma};
use super::hyp2f1::{hyp2f1_complex, hyp2f1_series};
use crate::{Error, Result, C64};

const I: C64 = C64::new(0.0, 1.0);

/// Guard band around integer `i mu` for the public entry points.
const PUBLIC_GUARD: f64 = 1e-6;
/// Below this distance from integer `i mu` the connection formula is
/// replaced by a mean value over a small circle in `mu^2`.
const CONNECTION_GUARD: f64 = 1e-3;
const CIRCLE_POINTS: usize = 32;

/// Order `(alpha, beta) = (b, -l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobiOrder {
    pub alpha: usize,
    pub beta: i64,
}

impl JacobiOrder {
    pub fn new(b: usize, l: i64) -> Self {
        JacobiOrder { alpha: b, beta: -l }
    }

    /// `alpha + beta + 1 = b + 1 - l`.
    pub fn rho(&self) -> f64 {
        self.alpha as f64 + self.beta as f64 + 1.0
    }

    fn alpha_f(&self) -> f64 {
        self.alpha as f64
    }

    fn beta_f(&self) -> f64 {
        self.beta as f64
    }
}

fn integer_distance(z: C64) -> f64 {
    (z - z.re.round()).norm()
}

/// `phi_mu(t) = F((rho + i mu)/2, (rho - i mu)/2; alpha + 1; -sinh^2 t)`.
pub fn jacobi_phi(mu: C64, t: f64, order: JacobiOrder) -> Result<C64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain {
            function: "jacobi_phi",
            detail: format!("t = {t}"),
        });
    }
    if t == 0.0 {
        return Ok(C64::new(1.0, 0.0));
    }
    phi_w(mu, C64::from(-t.sinh().powi(2)), order)
}

/// The second solution `psi_mu(t) ~ e^{(i mu - rho) t}`, for `sinh t > 1`
/// and `i mu` not a positive integer.
pub fn jacobi_psi(mu: C64, t: f64, order: JacobiOrder) -> Result<C64> {
    if !(t.sinh() >= 1.0 - 1e-15 && t.is_finite()) {
        return Err(Error::Domain {
            function: "jacobi_psi",
            detail: format!("t = {t} below arsinh 1"),
        });
    }
    let imu = I * mu;
    if imu.re > 0.5 && integer_distance(imu) < PUBLIC_GUARD {
        return Err(Error::Pole {
            function: "jacobi_psi",
            at: format!("i mu = {imu}"),
        });
    }
    psi_w(mu, C64::from(-t.sinh().powi(2)), order)
}

/// Connection coefficient
/// `c(mu) = 2^{rho - i mu} Gamma(alpha+1) Gamma(i mu) /
///  (Gamma((rho + i mu)/2) Gamma((alpha - beta + 1 + i mu)/2))`.
/// Errors for integer `i mu`, where `phi` is not a combination of
/// `psi_mu`, `psi_{-mu}`.
pub fn jacobi_c(mu: C64, order: JacobiOrder) -> Result<C64> {
    let imu = I * mu;
    if integer_distance(imu) < PUBLIC_GUARD {
        return Err(Error::Pole {
            function: "jacobi_c",
            at: format!("i mu = {imu}"),
        });
    }
    c_conn(mu, order)
}

pub(crate) fn c_conn(mu: C64, order: JacobiOrder) -> Result<C64> {
    let rho = order.rho();
    let imu = I * mu;
    let a = order.alpha_f();
    let log_part = (rho - imu) * 2f64.ln() + ln_gamma(C64::from(a + 1.0))? + ln_gamma(imu)?;
    Ok(log_part.exp() * rgamma((rho + imu) / 2.0) * rgamma((a - order.beta_f() + 1.0 + imu) / 2.0))
}

/// `psi_mu` as a function of `w = -sinh^2 t`, through the Pfaff-equivalent
/// form `(4(1-w))^{(i mu - rho)/2} F((rho - i mu)/2, (alpha - beta + 1 - i mu)/2;
/// 1 - i mu; 1/(1-w))`, valid wherever `|1 - w| > 1`.
pub(crate) fn psi_w(mu: C64, w: C64, order: JacobiOrder) -> Result<C64> {
    let rho = order.rho();
    let imu = I * mu;
    let one_minus_w = 1.0 - w;
    let z = 1.0 / one_minus_w;
    if z.norm() >= 1.0 {
        return Err(Error::Domain {
            function: "jacobi_psi",
            detail: format!("|cosh^-2| = {} >= 1", z.norm()),
        });
    }
    let pref = ((imu - rho) / 2.0 * (4.0 * one_minus_w).ln()).exp();
    let f = hyp2f1_series(
        (rho - imu) / 2.0,
        (order.alpha_f() - order.beta_f() + 1.0 - imu) / 2.0,
        1.0 - imu,
        z,
        20_000,
    )?;
    Ok(pref * f)
}

fn phi_series(mu: C64, w: C64, order: JacobiOrder) -> Result<C64> {
    let rho = order.rho();
    let imu = I * mu;
    hyp2f1_complex(
        (rho + imu) / 2.0,
        (rho - imu) / 2.0,
        C64::from(order.alpha_f() + 1.0),
        w,
    )
}

fn phi_connection(mu: C64, w: C64, order: JacobiOrder) -> Result<C64> {
    Ok(c_conn(mu, order)? * psi_w(mu, w, order)? + c_conn(-mu, order)? * psi_w(-mu, w, order)?)
}

/// Mean value of the entire function `y -> phi_{sqrt y}` over a circle
/// around `mu^2`, avoiding integer `i mu` where the connection formula
/// degenerates. The radius scales like `1/t^2` so that `e^{|Im mu| t}`
/// stays bounded on the circle.
fn phi_circle(mu: C64, w: C64, order: JacobiOrder) -> Result<C64> {
    let t_eff = w.norm().sqrt().asinh().max(1.0);
    let radius = (1.0 / (t_eff * t_eff)).min(0.2);
    let y0 = mu * mu;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..CIRCLE_POINTS {
        let y = y0 + C64::from_polar(radius, TAU * (k as f64 + 0.5) / CIRCLE_POINTS as f64);
        acc += phi_connection(y.sqrt(), w, order)?;
    }
    Ok(acc / CIRCLE_POINTS as f64)
}

/// Rough log of the cancellation loss of each representation; the
/// cheaper-in-digits one is used.
fn phi_w(mu: C64, w: C64, order: JacobiOrder) -> Result<C64> {
    let m = mu.norm();
    let pfaff = w / (w - 1.0);
    let z_series = if w.norm() <= pfaff.norm().max(0.5) { w } else { pfaff };
    let series_ok = z_series.norm() < 0.999;
    let z_conn = 1.0 / (1.0 - w);
    let conn_ok = z_conn.norm() < 0.97;
    let near_int = integer_distance(I * mu) < CONNECTION_GUARD;
    let loss_series =
        m * z_series.norm().sqrt() + if z_series.norm() > 0.9 { 2.0 } else { 0.0 };
    let loss_conn = m * z_conn.norm() / 4.0
        + order.alpha_f() * (1.0 / (1.0 - z_conn).norm()).ln()
        + if near_int { 1.5 } else { 0.0 };
    if series_ok && (!conn_ok || loss_series <= loss_conn) {
        phi_series(mu, w, order)
    } else if !conn_ok {
        Err(Error::Domain {
            function: "jacobi_phi",
            detail: format!("no representation at w = {w}"),
        })
    } else if near_int {
        phi_circle(mu, w, order)
    } else {
        phi_connection(mu, w, order)
    }
}

/// `phi` as a function of `x = cosh 2t` (complex), used by the divided
/// differences of the determinant formula. Even in `mu`, so it depends on
/// `y = mu^2` only.
pub(crate) fn phi_xy(x: C64, y: C64, order: JacobiOrder) -> Result<C64> {
    phi_w(y.sqrt(), (1.0 - x) / 2.0, order)
}
