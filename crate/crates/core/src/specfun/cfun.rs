//! Harish-Chandra `c`-function, short-root products and the `b`-function.

use serde::{Deserialize, Serialize};

use super::gamma::{ln_gamma, rgamma};
use crate::geometry::Geometry;
use crate::{Error, Result, C64};

const I: C64 = C64::new(0.0, 1.0);
const WALL_TOL: f64 = 1e-12;

/// Spectral parameter `lambda` in `a*_C` together with the bundle index `l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralParam {
    pub lambda: Vec<C64>,
    pub l: i64,
}

impl SpectralParam {
    pub fn new(lambda: Vec<C64>, l: i64) -> Self {
        SpectralParam { lambda, l }
    }

    pub fn real(lambda: &[f64], l: i64) -> Self {
        SpectralParam {
            lambda: lambda.iter().map(|&x| C64::from(x)).collect(),
            l,
        }
    }

    pub fn r(&self) -> usize {
        self.lambda.len()
    }

    /// `lambda_i != 0` and `lambda_i +- lambda_j != 0` to within `tol`.
    pub fn is_regular(&self, tol: f64) -> bool {
        let lam = &self.lambda;
        lam.iter().all(|z| z.norm() > tol)
            && (0..lam.len()).all(|i| {
                (i + 1..lam.len())
                    .all(|j| (lam[i] - lam[j]).norm() > tol && (lam[i] + lam[j]).norm() > tol)
            })
    }

    pub fn with_lambda(&self, lambda: Vec<C64>) -> Self {
        SpectralParam { lambda, l: self.l }
    }

    pub fn is_real(&self) -> bool {
        self.lambda.iter().all(|z| z.im == 0.0)
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// `c_0 = (b!)^r 2^{r(r+b)} prod_{j=1}^{r-1} (b+j)^{r-j} j!`.
pub(crate) fn c0(geom: Geometry) -> f64 {
    let (r, b) = (geom.r, geom.b);
    let mut c = factorial(b).powi(r as i32) * 2f64.powi((r * (r + b)) as i32);
    for j in 1..r {
        c *= ((b + j) as f64).powi((r - j) as i32) * factorial(j);
    }
    c
}

fn check_rank(geom: Geometry, lam: &SpectralParam) -> Result<()> {
    if lam.r() == geom.r {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: geom.r,
            got: lam.r(),
        })
    }
}

/// Rank-one factor `2^{-i z} Gamma(i z) / (Gamma((b+1+iz+l)/2) Gamma((b+1+iz-l)/2))`.
fn rank_one_factor(b: usize, l: i64, z: C64) -> Result<C64> {
    let bb = b as f64 + 1.0;
    let iz = I * z;
    let num = (-iz * 2f64.ln() + ln_gamma(iz)?).exp();
    Ok(num * rgamma((bb + iz + l as f64) / 2.0) * rgamma((bb + iz - l as f64) / 2.0))
}

/// `c(lambda, l) = (-1)^{r(r-1)/2} 2^{r(r-1)} c_0 / prod_{k<j} (lambda_k^2 - lambda_j^2)
///  * prod_j 2^{-i lambda_j} Gamma(i lambda_j) /
///    (Gamma((b+1+i lambda_j+l)/2) Gamma((b+1+i lambda_j-l)/2))`.
pub fn hc_c(geom: Geometry, lam: &SpectralParam) -> Result<C64> {
    check_rank(geom, lam)?;
    if !lam.is_regular(WALL_TOL) {
        return Err(Error::Pole {
            function: "hc_c",
            at: format!("lambda = {:?} on a wall", lam.lambda),
        });
    }
    let r = geom.r;
    let sign = if (r * r.saturating_sub(1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut c = C64::from(sign * 2f64.powi((r * (r - 1)) as i32) * c0(geom));
    let z = &lam.lambda;
    for k in 0..r {
        for j in k + 1..r {
            c /= z[k] * z[k] - z[j] * z[j];
        }
    }
    for &zj in z {
        c *= rank_one_factor(geom.b, lam.l, zj)?;
    }
    Ok(c)
}

/// `pi(z) = (1/(4(b+2r)))^{r^2} prod z_j prod_{j<k} (z_j^2 - z_k^2)`.
pub fn pi_short(geom: Geometry, z: &[C64]) -> C64 {
    let r = geom.r;
    let k = (1.0 / (4.0 * (geom.b + 2 * r) as f64)).powi((r * r) as i32);
    let mut p = C64::from(k);
    for j in 0..z.len() {
        p *= z[j];
        for m in j + 1..z.len() {
            p *= z[j] * z[j] - z[m] * z[m];
        }
    }
    p
}

/// `eps(l) = -1` when `b + 1 - |l|` is an even integer `<= 0`, else `1`.
/// The `c`-function is even in `l`, so the condition uses `|l|`.
pub fn eps_l(l: i64, b: usize) -> i8 {
    let m = b as i64 + 1 - l.abs();
    if m <= 0 && m % 2 == 0 {
        -1
    } else {
        1
    }
}

/// `pi_l` at `z = i lambda`: `pi(z)` when `eps(l) = 1`, otherwise
/// `prod_{j<k} (lambda_j^2 - lambda_k^2)`.
pub fn pi_l(geom: Geometry, z: &[C64], l: i64) -> C64 {
    if eps_l(l, geom.b) == 1 {
        return pi_short(geom, z);
    }
    let mut p = C64::new(1.0, 0.0);
    for j in 0..z.len() {
        for k in j + 1..z.len() {
            // lambda^2 = -z^2
            p *= z[k] * z[k] - z[j] * z[j];
        }
    }
    p
}

/// `b(lambda, l) = pi_l(i lambda) c(lambda, l)` for real `lambda`,
/// evaluated factor by factor so that it stays finite on the walls.
pub fn b_fn(geom: Geometry, lam: &SpectralParam) -> Result<C64> {
    check_rank(geom, lam)?;
    let (r, b, l) = (geom.r, geom.b, lam.l);
    let bb = b as f64 + 1.0;
    let base = 2f64.powi((r * (r - 1)) as i32) * c0(geom);
    if eps_l(l, b) == 1 {
        let k = (1.0 / (4.0 * (b + 2 * r) as f64)).powi((r * r) as i32);
        let mut acc = C64::from(k * base);
        for &z in &lam.lambda {
            let iz = I * z;
            let num = (-iz * 2f64.ln() + ln_gamma(1.0 + iz)?).exp();
            acc *= num * rgamma((bb + iz + l as f64) / 2.0) * rgamma((bb + iz - l as f64) / 2.0);
        }
        Ok(acc)
    } else {
        let sign = if (r * (r - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let mut acc = C64::from(sign * base);
        // the denominator with argument -p + i z/2 has a pole at z = 0
        let p = -(bb - l.abs() as f64) / 2.0;
        let lsign = l.signum() as f64;
        for &z in &lam.lambda {
            let iz = I * z;
            let regular = rgamma((bb + iz + lsign * l as f64) / 2.0);
            let singular_ratio = if z.norm() < 1e-7 {
                // Gamma(iz) / Gamma(-p + iz/2) -> (-1)^p p! / 2
                let pf = p.round();
                let sgn = if (pf as i64) % 2 == 0 { 1.0 } else { -1.0 };
                C64::from(sgn * factorial(pf as usize) / 2.0)
            } else {
                ln_gamma(iz)?.exp() * rgamma(-p + iz / 2.0)
            };
            acc *= (-iz * 2f64.ln()).exp() * singular_ratio * regular;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{jacobi_c, JacobiOrder};
    use super::*;
    use crate::geometry::WeylElement;

    #[test]
    fn rank_one_closed_form() {
        for b in 0..3 {
            let geom = Geometry::new(1, b).unwrap();
            for l in -2..=3 {
                for x in [0.4, 2.0, 13.0] {
                    let lam = SpectralParam::real(&[x], l);
                    let c = hc_c(geom, &lam).unwrap();
                    let c0 = factorial(b) * 2f64.powi(1 + b as i32);
                    let direct = c0 * rank_one_factor(b, l, C64::from(x)).unwrap();
                    assert!((c - direct).norm() < 1e-13 * c.norm());
                    // bridge to the Jacobi connection coefficient
                    let cj = jacobi_c(C64::from(x), JacobiOrder::new(b, l)).unwrap();
                    assert!((c - 2f64.powi(l as i32) * cj).norm() < 1e-12 * c.norm());
                }
            }
        }
    }

    #[test]
    fn weyl_modulus_invariance() {
        let geom = Geometry::new(2, 1).unwrap();
        let lam = [2.3, 1.1];
        for l in [-1, 0, 2] {
            let base = hc_c(geom, &SpectralParam::real(&lam, l)).unwrap().norm();
            for s in WeylElement::all(2) {
                let v = hc_c(geom, &SpectralParam::real(&s.apply(&lam), l)).unwrap().norm();
                assert!((v / base - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn wall_errors() {
        let geom = Geometry::new(2, 0).unwrap();
        assert!(hc_c(geom, &SpectralParam::real(&[1.0, 1.0], 0)).is_err());
        assert!(hc_c(geom, &SpectralParam::real(&[1.0, 0.0], 0)).is_err());
        assert!(hc_c(geom, &SpectralParam::real(&[1.0], 0)).is_err());
    }

    #[test]
    fn pi_and_eps() {
        let geom = Geometry::new(1, 2).unwrap();
        let v = pi_short(geom, &[C64::from(3.0)]);
        assert!((v.re - 3.0 / 16.0).abs() < 1e-15);
        assert_eq!(eps_l(5, 2), -1);
        assert_eq!(eps_l(3, 2), -1);
        assert_eq!(eps_l(-5, 2), -1);
        assert_eq!(eps_l(2, 2), 1);
        assert_eq!(eps_l(4, 2), 1);
    }

    #[test]
    fn b_fn_matches_product_off_walls() {
        for (r, b, l) in [(1, 0, 0), (1, 1, 2), (2, 0, 1), (2, 1, -3), (1, 0, -1)] {
            let geom = Geometry::new(r, b).unwrap();
            let lam = SpectralParam::real(&[1.7, 0.6][..r], l);
            let z: Vec<C64> = lam.lambda.iter().map(|x| I * x).collect();
            let lit = pi_l(geom, &z, l) * hc_c(geom, &lam).unwrap();
            let v = b_fn(geom, &lam).unwrap();
            assert!((lit - v).norm() < 1e-12 * v.norm(), "{r} {b} {l} {lit} {v}");
        }
    }

    #[test]
    fn lemma_window_bounded() {
        for (r, b) in [(1, 0), (1, 2), (2, 1)] {
            let geom = Geometry::new(r, b).unwrap();
            for l in -3..=3 {
                let e = eps_l(l, b) as f64;
                let expo = (b as f64 - e / 2.0) / 2.0;
                let grid: Vec<f64> = (0..=80).map(|k| k as f64 * 0.5).collect();
                let mut lo = f64::INFINITY;
                let mut hi: f64 = 0.0;
                for (i, &x) in grid.iter().enumerate() {
                    let lam: Vec<f64> = if r == 1 { vec![x] } else { vec![x, grid[(i * 7) % grid.len()]] };
                    let v = b_fn(geom, &SpectralParam::real(&lam, l)).unwrap().norm();
                    let w: f64 = lam.iter().map(|y| (1.0 + y * y).powf(expo)).product();
                    let ratio = 1.0 / (v * w);
                    lo = lo.min(ratio);
                    hi = hi.max(ratio);
                }
                assert!(lo > 0.0 && hi.is_finite() && hi / lo < 1e3, "{r} {b} {l} {lo} {hi}");
            }
        }
    }
}
