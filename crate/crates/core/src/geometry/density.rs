//! Weyl integration density, the distance to the walls, and the
//! Riemannian distance.

use super::{cartan_radial, ChamberPoint, Geometry, GroupElement};

/// The factors of the Weyl integration formula at `a_T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylDensity {
    /// `Delta(a_T) = omega^2 2^{r(2b+1)} prod sinh^{2b} t_j sinh 2t_j`.
    pub delta: f64,
    /// `omega = 2^{r(r-1)/2} prod_{j<k} (cosh 2t_j - cosh 2t_k)`.
    pub omega: f64,
    /// `u = 2^r prod cosh t_j`.
    pub u: f64,
}

pub fn weyl_density(geom: Geometry, t: &ChamberPoint) -> WeylDensity {
    let t = t.t();
    let (r, b) = (geom.r as i32, geom.b as i32);
    let mut omega = 2f64.powi(r * (r - 1) / 2);
    for j in 0..t.len() {
        for k in j + 1..t.len() {
            omega *= (2.0 * t[j]).cosh() - (2.0 * t[k]).cosh();
        }
    }
    let mut delta = omega * omega * 2f64.powi(r * (2 * b + 1));
    let mut u = 2f64.powi(r);
    for &tj in t {
        delta *= tj.sinh().powi(2 * b) * (2.0 * tj).sinh();
        u *= tj.cosh();
    }
    WeylDensity { delta, omega, u }
}

/// `min(t_1 - t_2, ..., t_{r-1} - t_r, beta_r)` with `beta_r = 2 t_r` when
/// `b = 0` and `t_r` otherwise.
pub fn tau_min(geom: Geometry, t: &ChamberPoint) -> f64 {
    let t = t.t();
    let last = *t.last().expect("rank >= 1");
    let beta = if geom.b == 0 { 2.0 * last } else { last };
    t.windows(2).map(|w| w[0] - w[1]).fold(beta, f64::min)
}

/// Killing length of `A^+(g)`: `2 sqrt((2r+b) sum t_j^2)`.
pub fn distance(g: &GroupElement) -> f64 {
    let geom = g.geom();
    let t = ChamberPoint(cartan_radial(g));
    geom.killing_unit() * t.norm()
}

#[cfg(test)]
mod tests {
    use super::super::make_a;
    use super::*;
    use crate::numerics::haar_k_sample;

    #[test]
    fn rank_one_density() {
        let geom = Geometry::new(1, 0).unwrap();
        let s = 0.8f64;
        let w = weyl_density(geom, &ChamberPoint(vec![s]));
        assert!((w.delta - 2.0 * (2.0 * s).sinh()).abs() < 1e-14);
        assert_eq!(w.omega, 1.0);
        assert!((w.u - 2.0 * s.cosh()).abs() < 1e-14);
    }

    #[test]
    fn walls_and_origin() {
        let geom = Geometry::new(2, 1).unwrap();
        let w = weyl_density(geom, &ChamberPoint(vec![0.5, 0.5]));
        assert_eq!(w.omega, 0.0);
        assert_eq!(w.delta, 0.0);
        assert_eq!(weyl_density(geom, &ChamberPoint(vec![0.0, 0.0])).u, 4.0);
    }

    #[test]
    fn delta_times_exp_neg_two_rho_tends_to_one() {
        // validates the ordering of rho against the density
        for (r, b) in [(1, 0), (1, 2), (2, 0), (2, 1)] {
            let geom = Geometry::new(r, b).unwrap();
            let dir = [1.0, 0.4];
            let rho = geom.rho();
            let s = 25.0;
            let t: Vec<f64> = dir[..r].iter().map(|d| d * s).collect();
            let w = weyl_density(geom, &ChamberPoint(t.clone()));
            let e: f64 = t.iter().zip(&rho).map(|(a, b)| a * b).sum();
            let v = w.delta * (-2.0 * e).exp();
            assert!((v - 1.0).abs() < 1e-6, "{r} {b} {v}");
        }
    }

    #[test]
    fn tau_min_and_distance() {
        let geom = Geometry::new(2, 1).unwrap();
        assert_eq!(tau_min(geom, &ChamberPoint(vec![3.0, 1.0])), 1.0);
        let g10 = Geometry::new(1, 0).unwrap();
        assert_eq!(tau_min(g10, &ChamberPoint(vec![0.7])), 1.4);
        let s = 1.3;
        let d = distance(&make_a(g10, &[s]).unwrap());
        assert!((d - 2.0 * 2f64.sqrt() * s).abs() < 1e-12);
        let a = make_a(geom, &[1.1, 0.2]).unwrap();
        let ks = haar_k_sample(geom, 7, 2);
        let g = ks[0].to_group().mul(&a).mul(&ks[1].to_group());
        assert!((distance(&g) - distance(&a)).abs() < 1e-10);
    }
}
