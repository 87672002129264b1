use super::*;
use crate::geometry::{make_a, WeylElement};
use crate::numerics::{haar_k_sample, seeded_rng};
use crate::specfun::jacobi_phi;

fn geom(r: usize, b: usize) -> Geometry {
    Geometry::new(r, b).unwrap()
}

fn cp(t: &[f64]) -> ChamberPoint {
    ChamberPoint(t.to_vec())
}

#[test]
fn value_one_at_origin() {
    for (r, b) in [(1, 0), (1, 2), (2, 0), (2, 1), (3, 1)] {
        for l in [-2, 0, 1, 3] {
            let lam: Vec<f64> = [2.3, 1.1, 0.4][..r].to_vec();
            let v = phi(geom(r, b), &SpectralParam::real(&lam, l), &cp(&vec![0.0; r])).unwrap();
            assert!((v.value - 1.0).norm() < 1e-8, "{r} {b} {l} {:?}", v);
            assert_eq!(v.method, if r == 1 { Method::Determinant } else { Method::Confluent });
        }
    }
}

#[test]
fn rank_one_reduction() {
    let g = geom(1, 1);
    for l in [-2, 0, 3] {
        for t in [0.3f64, 2.0, 7.5] {
            let lam = SpectralParam::real(&[1.7], l);
            let v = phi(g, &lam, &cp(&[t])).unwrap().value;
            let j = jacobi_phi(C64::from(1.7), t, JacobiOrder::new(1, l)).unwrap();
            assert!((v - j / t.cosh().powi(l as i32)).norm() < 1e-12 * v.norm());
        }
    }
}

#[test]
fn terminating_case_at_complex_lambda() {
    let lam = SpectralParam::new(vec![C64::new(0.0, 1.0)], 0);
    for t in [0.5, 4.0] {
        let v = phi(geom(1, 0), &lam, &cp(&[t])).unwrap().value;
        assert!((v - 1.0).norm() < 1e-10);
    }
}

#[test]
fn torus_oracle_rank_one() {
    let g = geom(1, 0);
    for l in [-2, 0, 1] {
        // the integrand peaks with width ~e^{-2t}; 2048 nodes resolve t <= 2
        for (lam, t, nodes) in [(1.3, 0.8, 2048), (4.0, 1.7, 2048), (0.5, 2.0, 2048), (0.5, 3.0, 32768)] {
            let sp = SpectralParam::real(&[lam], l);
            let v = phi(g, &sp, &cp(&[t])).unwrap().value;
            let o = phi_defining_integral(g, &sp, &cp(&[t]), DefiningQuadrature::Torus { nodes })
                .unwrap();
            assert!((v - o.value).norm() < 1e-10, "{l} {lam} {t} {v} {}", o.value);
        }
    }
}

#[test]
fn group_covariance_against_oracle() {
    // phi(k1 a k2) = tau_l(k1 k2)^{-1} phi(a), checked on the defining integral
    let g = geom(1, 0);
    let ks = haar_k_sample(g, 3, 2);
    let x = ks[0].to_group().mul(&make_a(g, &[0.9]).unwrap()).mul(&ks[1].to_group());
    for l in [-1, 2] {
        let sp = SpectralParam::real(&[2.1], l);
        let v = phi_group(g, &sp, &x).unwrap();
        let o = phi_defining_integral_at(g, &sp, &x, DefiningQuadrature::Torus { nodes: 2048 }).unwrap();
        assert!((v - o.value).norm() < 1e-10, "{v} {}", o.value);
    }
}

#[test]
fn monte_carlo_oracle() {
    for (r, b, l, lam, t) in [
        (1, 1, 2, vec![1.4], vec![0.7]),
        (2, 0, 0, vec![1.9, 0.6], vec![0.8, 0.3]),
    ] {
        let g = geom(r, b);
        let sp = SpectralParam::real(&lam, l);
        let v = phi(g, &sp, &cp(&t)).unwrap().value;
        let q = DefiningQuadrature::MonteCarlo { samples: 200_000, seed: 7, tol: None };
        let o = phi_defining_integral(g, &sp, &cp(&t), q).unwrap();
        assert!((v - o.value).norm() < 4.0 * o.err + 1e-3, "{v} {} {}", o.value, o.err);
    }
}

#[test]
fn weyl_invariance_in_lambda() {
    let g = geom(2, 1);
    let lam = [2.3, 0.7];
    let t = cp(&[1.4, 0.5]);
    let base = phi(g, &SpectralParam::real(&lam, 1), &t).unwrap().value;
    for s in WeylElement::all(2) {
        let v = phi(g, &SpectralParam::real(&s.apply(&lam), 1), &t).unwrap().value;
        assert!((v - base).norm() < 1e-10 * base.norm().max(1e-3));
    }
}

#[test]
fn series_agrees_deep_in_chamber() {
    let g = geom(2, 1);
    let sp = SpectralParam::real(&[2.3, 1.1], 1);
    let t = cp(&[6.0, 3.0]);
    let v = phi(g, &sp, &t).unwrap().value;
    let s = phi_series(g, &sp, &t).unwrap();
    assert!((v - s).norm() < 1e-6 * v.norm(), "{v} {s}");
    assert!(phi_series(g, &sp, &cp(&[3.0, 3.0])).is_err());
}

#[test]
fn series_rank_one_connection() {
    let g = geom(1, 2);
    let sp = SpectralParam::real(&[3.1], -1);
    for t in [1.0, 4.0] {
        let v = phi(g, &sp, &cp(&[t])).unwrap().value;
        let s = phi_series(g, &sp, &cp(&[t])).unwrap();
        assert!((v - s).norm() < 1e-10 * v.norm());
    }
}

#[test]
fn asymptotic_term() {
    let g = geom(2, 1);
    let sp = SpectralParam::real(&[2.3, 1.1], 1);
    let dir = [2.0, 1.0];
    let rho = g.rho();
    let tau_dir = 1.0; // min(2 - 1, 1)
    let mut pts = Vec::new();
    for s in [3.0, 4.0, 5.0, 6.0] {
        let t = cp(&[dir[0] * s, dir[1] * s]);
        let e = (phi(g, &sp, &t).unwrap().value - phi_asym(g, &sp, &t).unwrap()).norm();
        pts.push((s, e.ln()));
    }
    let slope = (pts[3].1 - pts[0].1) / (pts[3].0 - pts[0].0);
    let bound = -(rho[0] * dir[0] + rho[1] * dir[1] + tau_dir) + 0.1;
    assert!(slope <= bound, "{slope} {bound}");
}

#[test]
fn radial_eigen_equation() {
    let r1 = radial_residual(geom(1, 0), &SpectralParam::real(&[2.0], 0), &cp(&[1.5]), 1e-3).unwrap();
    assert!(r1 < 1e-5, "{r1}");
    let g = geom(2, 1);
    let sp = SpectralParam::real(&[2.3, 0.7], 2);
    let t = cp(&[2.0, 0.9]);
    let r2 = radial_residual(g, &sp, &t, 1e-3).unwrap();
    assert!(r2 < 1e-4, "{r2}");
    // falsification: flipping the sign of |lambda|^2 breaks it
    let (lg, gv) = radial_operator(g, &sp, &t, 1e-3).unwrap();
    let rho2: f64 = g.rho_l(2).iter().map(|x| x * x).sum();
    let wrong = (lg + (-(2.3f64.powi(2) + 0.7f64.powi(2)) + rho2) * gv).norm() / gv.norm();
    assert!(wrong > 1e3 * r2);
    assert!(matches!(radial_residual(g, &sp, &t, 0.5), Err(Error::Step(_))));
}

#[test]
fn confluent_continuity() {
    let g = geom(2, 1);
    let t = cp(&[1.3, 0.4]);
    // lambda wall lambda_1 = lambda_2: phi is even in the gap
    let at = |d: f64| phi(g, &SpectralParam::real(&[1.5 + d, 1.5 - d], 1), &t).unwrap();
    let wall = at(0.0);
    assert_eq!(wall.method, Method::Confluent);
    let extrap = (4.0 * at(5e-4).value - at(1e-3).value) / 3.0;
    assert!((wall.value - extrap).norm() < 1e-8, "{} {}", wall.value, extrap);
    // chamber walls t_1 = t_2 and t_2 = 0
    let sp = SpectralParam::real(&[2.2, 0.9], -1);
    let tw = |a: f64, b: f64| phi(g, &sp, &cp(&[a, b])).unwrap().value;
    let extrap = (4.0 * tw(1.0 + 5e-4, 1.0) - tw(1.0 + 1e-3, 1.0)) / 3.0;
    let gap_lin = tw(1.0 + 1e-3, 1.0) - tw(1.0 + 5e-4, 1.0);
    assert!((tw(1.0, 1.0) - extrap).norm() < 1e-8 + 2.0 * gap_lin.norm(), "t wall");
    let v0 = tw(0.7, 0.0);
    assert!((v0 - tw(0.7, 1e-3)).norm() < 1e-5);
}

#[test]
fn key_lemma_rank_one() {
    let lam: Vec<Vec<f64>> = (0..=20).map(|k| vec![k as f64 * 2.0]).collect();
    let t: Vec<Vec<f64>> = (0..=20).map(|k| vec![k as f64 * 0.5]).collect();
    let rep = key_lemma_sweep(geom(1, 0), 0, &lam, &t, 4).unwrap();
    assert!(rep.converged && rep.max_ratio.is_finite());
    assert_eq!(rep.fitted_d, 1);
}

#[test]
fn random_points_finite() {
    let g = geom(2, 0);
    let mut rng = seeded_rng(3);
    use rand::Rng;
    for _ in 0..20 {
        let a: f64 = rng.random::<f64>() * 5.0;
        let b: f64 = rng.random::<f64>() * a;
        let sp = SpectralParam::real(&[rng.random::<f64>() * 10.0, rng.random::<f64>() * 10.0], 1);
        let v = phi(g, &sp, &cp(&[a, b])).unwrap();
        assert!(v.value.norm().is_finite());
    }
}

