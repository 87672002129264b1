use super::*;
use crate::geometry::{make_a, random_group_element, Geometry, GroupElement, KElement, WeylElement};
use crate::numerics::{quad_interval, seeded_rng, QuadSpec};
use crate::specfun::{hc_c, SpectralParam};
use crate::spherical::{phi_group, torus_element};
use crate::C64;

fn geom(r: usize, b: usize) -> Geometry {
    Geometry::new(r, b).unwrap()
}

fn off_origin(g: Geometry, lam: &SpectralParam) -> CyclicBoundaryFn {
    let mut rng = seeded_rng(11);
    let g0 = random_group_element(g, &mut rng, 0.4);
    let e = GroupElement::identity(g);
    CyclicBoundaryFn::new(vec![(C64::new(1.0, 0.0), e), (C64::new(0.5, -0.3), g0)], lam.clone()).unwrap()
}

#[test]
fn poisson_of_identity_is_phi() {
    let g = geom(2, 1);
    let lam = SpectralParam::real(&[2.3, 0.8], 2);
    let f = CyclicBoundaryFn::identity(g, lam.clone()).unwrap();
    let x = random_group_element(g, &mut seeded_rng(1), 0.8);
    assert_eq!(poisson(&f, &x).unwrap(), phi_group(g, &lam, &x).unwrap());
}

#[test]
fn poisson_matches_k_quadrature() {
    let g = geom(1, 0);
    for l in [-1, 0, 2] {
        let lam = SpectralParam::real(&[1.7], l);
        let f = off_origin(g, &lam);
        for t in [0.3, 0.9] {
            let x = torus_element(0.4).to_group().mul(&make_a(g, &[t]).unwrap());
            let p = poisson(&f, &x).unwrap();
            let q = poisson_quadrature(&f, &x, KScheme::Torus { nodes: 2048 }).unwrap();
            assert!((p - q).norm() < 1e-9, "{l} {t} {p} {q}");
        }
    }
}

#[test]
fn intertwining() {
    for (r, b) in [(1, 0), (1, 2), (2, 0), (2, 1)] {
        let g = geom(r, b);
        let lam = SpectralParam::real(&[2.1, 0.6][..r], 1);
        let f = off_origin(g, &lam);
        let mut rng = seeded_rng(5);
        for _ in 0..5 {
            let x = random_group_element(g, &mut rng, 1.0);
            let p = poisson(&f, &x).unwrap();
            for s in WeylElement::all(r) {
                let q = poisson(&weyl_translate(&f, &s), &x).unwrap();
                assert!((p - q).norm() < 1e-9 * p.norm().max(1.0));
            }
        }
    }
    // the translated data are different functions on K, yet their Poisson
    // integrals agree
    let g = geom(1, 0);
    let lam = SpectralParam::real(&[1.3], -2);
    let f = off_origin(g, &lam);
    let s = &WeylElement::all(1)[1];
    let fs = weyl_translate(&f, s);
    let k = torus_element(1.1);
    assert!((f.eval(&k).unwrap() - fs.eval(&k).unwrap()).norm() > 1e-3);
    let x = make_a(g, &[0.7]).unwrap();
    let q = poisson_quadrature(&fs, &x, KScheme::Torus { nodes: 2048 }).unwrap();
    assert!((q - poisson(&f, &x).unwrap()).norm() < 1e-9);
}

#[test]
fn weyl_translate_involution() {
    let g = geom(2, 0);
    let f = off_origin(g, &SpectralParam::real(&[2.0, 0.5], 0));
    for s in WeylElement::all(2) {
        let back = weyl_translate(&weyl_translate(&f, &s), &s.inverse());
        assert_eq!(back, f);
    }
    assert_eq!(weyl_translate(&f, &WeylElement::identity(2)), f);
}

#[test]
fn s_operator_rank_one_closed_form() {
    let g = geom(1, 0);
    let lam = SpectralParam::real(&[1.9], 0);
    let f = CyclicBoundaryFn::identity(g, lam.clone()).unwrap();
    let c = hc_c(g, &lam).unwrap();
    let cm = hc_c(g, &SpectralParam::real(&[-1.9], 0)).unwrap();
    for t in [0.5f64, 3.0] {
        let s = s_operator(&f, &make_a(g, &[t]).unwrap()).unwrap();
        let e = c * C64::new(-t, 1.9 * t).exp() + cm * C64::new(-t, -1.9 * t).exp();
        assert!((s - e).norm() < 1e-12);
    }
}

#[test]
fn s_operator_approaches_poisson() {
    let g = geom(2, 1);
    let lam = SpectralParam::real(&[2.3, 1.1], 1);
    let f = CyclicBoundaryFn::identity(g, lam).unwrap();
    let rel = |s: f64| {
        let x = make_a(g, &[2.0 * s, s]).unwrap();
        let p = poisson(&f, &x).unwrap();
        (p - s_operator(&f, &x).unwrap()).norm() / p.norm()
    };
    let (a, b) = (rel(2.0), rel(5.0));
    assert!(b < 1e-3 && b < 0.1 * a, "{a} {b}");
}

#[test]
fn s_operator_right_covariance() {
    let g = geom(1, 1);
    let lam = SpectralParam::real(&[1.2], 2);
    let f = off_origin(g, &lam);
    let x = random_group_element(g, &mut seeded_rng(9), 1.0);
    let k = crate::numerics::haar_k_sample(g, 4, 1).remove(0);
    let a = s_operator(&f, &x).unwrap();
    let b = s_operator(&f, &x.mul(&k.to_group())).unwrap();
    assert!((b - a * crate::geometry::tau(&k, 2).conj()).norm() < 1e-10);
}

#[test]
fn ball_volume_rank_one() {
    let g = geom(1, 0);
    let spec = QuadSpec::new(1, 0.0);
    let radii = [1.0, 4.0, 9.0];
    let v = ball_average_chamber(g, |_| Ok(1.0), &radii, &spec).unwrap();
    let u = g.killing_unit();
    for bv in v {
        let t = bv.radius / u;
        let exact = ((2.0 * t).cosh() - 1.0) * u / bv.radius;
        assert!((bv.value - exact).abs() < 1e-10 * exact);
    }
}

#[test]
fn schemes_agree_on_invariant_modulus() {
    let g = geom(1, 0);
    let lam = SpectralParam::real(&[1.3], 1);
    let f = CyclicBoundaryFn::identity(g, lam).unwrap();
    let spec = QuadSpec::new(1, 0.0).with_tol(1e-12, 1e-9);
    let radii = [2.0, 4.0];
    let a = ball_average(g, |x| poisson(&f, x), &radii, KScheme::Invariant, &spec).unwrap();
    let b = ball_average(g, |x| poisson(&f, x), &radii, KScheme::Torus { nodes: 8 }, &spec).unwrap();
    let c = ball_average(g, |x| poisson(&f, x), &radii, KScheme::MonteCarlo { samples: 8, seed: 2 }, &spec)
        .unwrap();
    for i in 0..2 {
        assert!((a[i].value - b[i].value).abs() < 1e-8 * a[i].value);
        assert!((a[i].value - c[i].value).abs() < 1e-8 * a[i].value);
    }
}

#[test]
fn extrapolation_exact_on_model() {
    let radii: Vec<f64> = (1..=20).map(|k| 5.0 * k as f64).collect();
    let vals: Vec<f64> = radii.iter().map(|r| 2.0 + 3.0 / r).collect();
    let (v, e) = extrapolate(&radii, &vals).unwrap();
    assert!((v - 2.0).abs() < 1e-12 && e < 1e-12);
    assert!(extrapolate(&radii[..3], &vals[..3]).is_err());
}

#[test]
fn norm_limit_scales_quadratically() {
    let g = geom(1, 0);
    let f = CyclicBoundaryFn::identity(g, SpectralParam::real(&[1.3], 0)).unwrap();
    let spec = QuadSpec::new(1, 0.0).with_tol(1e-12, 1e-10).with_panel_width(0.5);
    let radii: Vec<f64> = (1..=8).map(|k| 5.0 * k as f64).collect();
    let a = norm_limit(&f, &radii, KScheme::Invariant, &spec).unwrap();
    let b = norm_limit(&f.scaled(C64::new(2.0, 0.0)), &radii, KScheme::Invariant, &spec).unwrap();
    assert!((b.limit / a.limit - 4.0).abs() < 1e-6);
    assert!((b.ratio - a.ratio).abs() < 1e-9);
    assert!((a.ball_volume - 2.0).abs() < 1e-14);
}

#[test]
fn spline_reproduces_cubic_pieces() {
    let g = geom(1, 0);
    let rows: Vec<(Vec<f64>, C64)> = (0..=40)
        .map(|k| {
            let t = k as f64 * 0.05;
            (vec![t], C64::new((3.0 * t).sin(), t * t))
        })
        .collect();
    let p = RadialProfile::from_table(g, &rows).unwrap();
    let t = 0.737;
    assert!((p.eval(&[t]) - C64::new((3.0 * t).sin(), t * t)).norm() < 1e-4);
    assert!((p.support() - 2.0 * g.killing_unit()).abs() < 1e-12);
    assert_eq!(p.eval(&[2.5]), C64::new(0.0, 0.0));
}

#[test]
fn grid_bilinear_and_mirror() {
    let g = geom(2, 0);
    let mut rows = Vec::new();
    for i in 0..=4 {
        for j in 0..=i {
            let (a, b) = (i as f64 * 0.25, j as f64 * 0.25);
            rows.push((vec![a, b], C64::new(1.0 + a + 2.0 * b + a * b, 0.0)));
        }
    }
    let p = RadialProfile::from_table(g, &rows).unwrap();
    let v = p.eval(&[0.6, 0.3]);
    assert!((v.re - (1.0 + 0.6 + 0.6 + 0.18)).abs() < 1e-12);
    assert!(RadialProfile::from_table(g, &[(vec![0.1, 0.3], C64::from(1.0)), (vec![0.5, 0.1], C64::from(1.0))])
        .is_err());
}

#[test]
fn reduction_against_group_integral() {
    // int_G F conj(phi) dg over K x A x K coordinates, with F and phi both
    // evaluated from the group element alone
    let g = geom(1, 0);
    let l = 1;
    let lam = SpectralParam::real(&[1.4], l);
    let p = RadialProfile::bump(g, Bump::Quartic, 4.0).unwrap();
    let reduced = spherical_transform(&p, &lam).unwrap();
    let n = 6;
    let (v, _) = quad_interval(
        |t: f64| {
            let a = make_a(g, &[t]).unwrap();
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    let k1 = torus_element(0.3 + std::f64::consts::TAU * i as f64 / n as f64);
                    let k2 = torus_element(1.1 + std::f64::consts::TAU * j as f64 / n as f64);
                    let x = k1.to_group().mul(&a).mul(&k2.to_group());
                    acc += p.eval_group(&x, l).unwrap() * phi_group(g, &lam, &x).unwrap().conj();
                }
            }
            acc / (n * n) as f64 * 2.0 * (2.0 * t).sinh()
        },
        0.0,
        4.0 / g.killing_unit(),
        4,
        1e-14,
        1e-12,
        100_000,
    )
    .unwrap();
    let direct = v * g.killing_unit();
    assert!((direct - reduced).norm() < 1e-6 * reduced.norm(), "{direct} {reduced}");
}

#[test]
fn plancherel_rank_one() {
    let g = geom(1, 0);
    let p = RadialProfile::bump(g, Bump::Smooth, 3.0).unwrap();
    let (cont, norm) = plancherel_window(&p, 0, 40.0).unwrap();
    assert!(cont <= 1.05 * norm);
    assert!((cont / norm - 1.0).abs() < 1e-3, "{cont} {norm}");
}

#[test]
fn restriction_ratio_finite() {
    let g = geom(1, 1);
    let p = RadialProfile::bump(g, Bump::Tent, 3.0).unwrap();
    for (x, l) in [(0.2, 0), (5.0, -3), (30.0, 3)] {
        let v = restriction_ratio(&p, &SpectralParam::real(&[x], l)).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }
}

#[test]
fn inversion_reduction_matches_k_quadrature() {
    let g = geom(1, 0);
    let lam = SpectralParam::real(&[1.6], 1);
    let f = CyclicBoundaryFn::identity(g, lam).unwrap();
    let spec = QuadSpec::new(1, 0.0).with_tol(1e-12, 1e-9);
    let radii = [1.0, 2.0, 3.0, 4.0];
    let k = torus_element(0.7);
    let a = boundary_inversion(&f, &k, &radii, KScheme::Invariant, &spec).unwrap();
    let b = boundary_inversion(&f, &k, &radii, KScheme::Torus { nodes: 4096 }, &spec).unwrap();
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x - y).norm() < 1e-7 * x.norm(), "{x} {y}");
    }
    // equivariance under m = -1
    let m = KElement::new(
        nalgebra::DMatrix::from_element(1, 1, C64::new(-1.0, 0.0)),
        nalgebra::DMatrix::from_element(1, 1, C64::new(-1.0, 0.0)),
    )
    .unwrap();
    let c = boundary_inversion(&f, &k.mul(&m), &radii, KScheme::Torus { nodes: 4096 }, &spec).unwrap();
    for (x, y) in b.values.iter().zip(&c.values) {
        assert!((y + x).norm() < 1e-9 * x.norm());
    }
}

#[test]
fn residual_tends_to_zero_rank_one() {
    let g = geom(1, 0);
    let f = CyclicBoundaryFn::identity(g, SpectralParam::real(&[1.3], 0)).unwrap();
    let spec = QuadSpec::new(1, 0.0).with_tol(1e-12, 1e-8).with_panel_width(0.5);
    let res = asymptotic_residual(&f, &[10.0, 60.0], KScheme::Invariant, &spec).unwrap();
    // the integral over the ball converges, so the average decays like 1/R
    let ratio = res[1].value / res[0].value;
    assert!((ratio * 6.0 - 1.0).abs() < 0.02, "{res:?}");
    let scale = hc_c(g, &f.lam).unwrap().norm_sqr();
    assert!(res[1].value < 0.01 * scale);
}
