//! Random group elements for tests and sweeps.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{make_a, CMat, Geometry, GroupElement};
use crate::numerics::haar::haar_k_from_rng;
use crate::C64;

fn gauss(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Random element of the Lie algebra: skew-Hermitian diagonal blocks with
/// total trace zero and off-diagonal blocks `B`, `B*`.
pub fn random_lie_algebra(geom: Geometry, rng: &mut impl Rng, scale: f64) -> CMat {
    let (r, n) = (geom.r, geom.n());
    let mut x = CMat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let z = gauss(rng) * scale;
            let same_block = (i < r) == (j < r);
            if i == j {
                x[(i, i)] = C64::new(0.0, z.im);
            } else if same_block {
                x[(i, j)] = z;
                x[(j, i)] = -z.conj();
            } else {
                x[(i, j)] = z;
                x[(j, i)] = z.conj();
            }
        }
    }
    let tr = x.trace() / n as f64;
    for i in 0..n {
        x[(i, i)] -= tr;
    }
    x
}

fn exp_nilpotent(x: &CMat) -> CMat {
    let n = x.nrows();
    let mut out = CMat::identity(n, n);
    let mut term = CMat::identity(n, n);
    for k in 1..=n {
        term = &term * x / C64::from(k as f64);
        out += &term;
    }
    out
}

/// Random element of `N`: the positive-weight part of a random Lie algebra
/// element in the weight basis, exponentiated.
pub fn random_n(geom: Geometry, rng: &mut impl Rng, scale: f64) -> GroupElement {
    let (r, b, n) = (geom.r, geom.b, geom.n());
    let p = super::decomp::weight_basis(geom);
    let y = p.adjoint() * random_lie_algebra(geom, rng, scale) * &p;
    let in_zero = |i: usize| i >= r && i < r + b;
    let nil = CMat::from_fn(n, n, |i, j| {
        if i < j && !(in_zero(i) && in_zero(j)) {
            y[(i, j)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let m = &p * exp_nilpotent(&nil) * p.adjoint();
    GroupElement::new_unchecked(geom, m)
}

/// `k1 a_t k2` with Haar `k`'s and `t_j` uniform in `[0, scale]`.
pub fn random_group_element(geom: Geometry, rng: &mut impl Rng, scale: f64) -> GroupElement {
    let k1 = haar_k_from_rng(geom, rng);
    let k2 = haar_k_from_rng(geom, rng);
    let t: Vec<f64> = (0..geom.r).map(|_| rng.random::<f64>() * scale).collect();
    let a = make_a(geom, &t).expect("length r");
    k1.to_group().mul(&a).mul(&k2.to_group())
}
