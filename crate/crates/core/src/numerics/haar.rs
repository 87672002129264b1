//! Seeded randomness and Haar sampling on `K`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::geometry::{Geometry, KElement};
use crate::C64;

/// The single generator family used throughout.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-distributed `m x m` unitary: QR of a complex Gaussian matrix with
/// the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary(m: usize, rng: &mut impl Rng) -> DMatrix<C64> {
    let z = DMatrix::from_fn(m, m, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..m {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Haar sample on `S(U(r) x U(r+b))`: independent Haar blocks times the
/// scalar phase that makes the determinant one. The phase is uniform on
/// the `n`-th roots of the block determinant, which preserves Haar measure.
pub(crate) fn haar_k_from_rng(geom: Geometry, rng: &mut impl Rng) -> KElement {
    let a = haar_unitary(geom.r, rng);
    let d = haar_unitary(geom.r + geom.b, rng);
    let det = a.determinant() * d.determinant();
    let n = geom.n() as f64;
    let branch = (rng.random::<f64>() * n).floor();
    let th = (-det.arg() + std::f64::consts::TAU * branch) / n;
    let ph = C64::from_polar(1.0, th);
    KElement { a: a * ph, d: d * ph }
}

/// `count` Haar samples from a generator seeded with `seed`.
pub fn haar_k_sample(geom: Geometry, seed: u64, count: usize) -> Vec<KElement> {
    let mut rng = seeded_rng(seed);
    (0..count).map(|_| haar_k_from_rng(geom, &mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tau;

    #[test]
    fn blocks_unitary_det_one() {
        let geom = Geometry::new(2, 1).unwrap();
        for k in haar_k_sample(geom, 42, 20) {
            KElement::new(k.a.clone(), k.d.clone()).unwrap();
            let id = DMatrix::<C64>::identity(3, 3);
            assert!((k.d.adjoint() * &k.d - id).camax() < 1e-12);
        }
    }

    #[test]
    fn character_orthogonality() {
        let geom = Geometry::new(1, 1).unwrap();
        let n = 200_000;
        let mean: C64 = haar_k_sample(geom, 9, n).iter().map(|k| tau(k, 1)).sum::<C64>() / n as f64;
        assert!(mean.norm() < 1e-2);
    }

    #[test]
    fn left_invariance_of_moments() {
        // E|tr A|^2 = 1 for Haar U(r) blocks, before and after translation
        let geom = Geometry::new(2, 0).unwrap();
        let k0 = haar_k_sample(geom, 1, 1).pop().unwrap();
        let n = 50_000;
        let ks = haar_k_sample(geom, 2, n);
        let m1: f64 = ks.iter().map(|k| k.a.trace().norm_sqr()).sum::<f64>() / n as f64;
        let m2: f64 = ks
            .iter()
            .map(|k| k0.mul(k).a.trace().norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((m1 - 1.0).abs() < 0.03 && (m2 - 1.0).abs() < 0.03, "{m1} {m2}");
    }
}
