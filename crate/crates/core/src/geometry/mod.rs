//! The group `G = SU(r, r+b)`: elements, the subgroup `K`, the Cartan
//! subspace, and the Weyl group of the restricted roots.

mod decomp;
mod density;
mod random;
mod weyl;

pub use decomp::{
    boundary_pair, cartan, cartan_radial, iwasawa, lemma_a_limit, polar_k, tau, tau_polar, CartanFactors,
    IwasawaFactors,
};
pub use density::{distance, tau_min, weyl_density, WeylDensity};
pub use random::{random_group_element, random_lie_algebra, random_n};
pub use weyl::WeylElement;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

pub(crate) type CMat = DMatrix<C64>;

/// Structural tolerance for group membership checks.
pub const GROUP_TOL: f64 = 1e-10;

/// Rank and multiplicity parameter of `SU(r, r+b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Geometry {
    pub r: usize,
    pub b: usize,
}

impl Geometry {
    pub fn new(r: usize, b: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Config("rank r must be at least 1".into()));
        }
        if 2 * r + b > 64 {
            return Err(Error::Config(format!("matrix size 2r+b = {} too large", 2 * r + b)));
        }
        Ok(Geometry { r, b })
    }

    /// Matrix size `2r + b`.
    pub fn n(&self) -> usize {
        2 * self.r + self.b
    }

    /// `B(X, Y) = killing_scale * Tr(XY)`.
    pub fn killing_scale(&self) -> f64 {
        2.0 * self.n() as f64
    }

    /// Killing length of `H_T` per unit Euclidean length of `t`: `2 sqrt(n)`.
    pub fn killing_unit(&self) -> f64 {
        2.0 * (self.n() as f64).sqrt()
    }

    /// `J = diag(I_r, -I_{r+b})`.
    pub fn j(&self) -> CMat {
        let n = self.n();
        CMat::from_fn(n, n, |i, k| {
            if i != k {
                C64::new(0.0, 0.0)
            } else if i < self.r {
                C64::new(1.0, 0.0)
            } else {
                C64::new(-1.0, 0.0)
            }
        })
    }

    /// `rho_j = b + 1 + 2(r - j)`, `j = 1..r`.
    pub fn rho(&self) -> Vec<f64> {
        (1..=self.r)
            .map(|j| (self.b + 1 + 2 * (self.r - j)) as f64)
            .collect()
    }

    /// `rho(l)_j = rho_j - l`.
    pub fn rho_l(&self, l: i64) -> Vec<f64> {
        self.rho().into_iter().map(|x| x - l as f64).collect()
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got == self.r {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: self.r,
                got,
            })
        }
    }
}

/// An element of `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    m: CMat,
    geom: Geometry,
}

impl GroupElement {
    /// Validates `m* J m = J` and `det m = 1` to [`GROUP_TOL`] (scaled by
    /// the size of `m`).
    pub fn new(geom: Geometry, m: CMat) -> Result<Self> {
        let n = geom.n();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::Dimension {
                expected: n,
                got: m.nrows(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NotInGroup("non-finite entry".into()));
        }
        let j = geom.j();
        let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>().max(1.0);
        let defect = (m.adjoint() * &j * &m - &j).camax();
        if defect > GROUP_TOL * scale {
            return Err(Error::NotInGroup(format!("|m* J m - J| = {defect:.3e}")));
        }
        let det = m.determinant();
        if (det - 1.0).norm() > GROUP_TOL * scale.sqrt() {
            return Err(Error::NotInGroup(format!("det = {det}")));
        }
        Ok(GroupElement { m, geom })
    }

    pub(crate) fn new_unchecked(geom: Geometry, m: CMat) -> Self {
        GroupElement { m, geom }
    }

    pub fn identity(geom: Geometry) -> Self {
        let n = geom.n();
        GroupElement {
            m: CMat::identity(n, n),
            geom,
        }
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn geom(&self) -> Geometry {
        self.geom
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement {
            m: &self.m * &o.m,
            geom: self.geom,
        }
    }

    /// `g^{-1} = J g* J`.
    pub fn inverse(&self) -> GroupElement {
        let n = self.geom.n();
        let r = self.geom.r;
        let m = CMat::from_fn(n, n, |i, k| {
            let s = if (i < r) == (k < r) { 1.0 } else { -1.0 };
            self.m[(k, i)].conj() * s
        });
        GroupElement { m, geom: self.geom }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        let n = self.geom.n();
        (&self.m - CMat::identity(n, n)).camax() <= tol
    }

    /// Max-entry distance between two elements.
    pub fn dist_max(&self, o: &GroupElement) -> f64 {
        (&self.m - &o.m).camax()
    }

    /// Block `(rows, cols)` of the matrix.
    pub(crate) fn block(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> CMat {
        self.m.view((r0, c0), (nr, nc)).into_owned()
    }
}

/// An element of `K = S(U(r) x U(r+b))`, stored by its diagonal blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct KElement {
    pub a: CMat,
    pub d: CMat,
}

impl KElement {
    pub fn new(a: CMat, d: CMat) -> Result<Self> {
        if !a.is_square() || !d.is_square() || d.nrows() < a.nrows() || a.nrows() == 0 {
            return Err(Error::Dimension {
                expected: a.nrows(),
                got: d.nrows(),
            });
        }
        for (name, x) in [("A", &a), ("D", &d)] {
            let k = x.nrows();
            let defect = (x.adjoint() * x - CMat::identity(k, k)).camax();
            if !(defect <= GROUP_TOL) {
                return Err(Error::NotInGroup(format!("block {name} not unitary ({defect:.3e})")));
            }
        }
        let det = a.determinant() * d.determinant();
        if !((det - 1.0).norm() <= GROUP_TOL) {
            return Err(Error::NotInGroup(format!("det A det D = {det}")));
        }
        Ok(KElement { a, d })
    }

    pub fn identity(geom: Geometry) -> Self {
        let r = geom.r;
        let s = geom.r + geom.b;
        KElement {
            a: CMat::identity(r, r),
            d: CMat::identity(s, s),
        }
    }

    pub fn geom(&self) -> Geometry {
        Geometry {
            r: self.a.nrows(),
            b: self.d.nrows() - self.a.nrows(),
        }
    }

    /// Splits a block-diagonal matrix; errors when off-diagonal blocks
    /// exceed `tol`.
    pub fn from_matrix(geom: Geometry, m: &CMat, tol: f64) -> Result<Self> {
        let r = geom.r;
        let s = geom.r + geom.b;
        let off = m
            .view((0, r), (r, s))
            .camax()
            .max(m.view((r, 0), (s, r)).camax());
        if !(off <= tol) {
            return Err(Error::NotInGroup(format!("off-block leakage {off:.3e}")));
        }
        Ok(KElement {
            a: m.view((0, 0), (r, r)).into_owned(),
            d: m.view((r, r), (s, s)).into_owned(),
        })
    }

    pub fn to_matrix(&self) -> CMat {
        let r = self.a.nrows();
        let s = self.d.nrows();
        let mut m = CMat::zeros(r + s, r + s);
        m.view_mut((0, 0), (r, r)).copy_from(&self.a);
        m.view_mut((r, r), (s, s)).copy_from(&self.d);
        m
    }

    pub fn to_group(&self) -> GroupElement {
        GroupElement::new_unchecked(self.geom(), self.to_matrix())
    }

    pub fn mul(&self, o: &KElement) -> KElement {
        KElement {
            a: &self.a * &o.a,
            d: &self.d * &o.d,
        }
    }

    pub fn inverse(&self) -> KElement {
        KElement {
            a: self.a.adjoint(),
            d: self.d.adjoint(),
        }
    }

    /// Multiplies both blocks by the scalar `z`.
    pub(crate) fn scaled(&self, z: C64) -> KElement {
        KElement {
            a: &self.a * z,
            d: &self.d * z,
        }
    }

    pub fn dist_max(&self, o: &KElement) -> f64 {
        (&self.a - &o.a).camax().max((&self.d - &o.d).camax())
    }
}

/// Coordinates `t` of `H_T` in `a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChamberPoint(pub Vec<f64>);

impl ChamberPoint {
    pub fn new(t: Vec<f64>) -> Self {
        ChamberPoint(t)
    }

    pub fn t(&self) -> &[f64] {
        &self.0
    }

    /// `t_1 >= ... >= t_r >= 0`.
    pub fn in_closed_chamber(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1]) && self.0.last().is_some_and(|&x| x >= 0.0)
    }

    /// `t_1 > ... > t_r > 0`.
    pub fn in_open_chamber(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1]) && self.0.last().is_some_and(|&x| x > 0.0)
    }

    /// Euclidean norm of `t`.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// `a_T = exp(H_T)`: `cosh t_j` on the diagonal of the first two `r`-blocks,
/// `sinh t_j` pairing `e_j` with `e_{r+j}`, identity on the last `b`.
pub fn make_a(geom: Geometry, t: &[f64]) -> Result<GroupElement> {
    geom.check_len(t.len())?;
    let n = geom.n();
    let r = geom.r;
    let mut m = CMat::identity(n, n);
    for (j, &tj) in t.iter().enumerate() {
        let (c, s) = (tj.cosh(), tj.sinh());
        m[(j, j)] = C64::from(c);
        m[(r + j, r + j)] = C64::from(c);
        m[(j, r + j)] = C64::from(s);
        m[(r + j, j)] = C64::from(s);
    }
    Ok(GroupElement::new_unchecked(geom, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_a_examples() {
        let g = Geometry::new(1, 0).unwrap();
        assert!(make_a(g, &[0.0]).unwrap().is_identity(0.0));
        let s = 0.7f64;
        let a = make_a(g, &[s]).unwrap();
        assert!((a.matrix()[(0, 1)].re - s.sinh()).abs() < 1e-15);
        assert!((a.matrix()[(1, 1)].re - s.cosh()).abs() < 1e-15);
        let g2 = Geometry::new(2, 1).unwrap();
        let t = [1.3, -0.4];
        let p = make_a(g2, &t).unwrap().mul(&make_a(g2, &[-1.3, 0.4]).unwrap());
        assert!(p.is_identity(1e-12));
        GroupElement::new(g2, make_a(g2, &t).unwrap().matrix().clone()).unwrap();
        assert!(make_a(g2, &[1.0]).is_err());
    }

    #[test]
    fn rho_examples() {
        assert_eq!(Geometry::new(1, 0).unwrap().rho(), vec![1.0]);
        assert_eq!(Geometry::new(2, 0).unwrap().rho(), vec![3.0, 1.0]);
        assert_eq!(Geometry::new(1, 2).unwrap().rho_l(3), vec![0.0]);
    }

    #[test]
    fn rho_by_root_half_sum() {
        // positive roots t_j +- t_k (mult 2), 2 t_j (mult 1), t_j (mult 2b)
        for (r, b) in [(1, 0), (2, 0), (2, 1), (3, 2)] {
            let geom = Geometry::new(r, b).unwrap();
            let mut rho = vec![0.0; r];
            for j in 0..r {
                // (t_j - t_k) + (t_j + t_k) for k > j, mult 2, halved
                rho[j] += 2.0 * (r - j - 1) as f64;
                rho[j] += 1.0 + b as f64;
            }
            assert_eq!(rho, geom.rho());
        }
    }

    #[test]
    fn rank_zero_rejected() {
        assert!(matches!(Geometry::new(0, 1), Err(Error::Config(_))));
    }

    #[test]
    fn inverse_is_j_adjoint() {
        let g = Geometry::new(2, 1).unwrap();
        let a = make_a(g, &[0.5, 0.2]).unwrap();
        assert!(a.mul(&a.inverse()).is_identity(1e-13));
    }
}
