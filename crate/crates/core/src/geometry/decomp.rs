//! Iwasawa, Cartan and polar decompositions.

use std::f64::consts::FRAC_1_SQRT_2;

use super::{make_a, CMat, ChamberPoint, Geometry, GroupElement, KElement};
use crate::{Error, Result, C64};

/// Tolerance on the block structure of recovered `K` factors.
const LEAK_TOL: f64 = 1e-8;

/// `g = k exp(H) n`.
#[derive(Debug, Clone, PartialEq)]
pub struct IwasawaFactors {
    pub k: KElement,
    pub h: Vec<f64>,
    pub n_part: GroupElement,
}

impl IwasawaFactors {
    pub fn compose(&self) -> GroupElement {
        let a = make_a(self.k.geom(), &self.h).expect("length r");
        self.k.to_group().mul(&a).mul(&self.n_part)
    }
}

/// `g = k1 exp(H_T) k2` with `T` in the closed chamber.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanFactors {
    pub k1: KElement,
    pub h: ChamberPoint,
    pub k2: KElement,
}

impl CartanFactors {
    pub fn compose(&self) -> GroupElement {
        let a = make_a(self.k1.geom(), self.h.t()).expect("length r");
        self.k1.to_group().mul(&a).mul(&self.k2.to_group())
    }
}

/// Unitary change to the weight basis of `a`: columns
/// `u_1..u_r, e_{2r+1}..e_n, v_r..v_1` with
/// `u_i = (e_i + e_{r+i})/sqrt 2`, `v_i = (e_i - e_{r+i})/sqrt 2`.
pub(crate) fn weight_basis(geom: Geometry) -> CMat {
    let (r, b, n) = (geom.r, geom.b, geom.n());
    let mut p = CMat::zeros(n, n);
    let h = C64::from(FRAC_1_SQRT_2);
    for i in 0..r {
        p[(i, i)] = h;
        p[(r + i, i)] = h;
        let col = n - 1 - i;
        p[(i, col)] = h;
        p[(r + i, col)] = -h;
    }
    for z in 0..b {
        p[(2 * r + z, r + z)] = C64::from(1.0);
    }
    p
}

/// Iwasawa factors through a QR factorization in the weight basis, where
/// `A N` is upper triangular with positive diagonal.
pub fn iwasawa(g: &GroupElement) -> Result<IwasawaFactors> {
    let geom = g.geom();
    let n = geom.n();
    let p = weight_basis(geom);
    let gp = p.adjoint() * g.matrix() * &p;
    let qr = gp.qr();
    let mut q = qr.q();
    let mut rr = qr.r();
    for i in 0..n {
        let d = rr[(i, i)];
        let mag = d.norm();
        if !(mag > 0.0 && mag.is_finite()) {
            return Err(Error::Geometry("singular input to Iwasawa".into()));
        }
        let ph = d / mag;
        for c in 0..n {
            rr[(i, c)] *= ph.conj();
        }
        for row in 0..n {
            q[(row, i)] *= ph;
        }
    }
    let h: Vec<f64> = (0..geom.r).map(|i| rr[(i, i)].re.ln()).collect();
    // the remaining diagonal must be 1 on the zero block and e^{-H} after it
    for z in 0..geom.b {
        let d = rr[(geom.r + z, geom.r + z)].re;
        if (d - 1.0).abs() > 1e-6 {
            return Err(Error::NotInGroup(format!("Iwasawa zero-weight diagonal {d}")));
        }
    }
    let k = KElement::from_matrix(geom, &(&p * q * p.adjoint()), LEAK_TOL)?;
    let an = &p * rr * p.adjoint();
    let a_inv = make_a(geom, &h.iter().map(|x| -x).collect::<Vec<_>>())?;
    let n_part = GroupElement::new_unchecked(geom, a_inv.matrix() * an);
    Ok(IwasawaFactors { k, h, n_part })
}

/// Orthonormal completion: returns a unitary matrix whose first columns
/// are the (orthonormal) columns of `v`.
fn complete_unitary(v: &CMat) -> CMat {
    let (m, k) = v.shape();
    let mut cols: Vec<nalgebra::DVector<C64>> = (0..k).map(|j| v.column(j).into_owned()).collect();
    for e in 0..m {
        if cols.len() == m {
            break;
        }
        let mut x = nalgebra::DVector::<C64>::zeros(m);
        x[e] = C64::from(1.0);
        for _ in 0..2 {
            for c in &cols {
                let proj = c.dotc(&x);
                x -= c * proj;
            }
        }
        let nrm = x.norm();
        if nrm > 0.5 {
            cols.push(x / C64::from(nrm));
        }
    }
    CMat::from_columns(&cols)
}

/// Polar decomposition `g = k1 a_T k2` from the blocks of `g`. With
/// `g = [[g11, g12], [g21, g22]]` the off-diagonal block is
/// `g12 = A1 [sinh T, 0] D2`, so its SVD yields `T`, `A1`, `D2`; then
/// `A2 = cosh(T)^{-1} A1* g11` and `D1 = g22 D2* diag(cosh T, I)^{-1}`.
/// This stays accurate for large `T`, unlike a logarithm of `g* g`.
pub fn cartan(g: &GroupElement) -> Result<CartanFactors> {
    let geom = g.geom();
    let (r, b) = (geom.r, geom.b);
    let s = r + b;
    let g11 = g.block(0, r, 0, r);
    let g12 = g.block(0, r, r, s);
    let g22 = g.block(r, s, r, s);
    let svd = g12.svd(true, true);
    let u = svd.u.ok_or_else(|| Error::Geometry("SVD failed".into()))?;
    let vt = svd.v_t.ok_or_else(|| Error::Geometry("SVD failed".into()))?;
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let t: Vec<f64> = order.iter().map(|&i| svd.singular_values[i].asinh()).collect();
    let a1 = CMat::from_fn(r, r, |i, j| u[(i, order[j])]);
    let v1 = CMat::from_fn(s, r, |i, j| vt[(order[j], i)].conj());
    let v = complete_unitary(&v1);
    let d2 = v.adjoint();
    let a2 = CMat::from_fn(r, r, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..r {
            acc += a1[(k, i)].conj() * g11[(k, j)];
        }
        acc / t[i].cosh()
    });
    let gv = &g22 * &v;
    let d1 = CMat::from_fn(s, s, |i, j| {
        if j < r {
            gv[(i, j)] / t[j].cosh()
        } else {
            gv[(i, j)]
        }
    });
    let k1 = KElement { a: a1, d: d1 };
    let k2 = KElement { a: a2, d: d2 };
    // common scalar phase restores determinant one
    let det = k1.a.determinant() * k1.d.determinant();
    if !(det.norm() > 0.5) {
        return Err(Error::NotInGroup(format!("Cartan factor determinant {det}")));
    }
    let ph = C64::from_polar(1.0, -det.arg() / geom.n() as f64);
    Ok(CartanFactors {
        k1: k1.scaled(ph),
        h: ChamberPoint(t),
        k2: k2.scaled(ph.conj()),
    })
}

/// `A^+(g)` only: `T_j = asinh` of the singular values of `g12`.
pub fn cartan_radial(g: &GroupElement) -> Vec<f64> {
    let geom = g.geom();
    let g12 = g.block(0, geom.r, geom.r, geom.r + geom.b);
    let mut sv: Vec<f64> = g12.singular_values().iter().map(|x| x.asinh()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// The unitary factor `pi_0(g)` of `g = u p`; equals `k1 k2` for
/// `g = k1 a k2`.
pub fn polar_k(g: &GroupElement) -> Result<KElement> {
    let c = cartan(g)?;
    let k = c.k1.mul(&c.k2);
    let geom = g.geom();
    let m = k.to_matrix();
    let n = geom.n();
    let defect = (m.adjoint() * &m - CMat::identity(n, n)).camax();
    if defect > LEAK_TOL {
        return Err(Error::NotInGroup(format!("polar factor not unitary ({defect:.3e})")));
    }
    Ok(k)
}

/// The character `tau_l(k) = (det D)^l`.
pub fn tau(k: &KElement, l: i64) -> C64 {
    let d = k.d.determinant();
    let u = d / d.norm();
    u.powi(l as i32)
}

/// `tau_l(pi_0(g))` from the top-left block alone.
///
/// For `g` in the group, `conj(det g22) = det g11`, and the polar factor of
/// `g` is block-diagonal with blocks the polar factors of `g11` and `g22`.
/// The `r x r` block stays well conditioned far out in the chamber, where
/// the `D` factor of a Cartan decomposition does not.
pub fn tau_polar(g: &GroupElement, l: i64) -> C64 {
    let r = g.geom().r;
    let d = g.block(0, r, 0, r).determinant().conj();
    (d / d.norm()).powi(l as i32)
}

/// `(H(g^{-1} k), kappa(g^{-1} k))`.
pub fn boundary_pair(g: &GroupElement, k: &KElement) -> Result<(Vec<f64>, KElement)> {
    let x = g.inverse().mul(&k.to_group());
    let f = iwasawa(&x)?;
    Ok((f.h, f.k))
}

/// `tau_l(pi_0(g a_{R t}))` for each `R`; tends to `tau_l(kappa(g))`.
pub fn lemma_a_limit(
    g: &GroupElement,
    t: &ChamberPoint,
    l: i64,
    r_grid: &[f64],
) -> Result<Vec<C64>> {
    if !t.in_open_chamber() {
        return Err(Error::Domain {
            function: "lemma_a_limit",
            detail: format!("{:?} not in the open chamber", t.0),
        });
    }
    let geom = g.geom();
    r_grid
        .iter()
        .map(|&rr| {
            let st: Vec<f64> = t.t().iter().map(|x| x * rr).collect();
            let x = g.mul(&make_a(geom, &st)?);
            Ok(tau_polar(&x, l))
        })
        .collect()
}
