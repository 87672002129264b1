use crate::geometry::{boundary_pair, cartan, tau, Geometry, GroupElement, KElement, WeylElement};
use crate::specfun::{hc_c, SpectralParam};
use crate::spherical::phi_group;
use crate::{Error, Result, C64};

use super::KScheme;

/// `f(k) = sum_j a_j e^{(i lambda - rho) H(g_j^{-1} k)} tau_l^{-1}(kappa(g_j^{-1} k))`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicBoundaryFn {
    pub terms: Vec<(C64, GroupElement)>,
    pub lam: SpectralParam,
}

impl CyclicBoundaryFn {
    pub fn new(terms: Vec<(C64, GroupElement)>, lam: SpectralParam) -> Result<Self> {
        let Some((_, g0)) = terms.first() else {
            return Err(Error::Domain {
                function: "CyclicBoundaryFn",
                detail: "no terms".into(),
            });
        };
        let geom = g0.geom();
        if lam.r() != geom.r {
            return Err(Error::Dimension { expected: geom.r, got: lam.r() });
        }
        for (a, g) in &terms {
            if g.geom() != geom {
                return Err(Error::Geometry("terms on different groups".into()));
            }
            if !a.is_finite() {
                return Err(Error::Domain {
                    function: "CyclicBoundaryFn",
                    detail: format!("coefficient {a}"),
                });
            }
        }
        Ok(CyclicBoundaryFn { terms, lam })
    }

    /// `f_e^lambda`, i.e. `tau_l^{-1}` on `K`.
    pub fn identity(geom: Geometry, lam: SpectralParam) -> Result<Self> {
        Self::new(vec![(C64::new(1.0, 0.0), GroupElement::identity(geom))], lam)
    }

    pub fn geom(&self) -> Geometry {
        self.terms[0].1.geom()
    }

    pub fn scaled(&self, c: C64) -> Self {
        CyclicBoundaryFn {
            terms: self.terms.iter().map(|(a, g)| (a * c, g.clone())).collect(),
            lam: self.lam.clone(),
        }
    }

    /// Concatenation of terms; both sides must share `lambda`.
    pub fn plus(&self, o: &Self) -> Result<Self> {
        if o.lam != self.lam {
            return Err(Error::Domain {
                function: "CyclicBoundaryFn::plus",
                detail: "different spectral parameters".into(),
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Self::new(terms, self.lam.clone())
    }

    /// True when every term sits at the identity, so `f` is a multiple of
    /// `f_e^lambda`.
    pub fn is_elementary(&self) -> bool {
        self.terms.iter().all(|(_, g)| g.is_identity(1e-14))
    }

    pub fn eval(&self, k: &KElement) -> Result<C64> {
        let rho = self.geom().rho();
        let mut acc = C64::new(0.0, 0.0);
        for (a, g) in &self.terms {
            let (h, kappa) = boundary_pair(g, k)?;
            let expo: C64 = h
                .iter()
                .zip(&self.lam.lambda)
                .zip(&rho)
                .map(|((hj, lj), rj)| (C64::new(0.0, 1.0) * lj - rj) * hj)
                .sum();
            acc += a * expo.exp() * tau(&kappa, self.lam.l).conj();
        }
        Ok(acc)
    }

    /// `||f||^2` in `L^2(K)`; exact for elementary data.
    pub fn norm_sq(&self, scheme: KScheme) -> Result<f64> {
        if self.is_elementary() {
            return Ok(self.terms.iter().map(|(a, _)| a).sum::<C64>().norm_sqr());
        }
        scheme.k_average(self.geom(), |k| Ok(C64::from(self.eval(k)?.norm_sqr())))
            .map(|v| v.re)
    }
}

/// `P_{lambda,l} f(g) = sum_j a_j phi_{lambda,l}(g_j^{-1} g)`.
pub fn poisson(f: &CyclicBoundaryFn, g: &GroupElement) -> Result<C64> {
    let geom = f.geom();
    if !f.lam.is_real() {
        return Err(Error::Domain {
            function: "poisson",
            detail: "lambda must be real".into(),
        });
    }
    let mut acc = C64::new(0.0, 0.0);
    for (a, gj) in &f.terms {
        acc += a * phi_group(geom, &f.lam, &gj.inverse().mul(g))?;
    }
    Ok(acc)
}

/// The Poisson integral `int_K e^{-(i lambda + rho) H(g^{-1} k)}
/// tau_l(kappa(g^{-1} k)) f(k) dk` by direct quadrature over `K`.
pub fn poisson_quadrature(f: &CyclicBoundaryFn, g: &GroupElement, scheme: KScheme) -> Result<C64> {
    let geom = f.geom();
    let rho = geom.rho();
    let lam = &f.lam;
    scheme.k_average(geom, |k| {
        let (h, kappa) = boundary_pair(g, k)?;
        let expo: C64 = h
            .iter()
            .zip(&lam.lambda)
            .zip(&rho)
            .map(|((hj, lj), rj)| -(C64::new(0.0, 1.0) * lj + rj) * hj)
            .sum();
        Ok(expo.exp() * tau(&kappa, lam.l) * f.eval(k)?)
    })
}

/// `U_s f`: the same terms at `s lambda`.
pub fn weyl_translate(f: &CyclicBoundaryFn, s: &WeylElement) -> CyclicBoundaryFn {
    CyclicBoundaryFn {
        terms: f.terms.clone(),
        lam: f.lam.with_lambda(s.apply(&f.lam.lambda)),
    }
}

/// `tau_l^{-1}(k_2) sum_s c(s lambda, l) e^{(i s lambda - rho)(H)} (U_s f)(k_1)`
/// for `g = k_1 e^H k_2`.
pub fn s_operator(f: &CyclicBoundaryFn, g: &GroupElement) -> Result<C64> {
    let geom = f.geom();
    let c = cartan(g)?;
    let rho = geom.rho();
    let mut acc = C64::new(0.0, 0.0);
    for s in WeylElement::all(geom.r) {
        let fs = weyl_translate(f, &s);
        let expo: C64 = c
            .h
            .t()
            .iter()
            .zip(&fs.lam.lambda)
            .zip(&rho)
            .map(|((hj, lj), rj)| (C64::new(0.0, 1.0) * lj - rj) * hj)
            .sum();
        acc += hc_c(geom, &fs.lam)? * expo.exp() * fs.eval(&c.k1)?;
    }
    Ok(acc * tau(&c.k2, f.lam.l).conj())
}
