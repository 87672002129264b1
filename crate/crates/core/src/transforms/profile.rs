use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::geometry::{cartan, tau, weyl_density, ChamberPoint, Geometry, GroupElement};
use crate::numerics::{quad_chamber, quad_interval, QuadSpec};
use crate::specfun::{hc_c, SpectralParam};
use crate::spherical::phi;
use crate::{Error, Result, C64};

use super::Capture;

/// Bump shapes in `s = |H| / R_supp`, all vanishing for `s >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bump {
    /// `1 - s`
    Tent,
    /// `(1 - s^2)^2`
    Quartic,
    /// `exp(1 - 1/(1 - s^2))`
    Smooth,
}

impl Bump {
    pub fn eval(self, s: f64) -> f64 {
        if !(s < 1.0) {
            return 0.0;
        }
        match self {
            Bump::Tent => 1.0 - s,
            Bump::Quartic => (1.0 - s * s).powi(2),
            Bump::Smooth => (1.0 - 1.0 / (1.0 - s * s)).exp(),
        }
    }
}

#[derive(Clone)]
enum Source {
    Bump(Bump),
    Spline(Spline),
    Grid(Grid),
    Func(Arc<dyn Fn(&[f64]) -> C64 + Send + Sync>),
}

/// Profile `f` on the closed chamber, vanishing outside the Killing ball of
/// radius `support`. Represents `F(g) = f(A^+(g)) tau_l^{-1}(pi_0(g))`.
#[derive(Clone)]
pub struct RadialProfile {
    geom: Geometry,
    support: f64,
    source: Source,
}

impl std::fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.source {
            Source::Bump(b) => format!("{b:?}"),
            Source::Spline(s) => format!("spline({} knots)", s.x.len()),
            Source::Grid(g) => format!("grid({}x{})", g.x.len(), g.y.len()),
            Source::Func(_) => "fn".into(),
        };
        f.debug_struct("RadialProfile")
            .field("geom", &self.geom)
            .field("support", &self.support)
            .field("source", &kind)
            .finish()
    }
}

fn check_support(support: f64) -> Result<()> {
    if support > 0.0 && support.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            function: "RadialProfile",
            detail: format!("support radius {support}"),
        })
    }
}

impl RadialProfile {
    pub fn bump(geom: Geometry, bump: Bump, support: f64) -> Result<Self> {
        check_support(support)?;
        Ok(RadialProfile { geom, support, source: Source::Bump(bump) })
    }

    /// Any callable on chamber coordinates; cut off at `support`.
    pub fn from_fn<F>(geom: Geometry, support: f64, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> C64 + Send + Sync + 'static,
    {
        check_support(support)?;
        Ok(RadialProfile { geom, support, source: Source::Func(Arc::new(f)) })
    }

    /// Samples `(t, value)`. Rank 1 uses a natural cubic spline through the
    /// knots; rank 2 bilinear interpolation on the product grid of the
    /// distinct coordinates, with missing cells filled from the mirror point
    /// `(t_2, t_1)`. The support is the largest Killing norm of a sample.
    pub fn from_table(geom: Geometry, rows: &[(Vec<f64>, C64)]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::Parse("profile needs at least two samples".into()));
        }
        for (t, v) in rows {
            if t.len() != geom.r {
                return Err(Error::Dimension { expected: geom.r, got: t.len() });
            }
            if !v.is_finite() || t.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(Error::Parse(format!("bad sample at {t:?}")));
            }
            if !ChamberPoint(t.clone()).in_closed_chamber() {
                return Err(Error::Parse(format!("{t:?} outside the chamber")));
            }
        }
        let support = rows
            .iter()
            .map(|(t, _)| geom.killing_unit() * ChamberPoint(t.clone()).norm())
            .fold(0.0, f64::max);
        check_support(support)?;
        let source = match geom.r {
            1 => Source::Spline(Spline::new(rows.iter().map(|(t, v)| (t[0], *v)).collect())?),
            2 => Source::Grid(Grid::new(rows)?),
            r => {
                return Err(Error::Domain {
                    function: "RadialProfile::from_table",
                    detail: format!("rank {r} tables are not supported"),
                })
            }
        };
        Ok(RadialProfile { geom, support, source })
    }

    pub fn geom(&self) -> Geometry {
        self.geom
    }

    /// Killing radius of the support ball.
    pub fn support(&self) -> f64 {
        self.support
    }

    pub fn eval(&self, t: &[f64]) -> C64 {
        let h = self.geom.killing_unit() * t.iter().map(|x| x * x).sum::<f64>().sqrt();
        if h > self.support {
            return C64::new(0.0, 0.0);
        }
        match &self.source {
            Source::Bump(b) => C64::from(b.eval(h / self.support)),
            Source::Spline(s) => s.eval(t[0]),
            Source::Grid(g) => g.eval(t[0], t[1]),
            Source::Func(f) => f(t),
        }
    }

    /// `F(g) = f(A^+(g)) tau_l^{-1}(pi_0(g))`.
    pub fn eval_group(&self, g: &GroupElement, l: i64) -> Result<C64> {
        let c = cartan(g)?;
        Ok(self.eval(c.h.t()) * tau(&c.k1.mul(&c.k2), l).conj())
    }

    fn quad_spec(&self, panel: f64) -> QuadSpec {
        QuadSpec::new(self.geom.r, self.support / self.geom.killing_unit())
            .with_tol(1e-14, 1e-10)
            .with_panel_width(panel)
    }

    /// `||F||_2^2 = int f^2 Delta dH`.
    pub fn norm_sq(&self) -> Result<f64> {
        let geom = self.geom;
        let (v, _) = quad_chamber(
            |t: &[f64]| self.eval(t).norm_sqr() * weyl_density(geom, &ChamberPoint(t.to_vec())).delta,
            &self.quad_spec(0.25),
        )?;
        Ok(v * geom.killing_unit().powi(geom.r as i32))
    }
}

#[derive(Debug, Clone)]
struct Spline {
    x: Vec<f64>,
    y: Vec<C64>,
    m: Vec<C64>,
}

impl Spline {
    fn new(mut pts: Vec<(f64, C64)>) -> Result<Self> {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pts.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Parse("repeated knot in profile".into()));
        }
        let n = pts.len();
        let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let y: Vec<C64> = pts.iter().map(|p| p.1).collect();
        // natural spline: tridiagonal system for the second derivatives
        let mut m = vec![C64::new(0.0, 0.0); n];
        if n > 2 {
            let mut diag = vec![0.0; n];
            let mut rhs = vec![C64::new(0.0, 0.0); n];
            for i in 1..n - 1 {
                let (h0, h1) = (x[i] - x[i - 1], x[i + 1] - x[i]);
                diag[i] = 2.0 * (h0 + h1);
                rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            }
            for i in 2..n - 1 {
                let w = (x[i] - x[i - 1]) / diag[i - 1];
                diag[i] -= w * (x[i] - x[i - 1]);
                let prev = rhs[i - 1];
                rhs[i] -= prev * w;
            }
            for i in (1..n - 1).rev() {
                let upper = if i + 1 < n - 1 { (x[i + 1] - x[i]) * m[i + 1] } else { C64::new(0.0, 0.0) };
                m[i] = (rhs[i] - upper) / diag[i];
            }
        }
        Ok(Spline { x, y, m })
    }

    fn eval(&self, t: f64) -> C64 {
        let n = self.x.len();
        if t < self.x[0] || t > self.x[n - 1] {
            return C64::new(0.0, 0.0);
        }
        let i = match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        self.y[i] * a
            + self.y[i + 1] * b
            + (self.m[i] * (a * a * a - a) + self.m[i + 1] * (b * b * b - b)) * (h * h / 6.0)
    }
}

#[derive(Debug, Clone)]
struct Grid {
    x: Vec<f64>,
    y: Vec<f64>,
    v: Vec<Vec<Option<C64>>>,
}

impl Grid {
    fn new(rows: &[(Vec<f64>, C64)]) -> Result<Self> {
        let distinct = |k: usize| {
            let mut c: Vec<f64> = rows.iter().map(|(t, _)| t[k]).collect();
            c.sort_by(f64::total_cmp);
            c.dedup();
            c
        };
        let (x, y) = (distinct(0), distinct(1));
        if x.len() < 2 || y.len() < 2 {
            return Err(Error::Parse("rank-2 profile needs a 2x2 grid at least".into()));
        }
        let mut v = vec![vec![None; y.len()]; x.len()];
        for (t, val) in rows {
            let i = x.partition_point(|&a| a < t[0]);
            let j = y.partition_point(|&a| a < t[1]);
            v[i][j] = Some(*val);
        }
        Ok(Grid { x, y, v })
    }

    fn at(&self, i: usize, j: usize) -> C64 {
        if let Some(v) = self.v[i][j] {
            return v;
        }
        let (xi, yj) = (self.x[i], self.y[j]);
        let mi = self.x.iter().position(|&a| a == yj);
        let mj = self.y.iter().position(|&a| a == xi);
        match (mi, mj) {
            (Some(a), Some(b)) => self.v[a][b].unwrap_or_default(),
            _ => C64::new(0.0, 0.0),
        }
    }

    fn eval(&self, t1: f64, t2: f64) -> C64 {
        let locate = |g: &[f64], t: f64| -> Option<(usize, f64)> {
            if t < g[0] || t > g[g.len() - 1] {
                return None;
            }
            let k = g.partition_point(|&a| a <= t).clamp(1, g.len() - 1) - 1;
            Some((k, (t - g[k]) / (g[k + 1] - g[k])))
        };
        let (Some((i, u)), Some((j, w))) = (locate(&self.x, t1), locate(&self.y, t2)) else {
            return C64::new(0.0, 0.0);
        };
        self.at(i, j) * ((1.0 - u) * (1.0 - w))
            + self.at(i + 1, j) * (u * (1.0 - w))
            + self.at(i, j + 1) * ((1.0 - u) * w)
            + self.at(i + 1, j + 1) * (u * w)
    }
}

/// `f^(lambda) = int_{a^+} f(H) conj(phi_{lambda,l}(e^H)) Delta(e^H) dH`.
pub fn spherical_transform(p: &RadialProfile, lam: &SpectralParam) -> Result<C64> {
    let geom = p.geom;
    if !lam.is_real() || lam.r() != geom.r {
        return Err(Error::Domain {
            function: "spherical_transform",
            detail: "lambda must be real of length r".into(),
        });
    }
    let top = lam.lambda.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    let cap = Capture::new();
    let (v, _) = quad_chamber(
        |t: &[f64]| {
            let c = ChamberPoint(t.to_vec());
            let ph = cap.take(phi(geom, lam, &c).map(|e| e.value));
            p.eval(t) * ph.conj() * weyl_density(geom, &c).delta
        },
        &p.quad_spec((1.0 / (1.0 + top)).min(0.25)),
    )?;
    cap.finish()?;
    Ok(v * geom.killing_unit().powi(geom.r as i32))
}

/// `|f^(lambda)| / (|c(lambda,l)| R_supp^{r/2} ||F||_2)`.
pub fn restriction_ratio(p: &RadialProfile, lam: &SpectralParam) -> Result<f64> {
    if !lam.is_regular(1e-12) {
        return Err(Error::Domain {
            function: "restriction_ratio",
            detail: "lambda must be regular".into(),
        });
    }
    let geom = p.geom;
    let fh = spherical_transform(p, lam)?;
    let c = hc_c(geom, lam)?;
    Ok(fh.norm() / (c.norm() * p.support.powf(geom.r as f64 / 2.0) * p.norm_sq()?.sqrt()))
}

/// Rank one: the continuous Plancherel part
/// `(1/|W|) int_{|lambda| <= lam_max} |f^|^2 |c|^{-2} dlambda` with
/// `dlambda = dlambda_coord / (2 pi 2 sqrt(n))`, and `||F||_2^2`.
pub fn plancherel_window(p: &RadialProfile, l: i64, lam_max: f64) -> Result<(f64, f64)> {
    let geom = p.geom;
    if geom.r != 1 {
        return Err(Error::Domain {
            function: "plancherel_window",
            detail: "rank one only".into(),
        });
    }
    let cap = Capture::new();
    let (v, _) = quad_interval(
        |x: f64| {
            let lam = SpectralParam::real(&[x], l);
            let r = spherical_transform(p, &lam).and_then(|f| Ok(f.norm_sqr() / hc_c(geom, &lam)?.norm_sqr()));
            cap.take(r)
        },
        0.0,
        lam_max,
        (lam_max.ceil() as usize).max(1),
        1e-14,
        1e-9,
        200_000,
    )?;
    cap.finish()?;
    // (1/2) * 2 int_0^max by evenness of |f^|^2 |c|^{-2} in lambda
    let cont = v / (std::f64::consts::TAU * geom.killing_unit());
    Ok((cont, p.norm_sq()?))
}
