use serde::{Deserialize, Serialize};

use crate::geometry::{make_a, weyl_density, ChamberPoint, Geometry, GroupElement, KElement};
use crate::numerics::{haar_k_sample, quad_chamber_shells, QuadSpec, QuadValue};
use crate::specfun::{gamma, hc_c};
use crate::spherical::{phi, torus_element};
use crate::{Error, Result, C64};

use super::cyclic::{poisson, s_operator, CyclicBoundaryFn};
use super::Capture;

/// How the `K`-average inside a ball integral is carried out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum KScheme {
    /// The integrand does not depend on `k`; evaluated once at `e`.
    Invariant,
    /// Trapezoid rule on the torus `diag(e^{i theta}, e^{-i theta})`, which is
    /// all of `K` for `r = 1`, `b = 0`.
    Torus { nodes: usize },
    /// Haar Monte-Carlo with a fixed sample set.
    MonteCarlo { samples: usize, seed: u64 },
}

impl KScheme {
    pub fn k_average<F>(&self, geom: Geometry, f: F) -> Result<C64>
    where
        F: Fn(&KElement) -> Result<C64> + Sync,
    {
        match *self {
            KScheme::Invariant => f(&KElement::identity(geom)),
            KScheme::Torus { nodes } => {
                if geom.r != 1 || geom.b != 0 || nodes == 0 {
                    return Err(Error::Domain {
                        function: "KScheme::Torus",
                        detail: "needs r = 1, b = 0 and nodes > 0".into(),
                    });
                }
                let step = std::f64::consts::TAU / nodes as f64;
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..nodes {
                    acc += f(&torus_element(step * j as f64))?;
                }
                Ok(acc / nodes as f64)
            }
            KScheme::MonteCarlo { samples, seed } => {
                if samples == 0 {
                    return Err(Error::Budget { evals: 0, estimate: f64::INFINITY });
                }
                let ks = haar_k_sample(geom, seed, samples);
                let mut acc = C64::new(0.0, 0.0);
                for k in &ks {
                    acc += f(k)?;
                }
                Ok(acc / samples as f64)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallValue {
    pub radius: f64,
    pub value: f64,
    pub err: f64,
}

/// `(1/R^r) int_{B(R)} F dg` for each Killing radius `R`, where `avg(t)` is the
/// `K`-average of `F(k a_t)`. Integrated over the chamber against
/// `Delta(a_t)` with the Killing-induced measure `dH`. Entries are
/// `(R, value, error estimate)`.
pub(crate) fn ball_integral<T, F>(geom: Geometry, avg: F, radii: &[f64], spec: &QuadSpec) -> Result<Vec<(f64, T, f64)>>
where
    T: QuadValue,
    F: Fn(&[f64]) -> Result<T> + Sync,
{
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::Domain {
            function: "ball_average",
            detail: "radii must be positive".into(),
        });
    }
    let unit = geom.killing_unit();
    let t_radii: Vec<f64> = radii.iter().map(|r| r / unit).collect();
    let spec = QuadSpec { dimension: geom.r, ..*spec };
    let cap = Capture::new();
    let shells = quad_chamber_shells(
        |t: &[f64]| {
            let d = weyl_density(geom, &ChamberPoint(t.to_vec())).delta;
            cap.take(avg(t)) * d
        },
        &t_radii,
        &spec,
    )?;
    cap.finish()?;
    let rank = geom.r as i32;
    Ok(radii
        .iter()
        .zip(shells)
        .map(|(&radius, (v, e))| {
            let s = (unit / radius).powi(rank);
            (radius, v * s, e * s)
        })
        .collect())
}

/// Real-valued [`ball_integral`].
pub fn ball_average_chamber<F>(geom: Geometry, avg: F, radii: &[f64], spec: &QuadSpec) -> Result<Vec<BallValue>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    Ok(ball_integral(geom, avg, radii, spec)?
        .into_iter()
        .map(|(radius, value, err)| BallValue { radius, value, err })
        .collect())
}

/// `(1/R^r) int_{B(R)} |F|^2 dg` for a right-`tau`-covariant `F`, with the
/// left `K`-average done by `scheme`.
pub fn ball_average<F>(
    geom: Geometry,
    f: F,
    radii: &[f64],
    scheme: KScheme,
    spec: &QuadSpec,
) -> Result<Vec<BallValue>>
where
    F: Fn(&GroupElement) -> Result<C64> + Sync,
{
    ball_average_chamber(
        geom,
        |t| {
            let a = make_a(geom, t)?;
            let v = scheme.k_average(geom, |k| Ok(C64::from(f(&k.to_group().mul(&a))?.norm_sqr())))?;
            Ok(v.re)
        },
        radii,
        spec,
    )
}

/// Least-squares fit of `v = v_inf + c/R` on the upper half of the grid.
/// Returns `(v_inf, uncertainty)`; the uncertainty compares against the fit
/// on the upper quarter and includes the fit residual.
pub fn extrapolate(radii: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    let n = radii.len();
    if n != values.len() || n < 4 {
        return Err(Error::Domain {
            function: "extrapolate",
            detail: format!("need at least 4 matching points, got {n}"),
        });
    }
    let fit = |from: usize| {
        let xs: Vec<f64> = radii[from..].iter().map(|r| 1.0 / r).collect();
        let ys = &values[from..];
        let m = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / m;
        let my = ys.iter().sum::<f64>() / m;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        let icpt = my - slope * mx;
        let rms = (xs.iter().zip(ys).map(|(x, y)| (y - icpt - slope * x).powi(2)).sum::<f64>() / m).sqrt();
        (icpt, rms / m.sqrt())
    };
    let (a, ra) = fit(n / 2);
    let (b, _) = fit((3 * n / 4).min(n - 3));
    Ok((a, (a - b).abs() + ra))
}

/// Tabulated ball averages with the extrapolated limit against a reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub limit: f64,
    pub limit_err: f64,
    /// `|c(lambda,l)|^2 ||f||^2`.
    pub reference: f64,
    pub ratio: f64,
    pub ratio_err: f64,
    /// `2^{-r/2} / Gamma(r/2 + 1)`.
    pub gamma_half_scale: f64,
    /// `pi^{r/2} / Gamma(r/2 + 1)`, the Killing unit-ball volume.
    pub ball_volume: f64,
}

impl LimitReport {
    pub fn new(geom: Geometry, values: &[BallValue], reference: f64) -> Result<Self> {
        let radii: Vec<f64> = values.iter().map(|v| v.radius).collect();
        let vals: Vec<f64> = values.iter().map(|v| v.value).collect();
        let (limit, limit_err) = extrapolate(&radii, &vals)?;
        let h = geom.r as f64 / 2.0;
        let g = gamma(C64::from(h + 1.0))?.re;
        Ok(LimitReport {
            errors: values.iter().map(|v| v.err).collect(),
            radii,
            values: vals,
            limit,
            limit_err,
            reference,
            ratio: limit / reference,
            ratio_err: limit_err / reference,
            gamma_half_scale: 2f64.powf(-h) / g,
            ball_volume: std::f64::consts::PI.powf(h) / g,
        })
    }
}

fn check_regular(f: &CyclicBoundaryFn) -> Result<()> {
    if !f.lam.is_real() || !f.lam.is_regular(1e-12) {
        return Err(Error::Domain {
            function: "norm_limit",
            detail: "lambda must be real and regular".into(),
        });
    }
    Ok(())
}

/// Limit of `(1/R^r) int_{B(R)} |P f|^2` over `radii`.
pub fn norm_limit(f: &CyclicBoundaryFn, radii: &[f64], scheme: KScheme, spec: &QuadSpec) -> Result<LimitReport> {
    check_regular(f)?;
    let geom = f.geom();
    let values = if f.is_elementary() {
        let a = f.terms.iter().map(|(a, _)| a).sum::<C64>().norm_sqr();
        ball_average_chamber(
            geom,
            |t| Ok(a * phi(geom, &f.lam, &ChamberPoint(t.to_vec()))?.value.norm_sqr()),
            radii,
            spec,
        )?
    } else {
        ball_average(geom, |g| poisson(f, g), radii, scheme, spec)?
    };
    let c = hc_c(geom, &f.lam)?.norm_sqr();
    LimitReport::new(geom, &values, c * f.norm_sq(scheme)?)
}

/// `(1/R^r) int_{B(R)} |P f - S f|^2` for each radius.
pub fn asymptotic_residual(
    f: &CyclicBoundaryFn,
    radii: &[f64],
    scheme: KScheme,
    spec: &QuadSpec,
) -> Result<Vec<BallValue>> {
    check_regular(f)?;
    let scheme = if f.is_elementary() { KScheme::Invariant } else { scheme };
    ball_average(f.geom(), |g| Ok(poisson(f, g)? - s_operator(f, g)?), radii, scheme, spec)
}

/// `(1/R^r) int_{B(R)} |S f|^2` for each radius.
pub fn s_ball_average(f: &CyclicBoundaryFn, radii: &[f64], scheme: KScheme, spec: &QuadSpec) -> Result<Vec<BallValue>> {
    check_regular(f)?;
    let scheme = if f.is_elementary() { KScheme::Invariant } else { scheme };
    ball_average(f.geom(), |g| s_operator(f, g), radii, scheme, spec)
}
