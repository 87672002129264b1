//! Verification drivers behind the `verify` and `eval-*` subcommands. Each
//! takes a validated [`RunConfig`] and returns a [`Report`]; numerical
//! failures inside a check become report failures, config problems stay
//! errors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::{direction, Normalization, RunConfig};
use crate::geometry::{iwasawa, lemma_a_limit, random_group_element, tau, ChamberPoint, Geometry, GroupElement};
use crate::numerics::{seeded_rng, QuadSpec};
use crate::report::Report;
use crate::specfun::{hc_c, hyp2f1_series, jacobi_c, jacobi_psi, JacobiOrder, SpectralParam};
use crate::spherical::{key_lemma_sweep, phi, radial_residual, KeyLemmaReport};
use crate::transforms::{
    asymptotic_residual, boundary_inversion, norm_limit, restriction_ratio, Bump, CyclicBoundaryFn, KScheme,
    RadialProfile,
};
use crate::{Error, KElement, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    KeyLemma,
    Ode,
    Connection,
    NormLimit,
    PoissonAsymptotics,
    Restriction,
    Inversion,
    LemmaA,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::KeyLemma,
        Check::Ode,
        Check::Connection,
        Check::NormLimit,
        Check::PoissonAsymptotics,
        Check::Restriction,
        Check::Inversion,
        Check::LemmaA,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::KeyLemma => "key-lemma",
            Check::Ode => "ode",
            Check::Connection => "connection",
            Check::NormLimit => "norm-limit",
            Check::PoissonAsymptotics => "poisson-asymptotics",
            Check::Restriction => "restriction",
            Check::Inversion => "inversion",
            Check::LemmaA => "lemma-a",
        }
    }

    pub fn parse(s: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// Runs one check. `Err` only for config errors.
pub fn run(check: Check, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let out = match check {
        Check::KeyLemma => key_lemma(cfg),
        Check::Ode => ode(cfg),
        Check::Connection => connection(cfg),
        Check::NormLimit => norm_limit_check(cfg),
        Check::PoissonAsymptotics => poisson_asymptotics(cfg),
        Check::Restriction => restriction(cfg),
        Check::Inversion => inversion(cfg),
        Check::LemmaA => lemma_a(cfg),
    };
    contain(check.name(), cfg, out)
}

fn contain(name: &str, cfg: &RunConfig, out: Result<Report>) -> Result<Report> {
    match out {
        Ok(r) => Ok(r),
        Err(Error::Config(m)) => Err(Error::Config(m)),
        Err(e) => {
            let mut r = Report::new(name, cfg, &[]);
            r.fail(format!("error: {e}"));
            Ok(r)
        }
    }
}

fn lambda_points(cfg: &RunConfig, default: &[f64]) -> Vec<Vec<f64>> {
    match &cfg.lambda {
        Some(spec) => spec.points(cfg.r),
        None => default.iter().map(|&mu| direction(cfg.r, mu)).collect(),
    }
}

fn l_values(cfg: &RunConfig, default: &[i64]) -> Vec<i64> {
    cfg.l_sweep.clone().unwrap_or_else(|| default.to_vec())
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn tol(cfg: &RunConfig, default: f64) -> f64 {
    cfg.tol.assert.unwrap_or(default)
}

fn quad_spec(cfg: &RunConfig, panel: f64) -> QuadSpec {
    QuadSpec::new(cfg.r, 0.0)
        .with_tol(cfg.tol.abs.unwrap_or(1e-10), cfg.tol.rel.unwrap_or(1e-7))
        .with_panel_width(panel)
}

fn killing_scale(cfg: &RunConfig, geom: Geometry) -> f64 {
    match cfg.normalization {
        Normalization::Killing => 1.0,
        Normalization::Unit => geom.killing_unit(),
    }
}

/// Slope of `log y` against `log x`.
fn loglog_slope(xy: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = xy.iter().filter(|(_, y)| *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    linear_slope(&pts)
}

fn linear_slope(pts: &[(f64, f64)]) -> f64 {
    let m = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / m, b + y / m));
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Closed chamber grid `max >= x_1 >= ... >= x_r >= 0` with spacing `step`.
pub fn chamber_grid(r: usize, max: f64, step: f64) -> Vec<Vec<f64>> {
    let n = (max / step).round() as usize;
    let axis: Vec<f64> = (0..=n).map(|k| k as f64 * step).collect();
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|p| {
                let cap = p.last().copied().unwrap_or(f64::INFINITY);
                axis.iter()
                    .filter(move |&&x| x <= cap)
                    .map(move |&x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

/// The Key Lemma sweep on the `lambda`-grid up to `lambda_max` and on the
/// same grid enlarged 2x (range and spacing), `t <= 10` with walls.
fn key_lemma(cfg: &RunConfig) -> Result<Report> {
    let geom = cfg.geometry()?;
    let lambda_max = cfg
        .lambda
        .as_ref()
        .map(|s| s.points(cfg.r).iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())))
        .unwrap_or(40.0);
    if !(lambda_max > 0.0) {
        return Err(Error::Config("key-lemma needs a positive lambda range".into()));
    }
    let step = lambda_max / 20.0;
    let t_grid = chamber_grid(cfg.r, 10.0, 0.5);
    let mut labels = vec!["l".to_string()];
    labels.extend((1..=cfg.r).map(|j| format!("lambda_{j}")));
    let labels: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let mut rep = Report::new("key-lemma", cfg, &labels);
    for l in l_values(cfg, &[cfg.l]) {
        let base = key_lemma_sweep(geom, l, &chamber_grid(cfg.r, lambda_max, step), &t_grid, 6)?;
        let big = key_lemma_sweep(geom, l, &chamber_grid(cfg.r, 2.0 * lambda_max, 2.0 * step), &t_grid, 6)?;
        for (lam, (v, t)) in sup_over_t(&base) {
            let mut p = vec![l as f64];
            p.extend(lam);
            let aux: Vec<(String, f64)> = t.iter().enumerate().map(|(j, x)| (format!("t_{}", j + 1), *x)).collect();
            let aux: Vec<(&str, f64)> = aux.iter().map(|(k, v)| (k.as_str(), *v)).collect();
            rep.push(p, v, &aux);
        }
        rep.constant(&format!("d[l={l}]"), base.fitted_d as f64);
        rep.constant(&format!("d_enlarged[l={l}]"), big.fitted_d as f64);
        rep.constant(&format!("exponent[l={l}]"), base.growth_exponent);
        rep.constant(&format!("exponent_enlarged[l={l}]"), big.growth_exponent);
        rep.constant(&format!("C[l={l}]"), base.max_ratio);
        rep.check(base.converged && big.converged, || format!("l = {l}: no d <= 6 fits"));
        rep.check(base.fitted_d == big.fitted_d, || {
            format!(
                "l = {l}: fitted d {} on lambda <= {lambda_max}, {} on lambda <= {}",
                base.fitted_d,
                big.fitted_d,
                2.0 * lambda_max
            )
        });
        rep.check(base.max_ratio.is_finite(), || format!("l = {l}: ratio not finite at {:?}", base.witness));
    }
    Ok(rep)
}

/// `sup_t` of the ratio at the fitted `d`, per `lambda`, with its argmax.
fn sup_over_t(rep: &KeyLemmaReport) -> Vec<(Vec<f64>, (f64, Vec<f64>))> {
    let mut best: BTreeMap<Vec<u64>, (Vec<f64>, f64, Vec<f64>)> = BTreeMap::new();
    for p in &rep.points {
        let v = p.value / (1.0 + p.lambda.iter().map(|x| x * x).sum::<f64>()).powi(rep.fitted_d as i32);
        let key: Vec<u64> = p.lambda.iter().map(|x| x.to_bits()).collect();
        let e = best.entry(key).or_insert((p.lambda.clone(), f64::NEG_INFINITY, Vec::new()));
        if v > e.1 {
            e.1 = v;
            e.2 = p.t.clone();
        }
    }
    let mut out: Vec<_> = best.into_values().map(|(l, v, t)| (l, (v, t))).collect();
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
    out
}

/// Residual of the radial eigen-equation at interior chamber points.
fn ode(cfg: &RunConfig) -> Result<Report> {
    let geom = cfg.geometry()?;
    let ts: Vec<Vec<f64>> = match cfg.r {
        1 => [0.3, 0.8, 1.5, 2.5, 4.0].iter().map(|&t| vec![t]).collect(),
        _ => vec![vec![0.8, 0.3], vec![1.5, 0.4], vec![2.0, 1.2], vec![3.0, 0.5], vec![1.1, 0.9]],
    };
    let limit = tol(cfg, 1e-4);
    let mut labels: Vec<String> = vec!["l".into()];
    labels.extend((1..=cfg.r).map(|j| format!("lambda_{j}")));
    labels.extend((1..=cfg.r).map(|j| format!("t_{j}")));
    let labels: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let mut rep = Report::new("ode", cfg, &labels);
    let mut worst = 0.0f64;
    for l in l_values(cfg, &[cfg.l]) {
        for lam in lambda_points(cfg, &[0.7, 1.3, 2.9]) {
            let sp = SpectralParam::real(&lam, l);
            for t in &ts {
                let res = radial_residual(geom, &sp, &ChamberPoint(t.clone()), 1e-3)?;
                let mut p = vec![l as f64];
                p.extend(&lam);
                p.extend(t);
                rep.push(p, res, &[]);
                worst = worst.max(res);
                rep.check(res <= limit, || format!("residual {res:.3e} > {limit:e} at l = {l}, lambda {lam:?}, t {t:?}"));
            }
        }
    }
    rep.constant("max_residual", worst);
    Ok(rep)
}

/// `phi_mu(t)` straight from the hypergeometric series after the Pfaff map,
/// an oracle independent of the connection formula.
fn phi_oracle(mu: f64, t: f64, o: JacobiOrder, b: usize) -> Result<C64> {
    let i = C64::new(0.0, 1.0);
    let rho = o.rho();
    let a = (rho + i * mu) / 2.0;
    let bb = (rho - i * mu) / 2.0;
    let c = C64::from(b as f64 + 1.0);
    let z = C64::from(t.tanh().powi(2));
    let pref = (-2.0 * a * t.cosh().ln()).exp();
    Ok(pref * hyp2f1_series(a, c - bb, c, z, 200_000)?)
}

/// `|phi - c(mu) psi_mu - c(-mu) psi_{-mu}|` relative to the size of the
/// terms, on the declared `(mu, t)` grid for the configured `b` and `l`.
fn connection(cfg: &RunConfig) -> Result<Report> {
    let mus: Vec<f64> = match &cfg.lambda {
        Some(s) => s.magnitudes(),
        None => vec![0.3, 1.1, 2.5, 6.5],
    };
    let limit = tol(cfg, 1e-8);
    let mut rep = Report::new("connection", cfg, &["l", "mu", "t"]);
    let mut worst = 0.0f64;
    for l in l_values(cfg, &[cfg.l]) {
        let o = JacobiOrder::new(cfg.b, l);
        for &mu in &mus {
            for t in [1.2, 2.0, 3.0] {
                let m = C64::from(mu);
                let plus = jacobi_c(m, o)? * jacobi_psi(m, t, o)?;
                let minus = jacobi_c(-m, o)? * jacobi_psi(-m, t, o)?;
                let oracle = phi_oracle(mu, t, o, cfg.b)?;
                let scale = oracle.norm().max(plus.norm());
                let res = (oracle - plus - minus).norm() / scale;
                rep.push(vec![l as f64, mu, t], res, &[("phi_re", oracle.re), ("phi_im", oracle.im)]);
                worst = worst.max(res);
                rep.check(res <= limit, || format!("residual {res:.3e} > {limit:e} at l = {l}, mu = {mu}, t = {t}"));
            }
        }
    }
    rep.constant("max_residual", worst);
    Ok(rep)
}

/// Radii for the norm-limit and inversion checks. Rank one uses `R <= 200`;
/// rank two scales `R_max` with `1/mu` so the slowest oscillation of
/// `|phi|^2` is sampled over several periods.
fn limit_radii(cfg: &RunConfig, mu: f64) -> Vec<f64> {
    let default_max = if cfg.r == 1 { 200.0 } else { 80.0 * (2.0 / mu).max(1.0) };
    cfg.radii(default_max, 2.5)
}

fn min_magnitude(lam: &[f64]) -> f64 {
    lam.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()))
}

/// Norm limit of `P f_e^lambda` against `|c|^2 ||f||^2`: constant across
/// `lambda` and `l`, quadratic under `f -> 2f`.
fn norm_limit_check(cfg: &RunConfig) -> Result<Report> {
    let geom = cfg.geometry()?;
    let spread_tol = tol(cfg, 0.02);
    let mut labels: Vec<String> = vec!["l".into()];
    labels.extend((1..=cfg.r).map(|j| format!("lambda_{j}")));
    labels.push("R".into());
    let labels: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let mut rep = Report::new("norm-limit", cfg, &labels);
    let mut ratios = Vec::new();
    let mut scaling = None;
    for lam in lambda_points(cfg, &[0.7, 1.3, 2.9]) {
        let mu = min_magnitude(&lam);
        let radii = limit_radii(cfg, mu);
        let spec = quad_spec(cfg, 0.5 / norm(&lam).max(0.5));
        for l in l_values(cfg, &[-2, 0, 3]) {
            let f = CyclicBoundaryFn::identity(geom, SpectralParam::real(&lam, l))?;
            let lr = norm_limit(&f, &radii, KScheme::Invariant, &spec)?;
            for (r, v) in lr.radii.iter().zip(&lr.values) {
                let mut p = vec![l as f64];
                p.extend(&lam);
                p.push(*r);
                rep.push(p, v / lr.reference, &[]);
            }
            let key = format!("l={l},lambda={lam:?}");
            rep.constant(&format!("ratio[{key}]"), lr.ratio);
            rep.constant(&format!("ratio_err[{key}]"), lr.ratio_err);
            ratios.push(lr.ratio);
            if scaling.is_none() {
                let doubled = norm_limit(&f.scaled(C64::new(2.0, 0.0)), &radii, KScheme::Invariant, &spec)?;
                scaling = Some(doubled.limit / lr.limit);
                rep.constant("gamma_half_scale", lr.gamma_half_scale);
                rep.constant("ball_volume", lr.ball_volume);
            }
        }
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = ratios.iter().fold(0.0f64, |m, x| m.max((x - mean).abs())) / mean;
    let scaling = scaling.expect("at least one point");
    let gp = rep.summary.fitted_constants["gamma_half_scale"];
    let bv = rep.summary.fitted_constants["ball_volume"];
    rep.constant("mean_ratio", mean);
    rep.constant("spread", spread);
    rep.constant("mean_over_gamma_half_scale", mean / gp);
    rep.constant("mean_over_ball_volume", mean / bv);
    rep.constant("scaling_ratio", scaling);
    rep.check(spread <= spread_tol, || format!("ratio spread {spread:.3e} > {spread_tol}"));
    rep.check((scaling - 4.0).abs() <= 1e-6, || format!("f -> 2f gives ratio {scaling}"));
    Ok(rep)
}

/// `f = f_e + (0.5 - 0.3i) f_{g0}` with `g0` drawn from the seed.
pub fn off_origin_data(geom: Geometry, lam: &SpectralParam, seed: u64) -> Result<CyclicBoundaryFn> {
    let g0 = random_group_element(geom, &mut seeded_rng(seed), 0.4);
    CyclicBoundaryFn::new(
        vec![(C64::new(1.0, 0.0), GroupElement::identity(geom)), (C64::new(0.5, -0.3), g0)],
        lam.clone(),
    )
}

fn k_scheme(cfg: &RunConfig, geom: Geometry) -> KScheme {
    if geom.r == 1 && geom.b == 0 {
        KScheme::Torus { nodes: 64 }
    } else {
        KScheme::MonteCarlo { samples: 2048, seed: cfg.seed }
    }
}

/// `(1/R^r) int_{B(R)} |P f - S f|^2` against the norm-limit scale
/// `|c|^2 ||f||^2 vol(B_1)`.
fn poisson_asymptotics(cfg: &RunConfig) -> Result<Report> {
    let geom = cfg.geometry()?;
    let frac_tol = tol(cfg, 0.01);
    let radii = cfg.radii(if cfg.r == 1 { 200.0 } else { 40.0 }, 5.0);
    let scheme = k_scheme(cfg, geom);
    let mut labels: Vec<String> = vec!["l".into()];
    labels.extend((1..=cfg.r).map(|j| format!("lambda_{j}")));
    labels.push("R".into());
    let labels: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let mut rep = Report::new("poisson-asymptotics", cfg, &labels);
    let h = cfg.r as f64 / 2.0;
    let vol = std::f64::consts::PI.powf(h) / crate::specfun::gamma(C64::from(h + 1.0))?.re;
    for lam in lambda_points(cfg, &[1.3]) {
        let spec = quad_spec(cfg, 0.4 / (norm(&lam) / 1.3).max(1.0));
        for l in l_values(cfg, &[-2, 1]) {
            let sp = SpectralParam::real(&lam, l);
            let f = off_origin_data(geom, &sp, cfg.seed)?;
            let res = asymptotic_residual(&f, &radii, scheme, &spec)?;
            let scale = hc_c(geom, &sp)?.norm_sqr() * f.norm_sq(scheme)? * vol;
            for v in &res {
                let mut p = vec![l as f64];
                p.extend(&lam);
                p.push(v.radius);
                rep.push(p, v.value / scale, &[("err", v.err / scale)]);
            }
            let last = res.last().expect("radii non-empty");
            let top: Vec<(f64, f64)> = res[res.len() / 2..].iter().map(|v| (v.radius, v.value)).collect();
            let key = format!("l={l},lambda={lam:?}");
            rep.constant(&format!("final_fraction[{key}]"), last.value / scale);
            rep.constant(&format!("decay_slope[{key}]"), loglog_slope(&top));
            rep.constant(&format!("scale[{key}]"), scale);
            rep.check(last.value < frac_tol * scale, || {
                format!("{key}: residual {:.3e} of scale at R = {}", last.value / scale, last.radius)
            });
        }
    }
    Ok(rep)
}

/// `restriction_ratio` over a log grid of `lambda`, three bumps, two
/// support radii and the `l`-sweep; bounded with no upward trend in the
/// top decade.
fn restriction(cfg: &RunConfig) -> Result<Report> {
    let geom = cfg.geometry()?;
    let slope_tol = tol(cfg, 0.05);
    let mags: Vec<f64> = match &cfg.lambda {
        Some(s) => s.magnitudes(),
        None => (0..25).map(|k| 0.2 * 150f64.powf(k as f64 / 24.0)).collect(),
    };
    let top_start = mags.iter().cloned().fold(0.0, f64::max) / 10.0;
    let scale = killing_scale(cfg, geom);
    let supports = [3.0 * scale, 8.0 * scale];
    let bumps = [Bump::Tent, Bump::Quartic, Bump::Smooth];
    let mut rep = Report::new("restriction", cfg, &["bump", "support", "l", "mu"]);
    let (mut hi, mut lo) = (0.0f64, f64::INFINITY);
    let mut worst_slope = f64::NEG_INFINITY;
    for (bi, bump) in bumps.into_iter().enumerate() {
        for &supp in &supports {
            let p = RadialProfile::bump(geom, bump, supp)?;
            for l in l_values(cfg, &[-3, -2, -1, 0, 1, 2, 3]) {
                let mut top = Vec::new();
                for &mu in &mags {
                    let v = restriction_ratio(&p, &SpectralParam::real(&direction(cfg.r, mu), l))?;
                    rep.push(vec![bi as f64, supp, l as f64, mu], v, &[]);
                    rep.check(v.is_finite(), || format!("{bump:?}, support {supp}, l = {l}: ratio {v} at mu = {mu}"));
                    hi = hi.max(v);
                    lo = lo.min(v);
                    if mu >= top_start {
                        top.push((mu, v));
                    }
                }
                let s = loglog_slope(&top);
                worst_slope = worst_slope.max(s);
                rep.check(s < slope_tol, || format!("{bump:?}, support {supp}, l = {l}: top-decade slope {s:.3}"));
            }
        }
    }
    rep.constant("max_ratio", hi);
    rep.constant("min_ratio", lo);
    rep.constant("max_over_min", hi / lo);
    rep.constant("worst_top_slope", worst_slope);
    Ok(rep)
}

/// Boundary inversion of `f_e^lambda` at `k = e`: the volume constant is
/// calibrated on the first `(lambda, l)` pair and reused for the rest.
fn inversion(cfg: &RunConfig) -> Result<Report> {
    let geom = cfg.geometry()?;
    let band = tol(cfg, 0.03);
    let lams = lambda_points(cfg, &[1.3, 0.7, 2.9, 1.9]);
    let ls = l_values(cfg, &[0, -2, 3, 1]);
    let e = KElement::identity(geom);
    let mut labels: Vec<String> = vec!["l".into()];
    labels.extend((1..=cfg.r).map(|j| format!("lambda_{j}")));
    let labels: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let mut rep = Report::new("inversion", cfg, &labels);
    if lams.len() < 2 && ls.len() < 2 {
        return Err(Error::Config("inversion needs at least two (lambda, l) pairs".into()));
    }
    let n = lams.len().max(ls.len());
    let mut calib = None;
    for j in 0..n {
        let (lam, l) = (&lams[j % lams.len()], ls[j % ls.len()]);
        let f = CyclicBoundaryFn::identity(geom, SpectralParam::real(lam, l))?;
        let radii = limit_radii(cfg, min_magnitude(lam));
        let spec = quad_spec(cfg, 0.5 / norm(lam).max(0.5));
        let out = boundary_inversion(&f, &e, &radii, KScheme::Invariant, &spec)?;
        let c = *calib.get_or_insert(out.normalized.re);
        let rec = out.normalized / c;
        let mut p = vec![l as f64];
        p.extend(lam);
        rep.push(
            p,
            rec.norm(),
            &[("re", rec.re), ("im", rec.im), ("normalized", out.normalized.re), ("limit_err", out.limit_err)],
        );
        if j == 0 {
            rep.constant("calibration", c);
        } else {
            rep.check((rec - 1.0).norm() <= band, || format!("l = {l}, lambda {lam:?}: recovered f(e) = {rec}"));
        }
    }
    Ok(rep)
}

/// `|tau_l(pi_0(g a_{R t})) - tau_l(kappa(g))|` for random `g`, with the
/// exponential decay rate in `R`.
fn lemma_a(cfg: &RunConfig) -> Result<Report> {
    let geom = cfg.geometry()?;
    let limit = tol(cfg, 1e-6);
    let dir = direction(cfg.r, 1.0);
    let dn = norm(&dir);
    let t = ChamberPoint(dir.iter().map(|x| x / dn).collect());
    let radii = match (cfg.r_max, cfg.r_step) {
        (None, None) => vec![5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
        _ => cfg.radii(30.0, 5.0),
    };
    let mut rng = seeded_rng(cfg.seed);
    let gs: Vec<GroupElement> = (0..100).map(|_| random_group_element(geom, &mut rng, 1.0)).collect();
    let mut worst = vec![0.0f64; radii.len()];
    for l in l_values(cfg, &[cfg.l]) {
        for g in &gs {
            let target = tau(&iwasawa(g)?.k, l);
            for (w, v) in worst.iter_mut().zip(lemma_a_limit(g, &t, l, &radii)?) {
                *w = w.max((v - target).norm());
            }
        }
    }
    let mut rep = Report::new("lemma-a", cfg, &["R"]);
    for (r, w) in radii.iter().zip(&worst) {
        rep.push(vec![*r], *w, &[]);
    }
    let above: Vec<(f64, f64)> = radii.iter().zip(&worst).filter(|(_, w)| **w > 1e-13).map(|(r, w)| (*r, w.ln())).collect();
    let slope = linear_slope(&above);
    let last = *worst.last().expect("radii non-empty");
    rep.constant("max_error_at_R_max", last);
    rep.constant("log_decay_slope", slope);
    rep.check(last <= limit, || format!("error {last:.3e} > {limit:e} at R = {}", radii.last().unwrap()));
    rep.check(above.len() < 2 || slope < 0.0, || format!("no exponential decay: slope {slope:.3}"));
    rep.check(worst[0] >= last, || "error does not decrease over the R grid".into());
    Ok(rep)
}

/// Table of `phi_{lambda,l}` on a chamber grid with spacing `R_step` up to
/// `R_max` (Killing distance by default).
pub fn eval_spherical(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let geom = cfg.geometry()?;
    let ku = geom.killing_unit();
    let radii = cfg.radii(5.0 * ku, 0.25 * ku);
    let step = radii[0] / ku;
    let grid = chamber_grid(cfg.r, radii.last().unwrap() / ku, step);
    let mut labels: Vec<String> = vec!["l".into()];
    labels.extend((1..=cfg.r).map(|j| format!("lambda_{j}")));
    labels.extend((1..=cfg.r).map(|j| format!("t_{j}")));
    let labels: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let mut rep = Report::new("eval-spherical", cfg, &labels);
    let out: Result<()> = (|| {
        for lam in lambda_points(cfg, &[1.0]) {
            let sp = SpectralParam::real(&lam, cfg.l);
            for t in &grid {
                let v = phi(geom, &sp, &ChamberPoint(t.clone()))?.value;
                let mut p = vec![cfg.l as f64];
                p.extend(&lam);
                p.extend(t);
                rep.push(p, v.norm(), &[("re", v.re), ("im", v.im)]);
            }
        }
        Ok(())
    })();
    if let Err(e) = out {
        if let Error::Config(_) = e {
            return Err(e);
        }
        rep.fail(format!("error: {e}"));
    }
    Ok(rep)
}

/// `c(lambda, l)` on the configured points; in rank one also the closed
/// form `2^{b+1} b! 2^{-i mu} Gamma(i mu) / (Gamma((b+1+l+i mu)/2)
/// Gamma((b+1-l+i mu)/2))` through the Jacobi coefficient.
pub fn eval_cfun(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let geom = cfg.geometry()?;
    let mut labels: Vec<String> = vec!["l".into()];
    labels.extend((1..=cfg.r).map(|j| format!("lambda_{j}")));
    let labels: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let mut rep = Report::new("eval-cfun", cfg, &labels);
    for l in l_values(cfg, &[cfg.l]) {
        for lam in lambda_points(cfg, &[1.0]) {
            let sp = SpectralParam::real(&lam, l);
            let mut p = vec![l as f64];
            p.extend(&lam);
            match hc_c(geom, &sp) {
                Ok(c) => {
                    let mut aux = vec![("re", c.re), ("im", c.im)];
                    if cfg.r == 1 {
                        let closed = 2f64.powi(l as i32) * jacobi_c(C64::from(lam[0]), JacobiOrder::new(cfg.b, l))?;
                        let dev = (closed - c).norm() / c.norm();
                        aux.push(("closed_form_abs", closed.norm()));
                        aux.push(("closed_form_rel_dev", dev));
                        rep.check(dev < 1e-12, || format!("l = {l}, lambda {lam:?}: closed form off by {dev:.3e}"));
                    }
                    rep.push(p, c.norm(), &aux);
                }
                Err(e) => rep.fail(format!("l = {l}, lambda {lam:?}: {e}")),
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(r: usize, b: usize, l: i64) -> RunConfig {
        RunConfig { r, b, l, ..RunConfig::default() }
    }

    #[test]
    fn chamber_grid_counts() {
        assert_eq!(chamber_grid(1, 2.0, 0.5).len(), 5);
        let g = chamber_grid(2, 2.0, 0.5);
        assert_eq!(g.len(), 15);
        assert!(g.iter().all(|p| p[0] >= p[1] && p[1] >= 0.0));
    }

    #[test]
    fn names_round_trip() {
        for c in Check::ALL {
            assert_eq!(Check::parse(c.name()), Some(c));
        }
        assert_eq!(Check::parse("nope"), None);
    }

    #[test]
    fn config_errors_are_errors() {
        assert!(matches!(run(Check::LemmaA, &cfg(0, 0, 0)), Err(Error::Config(_))));
    }

    #[test]
    fn numerical_errors_become_failures() {
        let mut c = cfg(1, 0, 0);
        c.lambda = Some(crate::config::LambdaSpec::List(vec![0.0, 1.0]));
        let rep = run(Check::Inversion, &c).unwrap();
        assert!(!rep.pass());
        assert!(rep.summary.failures[0].starts_with("error:"), "{:?}", rep.summary);
    }

    #[test]
    fn lemma_a_small() {
        let rep = run(Check::LemmaA, &RunConfig { seed: 7, ..cfg(1, 1, 2) }).unwrap();
        assert!(rep.pass(), "{:?}", rep.summary);
        assert!(rep.summary.fitted_constants["log_decay_slope"] < 0.0);
    }

    #[test]
    fn connection_default_grid() {
        let rep = run(Check::Connection, &cfg(1, 1, -2)).unwrap();
        assert!(rep.pass(), "{:?}", rep.summary);
        assert_eq!(rep.grid.len(), 12);
    }

    #[test]
    fn cfun_matches_closed_form() {
        let rep = eval_cfun(&RunConfig {
            lambda: Some(crate::config::LambdaSpec::List(vec![0.5, 1.0, 7.0])),
            ..cfg(1, 0, 0)
        })
        .unwrap();
        assert!(rep.pass(), "{:?}", rep.summary);
    }

    #[test]
    fn spherical_table_starts_at_one() {
        let rep = eval_spherical(&RunConfig {
            r_max: Some(2.0),
            r_step: Some(0.5),
            normalization: Normalization::Unit,
            ..cfg(2, 0, 1)
        })
        .unwrap();
        assert!(rep.pass());
        assert_eq!(rep.grid.len(), 15);
        assert!((rep.grid[0].value - 1.0).abs() < 1e-9);
    }
}
