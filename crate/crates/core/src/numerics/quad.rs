//! Adaptive Gauss-Kronrod quadrature on intervals and on the truncated Weyl
//! chamber `{t_1 > t_2 > ... > 0, |t| <= R}` for rank 1 and 2.

use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_4;
use std::ops::{Add, Mul};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use crate::{Error, Result, C64};

/// Values that can be integrated: a vector space with a norm.
pub trait QuadValue: Copy + Add<Output = Self> + Mul<f64, Output = Self> + Send + Sync {
    fn zero() -> Self;
    fn norm(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn norm(&self) -> f64 {
        C64::norm(*self)
    }
}

/// A value carried together with the error of the inner integral that
/// produced it (used by nested integration).
#[derive(Debug, Clone, Copy)]
struct Carried<T> {
    value: T,
    err: f64,
}

impl<T: QuadValue> Add for Carried<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Carried {
            value: self.value + o.value,
            err: self.err + o.err,
        }
    }
}

impl<T: QuadValue> Mul<f64> for Carried<T> {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Carried {
            value: self.value * s,
            err: self.err * s.abs(),
        }
    }
}

impl<T: QuadValue> QuadValue for Carried<T> {
    fn zero() -> Self {
        Carried {
            value: T::zero(),
            err: 0.0,
        }
    }
    fn norm(&self) -> f64 {
        self.value.norm()
    }
}

/// Region and tolerances for [`quad_chamber`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    /// 1 or 2.
    pub dimension: usize,
    /// Euclidean radius of the truncated chamber in `t`-coordinates.
    pub radius: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
    /// Width of the initial radial panels; oscillatory integrands want this
    /// below the oscillation period.
    pub panel_width: f64,
}

impl QuadSpec {
    pub fn new(dimension: usize, radius: f64) -> Self {
        QuadSpec {
            dimension,
            radius,
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_evals: 2_000_000,
            panel_width: 1.0,
        }
    }

    pub fn with_tol(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_panel_width(mut self, w: f64) -> Self {
        self.panel_width = w;
        self
    }

    pub fn with_max_evals(mut self, n: usize) -> Self {
        self.max_evals = n;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.dimension == 1 || self.dimension == 2) {
            return Err(Error::Domain {
                function: "quad_chamber",
                detail: format!("dimension {} not in {{1, 2}}", self.dimension),
            });
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Domain {
                function: "quad_chamber",
                detail: "tolerances must be positive".into(),
            });
        }
        if !(self.radius >= 0.0 && self.radius.is_finite()) {
            return Err(Error::Domain {
                function: "quad_chamber",
                detail: format!("radius {}", self.radius),
            });
        }
        Ok(())
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron = kron + s * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + s * WG[j / 2];
        }
    }
    let kron = kron * h;
    let gauss = gauss * h;
    let err = (kron + gauss * -1.0).norm();
    (kron, err)
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Globally adaptive G7/K15 integration of `f` over `[a, b]`, starting from
/// `panels` equal sub-intervals. Returns `(value, error_estimate)`.
pub fn quad_interval<T: QuadValue, F: Fn(f64) -> T>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    abs_tol: f64,
    rel_tol: f64,
    max_evals: usize,
) -> Result<(T, f64)> {
    if a == b {
        return Ok((T::zero(), 0.0));
    }
    let panels = panels.max(1);
    let mut heap = BinaryHeap::with_capacity(panels * 4);
    let mut evals = 0usize;
    let w = (b - a) / panels as f64;
    for i in 0..panels {
        let lo = a + w * i as f64;
        let hi = if i + 1 == panels { b } else { lo + w };
        let (value, err) = gk15(&f, lo, hi);
        evals += 15;
        heap.push(Segment { a: lo, b: hi, value, err });
    }
    loop {
        let (total, err) = heap
            .iter()
            .fold((T::zero(), 0.0), |(v, e), s| (v + s.value, e + s.err));
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok((total, err));
        }
        if evals + 30 > max_evals {
            return Err(Error::Budget {
                evals,
                estimate: err,
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval below resolution; accept as is
            heap.push(Segment { err: 0.0, ..worst });
            continue;
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        evals += 30;
        heap.push(Segment { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, err: e2 });
    }
}

fn panels_for(len: f64, width: f64) -> usize {
    ((len / width).ceil() as usize).max(1)
}

/// Integral of `f` over the truncated closed chamber of `spec`, with `f`
/// taking the chamber coordinates `t`. Rank 2 uses polar coordinates
/// `t = s (cos a, sin a)`, `a in [0, pi/4]`.
pub fn quad_chamber<T, F>(f: F, spec: &QuadSpec) -> Result<(T, f64)>
where
    T: QuadValue,
    F: Fn(&[f64]) -> T + Sync,
{
    quad_annulus(&f, 0.0, spec.radius, spec)
}

fn quad_annulus<T, F>(f: &F, r0: f64, r1: f64, spec: &QuadSpec) -> Result<(T, f64)>
where
    T: QuadValue,
    F: Fn(&[f64]) -> T + Sync,
{
    spec.validate()?;
    let panels = panels_for(r1 - r0, spec.panel_width);
    match spec.dimension {
        1 => quad_interval(
            |s| f(&[s]),
            r0,
            r1,
            panels,
            spec.abs_tol,
            spec.rel_tol,
            spec.max_evals,
        ),
        _ => {
            // the budget counts integrand calls across all inner integrals
            let used = AtomicUsize::new(0);
            let failure = std::sync::Mutex::new(None);
            let outer = |s: f64| -> Carried<T> {
                if s == 0.0 {
                    return Carried::zero();
                }
                let left = spec.max_evals.saturating_sub(used.load(AtomicOrdering::Relaxed));
                // angular panels scale with arc length
                let ang_panels = panels_for(s * FRAC_PI_4, spec.panel_width);
                let res = quad_interval(
                    |a: f64| {
                        used.fetch_add(1, AtomicOrdering::Relaxed);
                        f(&[s * a.cos(), s * a.sin()]) * s
                    },
                    0.0,
                    FRAC_PI_4,
                    ang_panels,
                    spec.abs_tol / (r1 - r0).max(1.0),
                    spec.rel_tol * 0.1,
                    left,
                );
                match res {
                    Ok((value, err)) => Carried { value, err },
                    Err(e) => {
                        failure.lock().unwrap().get_or_insert(e);
                        Carried::zero()
                    }
                }
            };
            let (v, e) = quad_interval(
                outer,
                r0,
                r1,
                panels,
                spec.abs_tol,
                spec.rel_tol,
                spec.max_evals / 15,
            )?;
            if let Some(err) = failure.into_inner().unwrap() {
                return Err(err);
            }
            if used.load(AtomicOrdering::Relaxed) > spec.max_evals {
                return Err(Error::Budget {
                    evals: used.load(AtomicOrdering::Relaxed),
                    estimate: e + v.err,
                });
            }
            Ok((v.value, e + v.err))
        }
    }
}

/// Cumulative chamber integrals over the balls of the increasing `radii`:
/// entry `k` integrates over `|t| <= radii[k]`. Shells are integrated in
/// parallel.
pub fn quad_chamber_shells<T, F>(f: F, radii: &[f64], spec: &QuadSpec) -> Result<Vec<(T, f64)>>
where
    T: QuadValue,
    F: Fn(&[f64]) -> T + Sync,
{
    use rayon::prelude::*;
    if radii.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain {
            function: "quad_chamber_shells",
            detail: "radii must be non-decreasing".into(),
        });
    }
    let edges: Vec<(f64, f64)> = radii
        .iter()
        .enumerate()
        .map(|(i, &r)| (if i == 0 { 0.0 } else { radii[i - 1] }, r))
        .collect();
    let shells: Vec<Result<(T, f64)>> = edges
        .par_iter()
        .map(|&(r0, r1)| quad_annulus(&f, r0, r1, spec))
        .collect();
    let mut out = Vec::with_capacity(radii.len());
    let mut acc = (T::zero(), 0.0);
    for s in shells {
        let (v, e) = s?;
        acc = (acc.0 + v, acc.1 + e);
        out.push(acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sinh_integral() {
        let spec = QuadSpec::new(1, 1.0);
        let (v, e): (f64, f64) = quad_chamber(|t: &[f64]| 2.0 * (2.0 * t[0]).sinh(), &spec).unwrap();
        let exact = 2f64.cosh() - 1.0;
        assert!((v - exact).abs() < 1e-13);
        assert!((v - exact).abs() <= 2.0 * e + 1e-15);
    }

    #[test]
    fn sector_area() {
        let spec = QuadSpec::new(2, 1.0);
        let (v, _): (f64, f64) = quad_chamber(|_: &[f64]| 1.0, &spec).unwrap();
        assert!((v - PI / 8.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory() {
        let lam = 7.0;
        let (v, _) = quad_interval(
            |t: f64| C64::new(0.0, lam * t).exp(),
            0.0,
            10.0,
            10,
            1e-13,
            1e-12,
            100_000,
        )
        .unwrap();
        let exact = (C64::new(0.0, lam * 10.0).exp() - 1.0) / C64::new(0.0, lam);
        assert!((v - exact).norm() < 1e-10);
    }

    #[test]
    fn shells_accumulate() {
        let spec = QuadSpec::new(2, 0.0);
        let out: Vec<(f64, f64)> =
            quad_chamber_shells(|_: &[f64]| 1.0, &[0.5, 1.0, 2.0], &spec).unwrap();
        for (&(v, _), r) in out.iter().zip([0.5f64, 1.0, 2.0]) {
            assert!((v - PI / 8.0 * r * r).abs() < 1e-12);
        }
    }

    #[test]
    fn budget_error() {
        let spec = QuadSpec::new(1, 1.0).with_max_evals(40).with_tol(1e-300, 1e-300);
        let r: Result<(f64, f64)> = quad_chamber(|t: &[f64]| (1.0 / (t[0] + 1e-9)).sin(), &spec);
        assert!(matches!(r, Err(Error::Budget { .. })));
    }

    #[test]
    fn conservative_estimates() {
        // (integrand, a, b, exact)
        let cases: Vec<(Box<dyn Fn(f64) -> f64>, f64, f64, f64)> = vec![
            (Box::new(|x: f64| x.exp()), 0.0, 3.0, 3f64.exp() - 1.0),
            (Box::new(|x: f64| 1.0 / (1.0 + x * x)), 0.0, 10.0, 10f64.atan()),
            (Box::new(|x: f64| x.sqrt()), 0.0, 1.0, 2.0 / 3.0),
            (Box::new(|x: f64| (5.0 * x).cos()), 0.0, 4.0, (20f64).sin() / 5.0),
            // erf(6) differs from 1 by about 2e-17
            (Box::new(|x: f64| (-x * x).exp()), -6.0, 6.0, PI.sqrt()),
        ];
        for (f, a, b, exact) in cases {
            for tol in [1e-4, 1e-8, 1e-12] {
                let (v, e) = quad_interval(&f, a, b, 1, tol, tol, 1_000_000).unwrap();
                assert!((v - exact).abs() <= 2.0 * e + 4e-16 * exact.abs(), "{v} {exact} {e}");
            }
        }
    }
}
