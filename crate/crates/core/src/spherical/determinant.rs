//! Two-sided divided-difference determinant of the Jacobi kernel.
//!
//! With `x_i = cosh 2t_i`, `y_j = lambda_j^2` and `f(x, y)` the rank-one
//! Jacobi function, `det f(x_i, y_j) / (prod_{i<j} (x_j - x_i)(y_j - y_i))`
//! equals `det D` with `D_ij = f[x_1..x_i; y_1..y_j]`. Clusters of nearly
//! equal nodes are handled by Cauchy integrals, so the walls of the chamber
//! and of `a*` are covered without a separate formula.

use std::cell::RefCell;
use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::numerics::contour_divided_difference;
use crate::specfun::{phi_xy, JacobiOrder};
use crate::{Result, C64};

/// Nodes closer than `CONFLUENCE * (1 + |node|)` form a cluster.
pub(crate) const CONFLUENCE: f64 = 1e-4;
const CONTOUR_POINTS: usize = 48;

pub(crate) struct DetResult {
    pub det: C64,
    pub confluent: bool,
    pub condition: f64,
}

type Key = (u64, u64, u64, u64);

struct Kernel {
    order: JacobiOrder,
    cache: RefCell<HashMap<Key, C64>>,
    used_contour: RefCell<bool>,
}

impl Kernel {
    fn eval(&self, x: C64, y: C64) -> Result<C64> {
        let key = (x.re.to_bits(), x.im.to_bits(), y.re.to_bits(), y.im.to_bits());
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(*v);
        }
        let v = phi_xy(x, y, self.order)?;
        self.cache.borrow_mut().insert(key, v);
        Ok(v)
    }
}

fn is_cluster(nodes: &[C64]) -> bool {
    let scale = nodes.iter().map(|z| z.norm()).fold(0.0, f64::max);
    nodes.iter().all(|a| nodes.iter().all(|b| (a - b).norm() < CONFLUENCE * (1.0 + scale)))
}

fn center_spread(nodes: &[C64]) -> (C64, f64) {
    let c = nodes.iter().sum::<C64>() / nodes.len() as f64;
    let s = nodes.iter().map(|z| (z - c).norm()).fold(0.0, f64::max);
    (c, s)
}

/// Divided difference of `g` on `nodes` (sorted by real part), with
/// contour integration on clusters of radius `radius(center, spread)`.
fn divdiff<G, R>(g: &G, nodes: &[C64], radius: &R, flag: &RefCell<bool>) -> Result<C64>
where
    G: Fn(C64) -> Result<C64>,
    R: Fn(C64, f64) -> f64,
{
    match nodes.len() {
        0 => unreachable!("empty node set"),
        1 => g(nodes[0]),
        _ if is_cluster(nodes) => {
            *flag.borrow_mut() = true;
            let (c, s) = center_spread(nodes);
            let rad = radius(c, s).max(4.0 * s);
            contour_divided_difference(g, nodes, c, rad, CONTOUR_POINTS)
        }
        n => {
            let hi = divdiff(g, &nodes[1..], radius, flag)?;
            let lo = divdiff(g, &nodes[..n - 1], radius, flag)?;
            Ok((hi - lo) / (nodes[n - 1] - nodes[0]))
        }
    }
}

/// Effective `t` of a (possibly complex) `x = cosh 2t`.
fn t_of_x(x: C64) -> f64 {
    (x.norm().max(1.0)).acosh() / 2.0
}

/// Start index of the cluster of each sorted node; neighbours closer than
/// `CONFLUENCE * (1 + scale)` are linked.
fn cluster_starts(nodes: &[C64]) -> Vec<usize> {
    let mut start = vec![0; nodes.len()];
    for i in 1..nodes.len() {
        let scale = nodes[i].norm().max(nodes[i - 1].norm());
        start[i] = if (nodes[i] - nodes[i - 1]).norm() < CONFLUENCE * (1.0 + scale) {
            start[i - 1]
        } else {
            i
        };
    }
    start
}

/// `prod_{i<j} (z_j - z_i)` over pairs in different clusters.
fn separated_vandermonde(nodes: &[C64], start: &[usize]) -> C64 {
    let mut v = C64::new(1.0, 0.0);
    for j in 0..nodes.len() {
        for i in 0..start[j] {
            v *= nodes[j] - nodes[i];
        }
    }
    v
}

/// `det D`. Divided differences are only taken inside clusters: with `M`
/// built from cluster-local differences, `det D = det M / V` where `V` is
/// the Vandermonde product over separated pairs. Differencing well
/// separated nodes would cancel away the decaying parts of the kernel.
pub(crate) fn divided_determinant(x: &[f64], y: &[C64], order: JacobiOrder) -> Result<DetResult> {
    let r = x.len();
    let kernel = Kernel {
        order,
        cache: RefCell::new(HashMap::new()),
        used_contour: RefCell::new(false),
    };
    let mut xs: Vec<C64> = x.iter().map(|&v| C64::from(v)).collect();
    xs.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut ys = y.to_vec();
    ys.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let (sx, sy) = (cluster_starts(&xs), cluster_starts(&ys));
    let mu_max = ys.iter().map(|v| v.norm().sqrt()).fold(0.0, f64::max);
    let p_scale = mu_max + order.rho().abs() + 1.0;
    let x_radius = |c: C64, _s: f64| (c.norm() + 1.0) * (1.0 / p_scale).min(0.5);
    let mut m = DMatrix::<C64>::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            let ynodes = &ys[sy[j]..=j];
            let gx = |xv: C64| -> Result<C64> {
                let t = t_of_x(xv).max(1.0);
                let y_radius = |c: C64, _s: f64| {
                    let rho_mu = 1.0 / t;
                    (2.0 * c.norm().sqrt() * rho_mu + rho_mu * rho_mu).min(0.5)
                };
                divdiff(&|yv| kernel.eval(xv, yv), ynodes, &y_radius, &kernel.used_contour)
            };
            m[(i, j)] = divdiff(&gx, &xs[sx[i]..=i], &x_radius, &kernel.used_contour)?;
        }
    }
    let det_m = m.determinant();
    let rows: f64 = (0..r)
        .map(|i| m.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .product();
    let condition = if det_m.norm() > 0.0 { rows / det_m.norm() } else { f64::INFINITY };
    let det = det_m / (separated_vandermonde(&xs, &sx) * separated_vandermonde(&ys, &sy));
    let confluent = *kernel.used_contour.borrow();
    Ok(DetResult {
        det,
        confluent,
        condition,
    })
}
