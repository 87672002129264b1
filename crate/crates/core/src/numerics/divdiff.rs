//! Newton divided differences with confluent (Hermite) nodes.

use crate::C64;

/// Nodes closer than this (relative) are treated as coincident.
const CONFLUENT_TOL: f64 = 1e-12;

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= CONFLUENT_TOL * (1.0 + a.abs().max(b.abs()))
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// Newton tableau for `f` on a node set. Repeated nodes use derivatives,
/// so `f` is called as `f(x, k)` for the `k`-th derivative at `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct DividedDiffTable {
    /// Nodes in the order used by the Newton form.
    pub nodes: Vec<f64>,
    /// `coefficients[k] = f[nodes[0], ..., nodes[k]]`.
    pub coefficients: Vec<C64>,
}

impl DividedDiffTable {
    pub fn new<F: Fn(f64, usize) -> C64>(f: F, nodes: &[f64]) -> Self {
        let mut z = nodes.to_vec();
        z.sort_by(f64::total_cmp);
        let n = z.len();
        // col[i] holds f[z_i, ..., z_{i+j}] for the current order j
        let mut col: Vec<C64> = z.iter().map(|&x| f(x, 0)).collect();
        let mut coefficients = Vec::with_capacity(n);
        if n > 0 {
            coefficients.push(col[0]);
        }
        for j in 1..n {
            let mut next = Vec::with_capacity(n - j);
            for i in 0..n - j {
                let v = if same(z[i], z[i + j]) {
                    f(z[i], j) / factorial(j)
                } else {
                    (col[i + 1] - col[i]) / (z[i + j] - z[i])
                };
                next.push(v);
            }
            coefficients.push(next[0]);
            col = next;
        }
        DividedDiffTable { nodes: z, coefficients }
    }

    /// The Newton interpolant at `x`.
    pub fn interpolate(&self, x: f64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for k in (0..self.coefficients.len()).rev() {
            acc = acc * (x - self.nodes[k]) + self.coefficients[k];
        }
        acc
    }

    /// The highest-order coefficient `f[z_0, ..., z_{n-1}]`.
    pub fn leading(&self) -> C64 {
        self.coefficients.last().copied().unwrap_or_default()
    }
}

/// `f(t) / prod_i (t - t_i)` through the Newton form
/// `f[t_1..t_n, t] + sum_k f[t_1..t_k] / prod_{i>=k} (t - t_i)`.
/// When `f` vanishes on the nodes only the first term survives, which is
/// bounded by `sup |f^(n)| / n!`. `f(x, k)` returns the `k`-th derivative.
pub fn divided_ratio<F: Fn(f64, usize) -> C64>(f: F, nodes: &[f64], t: f64) -> C64 {
    let mut all = nodes.to_vec();
    all.push(t);
    let full = DividedDiffTable::new(&f, &all).leading();
    let table = DividedDiffTable::new(&f, nodes);
    let n = table.nodes.len();
    let mut acc = full;
    for k in 0..n {
        let c = table.coefficients[k];
        if c == C64::new(0.0, 0.0) {
            continue;
        }
        let den: f64 = table.nodes[k..].iter().map(|&ti| t - ti).product();
        acc += c / den;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn quad(x: f64, k: usize) -> C64 {
        C64::from(match k {
            0 => (x - 1.0) * (x - 2.0),
            1 => 2.0 * x - 3.0,
            2 => 2.0,
            _ => 0.0,
        })
    }

    fn sin_d(x: f64, k: usize) -> C64 {
        C64::from(match k % 4 {
            0 => x.sin(),
            1 => x.cos(),
            2 => -x.sin(),
            _ => -x.cos(),
        })
    }

    #[test]
    fn polynomial_ratio() {
        let v = divided_ratio(quad, &[1.0, 2.0], 5.0);
        assert!((v - 1.0).norm() < 1e-14);
    }

    #[test]
    fn lemma_bound_for_sine() {
        let v = divided_ratio(sin_d, &[0.0, PI], PI / 2.0);
        assert!(v.norm() <= 1.0);
        assert!((v.re + 4.0 / (PI * PI)).abs() < 1e-14);
    }

    #[test]
    fn confluent_limit() {
        let t: f64 = 2.5;
        let conf = divided_ratio(sin_d, &[1.0, 1.0], t);
        let sep = divided_ratio(sin_d, &[1.0 - 1e-6, 1.0 + 1e-6], t);
        assert!((conf - sep).norm() < 1e-8);
        // direct value
        let direct = (t.sin()) / ((t - 1.0) * (t - 1.0));
        assert!((conf.re - direct).abs() < 1e-13);
    }

    #[test]
    fn naive_agreement_when_separated() {
        let nodes = [0.3, 0.7, 1.5];
        for t in [2.0f64, -1.0, 3.3] {
            let naive = t.sin() / nodes.iter().map(|&x| t - x).product::<f64>();
            let v = divided_ratio(sin_d, &nodes, t);
            assert!((v.re - naive).abs() < 1e-12 * (1.0 + naive.abs()));
        }
    }

    #[test]
    fn interpolation_reproduces_quadratic() {
        let table = DividedDiffTable::new(quad, &[0.0, 3.0, 4.0]);
        assert!((table.interpolate(1.7) - quad(1.7, 0)).norm() < 1e-13);
    }
}
