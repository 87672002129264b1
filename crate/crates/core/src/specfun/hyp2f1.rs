//! Gauss hypergeometric function.

use crate::{Error, Result, C64};

const MAX_TERMS: usize = 10_000;
const STOP_REL: f64 = 1e-17;

fn c_pole(c: C64) -> bool {
    c.im == 0.0 && c.re <= 0.0 && c.re == c.re.round()
}

/// Partial sums of `sum (a)_n (b)_n / ((c)_n n!) z^n` until two
/// consecutive terms fall below `1e-17 |sum|` once the terms are
/// decreasing, or the series terminates.
pub fn hyp2f1_series(a: C64, b: C64, c: C64, z: C64, max_terms: usize) -> Result<C64> {
    if c_pole(c) {
        return Err(Error::Pole {
            function: "hyp2f1",
            at: format!("c = {c}"),
        });
    }
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for n in 0..max_terms {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        term *= ratio;
        sum += term;
        if term == C64::new(0.0, 0.0) {
            return Ok(sum);
        }
        if term.norm() <= STOP_REL * sum.norm() && ratio.norm() < 1.0 {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence {
        function: "hyp2f1",
        terms: max_terms,
    })
}

/// `F(a, b; c; w)` for complex `w`: the series directly when `|w|` is the
/// smaller of `|w|` and `|w/(w-1)|` (or at most 1/2), otherwise after the
/// Pfaff map `F = (1-w)^{-a} F(a, c-b; c; w/(w-1))`.
pub(crate) fn hyp2f1_complex(a: C64, b: C64, c: C64, w: C64) -> Result<C64> {
    let z = w / (w - 1.0);
    if w.norm() <= z.norm().max(0.5) {
        if w.norm() >= 0.999 {
            return Err(Error::Domain {
                function: "hyp2f1",
                detail: format!("argument {w} outside the convergence discs"),
            });
        }
        return hyp2f1_series(a, b, c, w, MAX_TERMS);
    }
    if z.norm() >= 0.999 {
        return Err(Error::Domain {
            function: "hyp2f1",
            detail: format!("argument {w} outside the convergence discs"),
        });
    }
    Ok((-a * (1.0 - w).ln()).exp() * hyp2f1_series(a, c - b, c, z, MAX_TERMS)?)
}

/// `F(a, b; c; x)` for real `x <= 0`.
pub fn gauss_2f1(a: C64, b: C64, c: C64, x: f64) -> Result<C64> {
    if !(x <= 0.0) {
        return Err(Error::Domain {
            function: "gauss_2f1",
            detail: format!("x = {x} must be <= 0"),
        });
    }
    if x == 0.0 {
        if c_pole(c) {
            return Err(Error::Pole {
                function: "hyp2f1",
                at: format!("c = {c}"),
            });
        }
        return Ok(C64::new(1.0, 0.0));
    }
    hyp2f1_complex(a, b, c, C64::from(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::from(x)
    }

    #[test]
    fn closed_forms() {
        assert_eq!(gauss_2f1(c(1.3), c(2.0), c(0.4), 0.0).unwrap(), c(1.0));
        for x in [-0.3, -2.0, -50.0] {
            let v = gauss_2f1(c(1.0), c(2.0), c(2.0), x).unwrap();
            assert!((v - 1.0 / (1.0 - x)).norm() < 1e-14);
        }
        let v = gauss_2f1(c(1.0), c(1.0), c(2.0), -1.0).unwrap();
        assert!((v - 2f64.ln()).norm() < 1e-15);
    }

    #[test]
    fn brute_force_oracle() {
        // 500-term series at the Pfaff-mapped point, recomputed independently
        let cases = [
            (C64::new(1.5, 3.0), C64::new(1.5, -3.0), c(2.0), -0.8),
            (C64::new(-2.5, 1.0), C64::new(4.0, 0.5), C64::new(3.3, -1.0), -3.0),
            (c(9.0), c(-7.5), c(10.0), -0.2),
        ];
        for (a, b, cc, x) in cases {
            let z = x / (x - 1.0);
            let mut term = c(1.0);
            let mut sum = term;
            for n in 0..500 {
                let nf = n as f64;
                term = term * (a + nf) * (cc - b + nf) / ((cc + nf) * (nf + 1.0)) * z;
                sum += term;
            }
            let oracle = C64::from(1.0 - x).powc(-a) * sum;
            let v = gauss_2f1(a, b, cc, x).unwrap();
            assert!((v - oracle).norm() <= 1e-12 * oracle.norm().max(1.0), "{v} {oracle}");
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(gauss_2f1(c(1.0), c(1.0), c(-2.0), -0.5), Err(Error::Pole { .. })));
        assert!(matches!(gauss_2f1(c(1.0), c(1.0), c(2.0), 0.5), Err(Error::Domain { .. })));
        assert!(matches!(
            hyp2f1_series(c(1.0), c(1.0), c(2.0), c(0.999_999), 50),
            Err(Error::NonConvergence { .. })
        ));
    }
}
