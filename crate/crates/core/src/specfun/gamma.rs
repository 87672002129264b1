//! Complex log-gamma.

use std::f64::consts::PI;

use crate::{Error, Result, C64};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Principal branch of `ln Gamma(z)` (Lanczos for `Re z >= 1/2`,
/// reflection otherwise). The imaginary part is continuous along rays from
/// the positive axis, matching the standard principal branch up to
/// multiples of `2 pi i`.
pub fn ln_gamma(z: C64) -> Result<C64> {
    if is_pole(z) {
        return Err(Error::Pole {
            function: "ln_gamma",
            at: format!("{z}"),
        });
    }
    Ok(ln_gamma_unchecked(z))
}

fn ln_gamma_unchecked(z: C64) -> C64 {
    if z.re < 0.5 {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        let s = (z * PI).sin();
        return C64::from(PI.ln()) - ln_sin_pi(z, s) - ln_gamma_unchecked(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = C64::from(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    C64::from(0.5 * (2.0 * PI).ln()) + (z + 0.5) * t.ln() - t + x.ln()
}

/// `ln sin(pi z)` without overflow for large `|Im z|`, using
/// `sin(pi z) = (+-i/2) e^{-+i pi z} (1 - e^{+-2 pi i z})` for `+-Im z > 0`.
fn ln_sin_pi(z: C64, s: C64) -> C64 {
    if z.im.abs() < 30.0 {
        return s.ln();
    }
    let sign = z.im.signum();
    let i = C64::new(0.0, 1.0);
    (i * sign * 0.5).ln() - i * sign * PI * z + (1.0 - (i * sign * 2.0 * PI * z).exp()).ln()
}

/// `Gamma(z)`; errors at poles.
pub fn gamma(z: C64) -> Result<C64> {
    Ok(ln_gamma(z)?.exp())
}

/// `1 / Gamma(z)`, entire: zero at the poles of `Gamma`.
pub fn rgamma(z: C64) -> C64 {
    if is_pole(z) {
        C64::new(0.0, 0.0)
    } else {
        (-ln_gamma_unchecked(z)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_values() {
        assert!(ln_gamma(C64::from(1.0)).unwrap().norm() < 1e-15);
        assert!(ln_gamma(C64::from(2.0)).unwrap().norm() < 1e-15);
        let half = ln_gamma(C64::from(0.5)).unwrap();
        assert!((half.re - PI.sqrt().ln()).abs() < 1e-15 && half.im.abs() < 1e-15);
        let g5 = gamma(C64::from(5.0)).unwrap();
        assert!((g5.re - 24.0).abs() < 1e-12);
        let gm = gamma(C64::from(-1.5)).unwrap();
        assert!((gm.re - 4.0 * PI.sqrt() / 3.0).abs() < 1e-13);
    }

    #[test]
    fn poles() {
        for z in [0.0, -1.0, -7.0] {
            assert!(matches!(ln_gamma(C64::from(z)), Err(Error::Pole { .. })));
            assert_eq!(rgamma(C64::from(z)), C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn imaginary_axis_modulus() {
        // |Gamma(iy)|^2 = pi / (y sinh(pi y))
        for y in [0.3f64, 2.0, 17.0, 40.0, 60.0] {
            let g = gamma(C64::new(0.0, y)).unwrap();
            let exact = PI / (y * (PI * y).sinh());
            assert!((g.norm_sqr() / exact - 1.0).abs() < 1e-12, "{y}");
        }
    }

    #[test]
    fn duplication_identity() {
        // Gamma(2z) = 2^{2z-1} pi^{-1/2} Gamma(z) Gamma(z + 1/2)
        for re in [-3.7, -0.4, 0.3, 1.0, 2.6, 9.1] {
            for im in [-25.0, -3.0, -0.2, 0.0, 0.7, 4.0, 19.0] {
                let z = C64::new(re, im);
                let lhs = ln_gamma(2.0 * z).unwrap();
                let rhs = (2.0 * z - 1.0) * 2f64.ln() - 0.5 * PI.ln()
                    + ln_gamma(z).unwrap()
                    + ln_gamma(z + 0.5).unwrap();
                let rel = ((lhs - rhs).exp() - 1.0).norm();
                assert!(rel < 1e-12, "{z} {rel}");
            }
        }
    }

    #[test]
    fn recurrence_across_reflection() {
        for im in [-50.0, -31.0, 0.5, 35.0] {
            let z = C64::new(-2.3, im);
            let lhs = ln_gamma(z + 1.0).unwrap();
            let rhs = ln_gamma(z).unwrap() + z.ln();
            assert!(((lhs - rhs).exp() - 1.0).norm() < 1e-12);
        }
    }
}
