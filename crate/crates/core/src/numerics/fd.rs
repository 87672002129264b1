//! Central finite differences.

use crate::{Error, Result};

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::Step(h))
    }
}

/// Central first difference with step `h`.
pub fn fd_first<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> Result<f64> {
    check_step(h)?;
    Ok((f(x + h) - f(x - h)) / (2.0 * h))
}

/// Central second difference with step `h`.
pub fn fd_second<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> Result<f64> {
    check_step(h)?;
    Ok((f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h))
}

/// Second difference with one Richardson step (steps `h` and `h/2`),
/// error `O(h^4)`.
pub fn fd_second_richardson<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> Result<f64> {
    let coarse = fd_second(&f, x, h)?;
    let fine = fd_second(&f, x, h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}
