//! Poisson transform on cyclic boundary data, the comparison operator `S`,
//! ball averages and their limits, the spherical transform on radial
//! profiles, Fourier restriction and boundary inversion.

mod ball;
mod cyclic;
mod inversion;
mod profile;

pub use ball::{
    asymptotic_residual, ball_average, ball_average_chamber, extrapolate, norm_limit, s_ball_average,
    BallValue,
    KScheme, LimitReport,
};
pub use cyclic::{poisson, poisson_quadrature, s_operator, weyl_translate, CyclicBoundaryFn};
pub use inversion::{boundary_inversion, InversionReport};
pub use profile::{
    plancherel_window, restriction_ratio, spherical_transform, Bump, RadialProfile,
};

use std::sync::Mutex;

use crate::numerics::QuadValue;
use crate::{Error, Result};

/// Holds the first error raised inside a quadrature integrand.
pub(crate) struct Capture(Mutex<Option<Error>>);

impl Capture {
    pub(crate) fn new() -> Self {
        Capture(Mutex::new(None))
    }

    pub(crate) fn take<T: QuadValue>(&self, r: Result<T>) -> T {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.lock().unwrap().get_or_insert(e);
                T::zero()
            }
        }
    }

    pub(crate) fn finish(self) -> Result<()> {
        match self.0.into_inner().unwrap() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests;
