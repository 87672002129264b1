//! Harmonic analysis on homogeneous line bundles over the noncompact complex
//! Grassmannian `SU(r, r+b) / S(U(r) x U(r+b))`.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: chamber quadrature, divided differences, finite
//!   differences and Haar sampling on `K`.
//! * [`geometry`]: the group itself (matrices, Iwasawa / Cartan / polar
//!   decompositions, root data, Weyl densities).
//! * [`specfun`]: complex log-gamma, `2F1`, Jacobi functions and the
//!   Harish-Chandra `c`-, `pi`- and `b`-functions.
//! * [`spherical`]: the elementary `tau_{-l}`-spherical function and the
//!   checks built on it.
//! * [`transforms`]: Poisson transforms of cyclic boundary data, ball
//!   averages, norm limits, restriction and inversion.
//! * [`config`], [`report`], [`verify`], [`io`]: the batch verification layer
//!   used by the command line tool.

pub mod config;
pub mod error;
pub mod geometry;
pub mod io;
pub mod numerics;
pub mod report;
pub mod specfun;
pub mod spherical;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{Geometry, GroupElement, KElement};
pub use specfun::SpectralParam;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
