//! Scalar special functions: log-gamma, `2F1`, Jacobi functions and the
//! Harish-Chandra `c`-, `pi`- and `b`-functions.

mod cfun;
mod gamma;
mod hyp2f1;
mod jacobi;

pub use cfun::{b_fn, eps_l, hc_c, pi_l, pi_short, SpectralParam};
pub use gamma::{gamma, ln_gamma, rgamma};
pub use hyp2f1::{gauss_2f1, hyp2f1_series};
pub use jacobi::{jacobi_c, jacobi_phi, jacobi_psi, JacobiOrder};

pub(crate) use jacobi::{phi_xy, psi_w};
