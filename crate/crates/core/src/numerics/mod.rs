//! Shared numerical kernels.

pub mod contour;
pub mod divdiff;
pub mod fd;
pub mod haar;
pub mod quad;

pub use contour::contour_divided_difference;
pub use divdiff::{divided_ratio, DividedDiffTable};
pub use fd::{fd_first, fd_second, fd_second_richardson};
pub use haar::{haar_k_sample, haar_unitary, seeded_rng};
pub use quad::{quad_chamber, quad_chamber_shells, quad_interval, QuadSpec, QuadValue};
