//! Derivative-root geometry for complex univariate polynomials.
//!
//! The crate computes the critical points `ζ_j` of a polynomial given by its
//! roots, the length scales
//!
//! ```text
//! ρ_j = min_{k=2..n} | p(ζ_j) k! / p^(k)(ζ_j) |^(1/k)
//! ```
//!
//! and the annuli `ι₁ρ_j ≤ |z − ζ_j| ≤ ι₂ρ_j` that are expected to cover the
//! roots. On top of that it provides Newton iteration with a
//! fast-convergence basin test, an all-roots solver that walks the derivative
//! chain `p^(n−1), …, p′, p`, and seeded Monte-Carlo experiments that measure
//! the annulus scalars and basin statistics on random ensembles.
//!
//! Coefficients are stored in ascending degree order everywhere.

pub mod cascade;
pub mod critical;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod newton;
pub mod poly;

pub use cascade::{cascade_solve, cascade_solve_about, deflate, CascadeConfig, CascadeResult};
pub use critical::{critical_points, critical_points_with, CriticalConfig, CriticalSet};
pub use error::{Error, Result};
pub use geometry::{
    containment_check, dr_disks, iota_for_root, iota_for_root_with, rho, Annulus, Closeness,
    DrDisk, IotaRecord, Radius,
};
pub use newton::{
    in_fast_basin, newton_step_coeffform, newton_step_rootform, run_newton, BasinVerdict,
    NewtonStep, NewtonTrace,
};
pub use num_complex::Complex64;
pub use poly::{CoeffForm, Evaluate, LogValue, RootForm};
