//! Finite-volume laboratory for one-dimensional nonconservative hyperbolic
//! systems `u_t + A(u) u_x = 0`.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only numerics:
//!
//! * [`systems`] – the simplified 2×2 model, shallow water over topography
//!   written as a 3×3 nonconservative system, and the two-layer shallow
//!   water system.
//! * [`paths`] – families of paths `Φ(s; u_l, u_r)` and the path integral
//!   `∫₀¹ A(Φ) Φ_s ds` that defines jump conditions.
//! * [`schemes`] – fluctuation-form time steppers (Roe, Lax–Friedrichs,
//!   well-balanced Lax–Friedrichs, Godunov, Glimm).
//! * [`riemann`] – exact Riemann solver of the simplified system.
//! * [`hugoniot`] – exact shock-curve continuation, shock extraction from
//!   numerical profiles and curve distances.
//! * [`diagnostics`] – equivalent-equation term, mass ledgers, residuals and
//!   well-balancing checks.
//!
//! IO, configuration and the command line live in the `pathcons-lab` crate.

#![no_std]
// Index loops mirror the matrix formulas; `!(x > y)` rejects NaN on purpose.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod diagnostics;
pub mod error;
pub mod hugoniot;
pub mod linalg;
pub mod math;
pub mod paths;
pub mod quadrature;
pub mod riemann;
pub mod schemes;
pub mod systems;

pub use error::{Error, Result};
pub use linalg::{Eigen, Matrix, State};
pub use paths::{JumpModel, Model, PathFamily};
pub use systems::HyperbolicSystem;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
