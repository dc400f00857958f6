//! Model systems `u_t + A(u) u_x = 0` with their eigenstructure and
//! admissibility regions.

mod shallow_water;
mod simplified;
mod two_layer;

pub use shallow_water::ShallowWater;
pub use simplified::Simplified;
pub use two_layer::{TwoLayer, TwoLayerSpectrum};

use crate::error::Result;
use crate::linalg::{eigen_general, Eigen, Matrix, State};

/// Default gravitational acceleration in m/s².
pub const GRAVITY: f64 = 9.81;

/// Imaginary parts of computed eigenvalues below this are treated as
/// round-off.
pub const IMAG_TOL: f64 = 1e-9;

pub trait HyperbolicSystem<const N: usize> {
    fn name(&self) -> &'static str;

    /// Coefficient matrix `A(u)`.
    fn matrix(&self, u: &State<N>) -> Result<Matrix<N>>;

    /// Eigen-decomposition of a matrix with the same sparsity pattern as
    /// `A(u)` (coefficient matrices and Roe linearizations).
    fn decompose(&self, a: &Matrix<N>) -> Result<Eigen<N>> {
        eigen_general(a, IMAG_TOL)
    }

    fn eigen(&self, u: &State<N>) -> Result<Eigen<N>> {
        self.decompose(&self.matrix(u)?)
    }

    /// Largest characteristic speed `max_k |λ_k(u)|`.
    fn max_speed(&self, u: &State<N>) -> Result<f64> {
        Ok(self.eigen(u)?.max_abs())
    }

    fn admissible(&self, u: &State<N>) -> bool;

    /// Rows of `A` that are exact derivatives of a flux.
    fn conserved_rows(&self) -> &'static [usize] {
        &[]
    }

    /// Flux whose derivative gives the conserved rows; entries of other rows
    /// are unspecified.
    fn conserved_flux(&self, _u: &State<N>) -> State<N> {
        State::zeros()
    }

    /// Rows of `A` that vanish identically (the `σ_t = 0` equation of a
    /// balance law).
    fn stationary_rows(&self) -> &'static [usize] {
        &[]
    }

    /// Flux `F` of the balance-law form `w_t + F(w)_x = S(w) σ_x`, padded
    /// with zeros in the stationary rows.
    fn balance_flux(&self, _u: &State<N>) -> Option<State<N>> {
        None
    }
}

impl<const N: usize, S: HyperbolicSystem<N> + ?Sized> HyperbolicSystem<N> for &S {
    fn name(&self) -> &'static str {
        (**self).name()
    }
    fn matrix(&self, u: &State<N>) -> Result<Matrix<N>> {
        (**self).matrix(u)
    }
    fn decompose(&self, a: &Matrix<N>) -> Result<Eigen<N>> {
        (**self).decompose(a)
    }
    fn eigen(&self, u: &State<N>) -> Result<Eigen<N>> {
        (**self).eigen(u)
    }
    fn max_speed(&self, u: &State<N>) -> Result<f64> {
        (**self).max_speed(u)
    }
    fn admissible(&self, u: &State<N>) -> bool {
        (**self).admissible(u)
    }
    fn conserved_rows(&self) -> &'static [usize] {
        (**self).conserved_rows()
    }
    fn conserved_flux(&self, u: &State<N>) -> State<N> {
        (**self).conserved_flux(u)
    }
    fn stationary_rows(&self) -> &'static [usize] {
        (**self).stationary_rows()
    }
    fn balance_flux(&self, u: &State<N>) -> Option<State<N>> {
        (**self).balance_flux(u)
    }
}
