//! Families of paths `Φ(s; u_l, u_r)` and the path integral
//! `∫₀¹ A(Φ) ∂Φ/∂s ds` that gives meaning to `A(u) u_x` across jumps.

mod camino;
mod epsilon;
mod equilibrium;

pub use camino::TwoSegment;
pub use epsilon::EpsilonPath;
pub use equilibrium::EquilibriumPath;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, State};
use crate::quadrature::integrate_unit;
use crate::systems::HyperbolicSystem;

/// Maximum relative residual `‖A_Φ Δu − ∫A(Φ)Φ_s‖` tolerated from a Roe
/// construction.
pub const ROE_TOL: f64 = 1e-9;

/// Declared regularity properties of a family, checked by tests rather than
/// trusted.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PathProperties {
    /// Follows the integral curves of linearly degenerate fields.
    pub r1: bool,
    /// Keeps the stationary components constant when they agree at both ends.
    pub r4: bool,
    pub epsilon: Option<f64>,
}

pub trait PathFamily<const N: usize> {
    fn name(&self) -> &'static str;

    fn point(&self, s: f64, ul: &State<N>, ur: &State<N>) -> Result<State<N>>;

    /// `∂Φ/∂s`; one-sided (from the right) at breakpoints.
    fn tangent(&self, s: f64, ul: &State<N>, ur: &State<N>) -> Result<State<N>>;

    /// Interior parameters where the tangent may jump.
    fn breakpoints(&self) -> &[f64] {
        &[]
    }

    fn properties(&self) -> PathProperties {
        PathProperties::default()
    }
}

impl<const N: usize, P: PathFamily<N> + ?Sized> PathFamily<N> for &P {
    fn name(&self) -> &'static str {
        (**self).name()
    }
    fn point(&self, s: f64, ul: &State<N>, ur: &State<N>) -> Result<State<N>> {
        (**self).point(s, ul, ur)
    }
    fn tangent(&self, s: f64, ul: &State<N>, ur: &State<N>) -> Result<State<N>> {
        (**self).tangent(s, ul, ur)
    }
    fn breakpoints(&self) -> &[f64] {
        (**self).breakpoints()
    }
    fn properties(&self) -> PathProperties {
        (**self).properties()
    }
}

/// Straight segments `u_l + s (u_r − u_l)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Segments;

impl<const N: usize> PathFamily<N> for Segments {
    fn name(&self) -> &'static str {
        "segments"
    }

    fn point(&self, s: f64, ul: &State<N>, ur: &State<N>) -> Result<State<N>> {
        Ok(State::lerp(ul, ur, s))
    }

    fn tangent(&self, _s: f64, ul: &State<N>, ur: &State<N>) -> Result<State<N>> {
        Ok(*ur - *ul)
    }

    fn properties(&self) -> PathProperties {
        PathProperties {
            r1: false,
            r4: true,
            epsilon: Some(0.0),
        }
    }
}

/// A system paired with a family of paths: everything needed to define jump
/// conditions and path-consistent schemes.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Model<S, P> {
    pub system: S,
    pub path: P,
}

impl<S, P> Model<S, P> {
    pub fn new(system: S, path: P) -> Self {
        Model { system, path }
    }
}

/// Jump conditions and Roe linearization of a (system, path) pair.
pub trait JumpModel<const N: usize> {
    type System: HyperbolicSystem<N>;
    type Path: PathFamily<N>;

    fn system(&self) -> &Self::System;
    fn path(&self) -> &Self::Path;

    /// Closed form of `∫₀¹ A(Φ)Φ_s ds`, when known.
    fn closed_form(&self, _ul: &State<N>, _ur: &State<N>) -> Option<Result<State<N>>> {
        None
    }

    /// Matrix `A_Φ(u_l, u_r)` with `A_Φ (u_r − u_l) = ∫₀¹ A(Φ)Φ_s ds` and
    /// `A_Φ(u, u) = A(u)`. Implementations call [`check_roe`].
    fn roe_matrix(&self, ul: &State<N>, ur: &State<N>) -> Result<Matrix<N>>;

    fn path_integral(&self, ul: &State<N>, ur: &State<N>) -> Result<State<N>> {
        path_integral(self, ul, ur)
    }
}

impl<const N: usize, M: JumpModel<N> + ?Sized> JumpModel<N> for &M {
    type System = M::System;
    type Path = M::Path;
    fn system(&self) -> &Self::System {
        (**self).system()
    }
    fn path(&self) -> &Self::Path {
        (**self).path()
    }
    fn closed_form(&self, ul: &State<N>, ur: &State<N>) -> Option<Result<State<N>>> {
        (**self).closed_form(ul, ur)
    }
    fn roe_matrix(&self, ul: &State<N>, ur: &State<N>) -> Result<Matrix<N>> {
        (**self).roe_matrix(ul, ur)
    }
    fn path_integral(&self, ul: &State<N>, ur: &State<N>) -> Result<State<N>> {
        (**self).path_integral(ul, ur)
    }
}

/// `∫₀¹ A(Φ)Φ_s ds` by adaptive quadrature, leg by leg.
pub fn quadrature_path_integral<const N: usize>(
    system: &impl HyperbolicSystem<N>,
    path: &impl PathFamily<N>,
    ul: &State<N>,
    ur: &State<N>,
) -> Result<State<N>> {
    if ul == ur {
        return Ok(State::zeros());
    }
    integrate_unit(
        |s| {
            let p = path.point(s, ul, ur)?;
            let t = path.tangent(s, ul, ur)?;
            Ok(system.matrix(&p)?.mul_vec(&t))
        },
        path.breakpoints(),
    )
}

/// Path integral using the closed form when the model has one. Conservative
/// rows are replaced by the exact flux difference.
pub fn path_integral<const N: usize, M: JumpModel<N> + ?Sized>(
    model: &M,
    ul: &State<N>,
    ur: &State<N>,
) -> Result<State<N>> {
    if ul == ur {
        return Ok(State::zeros());
    }
    let mut v = match model.closed_form(ul, ur) {
        Some(v) => v?,
        None => quadrature_path_integral(model.system(), model.path(), ul, ur)?,
    };
    let sys = model.system();
    let (fl, fr) = (sys.conserved_flux(ul), sys.conserved_flux(ur));
    for &row in sys.conserved_rows() {
        v[row] = fr[row] - fl[row];
    }
    for &row in sys.stationary_rows() {
        v[row] = 0.0;
    }
    Ok(v)
}

/// Residual of the jump identity for a candidate Roe matrix.
pub fn roe_residual<const N: usize, M: JumpModel<N> + ?Sized>(
    model: &M,
    a: &Matrix<N>,
    ul: &State<N>,
    ur: &State<N>,
) -> Result<f64> {
    let pi = model.path_integral(ul, ur)?;
    Ok((a.mul_vec(&(*ur - *ul)) - pi).norm_inf())
}

/// Accepts `a` only if it reproduces the path integral.
pub fn check_roe<const N: usize, M: JumpModel<N> + ?Sized>(
    model: &M,
    a: Matrix<N>,
    ul: &State<N>,
    ur: &State<N>,
) -> Result<Matrix<N>> {
    if ul == ur {
        return Ok(a);
    }
    let pi = model.path_integral(ul, ur)?;
    let residual = (a.mul_vec(&(*ur - *ul)) - pi).norm_inf();
    let scale = 1.0f64.max(pi.norm_inf());
    if !(residual <= ROE_TOL * scale) {
        return Err(Error::RoeConstruction { residual });
    }
    Ok(a)
}

/// `(ū, h̄)`: the usual square-root-weighted velocity and arithmetic depth.
pub(crate) fn roe_averages(hl: f64, ql: f64, hr: f64, qr: f64) -> Result<(f64, f64)> {
    if !(hl > 0.0 && hr > 0.0) {
        return Err(Error::domain("Roe averages need positive depths"));
    }
    let (sl, sr) = (crate::math::sqrt(hl), crate::math::sqrt(hr));
    let u = (sl * (ql / hl) + sr * (qr / hr)) / (sl + sr);
    Ok((u, 0.5 * (hl + hr)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_midpoint_and_constant() {
        let p = <Segments as PathFamily<2>>::point(&Segments, 0.5, &State([0.0, 0.0]), &State([2.0, 4.0]))
            .unwrap();
        assert_eq!(p, State([1.0, 2.0]));
        let u = State([3.0, 7.0]);
        for s in [0.0, 0.3, 1.0] {
            assert_eq!(Segments.point(s, &u, &u).unwrap(), u);
        }
    }

    #[test]
    fn roe_average_reproduces_momentum_flux_jump() {
        let (hl, ql, hr, qr) = (1.0, 1.0, 4.0, 8.0);
        let (u, h) = roe_averages(hl, ql, hr, qr).unwrap();
        assert!((u - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(h, 2.5);
        let jump = qr * qr / hr - ql * ql / hl;
        assert!((-u * u * (hr - hl) + 2.0 * u * (qr - ql) - jump).abs() < 1e-13);
    }
}
