use crate::error::Result;
use crate::linalg::{Matrix, State};
use crate::math::abs;
use crate::paths::JumpModel;
use crate::systems::HyperbolicSystem;

use super::FluctuationScheme;

/// Eigenvalues below this fraction of the spectral radius count as zero in
/// the well-balanced Lax–Friedrichs projector.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-10;

/// Path-consistent Lax–Friedrichs:
/// `M^± = ±(Δx/2Δt)(u_r − u_l) + ½ ∫₀¹ A(Φ)Φ_s ds`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LaxFriedrichs<M> {
    pub model: M,
}

impl<M> LaxFriedrichs<M> {
    pub fn new(model: M) -> Self {
        LaxFriedrichs { model }
    }
}

impl<const N: usize, M: JumpModel<N>> FluctuationScheme<N> for LaxFriedrichs<M> {
    fn name(&self) -> &'static str {
        "lax-friedrichs"
    }

    fn fluctuations(
        &self,
        ul: &State<N>,
        ur: &State<N>,
        dx: f64,
        dt: f64,
    ) -> Result<(State<N>, State<N>)> {
        if ul == ur {
            return Ok((State::zeros(), State::zeros()));
        }
        let half = self.model.path_integral(ul, ur)? * 0.5;
        let diffusion = (*ur - *ul) * (0.5 * dx / dt);
        Ok((half - diffusion, half + diffusion))
    }

    fn max_speed(&self, u: &State<N>) -> Result<f64> {
        self.model.system().max_speed(u)
    }

    fn admissible(&self, u: &State<N>) -> bool {
        self.model.system().admissible(u)
    }
}

/// Well-balanced Lax–Friedrichs: `M^± = ½(±(Δx/Δt) Î + A_Φ)(u_r − u_l)` where
/// `Î = K diag(1 if λ ≠ 0 else 0) K⁻¹` removes the numerical diffusion from
/// the stationary field of a balance law.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ModifiedLaxFriedrichs<M> {
    pub model: M,
}

impl<M> ModifiedLaxFriedrichs<M> {
    pub fn new(model: M) -> Self {
        ModifiedLaxFriedrichs { model }
    }
}

/// `Î` for the matrix `a`.
pub fn nonstationary_projector<const N: usize>(
    system: &impl HyperbolicSystem<N>,
    a: &Matrix<N>,
) -> Result<Matrix<N>> {
    let eig = system.decompose(a)?;
    let cutoff = ZERO_EIGENVALUE_TOL * eig.max_abs();
    if eig.values.iter().all(|l| abs(*l) >= cutoff) {
        return Ok(Matrix::identity());
    }
    eig.reassemble(|l| if abs(l) < cutoff { 0.0 } else { 1.0 })
}

impl<const N: usize, M: JumpModel<N>> FluctuationScheme<N> for ModifiedLaxFriedrichs<M> {
    fn name(&self) -> &'static str {
        "modified-lax-friedrichs"
    }

    fn fluctuations(
        &self,
        ul: &State<N>,
        ur: &State<N>,
        dx: f64,
        dt: f64,
    ) -> Result<(State<N>, State<N>)> {
        if ul == ur {
            return Ok((State::zeros(), State::zeros()));
        }
        let sys = self.model.system();
        let a = self.model.roe_matrix(ul, ur)?;
        let proj = nonstationary_projector(sys, &a)?;
        let du = *ur - *ul;
        let total = a.mul_vec(&du);
        let diffusion = proj.mul_vec(&du) * (0.5 * dx / dt);
        let mut minus = total * 0.5 - diffusion;
        let mut plus = total - minus;
        for &row in sys.stationary_rows() {
            minus[row] = 0.0;
            plus[row] = 0.0;
        }
        Ok((minus, plus))
    }

    fn max_speed(&self, u: &State<N>) -> Result<f64> {
        self.model.system().max_speed(u)
    }

    fn admissible(&self, u: &State<N>) -> bool {
        self.model.system().admissible(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::paths::{Model, Segments, TwoSegment};
    use crate::systems::{ShallowWater, Simplified};

    #[test]
    fn single_cell_update_matches_hand_expansion() {
        // u_{i−1} = u_i = (1, 1), u_{i+1} = (0.5, 0.5), Δt/Δx = 0.1
        let lf = LaxFriedrichs::new(Model::new(Simplified, TwoSegment));
        let (ui, ur) = (State([1.0, 1.0]), State([0.5, 0.5]));
        let (dx, dt) = (1.0, 0.1);
        let (left_minus, left_plus) = lf.fluctuations(&ui, &ui, dx, dt).unwrap();
        assert_eq!((left_minus, left_plus), (State::zeros(), State::zeros()));
        let (right_minus, _) = lf.fluctuations(&ui, &ur, dx, dt).unwrap();
        let next = ui - (left_plus + right_minus) * (dt / dx);
        // path integral (−0.5, 0.5²/0.5 − 1 + (0.25 − 1)/2) = (−0.5, −0.875)
        assert!((next - State([0.775, 0.79375])).norm_inf() < 1e-15);
    }

    #[test]
    fn water_at_rest_has_zero_fluctuations() {
        let sw = ShallowWater::default();
        let mlf = ModifiedLaxFriedrichs::new(Model::new(sw, Segments));
        let wl = State([1.0, 0.0, 0.0]);
        let wr = State([2.0, 0.0, 1.0]);
        let (m, p) = mlf.fluctuations(&wl, &wr, 0.01, 0.001).unwrap();
        assert!(m.norm_inf() < 1e-13 && p.norm_inf() < 1e-13, "{m:?} {p:?}");
    }

    #[test]
    fn projector_is_identity_without_zero_eigenvalue() {
        let a = Simplified.matrix(&State([0.5, 0.5])).unwrap();
        assert_eq!(
            nonstationary_projector(&Simplified, &a).unwrap(),
            Matrix::identity()
        );
    }

    #[test]
    fn sigma_components_vanish() {
        let sw = ShallowWater::default();
        let mlf = ModifiedLaxFriedrichs::new(Model::new(sw, Segments));
        let (m, p) = mlf
            .fluctuations(&State([1.0, 0.4, 0.1]), &State([1.3, 0.2, 0.3]), 0.01, 0.001)
            .unwrap();
        assert_eq!((m[2], p[2]), (0.0, 0.0));
    }

    #[test]
    fn roe_failure_propagates() {
        let mlf = ModifiedLaxFriedrichs::new(Model::new(ShallowWater::default(), Segments));
        assert!(matches!(
            mlf.fluctuations(&State([-1.0, 0.0, 0.0]), &State([1.0, 0.0, 0.0]), 1.0, 1.0),
            Err(Error::Domain(_))
        ));
    }
}
