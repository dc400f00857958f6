use crate::error::Result;
use crate::linalg::{Matrix, State};
use crate::paths::JumpModel;
use crate::systems::HyperbolicSystem;

use super::FluctuationScheme;

/// Generalized Roe scheme `M^± = A_Φ^± (u_r − u_l)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Roe<M> {
    pub model: M,
}

impl<M> Roe<M> {
    pub fn new(model: M) -> Self {
        Roe { model }
    }
}

/// `A^± = K Λ^± K⁻¹`.
pub fn split<const N: usize>(
    system: &impl HyperbolicSystem<N>,
    a: &Matrix<N>,
) -> Result<(Matrix<N>, Matrix<N>)> {
    let eig = system.decompose(a)?;
    let minus = eig.reassemble(|l| l.min(0.0))?;
    let plus = eig.reassemble(|l| l.max(0.0))?;
    Ok((minus, plus))
}

impl<const N: usize, M: JumpModel<N>> FluctuationScheme<N> for Roe<M> {
    fn name(&self) -> &'static str {
        "roe"
    }

    fn fluctuations(
        &self,
        ul: &State<N>,
        ur: &State<N>,
        _dx: f64,
        _dt: f64,
    ) -> Result<(State<N>, State<N>)> {
        if ul == ur {
            return Ok((State::zeros(), State::zeros()));
        }
        let sys = self.model.system();
        let a = self.model.roe_matrix(ul, ur)?;
        let du = *ur - *ul;
        let eig = sys.decompose(&a)?;
        let mut minus = eig.reassemble(|l| l.min(0.0))?.mul_vec(&du);
        // M⁺ as the complement keeps M⁻ + M⁺ = A_Φ Δu to round-off
        let mut plus = a.mul_vec(&du) - minus;
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
    use crate::paths::{Model, TwoSegment};
    use crate::systems::Simplified;

    #[test]
    fn upwinding_limits() {
        // both eigenvalues positive at low depth
        let m = Model::new(Simplified, TwoSegment);
        let roe = Roe::new(m);
        let wl = State([0.3, 1.0]);
        let wr = State([0.31, 1.02]);
        let a = m.roe_matrix(&wl, &wr).unwrap();
        assert!(Simplified.decompose(&a).unwrap().values[0] > 0.0);
        let (mm, mp) = roe.fluctuations(&wl, &wr, 0.1, 0.01).unwrap();
        assert!(mm.norm_inf() < 1e-14);
        assert!((mp - a.mul_vec(&(wr - wl))).norm_inf() < 1e-14);
    }

    #[test]
    fn mixed_split_matches_dense_oracle() {
        let m = Model::new(Simplified, TwoSegment);
        // λ₁ < 0 < λ₂ across the 1-shock from (1, 1)
        let (wl, wr) = (State([1.0, 1.0]), State([1.8, 0.530_039_370_688_997]));
        let a = m.roe_matrix(&wl, &wr).unwrap();
        let (am, ap) = split(&Simplified, &a).unwrap();
        let dense = nalgebra::Matrix2::new(a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
        let eig = dense.complex_eigenvalues();
        let mut l: std::vec::Vec<f64> = eig.iter().map(|z| z.re).collect();
        l.sort_by(f64::total_cmp);
        assert!(l[0] < 0.0 && l[1] > 0.0);
        // A⁻ annihilates the positive eigenvector, A⁺ the negative one
        let e = Simplified.decompose(&a).unwrap();
        assert!(ap.mul_vec(&e.vectors.column(0)).norm_inf() < 1e-13);
        assert!(am.mul_vec(&e.vectors.column(1)).norm_inf() < 1e-13);
        assert!((e.values[0] - l[0]).abs() < 1e-13 && (e.values[1] - l[1]).abs() < 1e-13);
        assert!(am.add(&ap).sub(&a).max_abs() < 1e-13);
    }
}
