use crate::error::{Error, Result};
use crate::linalg::{eigen_2x2, normalize, Eigen, Matrix, State};
use crate::math::{abs, cbrt, sqrt};

use super::HyperbolicSystem;

/// The 2×2 model
///
/// ```text
/// h_t + q_x = 0
/// q_t + (q²/h)_x + q h h_x = 0
/// ```
///
/// strictly hyperbolic with genuinely nonlinear fields in
/// `Ω = {0 < q, 0 < h < (16 q)^{1/3}}`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Simplified;

impl Simplified {
    /// `λ₁ = u − h√u`, `λ₂ = u + h√u`.
    pub fn eigenvalues(&self, w: &State<2>) -> Result<[f64; 2]> {
        let (h, q) = (w[0], w[1]);
        if !(h > 0.0) {
            return Err(Error::domain("simplified system requires h > 0"));
        }
        let u = q / h;
        if u < 0.0 {
            return Err(Error::HyperbolicityLoss {
                discriminant: 4.0 * q * h,
                max_imag: h * sqrt(-u),
            });
        }
        let spread = h * sqrt(u);
        Ok([u - spread, u + spread])
    }

    /// Membership in the strict-hyperbolicity region `Ω`.
    pub fn in_region(&self, w: &State<2>) -> bool {
        let (h, q) = (w[0], w[1]);
        q > 0.0 && h > 0.0 && h < cbrt(16.0 * q)
    }
}

impl HyperbolicSystem<2> for Simplified {
    fn name(&self) -> &'static str {
        "simplified"
    }

    fn matrix(&self, w: &State<2>) -> Result<Matrix<2>> {
        let (h, q) = (w[0], w[1]);
        if !(h > 0.0) {
            return Err(Error::domain("simplified system requires h > 0"));
        }
        let u = q / h;
        Ok(Matrix::new([[0.0, 1.0], [-u * u + q * h, 2.0 * u]]))
    }

    fn decompose(&self, a: &Matrix<2>) -> Result<Eigen<2>> {
        eigen_2x2(a)
    }

    fn eigen(&self, w: &State<2>) -> Result<Eigen<2>> {
        let [l1, l2] = self.eigenvalues(w)?;
        Eigen::from_pairs([
            (l1, normalize(&State([1.0, l1]))),
            (l2, normalize(&State([1.0, l2]))),
        ])
    }

    fn max_speed(&self, w: &State<2>) -> Result<f64> {
        let [l1, l2] = self.eigenvalues(w)?;
        Ok(abs(l1).max(abs(l2)))
    }

    fn admissible(&self, w: &State<2>) -> bool {
        w.is_finite() && self.in_region(w)
    }

    fn conserved_rows(&self) -> &'static [usize] {
        &[0]
    }

    fn conserved_flux(&self, w: &State<2>) -> State<2> {
        State([w[1], 0.0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_at_unit_state() {
        let a = Simplified.matrix(&State([1.0, 1.0])).unwrap();
        assert_eq!(a, Matrix::new([[0.0, 1.0], [0.0, 2.0]]));
    }

    #[test]
    fn matrix_matches_finite_difference_of_quasilinear_form() {
        // q_t + (q²/h)_x + q h h_x: differentiate the flux q²/h and add q h.
        let w = State([0.5, 0.5]);
        let a = Simplified.matrix(&w).unwrap();
        let flux = |h: f64, q: f64| q * q / h;
        let d = 1e-6;
        let dfdh = (flux(0.5 + d, 0.5) - flux(0.5 - d, 0.5)) / (2.0 * d);
        let dfdq = (flux(0.5, 0.5 + d) - flux(0.5, 0.5 - d)) / (2.0 * d);
        assert!((a[(1, 0)] - (dfdh + 0.5 * 0.5)).abs() < 1e-8);
        assert!((a[(1, 1)] - dfdq).abs() < 1e-8);
        assert!((a[(1, 0)] + 0.75).abs() < 1e-15);
    }

    #[test]
    fn eigenvalues_at_unit_state() {
        let [l1, l2] = Simplified.eigenvalues(&State([1.0, 1.0])).unwrap();
        assert_eq!(l1, 0.0);
        assert_eq!(l2, 2.0);
    }

    #[test]
    fn non_positive_depth_is_domain_error() {
        assert!(matches!(
            Simplified.matrix(&State([0.0, 1.0])),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            Simplified.matrix(&State([-1.0, 1.0])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn region_boundary() {
        assert!(Simplified.in_region(&State([1.8, 0.530039370688997])));
        assert!(!Simplified.in_region(&State([2.1, 0.5])));
        assert!(!Simplified.in_region(&State([1.0, -0.1])));
    }
}
