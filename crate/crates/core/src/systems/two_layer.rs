use crate::error::{Error, Result};
use crate::linalg::{
    check_distinct, eigenvector_for, normalize, polynomial_roots, Eigen, Matrix, State,
};
use crate::math::{abs, sqrt};

use super::{HyperbolicSystem, GRAVITY, IMAG_TOL};

/// Two superposed immiscible shallow layers in `w = (h₁, q₁, h₂, q₂)`,
/// index 1 being the upper (lighter) layer and `r = ρ₁/ρ₂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLayer {
    pub g: f64,
    pub r: f64,
}

/// First-order approximations of the eigenvalues for `r` close to 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLayerSpectrum {
    pub external: [f64; 2],
    /// `None` when the radicand is negative (approximate hyperbolicity loss).
    pub internal: Option<[f64; 2]>,
}

impl Default for TwoLayer {
    fn default() -> Self {
        TwoLayer {
            g: GRAVITY,
            r: 0.98,
        }
    }
}

impl TwoLayer {
    pub fn new(g: f64, r: f64) -> Self {
        TwoLayer { g, r }
    }

    pub fn reduced_gravity(&self) -> f64 {
        (1.0 - self.r) * self.g
    }

    /// `(u₁ − u₂)² / (g′(h₁ + h₂))`; values above 1 indicate loss of
    /// hyperbolicity in the approximate sense.
    pub fn hyperbolicity_indicator(&self, w: &State<4>) -> Result<f64> {
        let (h1, h2) = (w[0], w[2]);
        if !(h1 > 0.0 && h2 > 0.0) {
            return Err(Error::domain("two-layer system requires positive thicknesses"));
        }
        let gp = self.reduced_gravity();
        if gp == 0.0 {
            return Err(Error::domain("reduced gravity vanishes for r = 1"));
        }
        let du = w[1] / h1 - w[3] / h2;
        Ok(du * du / (gp * (h1 + h2)))
    }

    pub fn approximate_eigenvalues(&self, w: &State<4>) -> Result<TwoLayerSpectrum> {
        let (h1, h2) = (w[0], w[2]);
        let indicator = self.hyperbolicity_indicator(w)?;
        let (u1, u2) = (w[1] / h1, w[3] / h2);
        let hs = h1 + h2;
        let um = (u1 * h1 + u2 * h2) / hs;
        let ce = sqrt(self.g * hs);
        let uc = (u1 * h2 + u2 * h1) / hs;
        let rad = self.reduced_gravity() * h1 * h2 / hs * (1.0 - indicator);
        Ok(TwoLayerSpectrum {
            external: [um - ce, um + ce],
            internal: (rad >= 0.0).then(|| {
                let ci = sqrt(rad);
                [uc - ci, uc + ci]
            }),
        })
    }

    fn structured(a: &Matrix<4>) -> bool {
        let zero = [
            (0, 0),
            (0, 2),
            (0, 3),
            (1, 3),
            (2, 0),
            (2, 1),
            (2, 2),
            (3, 1),
        ];
        zero.iter().all(|&ij| a[ij] == 0.0) && a[(0, 1)] == 1.0 && a[(2, 3)] == 1.0
    }
}

/// Coefficients `[c₀, c₁, c₂, c₃]` of the monic quartic
/// `(λ² − a₂₂λ − a₂₁)(λ² − a₄₄λ − a₄₃) − a₂₃ a₄₁`.
pub(crate) fn characteristic_quartic(a: &Matrix<4>) -> [f64; 4] {
    let (b1, c1) = (-a[(1, 1)], -a[(1, 0)]);
    let (b2, c2) = (-a[(3, 3)], -a[(3, 2)]);
    [
        c1 * c2 - a[(1, 2)] * a[(3, 0)],
        b1 * c2 + b2 * c1,
        c1 + c2 + b1 * b2,
        b1 + b2,
    ]
}

/// Discriminant of the monic quartic `x⁴ + b x³ + c x² + d x + e`.
pub(crate) fn quartic_discriminant(coef: &[f64; 4]) -> f64 {
    let [e, d, c, b] = *coef;
    let a = 1.0;
    256.0 * a * a * a * e * e * e - 192.0 * a * a * b * d * e * e - 128.0 * a * a * c * c * e * e
        + 144.0 * a * a * c * d * d * e
        - 27.0 * a * a * d * d * d * d
        + 144.0 * a * b * b * c * e * e
        - 6.0 * a * b * b * d * d * e
        - 80.0 * a * b * c * c * d * e
        + 18.0 * a * b * c * d * d * d
        + 16.0 * a * c * c * c * c * e
        - 4.0 * a * c * c * c * d * d
        - 27.0 * b * b * b * b * e * e
        + 18.0 * b * b * b * c * d * e
        - 4.0 * b * b * b * d * d * d
        - 4.0 * b * b * c * c * c * e
        + b * b * c * c * d * d
}

fn eval_quartic(coef: &[f64; 4], x: f64) -> (f64, f64) {
    let [c0, c1, c2, c3] = *coef;
    let p = (((x + c3) * x + c2) * x + c1) * x + c0;
    let dp = ((4.0 * x + 3.0 * c3) * x + 2.0 * c2) * x + c1;
    (p, dp)
}

impl HyperbolicSystem<4> for TwoLayer {
    fn name(&self) -> &'static str {
        "two-layer"
    }

    fn matrix(&self, w: &State<4>) -> Result<Matrix<4>> {
        let (h1, h2) = (w[0], w[2]);
        if !(h1 > 0.0 && h2 > 0.0) {
            return Err(Error::domain("two-layer system requires positive thicknesses"));
        }
        let (u1, u2) = (w[1] / h1, w[3] / h2);
        let (c1, c2) = (self.g * h1, self.g * h2);
        Ok(Matrix::new([
            [0.0, 1.0, 0.0, 0.0],
            [c1 - u1 * u1, 2.0 * u1, c1, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [self.r * c2, 0.0, c2 - u2 * u2, 2.0 * u2],
        ]))
    }

    /// Roots of the characteristic quartic with eigenvectors
    /// `(1, λ, κ, κλ)`, `κ = (λ² − a₂₂λ − a₂₁)/a₂₃`.
    fn decompose(&self, a: &Matrix<4>) -> Result<Eigen<4>> {
        if !Self::structured(a) {
            return crate::linalg::eigen_general(a, IMAG_TOL);
        }
        let coef = characteristic_quartic(a);
        if a[(1, 2)] * a[(3, 0)] == 0.0 {
            // one-way coupling: the quartic factors exactly, which keeps
            // repeated layer speeds bit-identical instead of √ε-split
            return Self::decompose_factored(a, &coef);
        }
        let roots = polynomial_roots(&coef)?;
        let max_imag = roots.iter().fold(0.0f64, |m, z| m.max(abs(z.im)));
        if max_imag > IMAG_TOL {
            return Err(Error::HyperbolicityLoss {
                discriminant: quartic_discriminant(&coef),
                max_imag,
            });
        }
        let mut values = [0.0; 4];
        for (v, z) in values.iter_mut().zip(roots.iter()) {
            let (p0, dp) = eval_quartic(&coef, z.re);
            let polished = z.re - p0 / dp;
            *v = if dp != 0.0 && abs(eval_quartic(&coef, polished).0) <= abs(p0) {
                polished
            } else {
                z.re
            };
        }
        Self::assemble(a, values)
    }

    fn admissible(&self, w: &State<4>) -> bool {
        w.is_finite() && w[0] > 0.0 && w[2] > 0.0 && self.eigen(w).is_ok()
    }

    fn conserved_rows(&self) -> &'static [usize] {
        &[0, 2]
    }

    fn conserved_flux(&self, w: &State<4>) -> State<4> {
        State([w[1], 0.0, w[3], 0.0])
    }
}

impl TwoLayer {
    fn decompose_factored(a: &Matrix<4>, coef: &[f64; 4]) -> Result<Eigen<4>> {
        let mut values = [0.0; 4];
        for (k, (b, c)) in [(a[(1, 1)], a[(1, 0)]), (a[(3, 3)], a[(3, 2)])]
            .into_iter()
            .enumerate()
        {
            // λ² − bλ − c = 0
            let d = 0.25 * b * b + c;
            if d < 0.0 {
                return Err(Error::HyperbolicityLoss {
                    discriminant: quartic_discriminant(coef),
                    max_imag: sqrt(-d),
                });
            }
            values[2 * k] = 0.5 * b - sqrt(d);
            values[2 * k + 1] = 0.5 * b + sqrt(d);
        }
        Self::assemble(a, values)
    }

    fn assemble(a: &Matrix<4>, mut values: [f64; 4]) -> Result<Eigen<4>> {
        values.sort_by(f64::total_cmp);
        check_distinct(&values)?;
        let mut pairs = [(0.0, State::zeros()); 4];
        for (pair, &lam) in pairs.iter_mut().zip(values.iter()) {
            let a23 = a[(1, 2)];
            let p1 = lam * lam - a[(1, 1)] * lam - a[(1, 0)];
            let v = if a23 != 0.0 && abs(p1) > 1e-12 * (1.0 + lam * lam) {
                let kappa = p1 / a23;
                State([1.0, lam, kappa, kappa * lam])
            } else {
                // upper block decoupled at this root
                eigenvector_for(a, lam)?
            };
            *pair = (lam, normalize(&v));
        }
        Eigen::from_pairs(pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decoupled_layers_for_zero_density_ratio() {
        let sys = TwoLayer::new(GRAVITY, 0.0);
        let w = State([1.0, 0.5, 2.0, -0.3]);
        let e = sys.eigen(&w).unwrap();
        let (u1, u2) = (0.5, -0.15);
        let (c1, c2) = ((GRAVITY * 1.0f64).sqrt(), (GRAVITY * 2.0f64).sqrt());
        let mut want = [u1 - c1, u1 + c1, u2 - c2, u2 + c2];
        want.sort_by(f64::total_cmp);
        for k in 0..4 {
            assert!((e.values[k] - want[k]).abs() < 1e-12, "{k}");
        }
        assert!(e.residual(&sys.matrix(&w).unwrap()) < 1e-12);
    }

    #[test]
    fn degenerate_decoupled_spectrum_rejected() {
        let sys = TwoLayer::new(GRAVITY, 0.0);
        assert!(!sys.admissible(&State([1.0, 0.0, 1.0, 0.0])));
    }

    #[test]
    fn indicator_examples() {
        let sys = TwoLayer::new(10.0, 0.9);
        let du = 2f64.sqrt();
        let v = sys
            .hyperbolicity_indicator(&State([1.0, du, 1.0, 0.0]))
            .unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let sys = TwoLayer::new(9.81, 0.98);
        let v = sys
            .hyperbolicity_indicator(&State([0.5, 0.05, 0.5, 0.0]))
            .unwrap();
        assert!((v - 0.01 / (0.02 * 9.81)).abs() < 1e-12);
        assert!(TwoLayer::new(9.81, 1.0)
            .hyperbolicity_indicator(&State([1.0, 0.0, 1.0, 0.0]))
            .is_err());
    }

    #[test]
    fn strong_shear_loses_hyperbolicity() {
        let sys = TwoLayer::new(9.81, 0.98);
        let w = State([1.0, 1.0, 1.0, -1.0]);
        assert!(sys.hyperbolicity_indicator(&w).unwrap() > 1.0);
        match sys.eigen(&w) {
            Err(Error::HyperbolicityLoss { discriminant, .. }) => assert!(discriminant < 0.0),
            other => panic!("expected hyperbolicity loss, got {other:?}"),
        }
    }

    #[test]
    fn approximation_close_for_near_unit_ratio() {
        let sys = TwoLayer::new(9.81, 0.98);
        let w = State([1.0, 0.05, 1.0, 0.0]);
        let e = sys.eigen(&w).unwrap();
        let approx = sys.approximate_eigenvalues(&w).unwrap();
        let int = approx.internal.unwrap();
        let spread = e.values[3] - e.values[0];
        assert!((e.values[0] - approx.external[0]).abs() < 0.02 * spread);
        assert!((e.values[3] - approx.external[1]).abs() < 0.02 * spread);
        assert!((e.values[1] - int[0]).abs() < 0.02 * spread);
        assert!((e.values[2] - int[1]).abs() < 0.02 * spread);
    }
}
