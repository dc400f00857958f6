use crate::error::{Error, Result};
use crate::linalg::{check_distinct, normalize, Eigen, Matrix, State};
use crate::math::{abs, cbrt, sqrt};

use super::{HyperbolicSystem, GRAVITY};

/// Shallow water over a fixed bottom written as a nonconservative system in
/// `W = (h, q, σ)`, where `σ` is the depth of the bottom below a reference
/// level:
///
/// ```text
/// ⎡ 0        1    0  ⎤
/// ⎢ gh − u²  2u  −gh ⎥
/// ⎣ 0        0    0  ⎦
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShallowWater {
    pub g: f64,
}

impl Default for ShallowWater {
    fn default() -> Self {
        ShallowWater { g: GRAVITY }
    }
}

impl ShallowWater {
    pub fn new(g: f64) -> Self {
        ShallowWater { g }
    }

    /// Specific energy `h + q²/(2 g h²) − σ`, constant along steady states.
    pub fn energy(&self, w: &State<3>) -> f64 {
        w[0] + w[1] * w[1] / (2.0 * self.g * w[0] * w[0]) - w[2]
    }

    /// Froude number `|u| / √(gh)`.
    pub fn froude(&self, w: &State<3>) -> f64 {
        abs(w[1] / w[0]) / sqrt(self.g * w[0])
    }

    /// Critical depth `(q²/g)^{1/3}` at which the energy is minimal.
    pub fn critical_depth(&self, q: f64) -> f64 {
        cbrt(q * q / self.g)
    }

    /// Depth `h` with `h + q²/(2gh²) − σ = energy` on the supercritical
    /// (`h < h_c`) or subcritical (`h > h_c`) branch.
    pub fn equilibrium_depth(
        &self,
        q: f64,
        energy: f64,
        sigma: f64,
        supercritical: bool,
    ) -> Result<f64> {
        let e = energy + sigma;
        let f = |h: f64| h + q * q / (2.0 * self.g * h * h) - e;
        let df = |h: f64| 1.0 - q * q / (self.g * h * h * h);
        if q == 0.0 {
            return if e > 0.0 && !supercritical {
                Ok(e)
            } else {
                Err(Error::NoSolution {
                    reason: "still water has no supercritical branch".into(),
                    residual: e,
                })
            };
        }
        let hc = self.critical_depth(q);
        let fmin = f(hc);
        if fmin > 0.0 {
            return Err(Error::NoSolution {
                reason: "energy below the critical minimum".into(),
                residual: fmin,
            });
        }
        if fmin == 0.0 {
            return Ok(hc);
        }
        // bracket with f(lo) > 0 > f(hi) or the reverse
        let (mut lo, mut hi) = if supercritical {
            let mut lo = 0.5 * hc;
            while f(lo) <= 0.0 {
                lo *= 0.5;
            }
            (lo, hc)
        } else {
            let mut hi = 2.0 * hc.max(e);
            while f(hi) <= 0.0 {
                hi *= 2.0;
            }
            (hc, hi)
        };
        let mut h = if supercritical { lo } else { hi };
        for _ in 0..200 {
            let fh = f(h);
            if abs(fh) <= 1e-15 * e.abs().max(1.0) {
                return Ok(h);
            }
            // keep the bracket: sign of f at lo is positive on the
            // supercritical branch, negative on the subcritical one
            let lo_side = if supercritical { fh > 0.0 } else { fh < 0.0 };
            if lo_side {
                lo = h;
            } else {
                hi = h;
            }
            let step = h - fh / df(h);
            h = if step > lo && step < hi {
                step
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= 4.0 * f64::EPSILON * hi {
                return Ok(h);
            }
        }
        Ok(h)
    }

    /// State on the right of a stationary contact over a bottom step from
    /// `w_l` to `σ_r`: same discharge and energy, same flow regime as `w_l`.
    pub fn stationary_contact(&self, wl: &State<3>, sigma_r: f64) -> Result<State<3>> {
        if !(wl[0] > 0.0) {
            return Err(Error::domain("shallow water requires h > 0"));
        }
        let supercritical = self.froude(wl) > 1.0;
        let h = self.equilibrium_depth(wl[1], self.energy(wl), sigma_r, supercritical)?;
        Ok(State([h, wl[1], sigma_r]))
    }

    /// Conservative flux `(q, q²/h + gh²/2)`.
    pub fn flux(&self, w: &State<3>) -> State<3> {
        let (h, q) = (w[0], w[1]);
        State([q, q * q / h + 0.5 * self.g * h * h, 0.0])
    }

    fn structured(&self, a: &Matrix<3>) -> bool {
        a[(0, 0)] == 0.0
            && a[(0, 2)] == 0.0
            && a[(2, 0)] == 0.0
            && a[(2, 1)] == 0.0
            && a[(2, 2)] == 0.0
    }
}

impl HyperbolicSystem<3> for ShallowWater {
    fn name(&self) -> &'static str {
        "shallow-water"
    }

    fn matrix(&self, w: &State<3>) -> Result<Matrix<3>> {
        let (h, q) = (w[0], w[1]);
        if !(h > 0.0) {
            return Err(Error::domain("shallow water requires h > 0"));
        }
        let u = q / h;
        let gh = self.g * h;
        Ok(Matrix::new([
            [0.0, 1.0, 0.0],
            [gh - u * u, 2.0 * u, -gh],
            [0.0, 0.0, 0.0],
        ]))
    }

    /// Closed form for matrices with the pattern of `A`: the 2×2 flux block
    /// plus the stationary eigenvalue 0 with vector `(−a₂₃/a₂₁, 0, 1)`.
    fn decompose(&self, a: &Matrix<3>) -> Result<Eigen<3>> {
        if !self.structured(a) || a[(0, 1)] != 1.0 {
            return crate::linalg::eigen_general(a, super::IMAG_TOL);
        }
        let (a21, a22, a23) = (a[(1, 0)], a[(1, 1)], a[(1, 2)]);
        // λ² − a22 λ − a21 = 0
        let half = 0.5 * a22;
        let disc = half * half + a21;
        if disc < 0.0 {
            return Err(Error::HyperbolicityLoss {
                discriminant: 4.0 * disc,
                max_imag: sqrt(-disc),
            });
        }
        let root = sqrt(disc);
        let l1 = half - root;
        let l2 = half + root;
        let mut sorted = [l1, l2, 0.0];
        sorted.sort_by(f64::total_cmp);
        check_distinct(&sorted)?;
        Eigen::from_pairs([
            (l1, normalize(&State([1.0, l1, 0.0]))),
            (l2, normalize(&State([1.0, l2, 0.0]))),
            (0.0, normalize(&State([-a23 / a21, 0.0, 1.0]))),
        ])
    }

    fn admissible(&self, w: &State<3>) -> bool {
        w.is_finite() && w[0] > 0.0 && self.eigen(w).is_ok()
    }

    fn max_speed(&self, w: &State<3>) -> Result<f64> {
        if !(w[0] > 0.0) {
            return Err(Error::domain("shallow water requires h > 0"));
        }
        Ok(abs(w[1] / w[0]) + sqrt(self.g * w[0]))
    }

    fn conserved_rows(&self) -> &'static [usize] {
        &[0]
    }

    fn conserved_flux(&self, w: &State<3>) -> State<3> {
        State([w[1], 0.0, 0.0])
    }

    fn stationary_rows(&self) -> &'static [usize] {
        &[2]
    }

    fn balance_flux(&self, w: &State<3>) -> Option<State<3>> {
        Some(self.flux(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_are_u_pm_c_and_zero() {
        let sw = ShallowWater::default();
        let w = State([2.0, 1.0, 0.3]);
        let e = sw.eigen(&w).unwrap();
        let c = (sw.g * 2.0f64).sqrt();
        assert!((e.values[0] - (0.5 - c)).abs() < 1e-14);
        assert!(e.values[1].abs() < 1e-15);
        assert!((e.values[2] - (0.5 + c)).abs() < 1e-14);
        assert!(e.residual(&sw.matrix(&w).unwrap()) < 1e-13);
    }

    #[test]
    fn resonance_is_rejected() {
        let sw = ShallowWater::default();
        let h = 1.0;
        let w = State([h, (sw.g * h).sqrt(), 0.0]);
        assert!(matches!(
            sw.eigen(&w),
            Err(Error::NotStrictlyHyperbolic { .. })
        ));
        assert!(!sw.admissible(&w));
    }

    #[test]
    fn stationary_contact_over_unit_step() {
        let sw = ShallowWater::default();
        let wl = State([1.0, (4.0 * sw.g).sqrt(), 0.0]);
        let wr = sw.stationary_contact(&wl, 1.0).unwrap();
        assert!((wr[0] - 0.789_244_119_040_808_3).abs() < 1e-12);
        let h = wr[0];
        assert!((h * h * h - 4.0 * h * h + 2.0).abs() < 1e-13);
        assert!((sw.energy(&wr) - sw.energy(&wl)).abs() < 1e-13);
    }

    #[test]
    fn subcritical_branch() {
        let sw = ShallowWater::default();
        let wl = State([2.0, 1.0, 0.0]);
        let wr = sw.stationary_contact(&wl, 0.5).unwrap();
        assert!(wr[0] > sw.critical_depth(1.0));
        assert!((sw.energy(&wr) - sw.energy(&wl)).abs() < 1e-13);
    }

    #[test]
    fn energy_below_critical_has_no_solution() {
        let sw = ShallowWater::default();
        let wl = State([1.0, 1.0, 0.0]);
        assert!(matches!(
            sw.stationary_contact(&wl, -5.0),
            Err(Error::NoSolution { .. })
        ));
    }
}
