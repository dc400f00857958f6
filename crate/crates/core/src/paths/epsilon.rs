use crate::error::{Error, Result};
use crate::linalg::{Matrix, State};
use crate::systems::TwoLayer;

use super::{check_roe, roe_averages, JumpModel, Model, PathFamily, PathProperties, Segments};

/// Perturbation of the segments for the two-layer system: `h₁` and both
/// discharges move linearly while
///
/// ```text
/// h₂ = h₂ˡ + (s + ε X(s)) Δh₂ / (1 + ε),   X(s) = s (2h₁ˡ + s Δh₁) / (h₁ˡ + h₁ʳ)
/// ```
///
/// `X` is the quadratic `(h₁² − (h₁ˡ)²)/((h₁ʳ)² − (h₁ˡ)²)` written so that it
/// stays defined when `h₁ˡ = h₁ʳ`. `ε = 0` gives the segments.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EpsilonPath {
    pub eps: f64,
}

impl EpsilonPath {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::Invalid(alloc::format!(
                "epsilon must be finite and non-negative, got {eps}"
            )));
        }
        Ok(EpsilonPath { eps })
    }

    /// `∫₀¹ Φ_{h₁} ∂_sΦ_{h₂} ds / Δh₂`
    pub fn upper_coupling(&self, h1l: f64, h1r: f64) -> f64 {
        let e = self.eps;
        ((3.0 + 4.0 * e) * h1l * h1l + (6.0 + 4.0 * e) * h1l * h1r + (3.0 + 4.0 * e) * h1r * h1r)
            / (6.0 * (1.0 + e) * (h1l + h1r))
    }

    /// `∫₀¹ Φ_{h₂} ∂_sΦ_{h₁} ds / Δh₁`
    pub fn lower_coupling(&self, h1l: f64, h1r: f64, h2l: f64, h2r: f64) -> f64 {
        let e = self.eps;
        h2l + (h2r - h2l) / (1.0 + e)
            * (0.5 + e * (h1r + 2.0 * h1l) / (3.0 * (h1r + h1l)))
    }
}

impl PathFamily<4> for EpsilonPath {
    fn name(&self) -> &'static str {
        "epsilon"
    }

    fn point(&self, s: f64, wl: &State<4>, wr: &State<4>) -> Result<State<4>> {
        let mut p = State::lerp(wl, wr, s);
        let (h1l, h1r) = (wl[0], wr[0]);
        let x = s * (2.0 * h1l + s * (h1r - h1l)) / (h1l + h1r);
        p[2] = if s == 1.0 {
            wr[2]
        } else {
            wl[2] + (s + self.eps * x) / (1.0 + self.eps) * (wr[2] - wl[2])
        };
        Ok(p)
    }

    fn tangent(&self, s: f64, wl: &State<4>, wr: &State<4>) -> Result<State<4>> {
        let mut t = *wr - *wl;
        let (h1l, h1r) = (wl[0], wr[0]);
        let dx = 2.0 * (h1l + s * (h1r - h1l)) / (h1l + h1r);
        t[2] = (1.0 + self.eps * dx) / (1.0 + self.eps) * (wr[2] - wl[2]);
        Ok(t)
    }

    fn properties(&self) -> PathProperties {
        PathProperties {
            r1: false,
            r4: false,
            epsilon: Some(self.eps),
        }
    }
}

fn layer_fluxes(sys: &TwoLayer, w: &State<4>) -> (f64, f64) {
    (
        w[1] * w[1] / w[0] + 0.5 * sys.g * w[0] * w[0],
        w[3] * w[3] / w[2] + 0.5 * sys.g * w[2] * w[2],
    )
}

/// Closed-form path integral given the two coupling averages.
fn two_layer_integral(
    sys: &TwoLayer,
    wl: &State<4>,
    wr: &State<4>,
    upper: f64,
    lower: f64,
) -> Result<State<4>> {
    if !(wl[0] > 0.0 && wl[2] > 0.0 && wr[0] > 0.0 && wr[2] > 0.0) {
        return Err(Error::domain("two-layer system requires positive thicknesses"));
    }
    let (f1l, f2l) = layer_fluxes(sys, wl);
    let (f1r, f2r) = layer_fluxes(sys, wr);
    Ok(State([
        wr[1] - wl[1],
        f1r - f1l + sys.g * upper * (wr[2] - wl[2]),
        wr[3] - wl[3],
        f2r - f2l + sys.r * sys.g * lower * (wr[0] - wl[0]),
    ]))
}

fn two_layer_roe(
    sys: &TwoLayer,
    wl: &State<4>,
    wr: &State<4>,
    upper: f64,
    lower: f64,
) -> Result<Matrix<4>> {
    let (u1, h1) = roe_averages(wl[0], wl[1], wr[0], wr[1])?;
    let (u2, h2) = roe_averages(wl[2], wl[3], wr[2], wr[3])?;
    let g = sys.g;
    Ok(Matrix::new([
        [0.0, 1.0, 0.0, 0.0],
        [g * h1 - u1 * u1, 2.0 * u1, g * upper, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [sys.r * g * lower, 0.0, g * h2 - u2 * u2, 2.0 * u2],
    ]))
}

impl JumpModel<4> for Model<TwoLayer, Segments> {
    type System = TwoLayer;
    type Path = Segments;

    fn system(&self) -> &TwoLayer {
        &self.system
    }
    fn path(&self) -> &Segments {
        &self.path
    }

    fn closed_form(&self, wl: &State<4>, wr: &State<4>) -> Option<Result<State<4>>> {
        let upper = 0.5 * (wl[0] + wr[0]);
        let lower = 0.5 * (wl[2] + wr[2]);
        Some(two_layer_integral(&self.system, wl, wr, upper, lower))
    }

    fn roe_matrix(&self, wl: &State<4>, wr: &State<4>) -> Result<Matrix<4>> {
        let upper = 0.5 * (wl[0] + wr[0]);
        let lower = 0.5 * (wl[2] + wr[2]);
        let a = two_layer_roe(&self.system, wl, wr, upper, lower)?;
        check_roe(self, a, wl, wr)
    }
}

impl JumpModel<4> for Model<TwoLayer, EpsilonPath> {
    type System = TwoLayer;
    type Path = EpsilonPath;

    fn system(&self) -> &TwoLayer {
        &self.system
    }
    fn path(&self) -> &EpsilonPath {
        &self.path
    }

    fn closed_form(&self, wl: &State<4>, wr: &State<4>) -> Option<Result<State<4>>> {
        let upper = self.path.upper_coupling(wl[0], wr[0]);
        let lower = self.path.lower_coupling(wl[0], wr[0], wl[2], wr[2]);
        Some(two_layer_integral(&self.system, wl, wr, upper, lower))
    }

    fn roe_matrix(&self, wl: &State<4>, wr: &State<4>) -> Result<Matrix<4>> {
        let upper = self.path.upper_coupling(wl[0], wr[0]);
        let lower = self.path.lower_coupling(wl[0], wr[0], wl[2], wr[2]);
        let a = two_layer_roe(&self.system, wl, wr, upper, lower)?;
        check_roe(self, a, wl, wr)
    }
}
