use crate::error::{Error, Result};
use crate::linalg::{Matrix, State};
use crate::math::abs;
use crate::systems::ShallowWater;

use super::{check_roe, roe_averages, JumpModel, Model, PathFamily, PathProperties, Segments};

/// For shallow water over topography: an arc of the steady-state curve
/// `q = q_l`, `h + q²/(2gh²) − σ = E(W_l)` from `W_l` to the intermediate
/// state `W*` at `σ = σ_r` (first half), followed by the segment from `W*`
/// to `W_r` at constant `σ_r` (second half).
///
/// The arc stays on the flow regime (sub- or supercritical) of `W_l`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EquilibriumPath {
    pub system: ShallowWater,
}

impl EquilibriumPath {
    pub fn new(system: ShallowWater) -> Self {
        EquilibriumPath { system }
    }

    fn depth_at(&self, wl: &State<3>, sigma: f64) -> Result<f64> {
        if sigma == wl[2] {
            return Ok(wl[0]);
        }
        let sw = &self.system;
        let supercritical = sw.froude(wl) > 1.0;
        sw.equilibrium_depth(wl[1], sw.energy(wl), sigma, supercritical)
            .map_err(|e| Error::PathConstruction(alloc::format!("{e}")))
    }

    /// `W*`, the end of the steady arc.
    pub fn intermediate(&self, wl: &State<3>, wr: &State<3>) -> Result<State<3>> {
        if !(wl[0] > 0.0) {
            return Err(Error::domain("shallow water requires h > 0"));
        }
        Ok(State([self.depth_at(wl, wr[2])?, wl[1], wr[2]]))
    }
}

impl PathFamily<3> for EquilibriumPath {
    fn name(&self) -> &'static str {
        "equilibrium"
    }

    fn point(&self, s: f64, wl: &State<3>, wr: &State<3>) -> Result<State<3>> {
        if s == 0.0 {
            return Ok(*wl);
        }
        if s <= 0.5 {
            let sigma = wl[2] + 2.0 * s * (wr[2] - wl[2]);
            Ok(State([self.depth_at(wl, sigma)?, wl[1], sigma]))
        } else {
            let mid = self.intermediate(wl, wr)?;
            Ok(State::lerp(&mid, wr, 2.0 * s - 1.0))
        }
    }

    fn tangent(&self, s: f64, wl: &State<3>, wr: &State<3>) -> Result<State<3>> {
        if s < 0.5 {
            let p = self.point(s, wl, wr)?;
            let dsigma = 2.0 * (wr[2] - wl[2]);
            if dsigma == 0.0 {
                return Ok(State::zeros());
            }
            // differentiate h + q²/(2gh²) − σ = E along σ
            let h = p[0];
            let dh = 1.0 / (1.0 - p[1] * p[1] / (self.system.g * h * h * h));
            Ok(State([dh * dsigma, 0.0, dsigma]))
        } else {
            let mid = self.intermediate(wl, wr)?;
            Ok((*wr - mid) * 2.0)
        }
    }

    fn breakpoints(&self) -> &[f64] {
        &[0.5]
    }

    fn properties(&self) -> PathProperties {
        PathProperties {
            r1: true,
            r4: true,
            epsilon: None,
        }
    }
}

impl JumpModel<3> for Model<ShallowWater, Segments> {
    type System = ShallowWater;
    type Path = Segments;

    fn system(&self) -> &ShallowWater {
        &self.system
    }
    fn path(&self) -> &Segments {
        &self.path
    }

    /// `F(W_r) − F(W_l) − g h̄ Δσ` in the momentum row.
    fn closed_form(&self, wl: &State<3>, wr: &State<3>) -> Option<Result<State<3>>> {
        if !(wl[0] > 0.0 && wr[0] > 0.0) {
            return Some(Err(Error::domain("shallow water requires h > 0")));
        }
        let sw = &self.system;
        let mut v = sw.flux(wr) - sw.flux(wl);
        v[1] -= sw.g * 0.5 * (wl[0] + wr[0]) * (wr[2] - wl[2]);
        Some(Ok(v))
    }

    fn roe_matrix(&self, wl: &State<3>, wr: &State<3>) -> Result<Matrix<3>> {
        let (u, h) = roe_averages(wl[0], wl[1], wr[0], wr[1])?;
        let gh = self.system.g * h;
        let a = Matrix::new([
            [0.0, 1.0, 0.0],
            [gh - u * u, 2.0 * u, -gh],
            [0.0, 0.0, 0.0],
        ]);
        check_roe(self, a, wl, wr)
    }
}

impl JumpModel<3> for Model<ShallowWater, EquilibriumPath> {
    type System = ShallowWater;
    type Path = EquilibriumPath;

    fn system(&self) -> &ShallowWater {
        &self.system
    }
    fn path(&self) -> &EquilibriumPath {
        &self.path
    }

    /// The steady arc contributes nothing, so the integral is the flux jump
    /// `F(W_r) − F(W*)` across the constant-σ segment.
    fn closed_form(&self, wl: &State<3>, wr: &State<3>) -> Option<Result<State<3>>> {
        Some(self.path.intermediate(wl, wr).and_then(|mid| {
            if !(wr[0] > 0.0) {
                return Err(Error::domain("shallow water requires h > 0"));
            }
            let sw = &self.system;
            Ok(sw.flux(wr) - sw.flux(&mid))
        }))
    }

    /// Roe averages in the flux block; the source entry is the mean slope
    /// of the momentum flux along the steady arc.
    fn roe_matrix(&self, wl: &State<3>, wr: &State<3>) -> Result<Matrix<3>> {
        let (u, h) = roe_averages(wl[0], wl[1], wr[0], wr[1])?;
        let g = self.system.g;
        let dsigma = wr[2] - wl[2];
        let source = if abs(dsigma) > 1e-12 * (1.0 + abs(wl[2])) {
            let mid = self.path.intermediate(wl, wr)?;
            (self.system.flux(&mid)[1] - self.system.flux(wl)[1]) / dsigma
        } else {
            g * h
        };
        let a = Matrix::new([
            [0.0, 1.0, 0.0],
            [g * h - u * u, 2.0 * u, -source],
            [0.0, 0.0, 0.0],
        ]);
        check_roe(self, a, wl, wr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::quadrature_path_integral;
    use crate::systems::HyperbolicSystem;

    fn contact() -> (ShallowWater, State<3>, State<3>) {
        let sw = ShallowWater::default();
        let wl = State([1.0, (4.0 * sw.g).sqrt(), 0.0]);
        let wr = sw.stationary_contact(&wl, 1.0).unwrap();
        (sw, wl, wr)
    }

    #[test]
    fn intermediate_solves_the_cubic() {
        let (sw, wl, wr) = contact();
        let p = EquilibriumPath::new(sw);
        let mid = p.intermediate(&wl, &wr).unwrap();
        assert!((mid[0] - 0.789_244_119_040_808_3).abs() < 1e-12);
    }

    #[test]
    fn zero_discharge_intermediate() {
        let p = EquilibriumPath::new(ShallowWater::default());
        let wl = State([1.5, 0.0, 0.2]);
        let wr = State([1.0, 0.0, 0.7]);
        let mid = p.intermediate(&wl, &wr).unwrap();
        assert!((mid[0] - (1.5 + 0.5)).abs() < 1e-14);
    }

    #[test]
    fn steady_contact_has_zero_jump_integral() {
        let (sw, wl, wr) = contact();
        let m = Model::new(sw, EquilibriumPath::new(sw));
        assert!(m.path_integral(&wl, &wr).unwrap().norm_inf() < 1e-12);
        // the segments family sees a nonzero defect
        let m = Model::new(sw, Segments);
        assert!(m.path_integral(&wl, &wr).unwrap().norm_inf() > 1e-2);
    }

    #[test]
    fn quadrature_agrees_with_closed_forms() {
        let sw = ShallowWater::default();
        let wl = State([2.0, 1.0, 0.0]);
        let wr = State([1.6, 1.4, 0.3]);
        let m = Model::new(sw, EquilibriumPath::new(sw));
        let q = quadrature_path_integral(&sw, &m.path, &wl, &wr).unwrap();
        let c = m.closed_form(&wl, &wr).unwrap().unwrap();
        assert!((q - c).norm_inf() < 1e-10, "{q:?} {c:?}");
        let m = Model::new(sw, Segments);
        let q = quadrature_path_integral(&sw, &Segments, &wl, &wr).unwrap();
        let c = m.closed_form(&wl, &wr).unwrap().unwrap();
        assert!((q - c).norm_inf() < 1e-12);
    }

    #[test]
    fn roe_matrices_satisfy_jump_identity() {
        let sw = ShallowWater::default();
        let wl = State([2.0, 1.0, 0.0]);
        let wr = State([1.6, 1.4, 0.3]);
        Model::new(sw, Segments).roe_matrix(&wl, &wr).unwrap();
        Model::new(sw, EquilibriumPath::new(sw))
            .roe_matrix(&wl, &wr)
            .unwrap();
        let a = Model::new(sw, EquilibriumPath::new(sw))
            .roe_matrix(&wl, &wl)
            .unwrap();
        assert!(a.sub(&sw.matrix(&wl).unwrap()).max_abs() < 1e-14);
    }

    #[test]
    fn unreachable_sigma_is_path_error() {
        let sw = ShallowWater::default();
        let p = EquilibriumPath::new(sw);
        let wl = State([1.0, 1.0, 0.0]);
        let wr = State([1.0, 1.0, -5.0]);
        assert!(matches!(
            p.intermediate(&wl, &wr),
            Err(Error::PathConstruction(_))
        ));
    }
}
