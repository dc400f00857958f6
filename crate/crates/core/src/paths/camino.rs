use crate::error::Result;
use crate::linalg::{Matrix, State};
use crate::systems::Simplified;

use super::{check_roe, roe_averages, JumpModel, Model, PathFamily, PathProperties, Segments};

/// Two legs through the corner `w* = (h_r, q_l)`: first `h` moves at fixed
/// `q = q_l`, then `q` moves at fixed `h = h_r`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TwoSegment;

impl PathFamily<2> for TwoSegment {
    fn name(&self) -> &'static str {
        "two-segment"
    }

    fn point(&self, s: f64, wl: &State<2>, wr: &State<2>) -> Result<State<2>> {
        Ok(if s <= 0.5 {
            State([wl[0] + 2.0 * s * (wr[0] - wl[0]), wl[1]])
        } else {
            State([wr[0], wl[1] + (2.0 * s - 1.0) * (wr[1] - wl[1])])
        })
    }

    fn tangent(&self, s: f64, wl: &State<2>, wr: &State<2>) -> Result<State<2>> {
        Ok(if s < 0.5 {
            State([2.0 * (wr[0] - wl[0]), 0.0])
        } else {
            State([0.0, 2.0 * (wr[1] - wl[1])])
        })
    }

    fn breakpoints(&self) -> &[f64] {
        &[0.5]
    }

    fn properties(&self) -> PathProperties {
        PathProperties {
            r1: false,
            r4: false,
            epsilon: None,
        }
    }
}

impl JumpModel<2> for Model<Simplified, TwoSegment> {
    type System = Simplified;
    type Path = TwoSegment;

    fn system(&self) -> &Simplified {
        &self.system
    }
    fn path(&self) -> &TwoSegment {
        &self.path
    }

    /// `([q], [q²/h] + q_l [h²/2])`
    fn closed_form(&self, wl: &State<2>, wr: &State<2>) -> Option<Result<State<2>>> {
        let (hl, ql, hr, qr) = (wl[0], wl[1], wr[0], wr[1]);
        Some(Ok(State([
            qr - ql,
            qr * qr / hr - ql * ql / hl + ql * 0.5 * (hr * hr - hl * hl),
        ])))
    }

    fn roe_matrix(&self, wl: &State<2>, wr: &State<2>) -> Result<Matrix<2>> {
        let (u, h) = roe_averages(wl[0], wl[1], wr[0], wr[1])?;
        let a = Matrix::new([[0.0, 1.0], [-u * u + wl[1] * h, 2.0 * u]]);
        check_roe(self, a, wl, wr)
    }
}

impl JumpModel<2> for Model<Simplified, Segments> {
    type System = Simplified;
    type Path = Segments;

    fn system(&self) -> &Simplified {
        &self.system
    }
    fn path(&self) -> &Segments {
        &self.path
    }

    /// The coupling `∫ q h dh` along the segment is `Δh (q̄ h̄ + Δq Δh / 12)`.
    fn closed_form(&self, wl: &State<2>, wr: &State<2>) -> Option<Result<State<2>>> {
        let (hl, ql, hr, qr) = (wl[0], wl[1], wr[0], wr[1]);
        let (dh, dq) = (hr - hl, qr - ql);
        let coupling = dh * (0.25 * (ql + qr) * (hl + hr) + dq * dh / 12.0);
        Some(Ok(State([dq, qr * qr / hr - ql * ql / hl + coupling])))
    }

    fn roe_matrix(&self, wl: &State<2>, wr: &State<2>) -> Result<Matrix<2>> {
        let (u, h) = roe_averages(wl[0], wl[1], wr[0], wr[1])?;
        let (dh, dq) = (wr[0] - wl[0], wr[1] - wl[1]);
        let qh = 0.5 * (wl[1] + wr[1]) * h + dq * dh / 12.0;
        let a = Matrix::new([[0.0, 1.0], [-u * u + qh, 2.0 * u]]);
        check_roe(self, a, wl, wr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::quadrature_path_integral;
    use crate::systems::HyperbolicSystem;

    const WL: State<2> = State([1.0, 1.0]);
    const WR: State<2> = State([1.8, 0.530_039_370_688_997]);

    #[test]
    fn legs_midpoints() {
        let (a, b) = (State([1.0, 1.0]), State([2.0, 3.0]));
        assert_eq!(TwoSegment.point(0.25, &a, &b).unwrap(), State([1.5, 1.0]));
        assert_eq!(TwoSegment.point(0.75, &a, &b).unwrap(), State([2.0, 2.0]));
    }

    #[test]
    fn conservative_row_is_discharge_jump() {
        let m = Model::new(Simplified, TwoSegment);
        let pi = m.path_integral(&WL, &WR).unwrap();
        assert!((pi[0] + 0.469_960_629_311_003).abs() < 1e-15);
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let m = Model::new(Simplified, TwoSegment);
        let q = quadrature_path_integral(&Simplified, &TwoSegment, &WL, &WR).unwrap();
        let c = m.closed_form(&WL, &WR).unwrap().unwrap();
        assert!((q - c).norm_inf() < 1e-12);
        let m = Model::new(Simplified, Segments);
        let q = quadrature_path_integral(&Simplified, &Segments, &WL, &WR).unwrap();
        let c = m.closed_form(&WL, &WR).unwrap().unwrap();
        assert!((q - c).norm_inf() < 1e-12);
    }

    #[test]
    fn roe_matrix_example() {
        let m = Model::new(Simplified, TwoSegment);
        let a = m.roe_matrix(&State([1.0, 1.0]), &State([4.0, 8.0])).unwrap();
        assert!((a[(1, 0)] - (-25.0 / 9.0 + 2.5)).abs() < 1e-14);
        assert!((a[(1, 1)] - 10.0 / 3.0).abs() < 1e-14);
        let a = m.roe_matrix(&WL, &WR).unwrap();
        let pi = quadrature_path_integral(&Simplified, &TwoSegment, &WL, &WR).unwrap();
        assert!((a.mul_vec(&(WR - WL)) - pi).norm_inf() < 1e-12);
    }

    #[test]
    fn roe_matrix_at_coincident_states() {
        let w = State([0.7, 0.9]);
        for a in [
            Model::new(Simplified, TwoSegment).roe_matrix(&w, &w).unwrap(),
            Model::new(Simplified, Segments).roe_matrix(&w, &w).unwrap(),
        ] {
            assert!(a.sub(&Simplified.matrix(&w).unwrap()).max_abs() < 1e-15);
        }
    }
}
