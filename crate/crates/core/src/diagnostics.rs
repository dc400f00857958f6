//! Numerical diagnostics: the path-dependent second-order term of the
//! equivalent equation, mass ledgers and well-balancing drift.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::State;
use crate::math::abs;
use crate::paths::PathFamily;
use crate::quadrature::integrate_unit;
use crate::schemes::{cfl_dt, Boundaries, Solution, TimeStepper};
use crate::systems::HyperbolicSystem;

/// Relative step of the endpoint and state finite differences. Combined with
/// one Richardson extrapolation the truncation error is `O(h⁴)`.
pub const DIFF_STEP: f64 = 1e-4;

/// Central difference of `f` at 0 in direction 1, Richardson-extrapolated
/// from steps `h` and `h/2`.
fn derivative<const N: usize>(
    h: f64,
    f: impl Fn(f64) -> Result<State<N>>,
) -> Result<State<N>> {
    let c = |d: f64| -> Result<State<N>> { Ok((f(d)? - f(-d)?) * (0.5 / d)) };
    let coarse = c(h)?;
    let fine = c(0.5 * h)?;
    Ok((fine * 4.0 - coarse) * (1.0 / 3.0))
}

/// `I₂(v) = ∫₀¹ DA(v)(D_lΦ·v_x, D_lΦ_s·v_x) ds + ∫₀¹ DA(v)(D_rΦ·v_x, D_rΦ_s·v_x) ds`,
/// the only second-order term of the equivalent equation that depends on
/// the family of paths. `D_l`, `D_r` differentiate with respect to the left and
/// right endpoints at `u_l = u_r = v`.
pub fn equivalent_eq_i2<const N: usize>(
    system: &impl HyperbolicSystem<N>,
    path: &impl PathFamily<N>,
    v: &State<N>,
    vx: &State<N>,
) -> Result<State<N>> {
    let norm = vx.norm_inf();
    if norm == 0.0 {
        return Ok(State::zeros());
    }
    let dir = *vx * (1.0 / norm);
    let h = DIFF_STEP * v.norm_inf().max(1.0);
    // DA(v)(a, ·) = |a| · (∂A/∂â)(v) ·, with â fixed up to sign for every s
    let da = |a: &State<N>, b: &State<N>| -> Result<State<N>> {
        let size = a.norm2();
        if size == 0.0 {
            return Ok(State::zeros());
        }
        let unit = *a * (1.0 / size);
        let col = derivative(h, |d| Ok(system.matrix(&(*v + unit * d))?.mul_vec(b)))?;
        Ok(col * size)
    };
    let integrand = |s: f64| -> Result<State<N>> {
        let left_point = derivative(h, |d| path.point(s, &(*v + dir * d), v))? * norm;
        let left_tangent = derivative(h, |d| path.tangent(s, &(*v + dir * d), v))? * norm;
        let right_point = derivative(h, |d| path.point(s, v, &(*v + dir * d)))? * norm;
        let right_tangent = derivative(h, |d| path.tangent(s, v, &(*v + dir * d)))? * norm;
        Ok(da(&left_point, &left_tangent)? + da(&right_point, &right_tangent)?)
    };
    integrate_unit(integrand, path.breakpoints())
}

/// `∫_{−A}^{A} u_c dx` over time, against `∫u_c(x,0) dx + t·rate`.
#[derive(Clone, Debug, PartialEq)]
pub struct MassLedger {
    pub component: usize,
    pub half_width: f64,
    pub rate: f64,
    pub initial: f64,
    pub times: Vec<f64>,
    pub numerical: Vec<f64>,
    pub exact: Vec<f64>,
    /// Time at which a wave reached `±A`; later records are dropped.
    pub truncated_at: Option<f64>,
    edge_values: (f64, f64),
    cells: (usize, usize),
}

impl MassLedger {
    /// `rate` is the net inflow `F(u(−A)) − F(u(A))` of the component.
    pub fn new<const N: usize>(
        init: &Solution<N>,
        component: usize,
        half_width: f64,
        rate: f64,
    ) -> Result<Self> {
        let g = &init.grid;
        if !(g.x_min < -half_width && half_width < g.x_max) {
            return Err(Error::Invalid(alloc::format!(
                "[−{half_width}, {half_width}] not inside the grid"
            )));
        }
        let inside: Vec<usize> = (0..g.cells)
            .filter(|&i| abs(g.center(i)) < half_width)
            .collect();
        let (lo, hi) = (inside[0], inside[inside.len() - 1]);
        let mut ledger = MassLedger {
            component,
            half_width,
            rate,
            initial: 0.0,
            times: Vec::new(),
            numerical: Vec::new(),
            exact: Vec::new(),
            truncated_at: None,
            edge_values: (init.cells[lo][component], init.cells[hi][component]),
            cells: (lo, hi),
        };
        ledger.initial = ledger.mass(init);
        ledger.record(init);
        Ok(ledger)
    }

    fn mass<const N: usize>(&self, sol: &Solution<N>) -> f64 {
        let (lo, hi) = self.cells;
        sol.cells[lo..=hi]
            .iter()
            .map(|u| u[self.component])
            .sum::<f64>()
            * sol.grid.dx()
    }

    pub fn record<const N: usize>(&mut self, sol: &Solution<N>) {
        if self.truncated_at.is_some() {
            return;
        }
        let (lo, hi) = self.cells;
        let c = self.component;
        let moved = |now: f64, then: f64| abs(now - then) > 1e-12 * then.abs().max(1.0);
        if moved(sol.cells[lo][c], self.edge_values.0) || moved(sol.cells[hi][c], self.edge_values.1)
        {
            log::warn!("mass ledger truncated at t = {}: wave reached ±A", sol.t);
            self.truncated_at = Some(sol.t);
            return;
        }
        self.times.push(sol.t);
        self.numerical.push(self.mass(sol));
        self.exact.push(self.initial + sol.t * self.rate);
    }

    pub fn max_deviation(&self) -> f64 {
        self.numerical
            .iter()
            .zip(&self.exact)
            .map(|(a, b)| abs(a - b))
            .fold(0.0, f64::max)
    }
}

/// Maximal run of cells whose neighbouring differences in one component stay
/// below a tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plateau {
    pub first: usize,
    pub last: usize,
    pub mean: f64,
}

/// Plateaus of at least `min_width` cells in component `c`, left to right.
pub fn plateaus<const N: usize>(
    sol: &Solution<N>,
    c: usize,
    tol: f64,
    min_width: usize,
) -> Vec<Plateau> {
    let cells = &sol.cells;
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=cells.len() {
        if i < cells.len() && abs(cells[i][c] - cells[i - 1][c]) <= tol {
            continue;
        }
        if i - start >= min_width.max(1) {
            let mean = cells[start..i].iter().map(|u| u[c]).sum::<f64>() / (i - start) as f64;
            out.push(Plateau {
                first: start,
                last: i - 1,
                mean,
            });
        }
        start = i;
    }
    out
}

/// `max_n max_i ‖u_i^n − u_i^0‖_∞` over `steps` CFL-limited steps.
pub fn well_balance_check<const N: usize, T: TimeStepper<N> + ?Sized>(
    stepper: &mut T,
    steady: &Solution<N>,
    bc: &Boundaries<N>,
    cfl: f64,
    steps: usize,
) -> Result<f64> {
    let mut sol = steady.clone();
    let mut drift = 0.0f64;
    for _ in 0..steps {
        let dt = cfl_dt(stepper, &sol, cfl)?;
        sol = stepper.advance(&sol, dt, bc)?;
        for (u, u0) in sol.cells.iter().zip(&steady.cells) {
            drift = drift.max((*u - *u0).norm_inf());
        }
    }
    Ok(drift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{Segments, TwoSegment};
    use crate::systems::Simplified;

    #[test]
    fn plateaus_of_a_staircase() {
        let grid = crate::schemes::Grid::new(0.0, 1.0, 30).unwrap();
        let sol = Solution::from_fn(grid, |x| {
            State([if x < 0.3 { 1.0 } else if x < 0.5 { 1.5 } else { 2.0 }, 0.0])
        });
        let p = plateaus(&sol, 0, 1e-12, 3);
        let means: std::vec::Vec<f64> = p.iter().map(|p| p.mean).collect();
        assert_eq!(means, [1.0, 1.5, 2.0]);
        assert_eq!((p[1].first, p[1].last), (9, 14));
        assert!(plateaus(&sol, 0, 1e-12, 7).len() == 2);
    }

    #[test]
    fn segments_give_zero() {
        let v = State([1.0, 1.0]);
        let i2 = equivalent_eq_i2(&Simplified, &Segments, &v, &State([0.3, -0.7])).unwrap();
        assert!(i2.norm_inf() < 1e-11, "{i2:?}");
    }

    #[test]
    fn two_segment_path_pure_gradients_cancel() {
        // each leg moves one component, so a gradient along a single
        // component sees the same contribution from both endpoints
        let v = State([1.0, 1.0]);
        for vx in [State([1.0, 0.0]), State([0.0, 1.0])] {
            let i2 = equivalent_eq_i2(&Simplified, &TwoSegment, &v, &vx).unwrap();
            assert!(i2.norm_inf() < 1e-8, "{i2:?}");
        }
    }

    #[test]
    fn two_segment_path_mixed_gradient() {
        // hand value: ∂_h A e₂ − ∂_q A e₁ = (0, −2q/h²) − (0, h − 2q/h²) = (0, −h)
        let i2 = equivalent_eq_i2(&Simplified, &TwoSegment, &State([1.0, 1.0]), &State([1.0, 1.0]))
            .unwrap();
        assert!((i2 - State([0.0, -1.0])).norm_inf() < 1e-8, "{i2:?}");
        let i2 = equivalent_eq_i2(&Simplified, &TwoSegment, &State([2.0, 0.5]), &State([0.3, -0.7]))
            .unwrap();
        assert!((i2 - State([0.0, 0.3 * 0.7 * 2.0])).norm_inf() < 1e-8, "{i2:?}");
    }
}
