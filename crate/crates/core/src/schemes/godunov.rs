use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::State;
use crate::riemann::solve_riemann;
use crate::systems::{HyperbolicSystem, Simplified};

use super::{Boundaries, FluctuationScheme, Solution, TimeStepper};

/// Godunov's scheme for the simplified system: the fluctuations are the
/// left- and right-going parts of the exact Riemann fan at each interface.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Godunov;

impl FluctuationScheme<2> for Godunov {
    fn name(&self) -> &'static str {
        "godunov"
    }

    fn fluctuations(
        &self,
        ul: &State<2>,
        ur: &State<2>,
        _dx: f64,
        _dt: f64,
    ) -> Result<(State<2>, State<2>)> {
        if ul == ur {
            return Ok((State::zeros(), State::zeros()));
        }
        solve_riemann(ul, ur)?.fluctuations()
    }

    fn max_cfl(&self) -> f64 {
        0.5
    }

    fn max_speed(&self, u: &State<2>) -> Result<f64> {
        Simplified.max_speed(u)
    }

    fn admissible(&self, u: &State<2>) -> bool {
        Simplified.admissible(u)
    }
}

/// Base-2 van der Corput sequence `θ_n`, `n = offset, offset + 1, …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VanDerCorput {
    n: u64,
}

impl VanDerCorput {
    pub fn new(offset: u64) -> Self {
        VanDerCorput { n: offset }
    }

    /// Radical inverse of `n` in base 2.
    pub fn radical_inverse(n: u64) -> f64 {
        n.reverse_bits() as f64 / 18_446_744_073_709_551_616.0
    }

    pub fn next_value(&mut self) -> f64 {
        let v = Self::radical_inverse(self.n);
        self.n = self.n.wrapping_add(1);
        v
    }
}

/// Random choice method: each cell takes the exact Riemann solution sampled
/// at `x_{i−½} + θ_n Δx`, with one `θ_n` per step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Glimm {
    pub sampler: VanDerCorput,
}

impl Glimm {
    pub fn new(seed: u64) -> Self {
        Glimm {
            sampler: VanDerCorput::new(seed),
        }
    }
}

impl TimeStepper<2> for Glimm {
    fn name(&self) -> &'static str {
        "glimm"
    }

    fn max_cfl(&self) -> f64 {
        0.5
    }

    fn max_speed(&self, u: &State<2>) -> Result<f64> {
        Simplified.max_speed(u)
    }

    fn admissible(&self, u: &State<2>) -> bool {
        Simplified.admissible(u)
    }

    fn advance(&mut self, sol: &Solution<2>, dt: f64, bc: &Boundaries<2>) -> Result<Solution<2>> {
        if !(dt > 0.0) {
            return Err(Error::Cfl { dt, required: 0.0 });
        }
        let theta = self.sampler.next_value();
        let dx = sol.grid.dx();
        let (gl, gr) = bc.ghosts(&sol.cells);
        let m = sol.cells.len();
        let at = |j: isize| -> State<2> {
            if j < 0 {
                gl
            } else if j as usize >= m {
                gr
            } else {
                sol.cells[j as usize]
            }
        };
        let mut cells = Vec::with_capacity(m);
        for i in 0..m as isize {
            let (ul, ur, xi) = if theta <= 0.5 {
                (at(i - 1), at(i), theta * dx / dt)
            } else {
                (at(i), at(i + 1), (theta - 1.0) * dx / dt)
            };
            let next = if ul == ur {
                ul
            } else {
                solve_riemann(&ul, &ur)
                    .map_err(|e| e.at_cell(i as usize))?
                    .sample(xi)
            };
            cells.push(next);
        }
        Ok(Solution {
            grid: sol.grid,
            t: sol.t + dt,
            cells,
            step: sol.step + 1,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{cfl_dt, Grid};

    #[test]
    fn van_der_corput_prefix() {
        let mut s = VanDerCorput::new(0);
        let v: std::vec::Vec<f64> = (0..8).map(|_| s.next_value()).collect();
        assert_eq!(v, [0.0, 0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875]);
        let mut s = VanDerCorput::new(3);
        assert_eq!(s.next_value(), 0.75);
    }

    #[test]
    fn godunov_cfl_cap() {
        let grid = Grid::new(0.0, 1.0, 10).unwrap();
        let sol = Solution::from_fn(grid, |_| State([1.0, 1.0]));
        let dt = cfl_dt(&Godunov, &sol, 0.9).unwrap();
        assert!((dt - 0.5 * 0.1 / 2.0).abs() < 1e-16);
    }

    #[test]
    fn glimm_keeps_constant_data() {
        let grid = Grid::new(0.0, 1.0, 10).unwrap();
        let sol = Solution::from_fn(grid, |_| State([1.0, 1.0]));
        let mut g = Glimm::new(7);
        let next = g.advance(&sol, 0.01, &Boundaries::FREE).unwrap();
        assert_eq!(next.cells, sol.cells);
    }
}
