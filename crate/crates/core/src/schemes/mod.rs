//! Finite-volume schemes in fluctuation form
//!
//! ```text
//! u_i^{n+1} = u_i^n − Δt/Δx (M⁺_{i−½} + M⁻_{i+½})
//! ```

mod godunov;
mod lax_friedrichs;
mod roe;

pub use godunov::{Glimm, Godunov, VanDerCorput};
pub use lax_friedrichs::{LaxFriedrichs, ModifiedLaxFriedrichs, ZERO_EIGENVALUE_TOL};
pub use roe::{split, Roe};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::State;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub cells: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, cells: usize) -> Result<Self> {
        if cells < 3 {
            return Err(Error::Invalid(alloc::format!(
                "grid needs at least 3 cells, got {cells}"
            )));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::Invalid(alloc::format!(
                "empty or non-finite interval [{x_min}, {x_max}]"
            )));
        }
        Ok(Grid {
            x_min,
            x_max,
            cells,
        })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    /// Position of interface `i − ½` (left edge of cell `i`).
    pub fn edge(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.cells).map(move |i| self.center(i))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution<const N: usize> {
    pub grid: Grid,
    pub t: f64,
    pub cells: Vec<State<N>>,
    pub step: usize,
}

impl<const N: usize> Solution<N> {
    /// Cell values sampled from `f` at the cell centers.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> State<N>) -> Self {
        Solution {
            grid,
            t: 0.0,
            cells: grid.centers().map(f).collect(),
            step: 0,
        }
    }

    /// Riemann data with the jump at `x0`; a cell whose center is exactly at
    /// `x0` takes the right state.
    pub fn riemann(grid: Grid, x0: f64, ul: State<N>, ur: State<N>) -> Self {
        Self::from_fn(grid, |x| if x < x0 { ul } else { ur })
    }

    /// `Σ u_i Δx` for one component.
    pub fn integral(&self, component: usize) -> f64 {
        self.cells.iter().map(|u| u[component]).sum::<f64>() * self.grid.dx()
    }

    /// First cell (if any) failing `pred`, with the number of failures.
    pub fn find_violations(&self, pred: impl Fn(&State<N>) -> bool) -> Option<(usize, usize)> {
        let mut first = None;
        let mut count = 0;
        for (i, u) in self.cells.iter().enumerate() {
            if !pred(u) {
                first.get_or_insert(i);
                count += 1;
            }
        }
        first.map(|i| (i, count))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boundary<const N: usize> {
    /// Zero-order extrapolation from the nearest interior cell.
    Free,
    /// Fixed ghost state.
    Dirichlet(State<N>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Boundaries<const N: usize> {
    pub left: Boundary<N>,
    pub right: Boundary<N>,
}

impl<const N: usize> Boundaries<N> {
    pub const FREE: Self = Boundaries {
        left: Boundary::Free,
        right: Boundary::Free,
    };

    pub fn ghosts(&self, cells: &[State<N>]) -> (State<N>, State<N>) {
        let l = match self.left {
            Boundary::Free => cells[0],
            Boundary::Dirichlet(u) => u,
        };
        let r = match self.right {
            Boundary::Free => cells[cells.len() - 1],
            Boundary::Dirichlet(u) => u,
        };
        (l, r)
    }
}

impl<const N: usize> Default for Boundaries<N> {
    fn default() -> Self {
        Self::FREE
    }
}

/// Two-point fluctuation scheme.
pub trait FluctuationScheme<const N: usize> {
    fn name(&self) -> &'static str;

    /// `(M⁻, M⁺)` at an interface with states `u_l`, `u_r`.
    fn fluctuations(
        &self,
        ul: &State<N>,
        ur: &State<N>,
        dx: f64,
        dt: f64,
    ) -> Result<(State<N>, State<N>)>;

    /// Largest admissible CFL number.
    fn max_cfl(&self) -> f64 {
        1.0
    }

    fn max_speed(&self, u: &State<N>) -> Result<f64>;

    fn admissible(&self, u: &State<N>) -> bool;
}

/// Anything that advances a solution by one time step.
pub trait TimeStepper<const N: usize> {
    fn name(&self) -> &'static str;
    fn max_cfl(&self) -> f64;
    fn max_speed(&self, u: &State<N>) -> Result<f64>;
    fn admissible(&self, u: &State<N>) -> bool;
    fn advance(&mut self, sol: &Solution<N>, dt: f64, bc: &Boundaries<N>) -> Result<Solution<N>>;
}

impl<const N: usize, S: FluctuationScheme<N>> TimeStepper<N> for S {
    fn name(&self) -> &'static str {
        FluctuationScheme::name(self)
    }
    fn max_cfl(&self) -> f64 {
        FluctuationScheme::max_cfl(self)
    }
    fn max_speed(&self, u: &State<N>) -> Result<f64> {
        FluctuationScheme::max_speed(self, u)
    }
    fn admissible(&self, u: &State<N>) -> bool {
        FluctuationScheme::admissible(self, u)
    }
    fn advance(&mut self, sol: &Solution<N>, dt: f64, bc: &Boundaries<N>) -> Result<Solution<N>> {
        update(self, sol, dt, bc)
    }
}

/// All interface fluctuations of `sol`, including the two boundary
/// interfaces (`M + 1` pairs, interface `j` sitting left of cell `j`).
pub fn interface_fluctuations<const N: usize, S: FluctuationScheme<N> + ?Sized>(
    scheme: &S,
    sol: &Solution<N>,
    dt: f64,
    bc: &Boundaries<N>,
) -> Result<Vec<(State<N>, State<N>)>> {
    let dx = sol.grid.dx();
    let (gl, gr) = bc.ghosts(&sol.cells);
    let m = sol.cells.len();
    let at = |j: usize| if j == 0 { gl } else if j == m + 1 { gr } else { sol.cells[j - 1] };
    (0..=m)
        .map(|j| {
            scheme
                .fluctuations(&at(j), &at(j + 1), dx, dt)
                .map_err(|e| e.at_cell(j))
        })
        .collect()
}

fn update<const N: usize, S: FluctuationScheme<N> + ?Sized>(
    scheme: &S,
    sol: &Solution<N>,
    dt: f64,
    bc: &Boundaries<N>,
) -> Result<Solution<N>> {
    let fl = interface_fluctuations(scheme, sol, dt, bc)?;
    let r = dt / sol.grid.dx();
    let mut cells = Vec::with_capacity(sol.cells.len());
    for (i, u) in sol.cells.iter().enumerate() {
        let next = *u - (fl[i].1 + fl[i + 1].0) * r;
        if !next.is_finite() {
            return Err(Error::BlowUp { cell: i });
        }
        cells.push(next);
    }
    Ok(Solution {
        grid: sol.grid,
        t: sol.t + dt,
        cells,
        step: sol.step + 1,
    })
}

/// `Δt = cfl · Δx / max_i max_k |λ_k(u_i)|`, with the CFL number capped by
/// the scheme's own limit.
pub fn cfl_dt<const N: usize, T: TimeStepper<N> + ?Sized>(
    stepper: &T,
    sol: &Solution<N>,
    cfl: f64,
) -> Result<f64> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::Invalid(alloc::format!("CFL number {cfl} not in (0, 1]")));
    }
    let mut speed = 0.0f64;
    for (i, u) in sol.cells.iter().enumerate() {
        speed = speed.max(stepper.max_speed(u).map_err(|e| e.at_cell(i))?);
    }
    let cfl = cfl.min(stepper.max_cfl());
    if speed == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(cfl * sol.grid.dx() / speed)
}

/// One checked step: refuses `dt` above the CFL bound.
pub fn step<const N: usize, T: TimeStepper<N> + ?Sized>(
    stepper: &mut T,
    sol: &Solution<N>,
    dt: f64,
    bc: &Boundaries<N>,
) -> Result<Solution<N>> {
    let required = cfl_dt(stepper, sol, 1.0)?;
    if !(dt > 0.0) || dt > required * (1.0 + 1e-12) {
        return Err(Error::Cfl { dt, required });
    }
    stepper.advance(sol, dt, bc)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub t_end: f64,
    pub cfl: f64,
    /// Times at which copies of the solution are kept (sorted, ≤ `t_end`).
    pub snapshot_times: Vec<f64>,
    pub max_steps: usize,
}

impl RunOptions {
    pub fn new(t_end: f64, cfl: f64) -> Self {
        RunOptions {
            t_end,
            cfl,
            snapshot_times: Vec::new(),
            max_steps: usize::MAX,
        }
    }

    pub fn with_snapshots(mut self, times: &[f64]) -> Self {
        self.snapshot_times = times.to_vec();
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput<const N: usize> {
    pub solution: Solution<N>,
    pub snapshots: Vec<Solution<N>>,
}

/// A failed run keeps the last valid state.
#[derive(Clone, Debug, PartialEq)]
pub struct RunFailure<const N: usize> {
    pub error: Error,
    pub last: Solution<N>,
    pub snapshots: Vec<Solution<N>>,
}

impl<const N: usize> From<RunFailure<N>> for Error {
    fn from(f: RunFailure<N>) -> Self {
        f.error
    }
}

fn warn_inadmissible<const N: usize, T: TimeStepper<N> + ?Sized>(stepper: &T, sol: &Solution<N>) {
    if let Some((cell, count)) = sol.find_violations(|u| stepper.admissible(u)) {
        log::warn!(
            "{}: {count} cells outside the admissible region at t = {} (first: cell {cell})",
            stepper.name(),
            sol.t
        );
    }
}

/// Advances to `t_end`, recomputing Δt every step and landing exactly on the
/// requested snapshot times. `observe` sees every accepted time level,
/// including the initial one.
pub fn run<const N: usize, T: TimeStepper<N> + ?Sized>(
    stepper: &mut T,
    init: Solution<N>,
    bc: &Boundaries<N>,
    opts: &RunOptions,
    mut observe: impl FnMut(&Solution<N>),
) -> core::result::Result<RunOutput<N>, RunFailure<N>> {
    let mut sol = init;
    let mut snapshots = Vec::new();
    let mut pending = opts.snapshot_times.iter().copied().peekable();
    observe(&sol);
    while pending.peek().is_some_and(|&t| t <= sol.t) {
        snapshots.push(sol.clone());
        pending.next();
    }
    warn_inadmissible(stepper, &sol);
    let fail = |error, last: Solution<N>, snapshots| RunFailure {
        error,
        last,
        snapshots,
    };
    while sol.t < opts.t_end {
        if sol.step >= opts.max_steps {
            let error = Error::StepLimit {
                steps: opts.max_steps,
            };
            return Err(fail(error, sol, snapshots));
        }
        let mut dt = match cfl_dt(stepper, &sol, opts.cfl) {
            Ok(dt) => dt,
            Err(e) => return Err(fail(e, sol, snapshots)),
        };
        let target = pending.peek().copied().unwrap_or(opts.t_end).min(opts.t_end);
        if sol.t + dt >= target {
            dt = target - sol.t;
        }
        let mut next = match stepper.advance(&sol, dt, bc) {
            Ok(n) => n,
            Err(e) => return Err(fail(e, sol, snapshots)),
        };
        if next.t >= target {
            next.t = target;
        }
        sol = next;
        observe(&sol);
        while pending.peek().is_some_and(|&t| t <= sol.t) {
            warn_inadmissible(stepper, &sol);
            snapshots.push(sol.clone());
            pending.next();
        }
    }
    warn_inadmissible(stepper, &sol);
    Ok(RunOutput {
        solution: sol,
        snapshots,
    })
}
