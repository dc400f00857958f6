//! Composite 8-point Gauss–Legendre quadrature with dyadic refinement.

use crate::error::{Error, Result};
use crate::linalg::State;

/// Nodes on `[-1, 1]` (positive half) and their weights.
const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_361_77,
    0.313_706_645_877_887_05,
    0.222_381_034_453_374_34,
    0.101_228_536_290_376_69,
];

pub const ABS_TOL: f64 = 1e-12;
pub const REL_TOL: f64 = 1e-10;
/// Maximum refinement level (2^12 panels per interval).
pub const MAX_LEVEL: u32 = 12;

/// One 8-point rule on `[a, b]`.
pub fn gauss_legendre_8<const N: usize, E>(
    f: &mut impl FnMut(f64) -> core::result::Result<State<N>, E>,
    a: f64,
    b: f64,
) -> core::result::Result<State<N>, E> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = State::zeros();
    for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
        acc += (f(mid - half * x)? + f(mid + half * x)?) * *w;
    }
    Ok(acc * half)
}

fn composite<const N: usize>(
    f: &mut impl FnMut(f64) -> Result<State<N>>,
    a: f64,
    b: f64,
    panels: usize,
) -> Result<State<N>> {
    let h = (b - a) / panels as f64;
    let mut acc = State::zeros();
    for k in 0..panels {
        let lo = a + h * k as f64;
        let hi = if k + 1 == panels { b } else { lo + h };
        acc += gauss_legendre_8(f, lo, hi)?;
    }
    Ok(acc)
}

/// Integrates a vector-valued function over `[a, b]`, doubling the panel
/// count until successive estimates agree to `ABS_TOL` or `REL_TOL`.
pub fn integrate<const N: usize>(
    mut f: impl FnMut(f64) -> Result<State<N>>,
    a: f64,
    b: f64,
) -> Result<State<N>> {
    if a == b {
        return Ok(State::zeros());
    }
    let mut prev = composite(&mut f, a, b, 1)?;
    let mut achieved = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        let next = composite(&mut f, a, b, 1 << level)?;
        achieved = (next - prev).norm_inf();
        if achieved < ABS_TOL || achieved < REL_TOL * next.norm_inf() {
            return Ok(next);
        }
        if !achieved.is_finite() {
            break;
        }
        prev = next;
    }
    Err(Error::Quadrature { achieved })
}

/// Integrates over `[0, 1]` split at the given interior breakpoints.
pub fn integrate_unit<const N: usize>(
    mut f: impl FnMut(f64) -> Result<State<N>>,
    breakpoints: &[f64],
) -> Result<State<N>> {
    let mut acc = State::zeros();
    let mut lo = 0.0;
    for &bp in breakpoints.iter().chain(core::iter::once(&1.0)) {
        if bp > lo && bp <= 1.0 {
            acc += integrate(&mut f, lo, bp)?;
            lo = bp;
        }
    }
    Ok(acc)
}

/// Fixed high-resolution composite rule, used by reference computations.
pub fn integrate_fixed<const N: usize>(
    mut f: impl FnMut(f64) -> Result<State<N>>,
    a: f64,
    b: f64,
    panels: usize,
) -> Result<State<N>> {
    composite(&mut f, a, b, panels.max(1))
}
