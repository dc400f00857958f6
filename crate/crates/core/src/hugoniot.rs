//! Rankine–Hugoniot curves `ξ (u_r − u_l) = ∫₀¹ A(Φ)Φ_s ds`: exact tracing by
//! continuation in the shock speed, extraction of numerical shocks from
//! computed profiles, and distances between curves.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, State};
use crate::math::{abs, sqrt};
use crate::paths::JumpModel;
use crate::schemes::Solution;
use crate::systems::{HyperbolicSystem, ShallowWater};

/// Newton stops once `‖R‖_∞ ≤ NEWTON_TOL · max(1, ‖PI‖_∞)`.
pub const NEWTON_TOL: f64 = 1e-12;
pub const MAX_NEWTON: usize = 50;
pub const MAX_HALVINGS: u32 = 8;
/// Relative finite-difference step of the Jacobian of the path integral.
pub const FD_STEP: f64 = 1e-7;

/// Which end of the shock is held fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn pair<const N: usize>(self, fixed: &State<N>, free: &State<N>) -> (State<N>, State<N>) {
        match self {
            Side::Left => (*fixed, *free),
            Side::Right => (*free, *fixed),
        }
    }

    fn sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HugoniotSample<const N: usize> {
    pub xi: f64,
    pub state: State<N>,
    pub residual: f64,
}

/// Why a trace ended before `ξ_end`.
#[derive(Clone, Debug, PartialEq)]
pub enum CurveStop {
    NewtonFailure { xi: f64 },
    Fold { xi: f64 },
    Evaluation { xi: f64, error: Error },
}

#[derive(Clone, Debug, PartialEq)]
pub struct HugoniotCurve<const N: usize> {
    pub fixed: State<N>,
    pub side: Side,
    pub samples: Vec<HugoniotSample<N>>,
    pub stop: Option<CurveStop>,
}

impl<const N: usize> HugoniotCurve<N> {
    /// Curve built from externally computed samples (e.g. numerical shocks).
    pub fn from_samples(fixed: State<N>, side: Side, samples: Vec<HugoniotSample<N>>) -> Self {
        HugoniotCurve {
            fixed,
            side,
            samples,
            stop: None,
        }
    }

    pub fn xi_range(&self) -> Option<(f64, f64)> {
        let lo = self.samples.iter().map(|s| s.xi).fold(f64::INFINITY, f64::min);
        let hi = self.samples.iter().map(|s| s.xi).fold(f64::NEG_INFINITY, f64::max);
        (lo <= hi).then_some((lo, hi))
    }

    /// Free state at speed `xi` by linear interpolation between samples.
    pub fn interpolate(&self, xi: f64) -> Option<State<N>> {
        let mut pts: Vec<&HugoniotSample<N>> = self.samples.iter().collect();
        pts.sort_by(|a, b| a.xi.total_cmp(&b.xi));
        let k = pts.windows(2).position(|w| w[0].xi <= xi && xi <= w[1].xi)?;
        let (a, b) = (pts[k], pts[k + 1]);
        let t = if b.xi > a.xi { (xi - a.xi) / (b.xi - a.xi) } else { 0.0 };
        Some(State::lerp(&a.state, &b.state, t))
    }
}

/// Starting point of a trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Seed<const N: usize> {
    /// Zero-strength shock at `ξ = λ_k(fixed)` (0-based `k`).
    Bifurcation { family: usize },
    /// A point already on the curve.
    Known { xi: f64, state: State<N> },
}

/// `R(w, ξ) = ξ (u_r − u_l) − ∫A(Φ)Φ_s` with `w` the free state.
pub fn rh_function<const N: usize, M: JumpModel<N> + ?Sized>(
    model: &M,
    fixed: &State<N>,
    side: Side,
    free: &State<N>,
    xi: f64,
) -> Result<State<N>> {
    let (ul, ur) = side.pair(fixed, free);
    Ok((ur - ul) * xi - model.path_integral(&ul, &ur)?)
}

/// `∂R/∂w` with the path integral differentiated by central differences.
fn rh_jacobian<const N: usize, M: JumpModel<N> + ?Sized>(
    model: &M,
    fixed: &State<N>,
    side: Side,
    free: &State<N>,
    xi: f64,
) -> Result<Matrix<N>> {
    let mut cols = [State::zeros(); N];
    for (j, col) in cols.iter_mut().enumerate() {
        let d = FD_STEP * abs(free[j]).max(1.0);
        let mut plus = *free;
        let mut minus = *free;
        plus[j] += d;
        minus[j] -= d;
        let (l1, r1) = side.pair(fixed, &plus);
        let (l0, r0) = side.pair(fixed, &minus);
        let dpi = (model.path_integral(&l1, &r1)? - model.path_integral(&l0, &r0)?) * (0.5 / d);
        let mut c = -dpi;
        c[j] += side.sign() * xi;
        *col = c;
    }
    Ok(Matrix::from_columns(&cols))
}

enum NewtonOutcome<const N: usize> {
    Converged(State<N>),
    Singular,
    Diverged,
}

fn newton_at<const N: usize, M: JumpModel<N> + ?Sized>(
    model: &M,
    fixed: &State<N>,
    side: Side,
    guess: State<N>,
    xi: f64,
) -> Result<NewtonOutcome<N>> {
    let mut w = guess;
    for _ in 0..MAX_NEWTON {
        let r = match rh_function(model, fixed, side, &w, xi) {
            Ok(r) => r,
            Err(_) => return Ok(NewtonOutcome::Diverged),
        };
        let scale = 1f64.max(w.norm_inf()).max(fixed.norm_inf());
        let res = r.norm_inf();
        if res <= NEWTON_TOL * scale {
            return Ok(NewtonOutcome::Converged(w));
        }
        let j = match rh_jacobian(model, fixed, side, &w, xi) {
            Ok(j) => j,
            Err(_) => return Ok(NewtonOutcome::Diverged),
        };
        let Some(dw) = j.solve(&r) else {
            return Ok(NewtonOutcome::Singular);
        };
        if !dw.is_finite() {
            return Ok(NewtonOutcome::Singular);
        }
        w -= dw;
        if !w.is_finite() {
            return Ok(NewtonOutcome::Diverged);
        }
    }
    Ok(NewtonOutcome::Diverged)
}

/// Free state at speed `xi` by Newton from `guess`.
pub fn refine_at<const N: usize, M: JumpModel<N> + ?Sized>(
    model: &M,
    fixed: &State<N>,
    side: Side,
    guess: State<N>,
    xi: f64,
) -> Result<HugoniotSample<N>> {
    match newton_at(model, fixed, side, guess, xi)? {
        NewtonOutcome::Converged(state) => Ok(HugoniotSample {
            xi,
            state,
            residual: rh_function(model, fixed, side, &state, xi)?.norm_inf(),
        }),
        NewtonOutcome::Singular => Err(Error::NoSolution {
            reason: alloc::format!("singular Jacobian at speed {xi}"),
            residual: f64::NAN,
        }),
        NewtonOutcome::Diverged => Err(Error::NoSolution {
            reason: alloc::format!("Newton diverged at speed {xi}"),
            residual: f64::NAN,
        }),
    }
}

/// Traces the Hugoniot locus through `fixed` on a uniform grid of `steps`
/// intervals from the seed speed to `xi_end`, halving the increment up to
/// [`MAX_HALVINGS`] times when Newton fails.
pub fn trace_exact<const N: usize, M: JumpModel<N> + ?Sized>(
    model: &M,
    fixed: &State<N>,
    side: Side,
    seed: Seed<N>,
    xi_end: f64,
    steps: usize,
) -> Result<HugoniotCurve<N>> {
    let sys = model.system();
    let (xi0, w0, direction) = match seed {
        Seed::Bifurcation { family } => {
            let eig = sys.eigen(fixed)?;
            if family >= N {
                return Err(Error::Invalid(alloc::format!("family {family} out of range")));
            }
            let r = eig.vectors.column(family);
            // ∇λ_k · r_k by central differences
            let d = 1e-6 * fixed.norm_inf().max(1.0);
            let lp = sys.eigen(&(*fixed + r * d))?.values[family];
            let lm = sys.eigen(&(*fixed - r * d))?.values[family];
            let growth = (lp - lm) / (2.0 * d);
            if abs(growth) < 1e-12 {
                return Err(Error::Invalid(
                    "field is linearly degenerate at the fixed state".into(),
                ));
            }
            (eig.values[family], *fixed, Some((r, growth)))
        }
        Seed::Known { xi, state } => (xi, state, None),
    };
    if steps == 0 || xi_end == xi0 {
        return Err(Error::Invalid("empty continuation range".into()));
    }
    let dxi = (xi_end - xi0) / steps as f64;
    let mut curve = HugoniotCurve {
        fixed: *fixed,
        side,
        samples: alloc::vec![HugoniotSample {
            xi: xi0,
            state: w0,
            residual: rh_function(model, fixed, side, &w0, xi0)?.norm_inf(),
        }],
        stop: None,
    };
    // last two accepted (ξ, w), for the secant predictor
    let mut prev: Option<(f64, State<N>)> = None;
    let mut cur = (xi0, w0);
    let trivial_tol = 1e-8 * fixed.norm_inf().max(1.0);
    for k in 1..=steps {
        let target = xi0 + dxi * k as f64;
        let mut h = target - cur.0;
        let mut halvings = 0u32;
        loop {
            let xi = if abs(target - cur.0) <= abs(h) { target } else { cur.0 + h };
            let guess = match (prev, direction) {
                (Some((xp, wp)), _) => cur.1 + (cur.1 - wp) * ((xi - cur.0) / (cur.0 - xp)),
                (None, Some((r, growth))) => cur.1 + r * (2.0 * (xi - cur.0) / growth),
                (None, None) => cur.1,
            };
            let outcome = match newton_at(model, fixed, side, guess, xi) {
                Ok(o) => o,
                Err(error) => {
                    curve.stop = Some(CurveStop::Evaluation { xi, error });
                    return Ok(curve);
                }
            };
            match outcome {
                NewtonOutcome::Converged(w) if (w - *fixed).norm_inf() > trivial_tol => {
                    prev = Some(cur);
                    cur = (xi, w);
                    if xi == target {
                        break;
                    }
                }
                other => {
                    if halvings >= MAX_HALVINGS {
                        curve.stop = Some(match other {
                            NewtonOutcome::Singular => CurveStop::Fold { xi },
                            _ => CurveStop::NewtonFailure { xi },
                        });
                        return Ok(curve);
                    }
                    halvings += 1;
                    h *= 0.5;
                }
            }
        }
        let residual = rh_function(model, fixed, side, &cur.1, cur.0)?.norm_inf();
        curve.samples.push(HugoniotSample {
            xi: cur.0,
            state: cur.1,
            residual,
        });
    }
    Ok(curve)
}

/// The point of the traced curve where `state[component] = value`, refined by
/// Newton on `(w, ξ)` with that component pinned.
pub fn solve_at_component<const N: usize, M: JumpModel<N> + ?Sized>(
    model: &M,
    curve: &HugoniotCurve<N>,
    component: usize,
    value: f64,
) -> Result<HugoniotSample<N>> {
    let s = &curve.samples;
    let k = s
        .windows(2)
        .position(|w| {
            let (a, b) = (w[0].state[component], w[1].state[component]);
            (a - value) * (b - value) <= 0.0 && a != b
        })
        .ok_or_else(|| Error::NoSolution {
            reason: alloc::format!("component {component} never reaches {value} on the curve"),
            residual: f64::NAN,
        })?;
    let (a, b) = (&s[k], &s[k + 1]);
    let t = (value - a.state[component]) / (b.state[component] - a.state[component]);
    let mut w = State::lerp(&a.state, &b.state, t);
    w[component] = value;
    let mut xi = a.xi + t * (b.xi - a.xi);
    let (fixed, side) = (&curve.fixed, curve.side);
    for _ in 0..MAX_NEWTON {
        let r = rh_function(model, fixed, side, &w, xi)?;
        let res = r.norm_inf();
        if res <= NEWTON_TOL * 1f64.max(w.norm_inf()) {
            return Ok(HugoniotSample {
                xi,
                state: w,
                residual: res,
            });
        }
        // the pinned component's column is replaced by ∂R/∂ξ
        let mut j = rh_jacobian(model, fixed, side, &w, xi)?;
        let (ul, ur) = side.pair(fixed, &w);
        let dxi_col = ur - ul;
        for i in 0..N {
            j[(i, component)] = dxi_col[i];
        }
        let d = j.solve(&r).ok_or(Error::NoSolution {
            reason: "singular augmented Jacobian".into(),
            residual: res,
        })?;
        for i in 0..N {
            if i == component {
                xi -= d[i];
            } else {
                w[i] -= d[i];
            }
        }
    }
    Err(Error::NoSolution {
        reason: "augmented Newton did not converge".into(),
        residual: rh_function(model, fixed, side, &w, xi)?.norm_inf(),
    })
}

/// Right state of a stationary contact over a bottom step (same discharge and
/// energy, same flow regime as `w_l`).
pub fn stationary_contact_state(
    sw: &ShallowWater,
    wl: &State<3>,
    sigma_r: f64,
) -> Result<State<3>> {
    if sigma_r == wl[2] {
        return Ok(*wl);
    }
    sw.stationary_contact(wl, sigma_r)
}

/// Region searched for the front in each snapshot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScanWindow {
    Whole,
    Fixed { x_min: f64, x_max: f64 },
    /// `[x₀ + ξ_min t, x₀ + ξ_max t]`
    SelfSimilar { origin: f64, xi_min: f64, xi_max: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtractOptions {
    pub component: usize,
    /// Fraction of the largest divided difference above which a pair of
    /// cells is non-smooth.
    pub threshold: f64,
    pub window: ScanWindow,
    /// Cells skipped between the front and each plateau.
    pub plateau_gap: usize,
    /// Cells averaged in each plateau.
    pub plateau_width: usize,
    /// Flagged runs separated by at most this many smooth pairs form one
    /// front.
    pub merge_gap: usize,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            component: 0,
            threshold: 0.1,
            window: ScanWindow::Whole,
            plateau_gap: 3,
            plateau_width: 5,
            merge_gap: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShockFit<const N: usize> {
    pub xi: f64,
    pub left: State<N>,
    pub right: State<N>,
    /// `(t, x)` front positions used in the speed fit.
    pub positions: Vec<(f64, f64)>,
}

struct Front {
    /// First and last flagged pair (pair `i` joins cells `i`, `i + 1`).
    first: usize,
    last: usize,
    position: f64,
}

fn locate_front<const N: usize>(sol: &Solution<N>, opts: &ExtractOptions) -> Result<Front> {
    let g = &sol.grid;
    let dx = g.dx();
    let (x_lo, x_hi) = match opts.window {
        ScanWindow::Whole => (g.x_min, g.x_max),
        ScanWindow::Fixed { x_min, x_max } => (x_min, x_max),
        ScanWindow::SelfSimilar {
            origin,
            xi_min,
            xi_max,
        } => (origin + xi_min * sol.t, origin + xi_max * sol.t),
    };
    let m = sol.cells.len();
    let pairs: Vec<usize> = (0..m - 1)
        .filter(|&i| {
            let x = g.edge(i + 1);
            x >= x_lo && x <= x_hi
        })
        .collect();
    let c = opts.component;
    let dd = |i: usize| abs(sol.cells[i + 1][c] - sol.cells[i][c]) / dx;
    let max = pairs.iter().map(|&i| dd(i)).fold(0.0, f64::max);
    if !(max > 0.0) {
        return Err(Error::Extraction { fronts: 0 });
    }
    let cut = opts.threshold * max;
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for &i in &pairs {
        if dd(i) > cut {
            match runs.last_mut() {
                Some(run) if i <= run.1 + opts.merge_gap + 1 => run.1 = i,
                _ => runs.push((i, i)),
            }
        }
    }
    if runs.len() != 1 {
        return Err(Error::Extraction { fronts: runs.len() });
    }
    let (first, last) = runs[0];
    let (mut num, mut den) = (0.0, 0.0);
    for i in first..=last {
        let w = dd(i);
        num += w * g.edge(i + 1);
        den += w;
    }
    Ok(Front {
        first,
        last,
        position: num / den,
    })
}

fn plateau<const N: usize>(cells: &[State<N>], from: isize, width: usize) -> Result<State<N>> {
    if from < 0 || from as usize + width > cells.len() || width == 0 {
        return Err(Error::Invalid("plateau leaves the grid".into()));
    }
    let from = from as usize;
    let mut acc = State::zeros();
    for u in &cells[from..from + width] {
        acc += *u;
    }
    Ok(acc * (1.0 / width as f64))
}

/// Fits a single shock across snapshots: speed from a least-squares line
/// through the front positions, limits from plateaus of the last snapshot.
/// A single snapshot needs a self-similar window (the origin fixes the line).
pub fn extract_shock<const N: usize>(
    snapshots: &[Solution<N>],
    opts: &ExtractOptions,
) -> Result<ShockFit<N>> {
    let last = snapshots
        .last()
        .ok_or_else(|| Error::Invalid("no snapshots".into()))?;
    let mut positions = Vec::with_capacity(snapshots.len());
    let mut final_front = None;
    for sol in snapshots {
        let f = locate_front(sol, opts)?;
        positions.push((sol.t, f.position));
        final_front = Some(f);
    }
    let front = final_front.expect("at least one snapshot");
    let xi = if positions.len() == 1 {
        match opts.window {
            ScanWindow::SelfSimilar { origin, .. } if last.t > 0.0 => {
                (positions[0].1 - origin) / last.t
            }
            _ => {
                return Err(Error::Invalid(
                    "speed from one snapshot needs a self-similar window".into(),
                ))
            }
        }
    } else {
        let n = positions.len() as f64;
        let tm = positions.iter().map(|p| p.0).sum::<f64>() / n;
        let xm = positions.iter().map(|p| p.1).sum::<f64>() / n;
        let stt: f64 = positions.iter().map(|p| (p.0 - tm) * (p.0 - tm)).sum();
        if stt == 0.0 {
            return Err(Error::Invalid("snapshots share one time".into()));
        }
        positions.iter().map(|p| (p.0 - tm) * (p.1 - xm)).sum::<f64>() / stt
    };
    let gap = opts.plateau_gap as isize;
    let width = opts.plateau_width;
    // pair `first` joins cells first, first + 1: the left plateau ends at
    // cell `first − gap`
    let left_end = front.first as isize - gap;
    let left = plateau(&last.cells, left_end - width as isize + 1, width)?;
    let right = plateau(&last.cells, front.last as isize + 1 + gap, width)?;
    Ok(ShockFit {
        xi,
        left,
        right,
        positions,
    })
}

/// Residuals of a fitted shock.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhResidual {
    /// `‖ξΔw − ∫A(Φ)Φ_s‖_∞` for the model's path.
    pub nonconservative: f64,
    /// `max_r |ξΔw_r − ΔF_r|` over the rows with a flux.
    pub conservative: Option<f64>,
}

pub fn rh_residual<const N: usize, M: JumpModel<N> + ?Sized>(
    model: &M,
    xi: f64,
    left: &State<N>,
    right: &State<N>,
) -> Result<RhResidual> {
    let jump = *right - *left;
    let nonconservative = (jump * xi - model.path_integral(left, right)?).norm_inf();
    let sys = model.system();
    let conservative = match (sys.balance_flux(left), sys.balance_flux(right)) {
        (Some(fl), Some(fr)) => (0..N)
            .filter(|r| !sys.stationary_rows().contains(r))
            .map(|r| abs(xi * jump[r] - (fr[r] - fl[r])))
            .reduce(f64::max),
        _ => {
            let (fl, fr) = (sys.conserved_flux(left), sys.conserved_flux(right));
            sys.conserved_rows()
                .iter()
                .map(|&r| abs(xi * jump[r] - (fr[r] - fl[r])))
                .reduce(f64::max)
        }
    };
    Ok(RhResidual {
        nonconservative,
        conservative,
    })
}

/// `sup_ξ ‖a(ξ) − b(ξ)‖₂` over a uniform grid on the overlap of the speed
/// ranges, both curves interpolated linearly in ξ.
pub fn curve_distance<const N: usize>(a: &HugoniotCurve<N>, b: &HugoniotCurve<N>) -> Result<f64> {
    const POINTS: usize = 256;
    let (Some((a0, a1)), Some((b0, b1))) = (a.xi_range(), b.xi_range()) else {
        return Err(Error::Invalid("curve without samples".into()));
    };
    let (lo, hi) = (a0.max(b0), a1.min(b1));
    if !(hi >= lo) {
        return Err(Error::Invalid("speed ranges do not overlap".into()));
    }
    let mut sup = 0.0f64;
    for k in 0..POINTS {
        let xi = if POINTS == 1 || hi == lo {
            lo
        } else {
            lo + (hi - lo) * k as f64 / (POINTS - 1) as f64
        };
        let (Some(u), Some(v)) = (a.interpolate(xi), b.interpolate(xi)) else {
            continue;
        };
        sup = sup.max(sqrt((u - v).dot(&(u - v))));
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{Model, TwoSegment};
    use crate::riemann::hugoniot_unit;
    use crate::schemes::Grid;
    use crate::systems::Simplified;

    const WL: State<2> = State([1.0, 1.0]);

    #[test]
    fn traced_simplified_curve_hits_reference_point() {
        let m = Model::new(Simplified, TwoSegment);
        let curve = trace_exact(&m, &WL, Side::Left, Seed::Bifurcation { family: 0 }, -1.0, 50)
            .unwrap();
        assert!(curve.stop.is_none(), "{:?}", curve.stop);
        for s in &curve.samples {
            assert!(s.residual < 1e-10);
            assert!((s.state[1] - hugoniot_unit(s.state[0])).abs() < 1e-9);
        }
        let p = solve_at_component(&m, &curve, 0, 1.8).unwrap();
        assert!((p.state[1] - 0.530_039_370_688_997).abs() < 1e-12);
        assert!((p.xi - (1.0 - 2.52f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn synthetic_step_is_recovered() {
        let xi = -0.587_450_786_611;
        let grid = Grid::new(-1.0, 1.0, 2000).unwrap();
        let (ul, ur) = (WL, State([1.8, 0.53]));
        let snaps: Vec<Solution<2>> = [0.2, 0.35, 0.5]
            .iter()
            .map(|&t| {
                let mut s = Solution::riemann(grid, xi * t, ul, ur);
                s.t = t;
                s
            })
            .collect();
        let fit = extract_shock(&snaps, &ExtractOptions::default()).unwrap();
        assert!((fit.xi - xi).abs() < grid.dx() / 0.3);
        assert!((fit.left - ul).norm_inf() < 1e-14);
        assert!((fit.right - ur).norm_inf() < 1e-14);
    }

    #[test]
    fn constant_profile_has_no_front() {
        let grid = Grid::new(0.0, 1.0, 50).unwrap();
        let s = Solution::from_fn(grid, |_| WL);
        assert_eq!(
            extract_shock(&[s], &ExtractOptions::default()),
            Err(Error::Extraction { fronts: 0 })
        );
    }

    #[test]
    fn two_fronts_rejected() {
        let grid = Grid::new(0.0, 1.0, 100).unwrap();
        let s = Solution::from_fn(grid, |x| {
            if !(0.3..=0.7).contains(&x) {
                State([1.0, 1.0])
            } else {
                State([2.0, 1.0])
            }
        });
        assert_eq!(
            extract_shock(&[s], &ExtractOptions::default()),
            Err(Error::Extraction { fronts: 2 })
        );
    }

    #[test]
    fn distance_to_self_is_zero() {
        let m = Model::new(Simplified, TwoSegment);
        let c = trace_exact(&m, &WL, Side::Left, Seed::Bifurcation { family: 0 }, -0.5, 10).unwrap();
        assert_eq!(curve_distance(&c, &c).unwrap(), 0.0);
    }

    #[test]
    fn exact_pair_has_small_residual() {
        let m = Model::new(Simplified, TwoSegment);
        let wr = State([1.8, 0.530_039_370_688_997]);
        let r = rh_residual(&m, 1.0 - 2.52f64.sqrt(), &WL, &wr).unwrap();
        assert!(r.nonconservative < 1e-10);
        assert!(r.conservative.unwrap() < 1e-10);
    }
}
