//! Exact Riemann solver of the simplified system, with shocks defined by the
//! two-segment path and rarefactions along the integral curves
//! `√u + h/2 = C₁` (family 1) and `√u − h/2 = C₂` (family 2).
//!
//! Wave curves are parameterized by the depth `h`; admissible shocks satisfy
//! the Lax inequalities.

use crate::error::{Error, Result};
use crate::linalg::State;
use crate::math::{abs, sqrt};
use crate::paths::{PathFamily, PathProperties, TwoSegment};
use crate::quadrature::integrate;
use crate::systems::Simplified;

/// Iteration cap of the intermediate-state solve.
pub const MAX_ITER: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WaveKind {
    Null,
    Shock { speed: f64 },
    /// Fan between the characteristic speeds `head` (left edge) and `tail`.
    Rarefaction { head: f64, tail: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wave {
    pub family: u8,
    pub kind: WaveKind,
    pub left: State<2>,
    pub right: State<2>,
}

impl Wave {
    /// Slowest and fastest speed occupied by the wave.
    pub fn speeds(&self) -> (f64, f64) {
        match self.kind {
            WaveKind::Null => (f64::NAN, f64::NAN),
            WaveKind::Shock { speed } => (speed, speed),
            WaveKind::Rarefaction { head, tail } => (head, tail),
        }
    }

    fn fan_state(&self, xi: f64) -> State<2> {
        if self.family == 1 {
            fan_1(&self.left, xi)
        } else {
            fan_2(&self.right, xi)
        }
    }

    /// Parts of `∫ ξ dw` over the wave with negative and positive speeds.
    ///
    /// The `h` row is conservative (`∫ ξ dh = Δq` along any wave), so it is
    /// set to the `q` difference directly: the discrete mass balance then
    /// holds to round-off instead of to the Newton/quadrature tolerance.
    fn split_contribution(&self) -> Result<(State<2>, State<2>)> {
        let mut jump = self.right - self.left;
        match self.kind {
            WaveKind::Null => Ok((State::zeros(), State::zeros())),
            WaveKind::Shock { speed } => {
                let dq = jump[1];
                jump = jump * speed;
                jump[0] = dq;
                Ok(if speed < 0.0 {
                    (jump, State::zeros())
                } else {
                    (State::zeros(), jump)
                })
            }
            WaveKind::Rarefaction { head, tail } => {
                let part = |a: f64, b: f64| -> Result<State<2>> {
                    if b <= a {
                        return Ok(State::zeros());
                    }
                    let wa = if a == head { self.left } else { self.fan_state(a) };
                    let wb = if b == tail { self.right } else { self.fan_state(b) };
                    let area = integrate(|x| Ok(self.fan_state(x)), a, b)?;
                    let mut part = wb * b - wa * a - area;
                    part[0] = wb[1] - wa[1];
                    Ok(part)
                };
                Ok((part(head, tail.min(0.0))?, part(head.max(0.0), tail)?))
            }
        }
    }
}

/// Self-similar solution `w(x/t)` of a Riemann problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveFan {
    pub left: State<2>,
    pub middle: State<2>,
    pub right: State<2>,
    pub waves: [Wave; 2],
}

impl WaveFan {
    pub fn sample(&self, xi: f64) -> State<2> {
        let mut state = self.left;
        for w in &self.waves {
            match w.kind {
                WaveKind::Null => {}
                WaveKind::Shock { speed } => {
                    if xi < speed {
                        return state;
                    }
                }
                WaveKind::Rarefaction { head, tail } => {
                    if xi < head {
                        return state;
                    }
                    if xi < tail {
                        return w.fan_state(xi);
                    }
                }
            }
            state = w.right;
        }
        state
    }

    /// Godunov fluctuations: the total `∫ ξ dw` of the left-going and
    /// right-going parts of the fan.
    pub fn fluctuations(&self) -> Result<(State<2>, State<2>)> {
        let mut minus = State::zeros();
        let mut plus = State::zeros();
        for w in &self.waves {
            let (m, p) = w.split_contribution()?;
            minus += m;
            plus += p;
        }
        Ok((minus, plus))
    }

    pub fn is_single_shock(&self) -> bool {
        matches!(
            (self.waves[0].kind, self.waves[1].kind),
            (WaveKind::Shock { .. }, WaveKind::Null) | (WaveKind::Null, WaveKind::Shock { .. })
        )
    }
}

fn velocity(w: &State<2>) -> Result<f64> {
    if !(w[0] > 0.0) {
        return Err(Error::domain("simplified system requires h > 0"));
    }
    let u = w[1] / w[0];
    if u < 0.0 {
        return Err(Error::domain("wave curves need q/h ≥ 0"));
    }
    Ok(u)
}

/// Speed of the 1-shock from `w_l` to depth `h_r`:
/// `(ξ − u_l)² = u_l h_r (h_r + h_l)/2`, slower root.
pub fn shock_speed_1(wl: &State<2>, hr: f64) -> Result<f64> {
    let ul = velocity(wl)?;
    Ok(ul - sqrt(ul * hr * (hr + wl[0]) * 0.5))
}

/// Discharge on the 1-shock curve from `w_l` at depth `h_r`.
pub fn shock_curve_1(wl: &State<2>, hr: f64) -> Result<f64> {
    if !(hr > 0.0) {
        return Err(Error::domain("shock curve needs h_r > 0"));
    }
    let xi = shock_speed_1(wl, hr)?;
    Ok(wl[1] + xi * (hr - wl[0]))
}

/// The 1-shock curve in closed form for `w_l = (1, 1)`.
pub fn hugoniot_unit(hr: f64) -> f64 {
    hr * (1.0 - sqrt((hr + 1.0) / (2.0 * hr)) * (hr - 1.0))
}

/// Speed of the 2-shock joining a left state of depth `h` to `w_r`.
pub fn shock_speed_2_backward(wr: &State<2>, h: f64) -> Result<f64> {
    let (hr, qr) = (wr[0], wr[1]);
    velocity(wr)?;
    let p = 0.5 * (hr * hr - h * h);
    let a = hr;
    let b = -(2.0 * qr - p * h);
    let c = qr * qr / hr - qr * h * (hr + h) * 0.5;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Err(Error::domain("2-shock curve has no real speed"));
    }
    Ok((-b + sqrt(disc)) / (2.0 * a))
}

/// Discharge on the integral curve of `family` through `w` at depth `h`.
pub fn rarefaction_curve(family: u8, w: &State<2>, h: f64) -> Result<f64> {
    let u = velocity(w)?;
    let root = match family {
        1 => sqrt(u) - 0.5 * (h - w[0]),
        2 => sqrt(u) + 0.5 * (h - w[0]),
        _ => return Err(Error::Invalid(alloc::format!("family {family} out of range"))),
    };
    if root < 0.0 {
        return Err(Error::domain("wave curve leaves the state space (√u < 0)"));
    }
    Ok(h * root * root)
}

/// Depth below which the backward 2-rarefaction from `w_r` leaves the state
/// space.
fn min_depth(wr: &State<2>) -> Result<f64> {
    Ok((wr[0] - 2.0 * sqrt(velocity(wr)?)).max(0.0))
}

/// 1-wave curve from `w_l`.
fn forward_1(wl: &State<2>, h: f64) -> Result<f64> {
    if h > wl[0] {
        shock_curve_1(wl, h)
    } else {
        rarefaction_curve(1, wl, h)
    }
}

/// States left of `w_r` reachable by a 2-wave.
fn backward_2(wr: &State<2>, h: f64) -> Result<f64> {
    if h > wr[0] {
        let xi = shock_speed_2_backward(wr, h)?;
        Ok(wr[1] - xi * (wr[0] - h))
    } else {
        rarefaction_curve(2, wr, h)
    }
}

fn fan_1(wl: &State<2>, xi: f64) -> State<2> {
    let c = sqrt(wl[1] / wl[0]) + 0.5 * wl[0];
    let v = (c + sqrt((c * c + 3.0 * xi).max(0.0))) / 3.0;
    let h = 2.0 * (c - v);
    State([h, h * v * v])
}

fn fan_2(wr: &State<2>, xi: f64) -> State<2> {
    let c = sqrt(wr[1] / wr[0]) - 0.5 * wr[0];
    let v = (c + sqrt((c * c + 3.0 * xi).max(0.0))) / 3.0;
    let h = 2.0 * (v - c);
    State([h, h * v * v])
}

fn classify(family: u8, left: State<2>, right: State<2>, reference: f64, h: f64) -> Result<Wave> {
    let kind = if abs(h - reference) <= 1e-14 * reference {
        WaveKind::Null
    } else {
        let compressive = h > reference;
        if compressive {
            let speed = if family == 1 {
                shock_speed_1(&left, right[0])?
            } else {
                shock_speed_2_backward(&right, left[0])?
            };
            WaveKind::Shock { speed }
        } else {
            let k = usize::from(family - 1);
            let head = Simplified.eigenvalues(&left)?[k];
            let tail = Simplified.eigenvalues(&right)?[k];
            WaveKind::Rarefaction { head, tail }
        }
    };
    Ok(Wave {
        family,
        kind,
        left,
        right,
    })
}

/// Intermediate depth where the forward 1-curve of `w_l` meets the backward
/// 2-curve of `w_r`, by safeguarded Newton on `q₁(h) − q₂(h)`.
fn intermediate_depth(wl: &State<2>, wr: &State<2>) -> Result<f64> {
    let f = |h: f64| -> Result<f64> { Ok(forward_1(wl, h)? - backward_2(wr, h)?) };
    let lo_bound = min_depth(wr)?;
    let guess = 0.5 * (wl[0] + wr[0]);
    let fg = f(guess)?;
    if fg == 0.0 {
        return Ok(guess);
    }
    // bracket: f is positive near the lower bound and negative for large h
    let (mut lo, mut hi) = if fg > 0.0 {
        let mut hi = guess;
        let mut n = 0;
        loop {
            hi *= 2.0;
            n += 1;
            if f(hi)? < 0.0 {
                break (hi * 0.5, hi);
            }
            if n > 60 {
                return Err(Error::NoSolution {
                    reason: "wave curves do not intersect".into(),
                    residual: f(hi)?,
                });
            }
        }
    } else {
        let mut lo = guess;
        let mut n = 0;
        loop {
            lo = lo_bound + 0.5 * (lo - lo_bound);
            n += 1;
            let v = f(lo)?;
            if v > 0.0 {
                break (lo, guess);
            }
            if n > 60 {
                return Err(Error::NoSolution {
                    reason: "wave curves do not intersect".into(),
                    residual: v,
                });
            }
        }
    };
    let mut h = 0.5 * (lo + hi);
    let mut fh = f(h)?;
    for _ in 0..MAX_ITER {
        if fh == 0.0 || hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(h);
        }
        if fh > 0.0 {
            lo = h;
        } else {
            hi = h;
        }
        let d = 1e-7 * h.max(1e-8);
        let slope = (f(h + d)? - f(h - d)?) / (2.0 * d);
        let newton = h - fh / slope;
        let next = if slope.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let fnext = f(next)?;
        if abs(fnext) <= 1e-15 * (1.0 + abs(wl[1]) + abs(wr[1])) {
            return Ok(next);
        }
        h = next;
        fh = fnext;
    }
    Err(Error::NoSolution {
        reason: alloc::format!("intermediate state not found in {MAX_ITER} iterations"),
        residual: abs(fh),
    })
}

pub fn solve_riemann(wl: &State<2>, wr: &State<2>) -> Result<WaveFan> {
    velocity(wl)?;
    velocity(wr)?;
    if wl == wr {
        let null = |family| Wave {
            family,
            kind: WaveKind::Null,
            left: *wl,
            right: *wl,
        };
        return Ok(WaveFan {
            left: *wl,
            middle: *wl,
            right: *wr,
            waves: [null(1), null(2)],
        });
    }
    let h = intermediate_depth(wl, wr)?;
    // snap onto an endpoint when the intermediate state coincides with it
    let mut middle = State([h, forward_1(wl, h)?]);
    if abs(h - wl[0]) <= 1e-13 * wl[0] && (middle - *wl).norm_inf() <= 1e-12 {
        middle = *wl;
    } else if abs(h - wr[0]) <= 1e-13 * wr[0] && (middle - *wr).norm_inf() <= 1e-12 {
        middle = *wr;
    }
    let w1 = classify(1, *wl, middle, wl[0], middle[0])?;
    let w2 = classify(2, middle, *wr, wr[0], middle[0])?;
    Ok(WaveFan {
        left: *wl,
        middle,
        right: *wr,
        waves: [w1, w2],
    })
}

/// The path traced by the Riemann solution itself: the 1-wave on
/// `s ∈ [0, ½]` and the 2-wave on `[½, 1]`, shocks following the
/// two-segment path and rarefactions their integral curves. It is the path
/// for which Godunov's scheme is exactly consistent.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RiemannPath;

impl RiemannPath {
    fn wave_point(w: &Wave, t: f64) -> Result<State<2>> {
        match w.kind {
            WaveKind::Null => Ok(w.left),
            WaveKind::Shock { .. } => TwoSegment.point(t, &w.left, &w.right),
            WaveKind::Rarefaction { .. } => {
                if t == 1.0 {
                    return Ok(w.right);
                }
                let h = w.left[0] + t * (w.right[0] - w.left[0]);
                Ok(State([h, rarefaction_curve(w.family, &w.left, h)?]))
            }
        }
    }

    fn wave_tangent(w: &Wave, t: f64) -> Result<State<2>> {
        match w.kind {
            WaveKind::Null => Ok(State::zeros()),
            WaveKind::Shock { .. } => TwoSegment.tangent(t, &w.left, &w.right),
            WaveKind::Rarefaction { .. } => {
                let dh = w.right[0] - w.left[0];
                let h = w.left[0] + t * dh;
                let sign = if w.family == 1 { -1.0 } else { 1.0 };
                let v = sqrt(velocity(&w.left)?) + sign * 0.5 * (h - w.left[0]);
                // q = h v², dq/dh = v² + h v dv/dh
                Ok(State([dh, (v * v + sign * h * v) * dh]))
            }
        }
    }
}

impl PathFamily<2> for RiemannPath {
    fn name(&self) -> &'static str {
        "riemann"
    }

    fn point(&self, s: f64, wl: &State<2>, wr: &State<2>) -> Result<State<2>> {
        if s == 0.0 {
            return Ok(*wl);
        }
        if s == 1.0 {
            return Ok(*wr);
        }
        let fan = solve_riemann(wl, wr)?;
        if s <= 0.5 {
            Self::wave_point(&fan.waves[0], 2.0 * s)
        } else {
            Self::wave_point(&fan.waves[1], 2.0 * s - 1.0)
        }
    }

    fn tangent(&self, s: f64, wl: &State<2>, wr: &State<2>) -> Result<State<2>> {
        let fan = solve_riemann(wl, wr)?;
        let t = if s < 0.5 {
            Self::wave_tangent(&fan.waves[0], 2.0 * s)?
        } else {
            Self::wave_tangent(&fan.waves[1], 2.0 * s - 1.0)?
        };
        Ok(t * 2.0)
    }

    fn breakpoints(&self) -> &[f64] {
        &[0.25, 0.5, 0.75]
    }

    fn properties(&self) -> PathProperties {
        PathProperties {
            r1: false,
            r4: false,
            epsilon: None,
        }
    }
}
