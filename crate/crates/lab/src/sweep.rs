//! The `sweep` command: exact Hugoniot curve through a fixed state, and the
//! numerical curve recovered from a family of Riemann problems on each mesh.

use pathcons::hugoniot::{
    curve_distance, extract_shock, refine_at, rh_residual, solve_at_component, trace_exact,
    CurveStop, HugoniotCurve, HugoniotSample, Seed, Side,
};
use pathcons::schemes::{run, Boundaries, Grid, RunOptions, Solution};
use pathcons::State;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, PathSpec, SampleSpec, SchemeId, SideSpec, SweepSpec, WindowSpec};
use crate::error::LabError;
use crate::model::{dispatch, state, stepper, LabModel, ModelVisitor};
use crate::output::{curve_csv, to_json_pretty, Artifacts, Manifest, Verb};
use crate::runner::extract_options;

/// A curve point in dimension-free form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub xi: f64,
    pub state: Vec<f64>,
    pub residual: f64,
}

impl Point {
    fn from_sample<const N: usize>(s: &HugoniotSample<N>) -> Self {
        Point {
            xi: s.xi,
            state: s.state.0.to_vec(),
            residual: s.residual,
        }
    }

    fn to_sample<const N: usize>(&self) -> Result<HugoniotSample<N>, LabError> {
        Ok(HugoniotSample {
            xi: self.xi,
            state: state(&self.state)?,
            residual: self.residual,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactCurve {
    pub epsilon: Option<f64>,
    pub points: usize,
    pub xi_min: f64,
    pub xi_max: f64,
    /// Why the trace ended before `xi_end`.
    pub stop: Option<String>,
    #[serde(skip)]
    pub samples: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleFailure {
    pub sample: usize,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericalCurve {
    pub scheme: SchemeId,
    pub epsilon: Option<f64>,
    pub cells: usize,
    pub dx: f64,
    /// `(ξ, free-side limit, nonconservative RH residual)` per sample.
    pub points: Vec<Point>,
    pub failures: Vec<SampleFailure>,
    pub distance_to_exact: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshDistance {
    pub scheme: SchemeId,
    pub epsilon: Option<f64>,
    pub coarse: usize,
    pub fine: usize,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonDistance {
    pub scheme: SchemeId,
    pub cells: usize,
    pub a: f64,
    pub b: f64,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub experiment: String,
    /// Riemann data (free states) shared by every mesh of a path parameter.
    pub data: Vec<Vec<Point>>,
    pub exact: Vec<ExactCurve>,
    pub curves: Vec<NumericalCurve>,
    pub successive: Vec<MeshDistance>,
    pub pairwise_epsilon: Vec<EpsilonDistance>,
    /// Distances that could not be computed.
    pub distance_errors: Vec<String>,
}

impl SweepReport {
    pub fn curve(&self, scheme: SchemeId, epsilon: Option<f64>, cells: usize) -> Option<&NumericalCurve> {
        self.curves
            .iter()
            .find(|c| c.scheme == scheme && c.epsilon == epsilon && c.cells == cells)
    }

    pub fn successive_for(&self, scheme: SchemeId, epsilon: Option<f64>) -> Vec<&MeshDistance> {
        self.successive
            .iter()
            .filter(|d| d.scheme == scheme && d.epsilon == epsilon)
            .collect()
    }

    pub fn pairwise(&self, scheme: SchemeId, cells: usize, a: f64, b: f64) -> Option<f64> {
        self.pairwise_epsilon
            .iter()
            .find(|d| d.scheme == scheme && d.cells == cells && d.a == a && d.b == b)
            .map(|d| d.distance)
    }
}

pub struct SweepOutcome {
    pub report: SweepReport,
    pub artifacts: Artifacts,
}

pub const REPORT_FILE: &str = "diagnostics.json";

fn side(s: SideSpec) -> Side {
    match s {
        SideSpec::Left => Side::Left,
        SideSpec::Right => Side::Right,
    }
}

fn stop_text<const N: usize>(c: &HugoniotCurve<N>) -> Option<String> {
    c.stop.as_ref().map(|s| match s {
        CurveStop::NewtonFailure { xi } => format!("Newton failure at speed {xi}"),
        CurveStop::Fold { xi } => format!("fold at speed {xi}"),
        CurveStop::Evaluation { xi, error } => format!("evaluation failed at speed {xi}: {error}"),
    })
}

/// Sup-norm distance between two dimension-free curves.
pub fn point_distance(a: &[Point], b: &[Point]) -> Result<f64, LabError> {
    fn go<const N: usize>(a: &[Point], b: &[Point]) -> Result<f64, LabError> {
        let curve = |p: &[Point]| -> Result<HugoniotCurve<N>, LabError> {
            let samples = p.iter().map(Point::to_sample).collect::<Result<_, _>>()?;
            Ok(HugoniotCurve::from_samples(State::zeros(), Side::Left, samples))
        };
        Ok(curve_distance(&curve(a)?, &curve(b)?)?)
    }
    match a.first().map(|p| p.state.len()) {
        Some(2) => go::<2>(a, b),
        Some(3) => go::<3>(a, b),
        Some(4) => go::<4>(a, b),
        _ => Err(LabError::Runtime("curve without samples".into())),
    }
}

fn trace<const N: usize, M: LabModel<N>>(
    model: &M,
    sw: &SweepSpec,
) -> Result<HugoniotCurve<N>, LabError> {
    let fixed: State<N> = state(&sw.fixed)?;
    let curve = trace_exact(
        model,
        &fixed,
        side(sw.side),
        Seed::Bifurcation { family: sw.family },
        sw.xi_end,
        sw.trace_steps,
    )?;
    if let Some(why) = stop_text(&curve) {
        log::warn!("exact curve stopped early: {why}");
    }
    Ok(curve)
}

fn exact_record<const N: usize>(curve: &HugoniotCurve<N>, epsilon: Option<f64>) -> ExactCurve {
    let (xi_min, xi_max) = curve.xi_range().unwrap_or((f64::NAN, f64::NAN));
    ExactCurve {
        epsilon,
        points: curve.samples.len(),
        xi_min,
        xi_max,
        stop: stop_text(curve),
        samples: curve.samples.iter().map(Point::from_sample).collect(),
    }
}

/// Riemann data picked from an exact curve.
fn pick_samples<const N: usize, M: LabModel<N>>(
    model: &M,
    curve: &HugoniotCurve<N>,
    spec: &SampleSpec,
) -> Result<Vec<Point>, LabError> {
    let picked: Result<Vec<HugoniotSample<N>>, pathcons::Error> = match spec {
        SampleSpec::Component { component, values } => values
            .iter()
            .map(|&v| solve_at_component(model, curve, *component, v))
            .collect(),
        SampleSpec::Speed { values } => values
            .iter()
            .map(|&xi| {
                let guess = curve.interpolate(xi).ok_or_else(|| pathcons::Error::NoSolution {
                    reason: format!("speed {xi} outside the traced curve"),
                    residual: f64::NAN,
                })?;
                refine_at(model, &curve.fixed, curve.side, guess, xi)
            })
            .collect(),
    };
    Ok(picked?.iter().map(Point::from_sample).collect())
}

struct DataVisitor<'a>(&'a SweepSpec);

impl ModelVisitor for DataVisitor<'_> {
    type Output = Result<(ExactCurve, Vec<Point>), LabError>;

    fn visit<const N: usize, M: LabModel<N>>(self, model: M) -> Self::Output {
        let curve = trace(&model, self.0)?;
        let data = pick_samples(&model, &curve, &self.0.samples)?;
        Ok((exact_record(&curve, None), data))
    }
}

struct SweepVisitor<'a> {
    cfg: &'a ExperimentConfig,
    epsilon: Option<f64>,
    /// Shared Riemann data; `None` picks from this model's own curve.
    data: Option<&'a [Point]>,
}

type SweepPart = (ExactCurve, Vec<Point>, Vec<NumericalCurve>);

impl ModelVisitor for SweepVisitor<'_> {
    type Output = Result<SweepPart, LabError>;

    fn visit<const N: usize, M: LabModel<N>>(self, model: M) -> Self::Output {
        let sw = self.cfg.sweep.as_ref().expect("validated");
        let curve = trace(&model, sw)?;
        let exact = exact_record(&curve, self.epsilon);
        let data = match self.data {
            Some(d) => d.to_vec(),
            None => pick_samples(&model, &curve, &sw.samples)?,
        };
        let meshes = self.cfg.sweep_meshes();
        let mut jobs = Vec::new();
        for &scheme in &self.cfg.schemes {
            for &cells in &meshes {
                for k in 0..data.len() {
                    jobs.push((scheme, cells, k));
                }
            }
        }
        let results: Vec<Result<Point, String>> = jobs
            .par_iter()
            .map(|&(scheme, cells, k)| {
                solve_sample::<N, M>(&model, self.cfg, sw, scheme, cells, &data[k])
                    .map_err(|e| e.to_string())
            })
            .collect();
        let mut curves: Vec<NumericalCurve> = Vec::new();
        for (&(scheme, cells, k), r) in jobs.iter().zip(results) {
            if curves.last().is_none_or(|c| c.scheme != scheme || c.cells != cells) {
                curves.push(NumericalCurve {
                    scheme,
                    epsilon: self.epsilon,
                    cells,
                    dx: (self.cfg.grid.x_max - self.cfg.grid.x_min) / cells as f64,
                    points: Vec::new(),
                    failures: Vec::new(),
                    distance_to_exact: None,
                });
            }
            let c = curves.last_mut().expect("just pushed");
            match r {
                Ok(p) => c.points.push(p),
                Err(error) => {
                    log::warn!("{scheme} on {cells} cells, sample {k}: {error}");
                    c.failures.push(SampleFailure { sample: k, error });
                }
            }
        }
        Ok((exact, data, curves))
    }
}

fn solve_sample<const N: usize, M: LabModel<N>>(
    model: &M,
    cfg: &ExperimentConfig,
    sw: &SweepSpec,
    scheme: SchemeId,
    cells: usize,
    point: &Point,
) -> Result<Point, LabError> {
    let fixed: State<N> = state(&sw.fixed)?;
    let free: State<N> = state(&point.state)?;
    let (ul, ur) = match sw.side {
        SideSpec::Left => (fixed, free),
        SideSpec::Right => (free, fixed),
    };
    let grid = Grid::new(cfg.grid.x_min, cfg.grid.x_max, cells)?;
    let init = Solution::riemann(grid, sw.origin, ul, ur);
    let mut stepper = stepper(model, scheme, cfg.seed)?;
    let opts = RunOptions::new(cfg.t_end, cfg.cfl).with_snapshots(&sw.times);
    let out = run(&mut *stepper, init, &Boundaries::FREE, &opts, |_| {})
        .map_err(pathcons::Error::from)?;
    let window = WindowSpec::SelfSimilar {
        origin: sw.origin,
        xi_min: point.xi - sw.window,
        xi_max: point.xi + sw.window,
    };
    let opts = extract_options(sw.component, sw.threshold, window, sw.plateau_gap, sw.plateau_width, 2);
    let fit = extract_shock(&out.snapshots, &opts)?;
    let res = rh_residual(model, fit.xi, &fit.left, &fit.right)?;
    let limit = match sw.side {
        SideSpec::Left => fit.right,
        SideSpec::Right => fit.left,
    };
    Ok(Point {
        xi: fit.xi,
        state: limit.0.to_vec(),
        residual: res.nonconservative,
    })
}

fn eps_tag(e: Option<f64>) -> String {
    e.map_or(String::new(), |e| format!("_eps{e}"))
}

fn eps_label(e: Option<f64>) -> String {
    e.map_or(String::new(), |e| format!(", eps {e}"))
}

fn points_csv(points: &[Point], columns: &[&str]) -> String {
    fn go<const N: usize>(points: &[Point], columns: &[&str]) -> String {
        let s: Vec<HugoniotSample<N>> = points
            .iter()
            .filter_map(|p| p.to_sample().ok())
            .collect();
        curve_csv(&s, columns)
    }
    match columns.len() {
        2 => go::<2>(points, columns),
        3 => go::<3>(points, columns),
        _ => go::<4>(points, columns),
    }
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepOutcome, LabError> {
    cfg.validate()?;
    let sw = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| LabError::validation("sweep", "the sweep command needs a sweep section"))?;
    let epsilons: Vec<Option<f64>> = match cfg.path {
        PathSpec::Epsilon { eps } if sw.epsilons.is_empty() => vec![Some(eps)],
        PathSpec::Epsilon { .. } => sw.epsilons.iter().map(|&e| Some(e)).collect(),
        _ => vec![None],
    };
    let shared = match sw.data_epsilon {
        Some(e) => {
            let c = cfg.with_epsilon(e);
            Some(dispatch(c.system, c.path, DataVisitor(sw))??.1)
        }
        None => None,
    };

    let mut report = SweepReport {
        experiment: cfg.name.clone(),
        data: Vec::new(),
        exact: Vec::new(),
        curves: Vec::new(),
        successive: Vec::new(),
        pairwise_epsilon: Vec::new(),
        distance_errors: Vec::new(),
    };
    for &eps in &epsilons {
        let c = match eps {
            Some(e) => cfg.with_epsilon(e),
            None => cfg.clone(),
        };
        let visitor = SweepVisitor {
            cfg: &c,
            epsilon: eps,
            data: shared.as_deref(),
        };
        let (exact, data, mut curves) = dispatch(c.system, c.path, visitor)??;
        for curve in &mut curves {
            match point_distance(&curve.points, &exact.samples) {
                Ok(d) => curve.distance_to_exact = Some(d),
                Err(e) => report.distance_errors.push(format!(
                    "{} on {} cells{} vs exact: {e}",
                    curve.scheme,
                    curve.cells,
                    eps_label(eps)
                )),
            }
        }
        if shared.is_none() || report.data.is_empty() {
            report.data.push(data);
        }
        report.exact.push(exact);
        report.curves.extend(curves);
    }

    let meshes = cfg.sweep_meshes();
    for &scheme in &cfg.schemes {
        for &eps in &epsilons {
            for pair in meshes.windows(2) {
                let (Some(a), Some(b)) = (report.curve(scheme, eps, pair[0]), report.curve(scheme, eps, pair[1]))
                else {
                    continue;
                };
                match point_distance(&a.points, &b.points) {
                    Ok(distance) => report.successive.push(MeshDistance {
                        scheme,
                        epsilon: eps,
                        coarse: pair[0],
                        fine: pair[1],
                        distance,
                    }),
                    Err(e) => report.distance_errors.push(format!(
                        "{scheme}{}, meshes {} vs {}: {e}",
                        eps_label(eps),
                        pair[0],
                        pair[1]
                    )),
                }
            }
        }
        for &cells in &meshes {
            for (i, &ea) in epsilons.iter().enumerate() {
                for &eb in &epsilons[i + 1..] {
                    let (Some(a), Some(b)) = (report.curve(scheme, ea, cells), report.curve(scheme, eb, cells))
                    else {
                        continue;
                    };
                    let (Some(ea), Some(eb)) = (ea, eb) else { continue };
                    match point_distance(&a.points, &b.points) {
                        Ok(distance) => report.pairwise_epsilon.push(EpsilonDistance {
                            scheme,
                            cells,
                            a: ea,
                            b: eb,
                            distance,
                        }),
                        Err(e) => report
                            .distance_errors
                            .push(format!("{scheme} on {cells} cells, eps {ea} vs {eb}: {e}")),
                    }
                }
            }
        }
    }

    let columns = cfg.system.columns();
    let mut artifacts = Artifacts::default();
    for exact in &report.exact {
        artifacts.add(
            format!("curves/exact{}.csv", eps_tag(exact.epsilon)),
            points_csv(&exact.samples, columns),
        );
    }
    for (k, data) in report.data.iter().enumerate() {
        let tag = if shared.is_some() { String::new() } else { eps_tag(epsilons[k]) };
        artifacts.add(format!("curves/data{tag}.csv"), points_csv(data, columns));
    }
    for c in &report.curves {
        artifacts.add(
            format!("curves/{}{}_m{}.csv", c.scheme, eps_tag(c.epsilon), c.cells),
            points_csv(&c.points, columns),
        );
    }
    artifacts.add(REPORT_FILE, to_json_pretty(&report));
    let manifest = Manifest::new(Verb::Sweep, cfg, &artifacts);
    artifacts.add(Manifest::FILE, manifest.to_json());
    Ok(SweepOutcome { report, artifacts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig::from_json(
            r#"{
            "name": "t",
            "system": {"kind": "simplified"},
            "path": {"kind": "two_segment"},
            "schemes": ["roe"],
            "grid": {"x_min": -1, "x_max": 1, "cells": [200, 400]},
            "cfl": 0.9,
            "t_end": 0.5,
            "sweep": {
                "fixed": [1, 1], "side": "left", "family": 0, "xi_end": -1.5,
                "samples": {"kind": "component", "component": 0, "values": [1.4, 1.8]},
                "times": [0.3, 0.4, 0.5], "window": 0.3
            }
        }"#,
        )
        .unwrap()
    }

    #[test]
    fn sweep_reports_curves_and_distances() {
        let out = run_sweep(&small()).unwrap();
        let r = &out.report;
        assert_eq!(r.curves.len(), 2);
        assert!(r.curves.iter().all(|c| c.points.len() == 2 && c.failures.is_empty()));
        assert_eq!(r.successive.len(), 1);
        assert!(r.curves[0].distance_to_exact.unwrap() > 0.0);
        // data points sit on the exact curve
        let d = &r.data[0];
        assert!((d[1].state[1] - 0.530039370688997).abs() < 1e-10);
        assert!(out.artifacts.get("curves/exact.csv").unwrap().starts_with("xi,h,q,residual\n"));
        assert!(out.artifacts.get("curves/roe_m400.csv").is_some());
    }

    #[test]
    fn unreachable_samples_are_reported() {
        let mut cfg = small();
        cfg.sweep.as_mut().unwrap().samples = SampleSpec::Speed { values: vec![-40.0] };
        assert!(run_sweep(&cfg).is_err());
    }
}
