//! The `run` command: every scheme on every mesh, with profiles and
//! diagnostics.

use pathcons::diagnostics::{plateaus, MassLedger};
use pathcons::hugoniot::{extract_shock, rh_residual, stationary_contact_state, ExtractOptions, ScanWindow};
use pathcons::schemes::{run, Boundaries, Boundary, Grid, RunOptions, Solution};
use pathcons::systems::ShallowWater;
use pathcons::{Error, HyperbolicSystem, JumpModel, State};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{
    BottomSpec, BoundaryKind, ExperimentConfig, InitialSpec, SchemeId, SystemSpec, WindowSpec,
};
use crate::error::LabError;
use crate::model::{dispatch, state, stepper, LabModel, ModelVisitor};
use crate::output::{profile_csv, to_json_pretty, Artifacts, Manifest, Verb};

/// Initial data with everything resolved that does not depend on `N`.
#[derive(Clone, Debug)]
pub struct InitialData {
    spec: InitialSpec,
    bottom: Option<BottomSpec>,
    contact: Option<[f64; 3]>,
}

impl InitialData {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self, LabError> {
        let spec = cfg
            .initial
            .clone()
            .ok_or_else(|| LabError::validation("initial", "the run command needs initial data"))?;
        let mut contact = None;
        if let InitialSpec::StationaryContact { left } = &spec {
            let (SystemSpec::ShallowWater { g }, Some(BottomSpec::Step { left: sl, right: sr, .. })) =
                (cfg.system, cfg.bottom)
            else {
                return Err(LabError::validation("initial", "needs shallow water over a step"));
            };
            let wl = State([left[0], left[1], sl]);
            let wr = stationary_contact_state(&ShallowWater::new(g), &wl, sr)?;
            contact = Some(wr.0);
        }
        Ok(InitialData {
            spec,
            bottom: cfg.bottom,
            contact,
        })
    }

    pub fn value(&self, x: f64) -> Vec<f64> {
        match &self.spec {
            InitialSpec::Riemann { x0, left, right } => {
                if x < *x0 {
                    left.clone()
                } else {
                    right.clone()
                }
            }
            InitialSpec::Surface {
                x0,
                left_level,
                right_level,
                discharge,
            } => {
                let depth = self.bottom.map_or(0.0, |b| b.depth(x));
                let level = if x < *x0 { *left_level } else { *right_level };
                vec![depth + level, *discharge, depth]
            }
            InitialSpec::StationaryContact { left } => {
                let Some(BottomSpec::Step { x0, left: sl, .. }) = self.bottom else {
                    unreachable!("checked in new")
                };
                if x < x0 {
                    vec![left[0], left[1], sl]
                } else {
                    self.contact.expect("resolved in new").to_vec()
                }
            }
        }
    }

    /// The two far-field states (used for default flux rates).
    pub fn far_field(&self, cfg: &ExperimentConfig) -> (Vec<f64>, Vec<f64>) {
        match &self.spec {
            InitialSpec::Riemann { left, right, .. } => (left.clone(), right.clone()),
            _ => (self.value(cfg.grid.x_min), self.value(cfg.grid.x_max)),
        }
    }

    pub fn solution<const N: usize>(&self, grid: Grid) -> Result<Solution<N>, LabError> {
        // all values share the dimension of the far-field states
        let (l, r) = self.far_field_on(&grid);
        state::<N>(&l)?;
        state::<N>(&r)?;
        Ok(Solution::from_fn(grid, |x| {
            State(self.value(x).try_into().expect("dimension checked"))
        }))
    }

    fn far_field_on(&self, grid: &Grid) -> (Vec<f64>, Vec<f64>) {
        (self.value(grid.x_min), self.value(grid.x_max))
    }
}

pub fn boundaries<const N: usize>(
    cfg: &ExperimentConfig,
    init: &Solution<N>,
) -> Result<Boundaries<N>, LabError> {
    let side = |kind: &BoundaryKind, edge: State<N>| -> Result<Boundary<N>, LabError> {
        Ok(match kind {
            BoundaryKind::Free => Boundary::Free,
            BoundaryKind::Fixed => Boundary::Dirichlet(edge),
            BoundaryKind::Dirichlet { state: s } => Boundary::Dirichlet(state(s)?),
        })
    };
    Ok(Boundaries {
        left: side(&cfg.boundary.left, init.cells[0])?,
        right: side(&cfg.boundary.right, init.cells[init.cells.len() - 1])?,
    })
}

pub fn extract_options(
    component: usize,
    threshold: f64,
    window: WindowSpec,
    plateau_gap: usize,
    plateau_width: usize,
    merge_gap: usize,
) -> ExtractOptions {
    ExtractOptions {
        component,
        threshold,
        window: match window {
            WindowSpec::Whole => ScanWindow::Whole,
            WindowSpec::Fixed { x_min, x_max } => ScanWindow::Fixed { x_min, x_max },
            WindowSpec::SelfSimilar {
                origin,
                xi_min,
                xi_max,
            } => ScanWindow::SelfSimilar {
                origin,
                xi_min,
                xi_max,
            },
        },
        plateau_gap,
        plateau_width,
        merge_gap,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassRecord {
    pub component: usize,
    pub half_width: f64,
    pub rate: f64,
    pub max_deviation: f64,
    pub truncated_at: Option<f64>,
    pub times: Vec<f64>,
    pub numerical: Vec<f64>,
    pub exact: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShockRecord {
    pub xi: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub positions: Vec<[f64; 2]>,
    pub residual_nonconservative: f64,
    pub residual_conservative: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftRecord {
    /// `max_n max_i ‖uᵢⁿ − uᵢ⁰‖_∞`
    pub max: f64,
    /// `max_i ‖uᵢ − uᵢ⁰‖_∞` at the final time.
    pub final_max: f64,
    /// `Δx Σᵢ ‖uᵢ − uᵢ⁰‖_∞` at the final time.
    pub final_l1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlateauRecord {
    pub first: usize,
    pub last: usize,
    pub x_first: f64,
    pub x_last: f64,
    pub mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub scheme: SchemeId,
    pub cells: usize,
    pub dx: f64,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub t_final: f64,
    pub steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<MassRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shock: Option<ShockRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shock_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drift: Option<DriftRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plateaus: Option<Vec<PlateauRecord>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub experiment: String,
    pub runs: Vec<RunRecord>,
}

impl RunReport {
    pub fn find(&self, scheme: SchemeId, cells: usize) -> Option<&RunRecord> {
        self.runs.iter().find(|r| r.scheme == scheme && r.cells == cells)
    }
}

pub struct RunOutcome {
    pub report: RunReport,
    pub artifacts: Artifacts,
}

impl RunOutcome {
    pub fn failed(&self) -> bool {
        self.report.runs.iter().any(|r| !r.ok)
    }
}

pub const DIAGNOSTICS_FILE: &str = "diagnostics.json";

/// Runs every `(scheme, mesh)` pair of the config in parallel.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutcome, LabError> {
    cfg.validate()?;
    let init = InitialData::new(cfg)?;
    let results = dispatch(cfg.system, cfg.path, RunVisitor { cfg, init: &init })??;
    let mut artifacts = Artifacts::default();
    let mut runs = Vec::new();
    for (record, files) in results {
        runs.push(record);
        for (name, text) in files {
            artifacts.add(name, text);
        }
    }
    let report = RunReport {
        experiment: cfg.name.clone(),
        runs,
    };
    artifacts.add(DIAGNOSTICS_FILE, to_json_pretty(&report));
    let manifest = Manifest::new(Verb::Run, cfg, &artifacts);
    artifacts.add(Manifest::FILE, manifest.to_json());
    Ok(RunOutcome { report, artifacts })
}

type JobResult = (RunRecord, Vec<(String, String)>);

struct RunVisitor<'a> {
    cfg: &'a ExperimentConfig,
    init: &'a InitialData,
}

impl ModelVisitor for RunVisitor<'_> {
    type Output = Result<Vec<JobResult>, LabError>;

    fn visit<const N: usize, M: LabModel<N>>(self, model: M) -> Self::Output {
        let jobs: Vec<(SchemeId, usize)> = self
            .cfg
            .schemes
            .iter()
            .flat_map(|&s| self.cfg.grid.cells.iter().map(move |&m| (s, m)))
            .collect();
        jobs.par_iter()
            .map(|&(scheme, cells)| run_job::<N, M>(&model, self.cfg, self.init, scheme, cells))
            .collect()
    }
}

fn default_rate<const N: usize, M: JumpModel<N>>(
    model: &M,
    cfg: &ExperimentConfig,
    init: &InitialData,
    component: usize,
) -> Result<f64, LabError> {
    let sys = model.system();
    if !sys.conserved_rows().contains(&component) {
        return Err(LabError::validation(
            "diagnostics.mass.rate",
            "component has no flux; give the rate explicitly",
        ));
    }
    let (l, r) = init.far_field(cfg);
    let (fl, fr) = (sys.conserved_flux(&state(&l)?), sys.conserved_flux(&state(&r)?));
    Ok(fl[component] - fr[component])
}

fn sorted_union(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = a.iter().chain(b).copied().collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn run_job<const N: usize, M: LabModel<N>>(
    model: &M,
    cfg: &ExperimentConfig,
    init_data: &InitialData,
    scheme: SchemeId,
    cells: usize,
) -> Result<JobResult, LabError> {
    let grid = Grid::new(cfg.grid.x_min, cfg.grid.x_max, cells)?;
    let dx = grid.dx();
    let init: Solution<N> = init_data.solution(grid)?;
    let bc = boundaries(cfg, &init)?;
    let mut stepper = stepper(model, scheme, cfg.seed)?;
    let shock_times = cfg.diagnostics.shock.as_ref().map_or(&[][..], |s| &s.times[..]);
    let times = sorted_union(&cfg.output.snapshot_times, shock_times);
    let mut opts = RunOptions::new(cfg.t_end, cfg.cfl).with_snapshots(&times);
    if let Some(steps) = cfg.steps {
        opts.max_steps = steps;
    }

    let mut ledger = match &cfg.diagnostics.mass {
        Some(m) => {
            let rate = match m.rate {
                Some(r) => r,
                None => default_rate(model, cfg, init_data, m.component)?,
            };
            Some(MassLedger::new(&init, m.component, m.half_width, rate)?)
        }
        None => None,
    };
    let track_drift = cfg.diagnostics.drift;
    let mut max_drift = 0.0f64;
    let u0 = init.cells.clone();
    let observe = |sol: &Solution<N>| {
        if let Some(l) = ledger.as_mut() {
            l.record(sol);
        }
        if track_drift {
            for (u, v) in sol.cells.iter().zip(&u0) {
                max_drift = max_drift.max((*u - *v).norm_inf());
            }
        }
    };
    let outcome = run(&mut *stepper, init.clone(), &bc, &opts, observe);
    let (sol, snapshots, error) = match outcome {
        Ok(out) => (out.solution, out.snapshots, None),
        Err(f) if cfg.steps.is_some() && matches!(f.error, Error::StepLimit { .. }) => {
            (f.last, f.snapshots, None)
        }
        Err(f) => (f.last, f.snapshots, Some(f.error)),
    };
    if let Some(e) = &error {
        log::error!("{scheme} on {cells} cells failed at t = {}: {e}", sol.t);
    }

    let prefix = format!("profiles/{scheme}_m{cells}");
    let columns = cfg.system.columns();
    let mut files = Vec::new();
    if cfg.output.profiles {
        for (k, &t) in cfg.output.snapshot_times.iter().enumerate() {
            if let Some(s) = snapshots.iter().find(|s| s.t == t) {
                files.push((format!("{prefix}_t{k}.csv"), profile_csv(s, columns)));
            }
        }
    }
    let last_name = if error.is_some() { "last" } else { "final" };
    if cfg.output.profiles || error.is_some() {
        files.push((format!("{prefix}_{last_name}.csv"), profile_csv(&sol, columns)));
    }

    let mut record = RunRecord {
        scheme,
        cells,
        dx,
        ok: error.is_none(),
        error: error.as_ref().map(|e| e.to_string()),
        t_final: sol.t,
        steps: sol.step,
        mass: ledger.map(|l| MassRecord {
            component: l.component,
            half_width: l.half_width,
            rate: l.rate,
            max_deviation: l.max_deviation(),
            truncated_at: l.truncated_at,
            times: l.times,
            numerical: l.numerical,
            exact: l.exact,
        }),
        shock: None,
        shock_error: None,
        drift: None,
        plateaus: None,
    };
    if track_drift {
        let mut final_max = 0.0f64;
        let mut l1 = 0.0;
        for (u, v) in sol.cells.iter().zip(&u0) {
            let d = (*u - *v).norm_inf();
            final_max = final_max.max(d);
            l1 += d * dx;
        }
        record.drift = Some(DriftRecord {
            max: max_drift,
            final_max,
            final_l1: l1,
        });
    }
    if let Some(s) = &cfg.diagnostics.shock {
        let picked: Vec<Solution<N>> = snapshots
            .iter()
            .filter(|sn| s.times.contains(&sn.t))
            .cloned()
            .collect();
        let opts = extract_options(
            s.component,
            s.threshold,
            s.window,
            s.plateau_gap,
            s.plateau_width,
            s.merge_gap,
        );
        let fitted = extract_shock(&picked, &opts)
            .and_then(|fit| Ok((rh_residual(model, fit.xi, &fit.left, &fit.right)?, fit)));
        match fitted {
            Ok((res, fit)) => {
                record.shock = Some(ShockRecord {
                    xi: fit.xi,
                    left: fit.left.0.to_vec(),
                    right: fit.right.0.to_vec(),
                    positions: fit.positions.iter().map(|&(t, x)| [t, x]).collect(),
                    residual_nonconservative: res.nonconservative,
                    residual_conservative: res.conservative,
                })
            }
            Err(e) => record.shock_error = Some(e.to_string()),
        }
    }
    if let Some(p) = &cfg.diagnostics.plateaus {
        let found = plateaus(&sol, p.component, p.tolerance, p.min_width);
        record.plateaus = Some(
            found
                .iter()
                .map(|p| PlateauRecord {
                    first: p.first,
                    last: p.last,
                    x_first: sol.grid.center(p.first),
                    x_last: sol.grid.center(p.last),
                    mean: p.mean,
                })
                .collect(),
        );
    }
    Ok((record, files))
}
