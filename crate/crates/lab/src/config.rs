//! Experiment configuration: a JSON document describing the system, path,
//! schemes, grid, initial data, diagnostics and an optional Hugoniot sweep.

use std::fmt;
use std::path::Path;

use pathcons::systems::GRAVITY;
use serde::{Deserialize, Serialize};

use crate::error::LabError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub system: SystemSpec,
    pub path: PathSpec,
    pub schemes: Vec<SchemeId>,
    pub grid: GridSpec,
    pub cfl: f64,
    pub t_end: f64,
    /// Run this many steps instead of stopping at `t_end` (which then only
    /// bounds the simulated time).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<BottomSpec>,
    #[serde(default)]
    pub boundary: BoundarySpec,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub diagnostics: DiagnosticsSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    /// Offset of the van der Corput sequence used by Glimm's scheme.
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemSpec {
    Simplified,
    ShallowWater {
        #[serde(default = "default_gravity")]
        g: f64,
    },
    TwoLayer {
        #[serde(default = "default_gravity")]
        g: f64,
        #[serde(default = "default_density_ratio")]
        r: f64,
    },
}

fn default_gravity() -> f64 {
    GRAVITY
}

fn default_density_ratio() -> f64 {
    0.98
}

impl SystemSpec {
    pub fn dimension(&self) -> usize {
        match self {
            SystemSpec::Simplified => 2,
            SystemSpec::ShallowWater { .. } => 3,
            SystemSpec::TwoLayer { .. } => 4,
        }
    }

    pub fn columns(&self) -> &'static [&'static str] {
        match self {
            SystemSpec::Simplified => &["h", "q"],
            SystemSpec::ShallowWater { .. } => &["h", "q", "sigma"],
            SystemSpec::TwoLayer { .. } => &["h1", "q1", "h2", "q2"],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PathSpec {
    /// `h` first, then `q` (simplified system only).
    TwoSegment,
    Segments,
    /// Stationary-equilibrium leg across σ jumps (shallow water only).
    Equilibrium,
    /// Perturbed segments (two-layer system only).
    Epsilon { eps: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeId {
    Roe,
    LaxFriedrichs,
    ModifiedLaxFriedrichs,
    Godunov,
    Glimm,
}

impl SchemeId {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::Roe => "roe",
            SchemeId::LaxFriedrichs => "lax_friedrichs",
            SchemeId::ModifiedLaxFriedrichs => "modified_lax_friedrichs",
            SchemeId::Godunov => "godunov",
            SchemeId::Glimm => "glimm",
        }
    }

    /// Largest CFL number the scheme accepts.
    pub fn max_cfl(self) -> f64 {
        match self {
            SchemeId::Godunov | SchemeId::Glimm => 0.5,
            _ => 1.0,
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    /// One run per entry.
    pub cells: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    /// Full states on either side of `x0`.
    Riemann {
        x0: f64,
        left: Vec<f64>,
        right: Vec<f64>,
    },
    /// Shallow water: `h = H(x) + level`, constant discharge.
    Surface {
        x0: f64,
        left_level: f64,
        right_level: f64,
        #[serde(default)]
        discharge: f64,
    },
    /// Shallow water over a step bottom: `(h, q)` upstream of the step, the
    /// stationary-contact state downstream.
    StationaryContact { left: [f64; 2] },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BottomSpec {
    Flat {
        depth: f64,
    },
    /// `H(x) = base − amplitude · exp(−((x − center)/width)²)`
    Bump {
        base: f64,
        amplitude: f64,
        center: f64,
        width: f64,
    },
    Step {
        x0: f64,
        left: f64,
        right: f64,
    },
}

impl BottomSpec {
    pub fn depth(&self, x: f64) -> f64 {
        match *self {
            BottomSpec::Flat { depth } => depth,
            BottomSpec::Bump {
                base,
                amplitude,
                center,
                width,
            } => {
                let z = (x - center) / width;
                base - amplitude * (-z * z).exp()
            }
            BottomSpec::Step { x0, left, right } => {
                if x < x0 {
                    left
                } else {
                    right
                }
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    #[serde(default)]
    pub left: BoundaryKind,
    #[serde(default)]
    pub right: BoundaryKind,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundaryKind {
    #[default]
    Free,
    /// Ghost cell frozen at the initial value of the boundary cell.
    Fixed,
    Dirichlet {
        state: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    #[serde(default = "yes")]
    pub profiles: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            snapshot_times: Vec::new(),
            profiles: true,
        }
    }
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<MassSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shock: Option<ShockSpec>,
    /// Track `max_n ‖uⁿ − u⁰‖_∞` and the final deviation from the initial
    /// data (for steady states).
    #[serde(default)]
    pub drift: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plateaus: Option<PlateauSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassSpec {
    pub component: usize,
    pub half_width: f64,
    /// Net inflow rate; defaults to the flux difference of the Riemann data.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShockSpec {
    #[serde(default)]
    pub component: usize,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// Snapshot times used for the speed fit.
    pub times: Vec<f64>,
    #[serde(default)]
    pub window: WindowSpec,
    #[serde(default = "default_gap")]
    pub plateau_gap: usize,
    #[serde(default = "default_width")]
    pub plateau_width: usize,
    #[serde(default = "default_merge")]
    pub merge_gap: usize,
}

fn default_threshold() -> f64 {
    0.1
}
fn default_gap() -> usize {
    3
}
fn default_width() -> usize {
    5
}
fn default_merge() -> usize {
    2
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WindowSpec {
    #[default]
    Whole,
    Fixed {
        x_min: f64,
        x_max: f64,
    },
    SelfSimilar {
        origin: f64,
        xi_min: f64,
        xi_max: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateauSpec {
    pub component: usize,
    pub tolerance: f64,
    pub min_width: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideSpec {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// State held fixed on `side` of every shock.
    pub fixed: Vec<f64>,
    pub side: SideSpec,
    /// 0-based characteristic family the curve bifurcates from.
    pub family: usize,
    /// Exact curve traced from `λ_family(fixed)` to this speed.
    pub xi_end: f64,
    #[serde(default = "default_trace_steps")]
    pub trace_steps: usize,
    /// Points of the exact curve used as Riemann data.
    pub samples: SampleSpec,
    /// Cell counts of the numerical runs (default: `grid.cells`).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub meshes: Vec<usize>,
    /// Position of the initial discontinuity.
    #[serde(default)]
    pub origin: f64,
    /// Snapshot times of each run; the shock speed is fitted over them.
    pub times: Vec<f64>,
    /// The extraction window is `ξ ± window` around the exact speed.
    pub window: f64,
    #[serde(default)]
    pub component: usize,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_gap")]
    pub plateau_gap: usize,
    #[serde(default = "default_width")]
    pub plateau_width: usize,
    /// Path parameters swept for the epsilon family (default: the
    /// configured one only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub epsilons: Vec<f64>,
    /// Path parameter of the exact curve that supplies the Riemann data
    /// (default: each run uses its own).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_epsilon: Option<f64>,
}

fn default_trace_steps() -> usize {
    400
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SampleSpec {
    /// Points where the free state's `component` takes each value.
    Component { component: usize, values: Vec<f64> },
    /// Points at the given shock speeds.
    Speed { values: Vec<f64> },
}

/// Accumulates validation failures as `(field path, message)`.
#[derive(Default)]
struct Issues(Vec<(String, String)>);

impl Issues {
    fn push(&mut self, path: impl Into<String>, msg: impl Into<String>) {
        self.0.push((path.into(), msg.into()));
    }

    fn check(&mut self, ok: bool, path: impl Into<String>, msg: impl Into<String>) {
        if !ok {
            self.push(path, msg);
        }
    }
}

fn finite(x: f64) -> bool {
    x.is_finite()
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, LabError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            LabError::Validation {
                path: if path == "." { String::new() } else { path },
                message: e.into_inner().to_string(),
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Semantic checks; every failure names the offending field.
    pub fn validate(&self) -> Result<(), LabError> {
        let mut v = Issues::default();
        let n = self.system.dimension();
        self.validate_system(&mut v);
        v.check(!self.name.is_empty(), "name", "must not be empty");
        v.check(
            self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-'),
            "name",
            "only ASCII letters, digits, '_' and '-' are allowed",
        );
        v.check(!self.schemes.is_empty(), "schemes", "at least one scheme is required");
        v.check(
            self.cfl > 0.0 && self.cfl <= 1.0,
            "cfl",
            format!("must lie in (0, 1], got {}", self.cfl),
        );
        for (k, s) in self.schemes.iter().enumerate() {
            if self.cfl > s.max_cfl() {
                v.push(
                    format!("schemes[{k}]"),
                    format!("{s} requires cfl <= {}, got {}", s.max_cfl(), self.cfl),
                );
            }
            let simplified_only = matches!(s, SchemeId::Godunov | SchemeId::Glimm);
            if simplified_only && self.system != SystemSpec::Simplified {
                v.push(format!("schemes[{k}]"), format!("{s} needs the simplified system"));
            }
        }
        v.check(
            finite(self.t_end) && self.t_end > 0.0,
            "t_end",
            "must be positive and finite",
        );
        if let Some(steps) = self.steps {
            v.check(steps > 0, "steps", "must be positive");
        }
        let g = &self.grid;
        v.check(
            finite(g.x_min) && finite(g.x_max) && g.x_min < g.x_max,
            "grid",
            "x_min < x_max required",
        );
        v.check(!g.cells.is_empty(), "grid.cells", "at least one mesh is required");
        for (k, &m) in g.cells.iter().enumerate() {
            v.check(m >= 3, format!("grid.cells[{k}]"), "at least 3 cells required");
        }
        if let Some(init) = &self.initial {
            self.validate_initial(&mut v, init, n);
        }
        if let Some(b) = &self.bottom {
            v.check(
                matches!(self.system, SystemSpec::ShallowWater { .. }),
                "bottom",
                "a bottom only applies to shallow water",
            );
            let ok = match *b {
                BottomSpec::Flat { depth } => finite(depth),
                BottomSpec::Bump {
                    base,
                    amplitude,
                    center,
                    width,
                } => finite(base) && finite(amplitude) && finite(center) && width > 0.0,
                BottomSpec::Step { x0, left, right } => finite(x0) && finite(left) && finite(right),
            };
            v.check(ok, "bottom", "parameters must be finite (bump width positive)");
        }
        for (side, b) in [("left", &self.boundary.left), ("right", &self.boundary.right)] {
            if let BoundaryKind::Dirichlet { state } = b {
                self.check_state(&mut v, &format!("boundary.{side}.state"), state, n);
            }
        }
        for (k, &t) in self.output.snapshot_times.iter().enumerate() {
            v.check(
                t >= 0.0 && t <= self.t_end,
                format!("output.snapshot_times[{k}]"),
                "must lie in [0, t_end]",
            );
        }
        self.validate_diagnostics(&mut v, n);
        if let Some(sw) = &self.sweep {
            self.validate_sweep(&mut v, sw, n);
        }
        match v.0.into_iter().next() {
            None => Ok(()),
            Some((path, message)) => Err(LabError::Validation { path, message }),
        }
    }

    fn validate_system(&self, v: &mut Issues) {
        match self.system {
            SystemSpec::Simplified => {}
            SystemSpec::ShallowWater { g } => {
                v.check(g > 0.0 && finite(g), "system.g", "must be positive");
            }
            SystemSpec::TwoLayer { g, r } => {
                v.check(g > 0.0 && finite(g), "system.g", "must be positive");
                v.check((0.0..1.0).contains(&r), "system.r", "must lie in [0, 1)");
            }
        }
        let ok = matches!(
            (self.system, self.path),
            (SystemSpec::Simplified, PathSpec::TwoSegment | PathSpec::Segments)
                | (SystemSpec::ShallowWater { .. }, PathSpec::Segments | PathSpec::Equilibrium)
                | (SystemSpec::TwoLayer { .. }, PathSpec::Segments | PathSpec::Epsilon { .. })
        );
        v.check(ok, "path.kind", "path family not available for this system");
        if let PathSpec::Epsilon { eps } = self.path {
            v.check(eps >= 0.0 && finite(eps), "path.eps", "must be finite and non-negative");
        }
    }

    fn check_state(&self, v: &mut Issues, path: &str, s: &[f64], n: usize) {
        if s.len() != n {
            v.push(path, format!("expected {n} components, got {}", s.len()));
        } else if !s.iter().all(|x| x.is_finite()) {
            v.push(path, "components must be finite");
        }
    }

    fn validate_initial(&self, v: &mut Issues, init: &InitialSpec, n: usize) {
        let sw = matches!(self.system, SystemSpec::ShallowWater { .. });
        match init {
            InitialSpec::Riemann { x0, left, right } => {
                v.check(finite(*x0), "initial.x0", "must be finite");
                self.check_state(v, "initial.left", left, n);
                self.check_state(v, "initial.right", right, n);
            }
            InitialSpec::Surface { x0, .. } => {
                v.check(sw, "initial.kind", "surface data needs shallow water");
                v.check(finite(*x0), "initial.x0", "must be finite");
                v.check(self.bottom.is_some(), "bottom", "surface data needs a bottom");
            }
            InitialSpec::StationaryContact { left } => {
                v.check(sw, "initial.kind", "a stationary contact needs shallow water");
                v.check(
                    matches!(self.bottom, Some(BottomSpec::Step { .. })),
                    "bottom",
                    "a stationary contact needs a step bottom",
                );
                v.check(left[0] > 0.0, "initial.left[0]", "depth must be positive");
            }
        }
    }

    fn validate_diagnostics(&self, v: &mut Issues, n: usize) {
        let d = &self.diagnostics;
        if let Some(m) = &d.mass {
            v.check(m.component < n, "diagnostics.mass.component", "out of range");
            v.check(
                m.half_width > 0.0 && -m.half_width > self.grid.x_min && m.half_width < self.grid.x_max,
                "diagnostics.mass.half_width",
                "[-A, A] must lie inside the grid",
            );
        }
        if let Some(s) = &d.shock {
            v.check(s.component < n, "diagnostics.shock.component", "out of range");
            v.check(
                s.threshold > 0.0 && s.threshold < 1.0,
                "diagnostics.shock.threshold",
                "must lie in (0, 1)",
            );
            v.check(!s.times.is_empty(), "diagnostics.shock.times", "at least one time needed");
            for (k, &t) in s.times.iter().enumerate() {
                v.check(
                    t > 0.0 && t <= self.t_end,
                    format!("diagnostics.shock.times[{k}]"),
                    "must lie in (0, t_end]",
                );
            }
            v.check(s.plateau_width > 0, "diagnostics.shock.plateau_width", "must be positive");
        }
        if let Some(p) = &d.plateaus {
            v.check(p.component < n, "diagnostics.plateaus.component", "out of range");
            v.check(p.tolerance >= 0.0, "diagnostics.plateaus.tolerance", "must be non-negative");
        }
    }

    fn validate_sweep(&self, v: &mut Issues, s: &SweepSpec, n: usize) {
        self.check_state(v, "sweep.fixed", &s.fixed, n);
        v.check(s.family < n, "sweep.family", "out of range");
        v.check(s.trace_steps > 0, "sweep.trace_steps", "must be positive");
        v.check(finite(s.xi_end), "sweep.xi_end", "must be finite");
        match &s.samples {
            SampleSpec::Component { component, values } => {
                v.check(*component < n, "sweep.samples.component", "out of range");
                v.check(!values.is_empty(), "sweep.samples.values", "must not be empty");
            }
            SampleSpec::Speed { values } => {
                v.check(!values.is_empty(), "sweep.samples.values", "must not be empty");
            }
        }
        for (k, &m) in s.meshes.iter().enumerate() {
            v.check(m >= 3, format!("sweep.meshes[{k}]"), "at least 3 cells required");
        }
        v.check(
            s.origin > self.grid.x_min && s.origin < self.grid.x_max,
            "sweep.origin",
            "must lie inside the grid",
        );
        v.check(!s.times.is_empty(), "sweep.times", "at least one time needed");
        for (k, &t) in s.times.iter().enumerate() {
            v.check(
                t > 0.0 && t <= self.t_end,
                format!("sweep.times[{k}]"),
                "must lie in (0, t_end]",
            );
        }
        v.check(s.window > 0.0, "sweep.window", "must be positive");
        v.check(s.component < n, "sweep.component", "out of range");
        v.check(s.threshold > 0.0 && s.threshold < 1.0, "sweep.threshold", "must lie in (0, 1)");
        let epsilon_path = matches!(self.path, PathSpec::Epsilon { .. });
        if !s.epsilons.is_empty() || s.data_epsilon.is_some() {
            v.check(epsilon_path, "sweep.epsilons", "needs the epsilon path");
        }
        for (k, &e) in s.epsilons.iter().enumerate() {
            v.check(e >= 0.0 && finite(e), format!("sweep.epsilons[{k}]"), "must be non-negative");
        }
        if let Some(e) = s.data_epsilon {
            v.check(e >= 0.0 && finite(e), "sweep.data_epsilon", "must be non-negative");
        }
    }

    /// Mesh list used by a sweep.
    pub fn sweep_meshes(&self) -> Vec<usize> {
        match &self.sweep {
            Some(s) if !s.meshes.is_empty() => s.meshes.clone(),
            _ => self.grid.cells.clone(),
        }
    }

    /// The same configuration with the epsilon path parameter replaced.
    pub fn with_epsilon(&self, eps: f64) -> Self {
        let mut c = self.clone();
        c.path = PathSpec::Epsilon { eps };
        c
    }
}
