//! CSV serialization and artifact directories.

use std::path::{Path, PathBuf};

use pathcons::hugoniot::HugoniotSample;
use pathcons::schemes::Solution;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::LabError;

/// 17 significant digits: enough for an exact round trip.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn row(out: &mut String, fields: impl IntoIterator<Item = String>) {
    let mut first = true;
    for f in fields {
        if !first {
            out.push(',');
        }
        out.push_str(&f);
        first = false;
    }
    out.push('\n');
}

/// Cell-center profile, one row per cell.
pub fn profile_csv<const N: usize>(sol: &Solution<N>, columns: &[&str]) -> String {
    let mut out = String::new();
    row(&mut out, std::iter::once("x".to_string()).chain(columns.iter().map(|c| c.to_string())));
    for (i, u) in sol.cells.iter().enumerate() {
        row(&mut out, std::iter::once(num(sol.grid.center(i))).chain(u.iter().map(|&v| num(v))));
    }
    out
}

/// Hugoniot curve: speed, free state, RH residual.
pub fn curve_csv<const N: usize>(samples: &[HugoniotSample<N>], columns: &[&str]) -> String {
    let mut out = String::new();
    let header = std::iter::once("xi".to_string())
        .chain(columns.iter().map(|c| c.to_string()))
        .chain(std::iter::once("residual".to_string()));
    row(&mut out, header);
    for s in samples {
        let fields = std::iter::once(num(s.xi))
            .chain(s.state.iter().map(|&v| num(v)))
            .chain(std::iter::once(num(s.residual)));
        row(&mut out, fields);
    }
    out
}

/// Parses a CSV written by this module back into its header and rows.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), String> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or("empty file")?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let r: Result<Vec<f64>, _> = line.split(',').map(str::parse).collect();
        let r = r.map_err(|e| format!("row {}: {e}", k + 1))?;
        if r.len() != header.len() {
            return Err(format!("row {}: {} fields, header has {}", k + 1, r.len(), header.len()));
        }
        rows.push(r);
    }
    Ok((header, rows))
}

/// Files produced by one command, kept in memory until written.
#[derive(Clone, Debug, Default)]
pub struct Artifacts {
    /// Relative path and contents, in writing order.
    pub files: Vec<(String, String)>,
}

impl Artifacts {
    pub fn add(&mut self, name: impl Into<String>, contents: String) {
        self.files.push((name.into(), contents));
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, LabError> {
        let mut written = Vec::new();
        for (name, contents) in &self.files {
            let path = dir.join(name);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent).map_err(|e| LabError::io(parent, e))?;
            }
            std::fs::write(&path, contents).map_err(|e| LabError::io(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verb {
    Run,
    Sweep,
}

/// Everything needed to reproduce a set of artifacts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub tool: String,
    pub tool_version: String,
    pub core_version: String,
    pub verb: Verb,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub files: Vec<String>,
}

impl Manifest {
    pub const FILE: &'static str = "manifest.json";

    pub fn new(verb: Verb, config: &ExperimentConfig, artifacts: &Artifacts) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME").into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            core_version: pathcons::VERSION.into(),
            verb,
            seed: config.seed,
            config: config.clone(),
            files: artifacts.files.iter().map(|(n, _)| n.clone()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }

    /// `Some` when the text is a manifest rather than a bare config.
    pub fn detect(text: &str) -> Option<Result<Manifest, LabError>> {
        let value: serde_json::Value = serde_json::from_str(text).ok()?;
        value.get("verb")?;
        value.get("config")?;
        let de = &mut serde_json::Deserializer::from_str(text);
        Some(serde_path_to_error::deserialize(de).map_err(|e| {
            LabError::validation(e.path().to_string(), e.into_inner().to_string())
        }))
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
