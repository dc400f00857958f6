//! Experiment configs shipped with the binary.

use crate::config::ExperimentConfig;
use crate::error::LabError;

macro_rules! builtins {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../configs/", $name, ".json")))),*]
    };
}

const BUILTINS: &[(&str, &str)] = builtins!(
    "simplified_rmp",
    "simplified_hugoniot",
    "dambreak",
    "contact_segments",
    "contact_equilibrium",
    "lake_at_rest",
    "twolayer_internal",
    "twolayer_external",
    "twolayer_epsilon",
);

pub fn names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|(n, _)| *n)
}

pub fn source(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Result<ExperimentConfig, LabError> {
    let text = source(name).ok_or_else(|| LabError::UnknownExperiment(name.into()))?;
    ExperimentConfig::from_json(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_is_valid_and_self_named() {
        for name in names() {
            let cfg = load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            cfg.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(cfg.name, name);
            assert!(!cfg.description.is_empty());
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(load("nope"), Err(LabError::UnknownExperiment(_))));
    }
}
