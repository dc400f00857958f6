//! Static dispatch from configuration ids to concrete (system, path) models
//! and time steppers.

use pathcons::paths::{EpsilonPath, EquilibriumPath, Segments, TwoSegment};
use pathcons::schemes::{Glimm, Godunov, LaxFriedrichs, ModifiedLaxFriedrichs, Roe, TimeStepper};
use pathcons::systems::{ShallowWater, Simplified, TwoLayer};
use pathcons::{JumpModel, Model, State};

use crate::config::{PathSpec, SchemeId, SystemSpec};
use crate::error::LabError;

pub type Stepper<const N: usize> = Box<dyn TimeStepper<N> + Send>;

/// A model the lab can run.
pub trait LabModel<const N: usize>: JumpModel<N> + Clone + Send + Sync + 'static {
    /// Steppers that exist only for this model (exact Riemann solvers).
    fn special_stepper(&self, _id: SchemeId, _seed: u64) -> Option<Stepper<N>> {
        None
    }
}

impl LabModel<2> for Model<Simplified, TwoSegment> {
    fn special_stepper(&self, id: SchemeId, seed: u64) -> Option<Stepper<2>> {
        simplified_stepper(id, seed)
    }
}

impl LabModel<2> for Model<Simplified, Segments> {
    fn special_stepper(&self, id: SchemeId, seed: u64) -> Option<Stepper<2>> {
        simplified_stepper(id, seed)
    }
}

impl LabModel<3> for Model<ShallowWater, Segments> {}
impl LabModel<3> for Model<ShallowWater, EquilibriumPath> {}
impl LabModel<4> for Model<TwoLayer, Segments> {}
impl LabModel<4> for Model<TwoLayer, EpsilonPath> {}

fn simplified_stepper(id: SchemeId, seed: u64) -> Option<Stepper<2>> {
    match id {
        SchemeId::Godunov => Some(Box::new(Godunov)),
        SchemeId::Glimm => Some(Box::new(Glimm::new(seed))),
        _ => None,
    }
}

pub fn stepper<const N: usize, M: LabModel<N>>(
    model: &M,
    id: SchemeId,
    seed: u64,
) -> Result<Stepper<N>, LabError> {
    Ok(match id {
        SchemeId::Roe => Box::new(Roe::new(model.clone())),
        SchemeId::LaxFriedrichs => Box::new(LaxFriedrichs::new(model.clone())),
        SchemeId::ModifiedLaxFriedrichs => Box::new(ModifiedLaxFriedrichs::new(model.clone())),
        SchemeId::Godunov | SchemeId::Glimm => model
            .special_stepper(id, seed)
            .ok_or_else(|| LabError::validation("schemes", format!("{id} is not available here")))?,
    })
}

/// Generic continuation invoked with the concrete model.
pub trait ModelVisitor {
    type Output;
    fn visit<const N: usize, M: LabModel<N>>(self, model: M) -> Self::Output;
}

pub fn dispatch<V: ModelVisitor>(
    system: SystemSpec,
    path: PathSpec,
    visitor: V,
) -> Result<V::Output, LabError> {
    Ok(match (system, path) {
        (SystemSpec::Simplified, PathSpec::TwoSegment) => {
            visitor.visit(Model::new(Simplified, TwoSegment))
        }
        (SystemSpec::Simplified, PathSpec::Segments) => visitor.visit(Model::new(Simplified, Segments)),
        (SystemSpec::ShallowWater { g }, PathSpec::Segments) => {
            visitor.visit(Model::new(ShallowWater::new(g), Segments))
        }
        (SystemSpec::ShallowWater { g }, PathSpec::Equilibrium) => {
            let sw = ShallowWater::new(g);
            visitor.visit(Model::new(sw, EquilibriumPath::new(sw)))
        }
        (SystemSpec::TwoLayer { g, r }, PathSpec::Segments) => {
            visitor.visit(Model::new(TwoLayer::new(g, r), Segments))
        }
        (SystemSpec::TwoLayer { g, r }, PathSpec::Epsilon { eps }) => {
            visitor.visit(Model::new(TwoLayer::new(g, r), EpsilonPath::new(eps)?))
        }
        _ => return Err(LabError::validation("path.kind", "path family not available for this system")),
    })
}

/// `values` as a state of dimension `N` (lengths are checked by validation).
pub fn state<const N: usize>(values: &[f64]) -> Result<State<N>, LabError> {
    let arr: [f64; N] = values.try_into().map_err(|_| {
        LabError::validation("", format!("expected {N} components, got {}", values.len()))
    })?;
    Ok(State(arr))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Dim;
    impl ModelVisitor for Dim {
        type Output = usize;
        fn visit<const N: usize, M: LabModel<N>>(self, _model: M) -> usize {
            N
        }
    }

    #[test]
    fn dispatch_picks_the_dimension() {
        let sw = SystemSpec::ShallowWater { g: 9.81 };
        let tl = SystemSpec::TwoLayer { g: 9.81, r: 0.98 };
        assert_eq!(dispatch(SystemSpec::Simplified, PathSpec::TwoSegment, Dim).unwrap(), 2);
        assert_eq!(dispatch(sw, PathSpec::Equilibrium, Dim).unwrap(), 3);
        assert_eq!(dispatch(tl, PathSpec::Epsilon { eps: 0.05 }, Dim).unwrap(), 4);
        assert!(dispatch(tl, PathSpec::Equilibrium, Dim).is_err());
    }

    #[test]
    fn exact_solvers_only_for_the_simplified_system() {
        let m = Model::new(Simplified, TwoSegment);
        assert!(stepper(&m, SchemeId::Glimm, 0).is_ok());
        let m = Model::new(TwoLayer::default(), Segments);
        assert!(stepper(&m, SchemeId::Godunov, 0).is_err());
        assert!(stepper(&m, SchemeId::Roe, 0).is_ok());
    }
}
