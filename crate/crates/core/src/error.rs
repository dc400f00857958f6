use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("state outside the domain of the system: {0}")]
    Domain(String),

    #[error("hyperbolicity lost (quartic discriminant {discriminant:e}, max imaginary part {max_imag:e})")]
    HyperbolicityLoss { discriminant: f64, max_imag: f64 },

    #[error("eigenvalues not distinct: minimum gap {gap:e} below tolerance {tolerance:e}")]
    NotStrictlyHyperbolic { gap: f64, tolerance: f64 },

    #[error("eigenvector matrix ill conditioned (condition number {condition:e})")]
    Decomposition { condition: f64 },

    #[error("quadrature did not converge (last difference {achieved:e})")]
    Quadrature { achieved: f64 },

    #[error("path construction failed: {0}")]
    PathConstruction(String),

    #[error("Roe linearization violates the jump identity (residual {residual:e})")]
    RoeConstruction { residual: f64 },

    #[error("time step {dt:e} violates the CFL bound; required dt <= {required:e}")]
    Cfl { dt: f64, required: f64 },

    #[error("non-finite value produced in cell {cell}")]
    BlowUp { cell: usize },

    #[error("cell {cell}: {source}")]
    AtCell {
        cell: usize,
        #[source]
        source: alloc::boxed::Box<Error>,
    },

    #[error("step limit {steps} reached")]
    StepLimit { steps: usize },

    #[error("no solution: {reason} (residual {residual:e})")]
    NoSolution { reason: String, residual: f64 },

    #[error("shock extraction failed: found {fronts} fronts, expected exactly one")]
    Extraction { fronts: usize },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn at_cell(self, cell: usize) -> Self {
        Error::AtCell {
            cell,
            source: alloc::boxed::Box::new(self),
        }
    }
}
