use thiserror::Error;

/// Errors raised while building states, settings and analyses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state is not Hermitian: max |rho_ij - conj(rho_ji)| = {residual:.3e}")]
    NotHermitian { residual: f64 },

    #[error("state trace is not one: |tr(rho) - 1| = {residual:.3e}")]
    TraceNotOne { residual: f64 },

    #[error("state is not positive semidefinite: smallest eigenvalue = {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("parameter `{name}` = {value} is outside [{min}, {max}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("measurement vector is not unit norm: |v| = {norm}")]
    NotUnitVector { norm: f64 },

    #[error("correlation matrix entry t[{row}][{col}] = {value} is outside [-1, 1]")]
    CorrelationOutOfRange { row: usize, col: usize, value: f64 },

    #[error("network has no sources")]
    EmptyNetwork,

    #[error("settings describe {settings} branches but the network has {states} sources")]
    SettingsArityMismatch { states: usize, settings: usize },

    #[error("distribution has no row for inputs (x, y, z) = ({x}, {y}, {z})")]
    MissingInputTuple { x: usize, y: usize, z: usize },

    #[error("optimizer did not converge: best value {best}, gap to closed form {gap:.3e}")]
    NoConvergence { best: f64, gap: f64 },

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
