//! Maximal quantum violation of the bilocality and star-network n-locality
//! inequalities for arbitrary two-qubit sources.
//!
//! The closed-form maxima live in [`criteria`]; [`correlations`] and
//! [`swap`] evaluate the same parameters for explicit measurements, and
//! [`oracle`] maximizes them numerically so the closed forms can be checked
//! without trusting any eigenvalue routine.

pub mod classify;
pub mod correlations;
pub mod criteria;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod qstate;
pub mod report;
pub mod swap;

pub use classify::{classify_pair, RegionFlags, ScanFamily, ScanRow};
pub use correlations::{bilocality_value, star_value, BilocalSettings, BranchSettings, NetworkValue, StarSettings};
pub use criteria::{
    bilocality_max, chsh_max, separable_bilocality_max, separable_star_max, star_max, t_spectrum, MaxReport, TSpectrum,
};
pub use error::{Error, Result};
pub use oracle::{CentralClass, OptimizerConfig, OptimumCertificate};
pub use qstate::{BellState, CorrelationMatrix, MeasurementVector, TwoQubitState};
pub use report::AnalysisReport;
