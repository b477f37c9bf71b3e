//! JSON analysis report for a network of sources.

use serde::Serialize;

use crate::classify::{classify_pair, RegionFlags};
use crate::criteria::{self, violates};
use crate::error::{Error, Result};
use crate::qstate::TwoQubitState;

/// Round to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

/// CSV cell at 12 significant digits; magnitudes below 1e-6 use exponent form.
pub fn csv_num(x: f64) -> String {
    let r = round_sig(x, 12);
    if r != 0.0 && r.abs() < 1e-6 {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// JSON reports carry 15 significant digits.
pub fn json_num(x: f64) -> f64 {
    round_sig(x, 15)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Descending eigenvalues of `T^T T`.
    pub t: [f64; 3],
    pub chsh_max: f64,
    pub chsh_violation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub seed: u64,
    pub n: usize,
    pub links: Vec<LinkReport>,
    pub chsh_max: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bilocality_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star_violation: Option<bool>,
    /// Network maximum over unrestricted separable central settings.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separable_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flags: Option<RegionFlags>,
}

/// Closed-form analysis. One source reports CHSH only; two add the
/// bilocality maximum and region flags; more report the star maximum.
pub fn analyze(states: &[TwoQubitState], seed: u64) -> Result<AnalysisReport> {
    if states.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    let max = criteria::max_report(states)?;
    let links = states
        .iter()
        .zip(&max.spectra)
        .zip(&max.chsh_per_link)
        .map(|((s, spec), &chsh)| LinkReport {
            label: s.label().map(str::to_owned),
            t: spec.as_array().map(json_num),
            chsh_max: json_num(chsh),
            chsh_violation: violates(chsh),
        })
        .collect();
    let n = states.len();
    let network = (n > 1).then_some(max.biloc_or_star);
    Ok(AnalysisReport {
        seed,
        n,
        links,
        chsh_max: max.chsh_per_link.iter().copied().map(json_num).collect(),
        bilocality_max: if n == 2 { network.map(json_num) } else { None },
        star_max: network.map(json_num),
        star_violation: network.map(violates),
        separable_max: if n > 1 { Some(json_num(criteria::separable_from_spectra(&max.spectra)?)) } else { None },
        flags: (n == 2).then(|| classify_pair(&states[0], &states[1])),
    })
}
