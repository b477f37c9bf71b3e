//! Closed-form maxima of the CHSH, bilocality and star n-locality
//! expressions over projective qubit measurements, all driven by the two
//! largest eigenvalues of `T^T T`.
//!
//! [`bilocality_max`] and [`star_max`] are maxima over central measurements
//! whose two settings use orthogonal vectors on every qubit, the class
//! reachable by a Bell-state measurement in locally rotated bases. With
//! unrestricted separable central settings the maxima are larger whenever
//! some source has `t1 != t2`; see [`separable_bilocality_max`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::qstate::{bell_state, BellState, CorrelationMatrix, TwoQubitState};

/// Descending eigenvalues of `T^T T`, i.e. the squared singular values of `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TSpectrum {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

impl TSpectrum {
    pub fn as_array(&self) -> [f64; 3] {
        [self.t1, self.t2, self.t3]
    }

    pub fn is_zero(&self) -> bool {
        self.t1 == 0.0
    }
}

/// Per-link CHSH maxima together with the network maximum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxReport {
    pub chsh_per_link: Vec<f64>,
    /// `B_max` for two links, `N_star` maximum otherwise (CHSH for one link).
    pub biloc_or_star: f64,
    pub spectra: Vec<TSpectrum>,
}

pub fn t_spectrum(t: &CorrelationMatrix) -> TSpectrum {
    let (values, _) = linalg::symmetric_eigen3(&t.gram());
    // T^T T is PSD; negative values are rounding noise
    let [t1, t2, t3] = values.map(|x| x.max(0.0));
    TSpectrum { t1, t2, t3 }
}

pub fn state_spectrum(rho: &TwoQubitState) -> TSpectrum {
    t_spectrum(&rho.correlation_matrix())
}

/// Horodecki maximum of the normalized CHSH expression, `sqrt(t1 + t2)`.
pub fn chsh_max(rho: &TwoQubitState) -> f64 {
    chsh_from_spectrum(&state_spectrum(rho))
}

pub fn chsh_from_spectrum(s: &TSpectrum) -> f64 {
    (s.t1 + s.t2).sqrt()
}

/// `sqrt(sqrt(t1A t1C) + sqrt(t2A t2C))`.
pub fn bilocality_max(rho_ab: &TwoQubitState, rho_bc: &TwoQubitState) -> f64 {
    bilocality_from_spectra(&state_spectrum(rho_ab), &state_spectrum(rho_bc))
}

pub fn bilocality_from_spectra(a: &TSpectrum, c: &TSpectrum) -> f64 {
    ((a.t1 * c.t1).sqrt() + (a.t2 * c.t2).sqrt()).sqrt()
}

/// `sqrt((prod t1)^(1/n) + (prod t2)^(1/n))` over the sources of a star network.
pub fn star_max(states: &[TwoQubitState]) -> Result<f64> {
    let spectra: Vec<TSpectrum> = states.iter().map(state_spectrum).collect();
    star_from_spectra(&spectra)
}

pub fn star_from_spectra(spectra: &[TSpectrum]) -> Result<f64> {
    if spectra.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    let inv_n = 1.0 / spectra.len() as f64;
    let first: f64 = spectra.iter().map(|s| s.t1).product();
    let second: f64 = spectra.iter().map(|s| s.t2).product();
    Ok((first.powf(inv_n) + second.powf(inv_n)).sqrt())
}

/// Maximum over unrestricted separable central settings,
/// `((t1A + t2A)(t1C + t2C))^(1/4)`, i.e. `sqrt(S_AB S_BC)`.
pub fn separable_bilocality_max(rho_ab: &TwoQubitState, rho_bc: &TwoQubitState) -> f64 {
    separable_from_spectra(&[state_spectrum(rho_ab), state_spectrum(rho_bc)]).expect("two sources")
}

/// Star analogue of [`separable_bilocality_max`]: `prod_i (t1_i + t2_i)^(1/(2n))`.
pub fn separable_star_max(states: &[TwoQubitState]) -> Result<f64> {
    let spectra: Vec<TSpectrum> = states.iter().map(state_spectrum).collect();
    separable_from_spectra(&spectra)
}

pub fn separable_from_spectra(spectra: &[TSpectrum]) -> Result<f64> {
    if spectra.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    let inv_n = 1.0 / spectra.len() as f64;
    Ok(spectra.iter().map(chsh_from_spectrum).product::<f64>().powf(inv_n))
}

/// Bilocality maximum with a maximally entangled first source, paired with
/// the CHSH maximum of `rho_bc`. The first never falls below the second.
pub fn phi_plus_comparison(rho_bc: &TwoQubitState) -> (f64, f64) {
    let phi = bell_state(BellState::PhiPlus);
    (bilocality_max(&phi, rho_bc), chsh_max(rho_bc))
}

/// All maxima for a network of `n >= 1` sources.
pub fn max_report(states: &[TwoQubitState]) -> Result<MaxReport> {
    if states.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    let spectra: Vec<TSpectrum> = states.iter().map(state_spectrum).collect();
    let chsh_per_link = spectra.iter().map(chsh_from_spectrum).collect();
    let biloc_or_star = if spectra.len() == 2 {
        bilocality_from_spectra(&spectra[0], &spectra[1])
    } else {
        star_from_spectra(&spectra)?
    };
    Ok(MaxReport { chsh_per_link, biloc_or_star, spectra })
}

/// Strict violation of a classical bound of one.
pub fn violates(value: f64) -> bool {
    value > 1.0
}
