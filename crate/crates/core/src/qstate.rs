//! Two-qubit density matrices, the named state families used throughout, and
//! the Pauli decomposition `rho = (1 + r.sigma x 1 + 1 x s.sigma + sum t_nm sigma_n x sigma_m) / 4`.
//!
//! Basis order is |00>, |01>, |10>, |11>; Pauli indices run x, y, z.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat2, CMat4, Mat3, Vec3, C64, ONE, ZERO};

/// Tolerance for the Hermiticity, trace and positivity checks.
pub const STATE_TOL: f64 = 1e-9;

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    entries: CMat4,
    label: Option<String>,
}

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    /// Amplitudes in the computational basis, before the 1/sqrt(2) factor.
    /// Kept as exact small integers so projectors built from them are exact.
    pub fn unnormalized_amplitudes(self) -> [f64; 4] {
        match self {
            BellState::PhiPlus => [1.0, 0.0, 0.0, 1.0],
            BellState::PhiMinus => [1.0, 0.0, 0.0, -1.0],
            BellState::PsiPlus => [0.0, 1.0, 1.0, 0.0],
            BellState::PsiMinus => [0.0, 1.0, -1.0, 0.0],
        }
    }

    /// `|b><b|` with entries in {0, +-1/2}.
    pub fn projector(self) -> CMat4 {
        let amp = self.unnormalized_amplitudes();
        let mut out = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = C64::new(0.5 * amp[i] * amp[j], 0.0);
            }
        }
        out
    }

    pub fn name(self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BellState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BellState::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown Bell state `{s}` (expected phi+, phi-, psi+ or psi-)")))
    }
}

/// Validate a 4x4 complex matrix as a density matrix.
pub fn make_state(entries: CMat4) -> Result<TwoQubitState> {
    let residual = linalg::hermiticity_residual(&entries);
    if !(residual <= STATE_TOL) {
        return Err(Error::NotHermitian { residual });
    }
    let trace = linalg::trace(&entries);
    let residual = (trace - ONE).norm();
    if !(residual <= STATE_TOL) {
        return Err(Error::TraceNotOne { residual });
    }
    let min_eigenvalue = linalg::hermitian_eigenvalues(&entries)[0];
    if min_eigenvalue < -STATE_TOL {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    Ok(TwoQubitState { entries, label: None })
}

pub fn maximally_mixed() -> TwoQubitState {
    let mut entries = [[ZERO; 4]; 4];
    for (i, row) in entries.iter_mut().enumerate() {
        row[i] = C64::new(0.25, 0.0);
    }
    TwoQubitState { entries, label: Some("maximally mixed".into()) }
}

pub fn bell_state(which: BellState) -> TwoQubitState {
    TwoQubitState {
        entries: which.projector(),
        label: Some(which.name().into()),
    }
}

/// `v |psi-><psi-| + (1 - v) 1/4`.
pub fn werner_state(v: f64) -> Result<TwoQubitState> {
    check_unit_interval("v", v)?;
    let state = mix(&bell_state(BellState::PsiMinus), v, &maximally_mixed());
    Ok(state.with_label(format!("werner(v={v})")))
}

/// `v |psi-><psi-| + (1 - v) [lambda (|psi-><psi-| + |psi+><psi+|)/2 + (1 - lambda) 1/4]`,
/// white noise mixed with colored noise.
pub fn colored_noise_state(v: f64, lambda: f64) -> Result<TwoQubitState> {
    check_unit_interval("v", v)?;
    check_unit_interval("lambda", lambda)?;
    let psi_minus = bell_state(BellState::PsiMinus);
    let colored = mix(&psi_minus, 0.5, &bell_state(BellState::PsiPlus));
    let noise = mix(&colored, lambda, &maximally_mixed());
    Ok(mix(&psi_minus, v, &noise).with_label(format!("colored(v={v}, lambda={lambda})")))
}

/// `GG^dagger / tr(GG^dagger)` with G a 4x4 matrix of standard complex
/// Gaussians drawn from a ChaCha stream seeded by `seed`.
pub fn random_state(seed: u64) -> TwoQubitState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_state_with(&mut rng)
}

pub fn random_state_with<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    let mut g = [[ZERO; 4]; 4];
    for row in g.iter_mut() {
        for z in row.iter_mut() {
            *z = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
    }
    let mut rho = linalg::matmul(&g, &linalg::adjoint(&g));
    let tr = linalg::trace(&rho).re;
    for (i, row) in rho.iter_mut().enumerate() {
        for (j, z) in row.iter_mut().enumerate() {
            *z /= tr;
            if i == j {
                z.im = 0.0;
            }
        }
    }
    // restore exact Hermiticity lost to rounding in the product
    for i in 0..4 {
        for j in (i + 1)..4 {
            rho[j][i] = rho[i][j].conj();
        }
    }
    TwoQubitState { entries: rho, label: None }
}

/// Haar-random single-qubit unitary.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> CMat2 {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [a, b, c, d] = q.map(|x| x / n);
    [
        [C64::new(a, b), C64::new(c, d)],
        [C64::new(-c, d), C64::new(a, -b)],
    ]
}

/// `p a + (1 - p) b`. Convex combinations of states are states.
pub fn mix(a: &TwoQubitState, p: f64, b: &TwoQubitState) -> TwoQubitState {
    let mut entries = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            entries[i][j] = a.entries[i][j] * p + b.entries[i][j] * (1.0 - p);
        }
    }
    TwoQubitState { entries, label: None }
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name, value, min: 0.0, max: 1.0 })
    }
}

impl TwoQubitState {
    pub fn entries(&self) -> &CMat4 {
        &self.entries
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// `t_nm = tr[rho (sigma_n x sigma_m)]`.
    pub fn correlation_matrix(&self) -> CorrelationMatrix {
        let (t, imag) = linalg::pauli_correlations(&self.entries);
        debug_assert!(imag <= STATE_TOL, "imaginary residue {imag}");
        CorrelationMatrix { t }
    }

    /// Local Bloch vectors `r_n = tr[rho (sigma_n x 1)]`, `s_m = tr[rho (1 x sigma_m)]`.
    pub fn bloch_vectors(&self) -> (Vec3, Vec3) {
        let mut r = [0.0; 3];
        let mut s = [0.0; 3];
        for k in 0..3 {
            let left = linalg::kron2(&linalg::pauli(k + 1), &linalg::pauli(0));
            let right = linalg::kron2(&linalg::pauli(0), &linalg::pauli(k + 1));
            r[k] = linalg::trace_of_product(&self.entries, &left).re;
            s[k] = linalg::trace_of_product(&self.entries, &right).re;
        }
        (r, s)
    }

    pub fn purity(&self) -> f64 {
        linalg::trace_of_product(&self.entries, &self.entries).re
    }

    /// `(u1 x u2) rho (u1 x u2)^dagger`.
    pub fn apply_local_unitaries(&self, u1: &CMat2, u2: &CMat2) -> TwoQubitState {
        let u = linalg::kron2(u1, u2);
        let entries = linalg::matmul(&linalg::matmul(&u, &self.entries), &linalg::adjoint(&u));
        TwoQubitState { entries, label: self.label.clone() }
    }

    /// The same state with the two qubits exchanged; transposes `T`.
    pub fn swapped(&self) -> TwoQubitState {
        const PERM: [usize; 4] = [0, 2, 1, 3];
        let mut entries = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                entries[PERM[i]][PERM[j]] = self.entries[i][j];
            }
        }
        TwoQubitState { entries, label: self.label.clone() }
    }

    pub fn to_spec(&self) -> StateSpec {
        StateSpec::Matrix {
            label: self.label.clone(),
            re: self.entries.map(|row| row.map(|z| z.re)),
            im: self.entries.map(|row| row.map(|z| z.im)),
        }
    }
}

/// The real 3x3 matrix of Pauli correlators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix {
    t: Mat3,
}

impl CorrelationMatrix {
    pub fn new(t: Mat3) -> Result<Self> {
        for (row, values) in t.iter().enumerate() {
            for (col, &value) in values.iter().enumerate() {
                if !(value.abs() <= 1.0 + STATE_TOL) {
                    return Err(Error::CorrelationOutOfRange { row, col, value });
                }
            }
        }
        Ok(Self { t })
    }

    pub fn zero() -> Self {
        Self { t: [[0.0; 3]; 3] }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.t
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.t[row][col]
    }

    pub fn transpose(&self) -> Self {
        Self { t: linalg::transpose3(&self.t) }
    }

    /// `T v`.
    pub fn apply(&self, v: &Vec3) -> Vec3 {
        linalg::mat_vec(&self.t, v)
    }

    /// `T^T v`.
    pub fn apply_transpose(&self, v: &Vec3) -> Vec3 {
        linalg::mat_t_vec(&self.t, v)
    }

    /// `u . T v`, the correlator `<u.sigma x v.sigma>`.
    pub fn bilinear(&self, u: &Vec3, v: &Vec3) -> f64 {
        linalg::dot(u, &self.apply(v))
    }

    pub fn gram(&self) -> Mat3 {
        linalg::mat3_mul(&linalg::transpose3(&self.t), &self.t)
    }

    pub fn is_zero(&self) -> bool {
        self.t.iter().flatten().all(|&x| x == 0.0)
    }
}

/// Unit vector on the Bloch sphere defining the observable `v . sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MeasurementVector(Vec3);

impl MeasurementVector {
    pub const X: MeasurementVector = MeasurementVector([1.0, 0.0, 0.0]);
    pub const Y: MeasurementVector = MeasurementVector([0.0, 1.0, 0.0]);
    pub const Z: MeasurementVector = MeasurementVector([0.0, 0.0, 1.0]);

    pub fn new(v: Vec3) -> Result<Self> {
        let norm = linalg::norm(&v);
        if (norm - 1.0).abs() <= STATE_TOL {
            Ok(Self(v))
        } else {
            Err(Error::NotUnitVector { norm })
        }
    }

    /// Rescale any nonzero vector to unit length; also returns the original norm.
    pub fn normalized(v: Vec3) -> Result<(Self, f64)> {
        let norm = linalg::norm(&v);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotUnitVector { norm });
        }
        Ok((Self(linalg::scale(&v, 1.0 / norm)), norm))
    }

    /// Normalize without the nonzero check; the zero vector maps to `fallback`.
    pub(crate) fn direction_or(v: Vec3, fallback: MeasurementVector) -> Self {
        let norm = linalg::norm(&v);
        if norm > 0.0 {
            Self(linalg::scale(&v, 1.0 / norm))
        } else {
            fallback
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v: Vec3 = std::array::from_fn(|_| rng.sample(StandardNormal));
            if let Ok((m, _)) = Self::normalized(v) {
                return m;
            }
        }
    }

    pub fn as_array(&self) -> &Vec3 {
        &self.0
    }

    pub fn operator(&self) -> CMat2 {
        linalg::bloch_operator(&self.0)
    }
}

/// JSON description of a state: either explicit matrix entries or a named family.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum StateSpec {
    Matrix {
        #[serde(skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        re: [[f64; 4]; 4],
        im: [[f64; 4]; 4],
    },
    Family(FamilySpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    #[serde(default, rename = "lambda", skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub which: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Werner,
    Colored,
    Bell,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixSpec {
    #[serde(default)]
    label: Option<String>,
    re: [[f64; 4]; 4],
    im: [[f64; 4]; 4],
}

impl StateSpec {
    /// Parse either schema, rejecting unknown fields. The presence of a
    /// `family` key selects the family schema.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let is_family = value.as_object().is_some_and(|o| o.contains_key("family"));
        if is_family {
            Ok(StateSpec::Family(serde_json::from_value(value)?))
        } else {
            let m: MatrixSpec = serde_json::from_value(value)?;
            Ok(StateSpec::Matrix { label: m.label, re: m.re, im: m.im })
        }
    }

    pub fn build(&self) -> Result<TwoQubitState> {
        match self {
            StateSpec::Matrix { label, re, im } => {
                let mut entries = [[ZERO; 4]; 4];
                for i in 0..4 {
                    for j in 0..4 {
                        entries[i][j] = C64::new(re[i][j], im[i][j]);
                    }
                }
                let state = make_state(entries)?;
                Ok(match label {
                    Some(l) => state.with_label(l.clone()),
                    None => state,
                })
            }
            StateSpec::Family(f) => {
                let state = match f.family {
                    Family::Werner => werner_state(require(f.v, "v")?)?,
                    Family::Colored => colored_noise_state(require(f.v, "v")?, require(f.lambda, "lambda")?)?,
                    Family::Bell => {
                        let which = f
                            .which
                            .as_deref()
                            .ok_or_else(|| Error::Parse("missing field `which` for family `bell`".into()))?;
                        bell_state(which.parse()?)
                    }
                };
                Ok(match &f.label {
                    Some(l) => state.with_label(l.clone()),
                    None => state,
                })
            }
        }
    }
}

fn require(value: Option<f64>, name: &str) -> Result<f64> {
    value.ok_or_else(|| Error::Parse(format!("missing field `{name}`")))
}

/// Parse and validate a state from JSON text.
pub fn parse_state(text: &str) -> Result<TwoQubitState> {
    StateSpec::from_json(text)?.build()
}
