//! The bilocality parameter `B = sqrt|I| + sqrt|J|` and its star-network
//! generalization `N = |I|^(1/n) + |J|^(1/n)` for explicit measurement
//! settings, computed two ways: the compact vector form `u . T v` and full
//! outcome distributions built from projector traces.
//!
//! Outcomes are bits; the observable eigenvalue of outcome `k` is `(-1)^k`.
//! The central node measures `bA.sigma x bC.sigma`, its reported bit being
//! the parity of the two sub-outcomes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Vec3};
use crate::qstate::{MeasurementVector, TwoQubitState};

/// Settings for the bilocality scenario with a separable central measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BilocalSettings {
    pub a0: MeasurementVector,
    pub a1: MeasurementVector,
    #[serde(rename = "bA0")]
    pub b_a0: MeasurementVector,
    #[serde(rename = "bA1")]
    pub b_a1: MeasurementVector,
    #[serde(rename = "bC0")]
    pub b_c0: MeasurementVector,
    #[serde(rename = "bC1")]
    pub b_c1: MeasurementVector,
    pub c0: MeasurementVector,
    pub c1: MeasurementVector,
}

impl BilocalSettings {
    /// `a_x = c_x = (z + (-1)^x x)/sqrt 2`, central node `z x z` then `x x x`.
    /// With two singlets these reach `B = sqrt 2`.
    pub fn branciard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = MeasurementVector::new([h, 0.0, h]).expect("unit");
        let minus = MeasurementVector::new([-h, 0.0, h]).expect("unit");
        Self {
            a0: plus,
            a1: minus,
            b_a0: MeasurementVector::Z,
            b_a1: MeasurementVector::X,
            b_c0: MeasurementVector::Z,
            b_c1: MeasurementVector::X,
            c0: plus,
            c1: minus,
        }
    }

    pub fn a(&self, x: usize) -> &MeasurementVector {
        if x == 0 { &self.a0 } else { &self.a1 }
    }

    pub fn b_a(&self, y: usize) -> &MeasurementVector {
        if y == 0 { &self.b_a0 } else { &self.b_a1 }
    }

    pub fn b_c(&self, y: usize) -> &MeasurementVector {
        if y == 0 { &self.b_c0 } else { &self.b_c1 }
    }

    pub fn c(&self, z: usize) -> &MeasurementVector {
        if z == 0 { &self.c0 } else { &self.c1 }
    }

    /// The same settings viewed as a two-branch star, with C as the second leaf.
    pub fn to_star(&self) -> StarSettings {
        StarSettings {
            branches: vec![
                BranchSettings { a0: self.a0, a1: self.a1, b0: self.b_a0, b1: self.b_a1 },
                BranchSettings { a0: self.c0, a1: self.c1, b0: self.b_c0, b1: self.b_c1 },
            ],
        }
    }
}

/// One leaf of a star network: the leaf's two observables and the central
/// node's two observables on the qubit it shares with that leaf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchSettings {
    pub a0: MeasurementVector,
    pub a1: MeasurementVector,
    pub b0: MeasurementVector,
    pub b1: MeasurementVector,
}

impl BranchSettings {
    pub fn branciard() -> Self {
        let s = BilocalSettings::branciard();
        Self { a0: s.a0, a1: s.a1, b0: s.b_a0, b1: s.b_a1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarSettings {
    pub branches: Vec<BranchSettings>,
}

/// `(I, J)` and the combined parameter (`B` or `N`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetworkValue {
    pub i: f64,
    pub j: f64,
    pub value: f64,
}

impl NetworkValue {
    fn bilocal(i: f64, j: f64) -> Self {
        Self { i, j, value: i.abs().sqrt() + j.abs().sqrt() }
    }
}

/// `I = 1/4 (a0+a1).T_AB bA0 * bC0.T_BC (c0+c1)`, `J` likewise with differences
/// and the `y = 1` central vectors.
pub fn bilocality_value(rho_ab: &TwoQubitState, rho_bc: &TwoQubitState, s: &BilocalSettings) -> NetworkValue {
    let t_ab = rho_ab.correlation_matrix();
    let t_bc = rho_bc.correlation_matrix();
    let a_sum = linalg::add(s.a0.as_array(), s.a1.as_array());
    let a_diff = linalg::sub(s.a0.as_array(), s.a1.as_array());
    let c_sum = linalg::add(s.c0.as_array(), s.c1.as_array());
    let c_diff = linalg::sub(s.c0.as_array(), s.c1.as_array());
    let i = 0.25 * t_ab.bilinear(&a_sum, s.b_a0.as_array()) * t_bc.bilinear(s.b_c0.as_array(), &c_sum);
    let j = 0.25 * t_ab.bilinear(&a_diff, s.b_a1.as_array()) * t_bc.bilinear(s.b_c1.as_array(), &c_diff);
    NetworkValue::bilocal(i, j)
}

/// `p(a, b, c | x, y, z)` for the separable central measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    // [x][y][z][a][b][c]
    probs: [[[[[[f64; 2]; 2]; 2]; 2]; 2]; 2],
}

impl OutcomeDistribution {
    pub fn from_fn(mut f: impl FnMut(usize, usize, usize, usize, usize, usize) -> f64) -> Self {
        let probs = std::array::from_fn(|x| {
            std::array::from_fn(|y| {
                std::array::from_fn(|z| {
                    std::array::from_fn(|a| std::array::from_fn(|b| std::array::from_fn(|c| f(x, y, z, a, b, c))))
                })
            })
        });
        Self { probs }
    }

    pub fn uniform() -> Self {
        Self::from_fn(|_, _, _, _, _, _| 0.125)
    }

    pub fn prob(&self, inputs: (usize, usize, usize), outputs: (usize, usize, usize)) -> f64 {
        let (x, y, z) = inputs;
        let (a, b, c) = outputs;
        self.probs[x][y][z][a][b][c]
    }

    /// The eight outcome probabilities for one input tuple.
    pub fn row(&self, x: usize, y: usize, z: usize) -> Result<[f64; 8]> {
        if x > 1 || y > 1 || z > 1 {
            return Err(Error::MissingInputTuple { x, y, z });
        }
        let mut out = [0.0; 8];
        for (k, p) in out.iter_mut().enumerate() {
            *p = self.probs[x][y][z][k >> 2][(k >> 1) & 1][k & 1];
        }
        Ok(out)
    }
}

/// Exact outcome distribution from projector traces on each source.
pub fn outcome_distribution(rho_ab: &TwoQubitState, rho_bc: &TwoQubitState, s: &BilocalSettings) -> OutcomeDistribution {
    // p_ab[x][y][a][ba] and p_bc[y][z][bc][c]
    let mut p_ab = [[[[0.0; 2]; 2]; 2]; 2];
    let mut p_bc = [[[[0.0; 2]; 2]; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            for a in 0..2 {
                for ba in 0..2 {
                    p_ab[x][y][a][ba] = joint_probability(rho_ab, s.a(x).as_array(), a, s.b_a(y).as_array(), ba);
                }
            }
        }
    }
    for y in 0..2 {
        for z in 0..2 {
            for bc in 0..2 {
                for c in 0..2 {
                    p_bc[y][z][bc][c] = joint_probability(rho_bc, s.b_c(y).as_array(), bc, s.c(z).as_array(), c);
                }
            }
        }
    }
    OutcomeDistribution::from_fn(|x, y, z, a, b, c| {
        let mut p = 0.0;
        for ba in 0..2 {
            let bc = b ^ ba;
            p += p_ab[x][y][a][ba] * p_bc[y][z][bc][c];
        }
        p
    })
}

/// `tr[(P_first x P_second) rho]` for outcome projectors on each qubit.
pub(crate) fn joint_probability(rho: &TwoQubitState, u: &Vec3, first: usize, v: &Vec3, second: usize) -> f64 {
    let op = linalg::kron2(&linalg::outcome_projector(u, first), &linalg::outcome_projector(v, second));
    linalg::trace_of_product(rho.entries(), &op).re
}

/// `<A_x B_y C_z> = sum (-1)^(a+b+c) p(a, b, c | x, y, z)`.
pub fn correlator_from_distribution(d: &OutcomeDistribution, x: usize, y: usize, z: usize) -> Result<f64> {
    let row = d.row(x, y, z)?;
    Ok(row
        .iter()
        .enumerate()
        .map(|(k, p)| if (k.count_ones() & 1) == 0 { *p } else { -*p })
        .sum())
}

/// Assemble `I`, `J`, `B` from the 8 correlators of a distribution.
pub fn value_from_distribution(d: &OutcomeDistribution) -> NetworkValue {
    let mut i = 0.0;
    let mut j = 0.0;
    for x in 0..2 {
        for z in 0..2 {
            i += correlator_from_distribution(d, x, 0, z).expect("binary inputs");
            let sign = if (x + z) % 2 == 0 { 1.0 } else { -1.0 };
            j += sign * correlator_from_distribution(d, x, 1, z).expect("binary inputs");
        }
    }
    NetworkValue::bilocal(0.25 * i, 0.25 * j)
}

/// Star-network parameter. Each source state is ordered (leaf, central).
/// `I = prod_i 1/2 (a_i0 + a_i1).T_i b_i0`, `J = prod_i 1/2 (a_i0 - a_i1).T_i b_i1`.
pub fn star_value(states: &[TwoQubitState], s: &StarSettings) -> Result<NetworkValue> {
    if states.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    if states.len() != s.branches.len() {
        return Err(Error::SettingsArityMismatch { states: states.len(), settings: s.branches.len() });
    }
    let mut i = 1.0;
    let mut j = 1.0;
    for (rho, br) in states.iter().zip(&s.branches) {
        let t = rho.correlation_matrix();
        let sum = linalg::add(br.a0.as_array(), br.a1.as_array());
        let diff = linalg::sub(br.a0.as_array(), br.a1.as_array());
        i *= 0.5 * t.bilinear(&sum, br.b0.as_array());
        j *= 0.5 * t.bilinear(&diff, br.b1.as_array());
    }
    let inv_n = 1.0 / states.len() as f64;
    Ok(NetworkValue { i, j, value: i.abs().powf(inv_n) + j.abs().powf(inv_n) })
}

/// JSON settings as parsed; vectors are normalized on conversion.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BilocalSettingsSpec {
    pub a0: Vec3,
    pub a1: Vec3,
    #[serde(rename = "bA0", default)]
    pub b_a0: Option<Vec3>,
    #[serde(rename = "bA1", default)]
    pub b_a1: Option<Vec3>,
    #[serde(rename = "bC0", default)]
    pub b_c0: Option<Vec3>,
    #[serde(rename = "bC1", default)]
    pub b_c1: Option<Vec3>,
    pub c0: Vec3,
    pub c1: Vec3,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSettingsSpec {
    pub a0: Vec3,
    pub a1: Vec3,
    pub b0: Vec3,
    pub b1: Vec3,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarSettingsSpec {
    pub branches: Vec<BranchSettingsSpec>,
}

/// Vectors whose norm deviates from one by more than this draw a warning.
pub const NORM_WARN_TOL: f64 = 1e-6;

/// Settings plus human-readable notes produced while parsing.
#[derive(Debug, Clone)]
pub struct Parsed<T> {
    pub settings: T,
    pub warnings: Vec<String>,
    /// Central-node vectors that were absent and took their defaults.
    pub defaulted_central: bool,
}

fn unit(name: &str, v: Vec3, warnings: &mut Vec<String>) -> Result<MeasurementVector> {
    let (m, norm) = MeasurementVector::normalized(v)
        .map_err(|_| Error::Parse(format!("settings vector `{name}` has zero or non-finite norm")))?;
    if (norm - 1.0).abs() > NORM_WARN_TOL {
        warnings.push(format!("settings vector `{name}` has norm {norm}; normalized"));
    }
    Ok(m)
}

/// Parse bilocal settings. Missing central vectors default to `z` (y = 0)
/// and `x` (y = 1) on both substations.
pub fn parse_bilocal_settings(text: &str) -> Result<Parsed<BilocalSettings>> {
    let spec: BilocalSettingsSpec = serde_json::from_str(text)?;
    let mut warnings = Vec::new();
    let mut defaulted_central = false;
    let mut central = |name: &str, v: Option<Vec3>, fallback: MeasurementVector, w: &mut Vec<String>| match v {
        Some(v) => unit(name, v, w),
        None => {
            defaulted_central = true;
            Ok(fallback)
        }
    };
    let b_a0 = central("bA0", spec.b_a0, MeasurementVector::Z, &mut warnings)?;
    let b_a1 = central("bA1", spec.b_a1, MeasurementVector::X, &mut warnings)?;
    let b_c0 = central("bC0", spec.b_c0, MeasurementVector::Z, &mut warnings)?;
    let b_c1 = central("bC1", spec.b_c1, MeasurementVector::X, &mut warnings)?;
    let settings = BilocalSettings {
        a0: unit("a0", spec.a0, &mut warnings)?,
        a1: unit("a1", spec.a1, &mut warnings)?,
        b_a0,
        b_a1,
        b_c0,
        b_c1,
        c0: unit("c0", spec.c0, &mut warnings)?,
        c1: unit("c1", spec.c1, &mut warnings)?,
    };
    Ok(Parsed { settings, warnings, defaulted_central })
}

pub fn parse_star_settings(text: &str) -> Result<Parsed<StarSettings>> {
    let spec: StarSettingsSpec = serde_json::from_str(text)?;
    let mut warnings = Vec::new();
    let mut branches = Vec::with_capacity(spec.branches.len());
    for (k, b) in spec.branches.into_iter().enumerate() {
        branches.push(BranchSettings {
            a0: unit(&format!("branches[{k}].a0"), b.a0, &mut warnings)?,
            a1: unit(&format!("branches[{k}].a1"), b.a1, &mut warnings)?,
            b0: unit(&format!("branches[{k}].b0"), b.b0, &mut warnings)?,
            b1: unit(&format!("branches[{k}].b1"), b.b1, &mut warnings)?,
        });
    }
    Ok(Parsed { settings: StarSettings { branches }, warnings, defaulted_central: false })
}
