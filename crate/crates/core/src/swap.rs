//! Entanglement swapping with a complete Bell-state measurement at the
//! central node, and its equivalence with the separable pair
//! `sigma_z x sigma_z`, `sigma_x x sigma_x`.

use std::fmt::Write as _;

use crate::correlations::NetworkValue;
use crate::linalg::{self, CMat2, CMat4, CMatrix, Vec3, ZERO};
use crate::qstate::{BellState, MeasurementVector, TwoQubitState};

/// Bell outcomes indexed by the bit pair `b0 b1`: 00 phi+, 01 phi-, 10 psi+, 11 psi-.
pub const BSM_OUTCOMES: [BellState; 4] = [
    BellState::PhiPlus,
    BellState::PhiMinus,
    BellState::PsiPlus,
    BellState::PsiMinus,
];

/// Value of `B_y` for each Bell outcome, `(-1)^(b_y)`. Both `y` rows are
/// read from here and nowhere else.
pub const BSM_SIGNS: [[f64; 4]; 2] = [[1.0, 1.0, -1.0, -1.0], [1.0, -1.0, 1.0, -1.0]];

/// `p(a, b0 b1, c | x, z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BsmDistribution {
    // [x][z][a][b0b1][c]
    probs: [[[[[f64; 2]; 4]; 2]; 2]; 2],
}

impl BsmDistribution {
    pub fn from_fn(mut f: impl FnMut(usize, usize, usize, usize, usize) -> f64) -> Self {
        let probs = std::array::from_fn(|x| {
            std::array::from_fn(|z| {
                std::array::from_fn(|a| std::array::from_fn(|k| std::array::from_fn(|c| f(x, z, a, k, c))))
            })
        });
        Self { probs }
    }

    pub fn uniform() -> Self {
        Self::from_fn(|_, _, _, _, _| 1.0 / 16.0)
    }

    /// Probability of leaf outcomes `a`, `c` and Bell outcome `bell` (0..4, as `b0 b1`).
    pub fn prob(&self, x: usize, z: usize, a: usize, bell: usize, c: usize) -> f64 {
        self.probs[x][z][a][bell][c]
    }

    pub fn row_sum(&self, x: usize, z: usize) -> f64 {
        self.probs[x][z].iter().flatten().flatten().sum()
    }

    /// Total probability of a Bell outcome for inputs `(x, z)`.
    pub fn bell_marginal(&self, x: usize, z: usize, bell: usize) -> f64 {
        (0..2).flat_map(|a| (0..2).map(move |c| (a, c))).map(|(a, c)| self.probs[x][z][a][bell][c]).sum()
    }

    /// CSV with columns `x,z,a,b0,b1,c,p`, probabilities at 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,z,a,b0,b1,c,p\n");
        for x in 0..2 {
            for z in 0..2 {
                for a in 0..2 {
                    for k in 0..4 {
                        for c in 0..2 {
                            let p = crate::report::csv_num(self.probs[x][z][a][k][c]);
                            let _ = writeln!(out, "{x},{z},{a},{},{},{c},{p}", k >> 1, k & 1);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Exact BSM outcome distribution on `rho_ab (x) rho_bc`, qubits ordered
/// (A, B1, B2, C) with the Bell projector on (B1, B2).
pub fn bsm_distribution(
    rho_ab: &TwoQubitState,
    rho_bc: &TwoQubitState,
    a: [&MeasurementVector; 2],
    c: [&MeasurementVector; 2],
) -> BsmDistribution {
    let joint = CMatrix::from_fixed(rho_ab.entries()).kron(&CMatrix::from_fixed(rho_bc.entries()));
    let bell: Vec<CMatrix> = BSM_OUTCOMES.iter().map(|b| CMatrix::from_fixed(&b.projector())).collect();
    let leaf = |v: &MeasurementVector, k: usize| CMatrix::from_fixed(&linalg::outcome_projector(v.as_array(), k));
    BsmDistribution::from_fn(|x, z, oa, k, oc| {
        let op = leaf(a[x], oa).kron(&bell[k]).kron(&leaf(c[z], oc));
        op.trace_of_product(&joint).re
    })
}

/// `<A_x B_y C_z>` with `B_y` read off the Bell outcome through `BSM_SIGNS`.
pub fn bsm_correlator(d: &BsmDistribution, x: usize, y: usize, z: usize) -> f64 {
    let mut acc = 0.0;
    for a in 0..2 {
        for c in 0..2 {
            let leaf_sign = if (a + c) % 2 == 0 { 1.0 } else { -1.0 };
            for k in 0..4 {
                acc += leaf_sign * BSM_SIGNS[y][k] * d.prob(x, z, a, k, c);
            }
        }
    }
    acc
}

/// `I`, `J` and `B` assembled from BSM correlators.
pub fn bsm_value(d: &BsmDistribution) -> NetworkValue {
    let mut i = 0.0;
    let mut j = 0.0;
    for x in 0..2 {
        for z in 0..2 {
            i += bsm_correlator(d, x, 0, z);
            let sign = if (x + z) % 2 == 0 { 1.0 } else { -1.0 };
            j += sign * bsm_correlator(d, x, 1, z);
        }
    }
    let (i, j) = (0.25 * i, 0.25 * j);
    NetworkValue { i, j, value: i.abs().sqrt() + j.abs().sqrt() }
}

/// `sum_k sign(y, k) |k><k|` over the Bell basis.
pub fn bsm_observable(y: usize) -> CMat4 {
    let mut out = [[ZERO; 4]; 4];
    for (k, bell) in BSM_OUTCOMES.iter().enumerate() {
        let p = bell.projector();
        for r in 0..4 {
            for c in 0..4 {
                out[r][c] += p[r][c] * BSM_SIGNS[y][k];
            }
        }
    }
    out
}

/// `(u_ab x u_bc)^dagger B_y (u_ab x u_bc)`: the BSM observable in a locally
/// rotated Bell basis.
pub fn rotated_bsm_observable(y: usize, u_ab: &CMat2, u_bc: &CMat2) -> CMat4 {
    let u = linalg::kron2(u_ab, u_bc);
    linalg::matmul(&linalg::matmul(&linalg::adjoint(&u), &bsm_observable(y)), &u)
}

/// Largest difference over `(x, y, z)` between BSM correlators and the
/// separable correlators `(a_x . T_AB b_y)(b_y . T_BC c_z)` with
/// `b_0 = z`, `b_1 = x` on both substations.
pub fn theorem1_check(
    rho_ab: &TwoQubitState,
    rho_bc: &TwoQubitState,
    a: [&MeasurementVector; 2],
    c: [&MeasurementVector; 2],
) -> f64 {
    let d = bsm_distribution(rho_ab, rho_bc, a, c);
    let t_ab = rho_ab.correlation_matrix();
    let t_bc = rho_bc.correlation_matrix();
    let central: [&Vec3; 2] = [MeasurementVector::Z.as_array(), MeasurementVector::X.as_array()];
    let mut worst = 0.0_f64;
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                let sep = t_ab.bilinear(a[x].as_array(), central[y]) * t_bc.bilinear(central[y], c[z].as_array());
                worst = worst.max((bsm_correlator(&d, x, y, z) - sep).abs());
            }
        }
    }
    worst
}
