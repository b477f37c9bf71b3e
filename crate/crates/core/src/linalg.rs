//! Small dense linear algebra: fixed-size complex matrices for one- and
//! two-qubit operators, 3-vectors for the Bloch picture, and cyclic Jacobi
//! eigensolvers for Hermitian and real symmetric matrices.

use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat2 = [[C64; 2]; 2];
pub type CMat4 = [[C64; 4]; 4];
pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Off-diagonal Frobenius norm, relative to the full norm, at which the
/// Jacobi sweeps stop.
pub const JACOBI_TOL: f64 = 1e-12;
pub const HERMITIAN_MAX_SWEEPS: usize = 100;
pub const SYMMETRIC_MAX_SWEEPS: usize = 64;

/// Pauli matrix by index: 0 = identity, 1 = x, 2 = y, 3 = z.
pub fn pauli(index: usize) -> CMat2 {
    match index {
        0 => [[ONE, ZERO], [ZERO, ONE]],
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I], [I, ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("pauli index {index} out of range"),
    }
}

/// `v . sigma` for a real 3-vector.
pub fn bloch_operator(v: &Vec3) -> CMat2 {
    let mut out = [[ZERO; 2]; 2];
    for (k, &vk) in v.iter().enumerate() {
        let p = pauli(k + 1);
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] += p[r][c] * vk;
            }
        }
    }
    out
}

/// Projector `(1 + (-1)^outcome v . sigma) / 2` onto one outcome of a
/// dichotomic qubit observable.
pub fn outcome_projector(v: &Vec3, outcome: usize) -> CMat2 {
    let sign = if outcome == 0 { 0.5 } else { -0.5 };
    let op = bloch_operator(v);
    let mut out = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            let id = if r == c { 0.5 } else { 0.0 };
            out[r][c] = op[r][c] * sign + id;
        }
    }
    out
}

pub fn kron2(a: &CMat2, b: &CMat2) -> CMat4 {
    let mut out = [[ZERO; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul<const N: usize>(a: &[[C64; N]; N], b: &[[C64; N]; N]) -> [[C64; N]; N] {
    let mut out = [[ZERO; N]; N];
    for i in 0..N {
        for k in 0..N {
            let aik = a[i][k];
            if aik == ZERO {
                continue;
            }
            for j in 0..N {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn adjoint<const N: usize>(a: &[[C64; N]; N]) -> [[C64; N]; N] {
    let mut out = [[ZERO; N]; N];
    for i in 0..N {
        for j in 0..N {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub fn trace<const N: usize>(a: &[[C64; N]; N]) -> C64 {
    (0..N).map(|i| a[i][i]).sum()
}

/// `tr(a b)` without forming the product.
pub fn trace_of_product<const N: usize>(a: &[[C64; N]; N], b: &[[C64; N]; N]) -> C64 {
    let mut acc = ZERO;
    for i in 0..N {
        for j in 0..N {
            acc += a[i][j] * b[j][i];
        }
    }
    acc
}

/// Largest `|a_ij - conj(a_ji)|`.
pub fn hermiticity_residual<const N: usize>(a: &[[C64; N]; N]) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..N {
        for j in i..N {
            worst = worst.max((a[i][j] - a[j][i].conj()).norm());
        }
    }
    worst
}

/// Real coefficients `tr(m sigma_n (x) sigma_m)` for n, m in x, y, z.
pub fn pauli_correlations(m: &CMat4) -> (Mat3, f64) {
    let mut t = [[0.0; 3]; 3];
    let mut imag = 0.0_f64;
    for n in 0..3 {
        for k in 0..3 {
            let op = kron2(&pauli(n + 1), &pauli(k + 1));
            let value = trace_of_product(m, &op);
            imag = imag.max(value.im.abs());
            t[n][k] = value.re;
        }
    }
    (t, imag)
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// sorted ascending. The input is assumed Hermitian; only the upper
/// triangle drives the rotations.
pub fn hermitian_eigenvalues<const N: usize>(m: &[[C64; N]; N]) -> [f64; N] {
    let mut a = *m;
    let scale = frobenius(&a);
    if scale == 0.0 {
        return [0.0; N];
    }
    for _ in 0..HERMITIAN_MAX_SWEEPS {
        if off_diagonal(&a) <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                let g = apq.norm();
                if g <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / g;
                let (c, s) = jacobi_angle(a[p][p].re, a[q][q].re, g);
                let pc = phase.conj();
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = akp * c - akq * pc * s;
                    row[q] = akp * s + akq * pc * c;
                }
                for k in 0..N {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = apk * c - aqk * phase * s;
                    a[q][k] = apk * s + aqk * phase * c;
                }
                a[p][q] = ZERO;
                a[q][p] = ZERO;
            }
        }
    }
    let mut eig = [0.0; N];
    for (i, e) in eig.iter_mut().enumerate() {
        *e = a[i][i].re;
    }
    eig.sort_by(|x, y| x.total_cmp(y));
    eig
}

/// Eigen-decomposition of a real symmetric 3x3 matrix by cyclic Jacobi
/// rotations. Returns eigenvalues sorted descending and the matching
/// eigenvectors as columns.
pub fn symmetric_eigen3(m: &Mat3) -> (Vec3, Mat3) {
    let mut a = *m;
    let mut v = identity3();
    let scale = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if scale > 0.0 {
        for _ in 0..SYMMETRIC_MAX_SWEEPS {
            let off = (2.0 * (a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2))).sqrt();
            if off <= JACOBI_TOL * scale {
                break;
            }
            for p in 0..3 {
                for q in (p + 1)..3 {
                    let apq = a[p][q];
                    if apq.abs() <= f64::MIN_POSITIVE {
                        continue;
                    }
                    let (c, s) = jacobi_angle(a[p][p], a[q][q], apq);
                    for row in a.iter_mut() {
                        let (akp, akq) = (row[p], row[q]);
                        row[p] = c * akp - s * akq;
                        row[q] = s * akp + c * akq;
                    }
                    for k in 0..3 {
                        let (apk, aqk) = (a[p][k], a[q][k]);
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                    a[p][q] = 0.0;
                    a[q][p] = 0.0;
                    for row in v.iter_mut() {
                        let (vkp, vkq) = (row[p], row[q]);
                        row[p] = c * vkp - s * vkq;
                        row[q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let values = [a[order[0]][order[0]], a[order[1]][order[1]], a[order[2]][order[2]]];
    let mut vectors = [[0.0; 3]; 3];
    for (col, &src) in order.iter().enumerate() {
        for row in 0..3 {
            vectors[row][col] = v[row][src];
        }
    }
    (values, vectors)
}

/// Rotation `(c, s)` that zeroes the off-diagonal element `g` of the block
/// `[[app, g], [g, aqq]]`.
fn jacobi_angle(app: f64, aqq: f64, g: f64) -> (f64, f64) {
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c)
}

fn frobenius<const N: usize>(a: &[[C64; N]; N]) -> f64 {
    a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn off_diagonal<const N: usize>(a: &[[C64; N]; N]) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                acc += a[i][j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

pub fn identity3() -> Mat3 {
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
}

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(a: &Vec3, k: f64) -> Vec3 {
    [a[0] * k, a[1] * k, a[2] * k]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

/// `m^T v`.
pub fn mat_t_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    let mut out = [0.0; 3];
    for (i, row) in m.iter().enumerate() {
        for j in 0..3 {
            out[j] += row[j] * v[i];
        }
    }
    out
}

pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose3(a: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

/// Rotation by `angle` about coordinate axis `axis` (0, 1, 2).
pub fn axis_rotation(axis: usize, angle: f64) -> Mat3 {
    let (s, c) = angle.sin_cos();
    let mut r = identity3();
    let (i, j) = match axis {
        0 => (1, 2),
        1 => (2, 0),
        _ => (0, 1),
    };
    r[i][i] = c;
    r[i][j] = -s;
    r[j][i] = s;
    r[j][j] = c;
    r
}

/// The SO(3) matrix `R_ij = tr(sigma_i U sigma_j U^dagger) / 2` induced by a
/// single-qubit unitary acting on Bloch vectors.
pub fn bloch_rotation(u: &CMat2) -> Mat3 {
    let ud = adjoint(u);
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let inner = matmul(&matmul(u, &pauli(j + 1)), &ud);
            r[i][j] = 0.5 * trace_of_product(&pauli(i + 1), &inner).re;
        }
    }
    r
}

/// Square complex matrix of runtime dimension, used for the multi-qubit
/// operators of the swapping simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn from_fixed<const N: usize>(m: &[[C64; N]; N]) -> Self {
        Self {
            dim: N,
            data: m.iter().flatten().copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let n = self.dim * other.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let aij = self.get(i, j);
                if aij == ZERO {
                    continue;
                }
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        data[(i * other.dim + k) * n + j * other.dim + l] = aij * other.get(k, l);
                    }
                }
            }
        }
        CMatrix { dim: n, data }
    }

    pub fn trace_of_product(&self, other: &CMatrix) -> C64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut acc = ZERO;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += self.get(i, j) * other.get(j, i);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        // sigma_x sigma_y = i sigma_z
        let xy = matmul(&pauli(1), &pauli(2));
        let iz = pauli(3).map(|row| row.map(|z| z * I));
        assert_eq!(xy, iz);
        for k in 0..4 {
            let sq = matmul(&pauli(k), &pauli(k));
            assert_eq!(sq, pauli(0));
        }
    }

    #[test]
    fn hermitian_jacobi_on_known_spectrum() {
        // |psi-><psi-| has spectrum {0, 0, 0, 1}.
        let h = 0.5;
        let m = [
            [ZERO; 4],
            [ZERO, C64::new(h, 0.0), C64::new(-h, 0.0), ZERO],
            [ZERO, C64::new(-h, 0.0), C64::new(h, 0.0), ZERO],
            [ZERO; 4],
        ];
        let eig = hermitian_eigenvalues(&m);
        let expected = [0.0, 0.0, 0.0, 1.0];
        for (a, b) in eig.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14, "{eig:?}");
        }
    }

    #[test]
    fn hermitian_jacobi_complex_offdiagonal() {
        // sigma_y has eigenvalues -1, +1.
        let eig = hermitian_eigenvalues(&pauli(2));
        assert!((eig[0] + 1.0).abs() < 1e-14 && (eig[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn symmetric_jacobi_reconstructs() {
        let m = [[2.0, -1.0, 0.5], [-1.0, 3.0, 0.25], [0.5, 0.25, -1.0]];
        let (vals, vecs) = symmetric_eigen3(&m);
        assert!(vals[0] >= vals[1] && vals[1] >= vals[2]);
        for col in 0..3 {
            let v = [vecs[0][col], vecs[1][col], vecs[2][col]];
            let mv = mat_vec(&m, &v);
            for k in 0..3 {
                assert!((mv[k] - vals[col] * v[k]).abs() < 1e-12);
            }
        }
        let trace = vals.iter().sum::<f64>();
        assert!((trace - 4.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_jacobi_degenerate() {
        let (vals, _) = symmetric_eigen3(&identity3());
        assert_eq!(vals, [1.0, 1.0, 1.0]);
        let (vals, _) = symmetric_eigen3(&[[0.0; 3]; 3]);
        assert_eq!(vals, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn bloch_rotation_of_hadamard_swaps_x_and_z() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = [[C64::new(h, 0.0), C64::new(h, 0.0)], [C64::new(h, 0.0), C64::new(-h, 0.0)]];
        let r = bloch_rotation(&u);
        let expected = [[0.0, 0.0, 1.0], [0.0, -1.0, 0.0], [1.0, 0.0, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((r[i][j] - expected[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn dynamic_kron_matches_fixed() {
        let a = pauli(1);
        let b = pauli(2);
        let fixed = CMatrix::from_fixed(&kron2(&a, &b));
        let dynamic = CMatrix::from_fixed(&a).kron(&CMatrix::from_fixed(&b));
        assert_eq!(fixed, dynamic);
    }
}
