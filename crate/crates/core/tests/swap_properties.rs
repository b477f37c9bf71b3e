use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qnetmax::correlations::{bilocality_value, BilocalSettings};
use qnetmax::linalg::{self, CMat2, CMatrix, Vec3};
use qnetmax::qstate::{random_state_with, random_unitary, MeasurementVector};
use qnetmax::swap::{bsm_distribution, rotated_bsm_observable, theorem1_check};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn bsm_matches_separable_pair_on_100_instances() {
    let mut worst = 0.0_f64;
    for k in 0..100u64 {
        let mut r = rng(500 + k);
        let (ab, bc) = (random_state_with(&mut r), random_state_with(&mut r));
        let v: Vec<MeasurementVector> = (0..4).map(|_| MeasurementVector::random(&mut r)).collect();
        worst = worst.max(theorem1_check(&ab, &bc, [&v[0], &v[1]], [&v[2], &v[3]]));
    }
    assert!(worst <= 1e-12, "{worst:e}");
}

/// Bloch vector `v` with `U^dagger sigma_k U = v . sigma`.
fn pulled_back(u: &CMat2, k: usize) -> Vec3 {
    let pulled = linalg::matmul(&linalg::matmul(&linalg::adjoint(u), &linalg::pauli(k + 1)), u);
    std::array::from_fn(|j| 0.5 * linalg::trace_of_product(&linalg::pauli(j + 1), &pulled).re)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bsm_rows_are_probability_vectors(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (ab, bc) = (random_state_with(&mut r), random_state_with(&mut r));
        let v: Vec<MeasurementVector> = (0..4).map(|_| MeasurementVector::random(&mut r)).collect();
        let d = bsm_distribution(&ab, &bc, [&v[0], &v[1]], [&v[2], &v[3]]);
        for x in 0..2 {
            for z in 0..2 {
                prop_assert!((d.row_sum(x, z) - 1.0).abs() < 1e-12);
                for a in 0..2 {
                    for k in 0..4 {
                        for c in 0..2 {
                            prop_assert!(d.prob(x, z, a, k, c) >= -1e-12);
                        }
                    }
                }
            }
        }
    }

    /// A Bell-state measurement in locally rotated bases acts on `B` exactly
    /// like separable settings whose two vectors per qubit are orthogonal.
    #[test]
    fn rotated_bsm_is_an_orthogonal_separable_pair(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (ab, bc) = (random_state_with(&mut r), random_state_with(&mut r));
        let (u_ab, u_bc) = (random_unitary(&mut r), random_unitary(&mut r));
        let v: Vec<MeasurementVector> = (0..4).map(|_| MeasurementVector::random(&mut r)).collect();
        let unit = |w: Vec3| MeasurementVector::new(w).unwrap();
        // B_0 = sigma_z sigma_z, B_1 = sigma_x sigma_x before rotation
        let s = BilocalSettings {
            a0: v[0], a1: v[1], c0: v[2], c1: v[3],
            b_a0: unit(pulled_back(&u_ab, 2)), b_a1: unit(pulled_back(&u_ab, 0)),
            b_c0: unit(pulled_back(&u_bc, 2)), b_c1: unit(pulled_back(&u_bc, 0)),
        };
        prop_assert!(linalg::dot(s.b_a0.as_array(), s.b_a1.as_array()).abs() < 1e-12);
        prop_assert!(linalg::dot(s.b_c0.as_array(), s.b_c1.as_array()).abs() < 1e-12);

        let joint = CMatrix::from_fixed(ab.entries()).kron(&CMatrix::from_fixed(bc.entries()));
        let correlator = |x: usize, y: usize, z: usize| {
            let a = CMatrix::from_fixed(&linalg::bloch_operator(s.a(x).as_array()));
            let c = CMatrix::from_fixed(&linalg::bloch_operator(s.c(z).as_array()));
            let b = CMatrix::from_fixed(&rotated_bsm_observable(y, &u_ab, &u_bc));
            a.kron(&b).kron(&c).trace_of_product(&joint).re
        };
        let mut i = 0.0;
        let mut j = 0.0;
        for x in 0..2 {
            for z in 0..2 {
                i += 0.25 * correlator(x, 0, z);
                j += 0.25 * if (x + z) % 2 == 0 { 1.0 } else { -1.0 } * correlator(x, 1, z);
            }
        }
        let direct = bilocality_value(&ab, &bc, &s);
        prop_assert!((direct.i - i).abs() < 1e-12 && (direct.j - j).abs() < 1e-12);
    }
}
