use nalgebra::{Complex, Matrix2, Matrix3, Matrix4};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qnetmax::criteria::{
    bilocality_max, chsh_max, separable_bilocality_max, star_max, state_spectrum, t_spectrum, violates,
};
use qnetmax::linalg::{self, Mat3};
use qnetmax::qstate::{mix, random_state, random_state_with, random_unitary, werner_state, CorrelationMatrix};
use qnetmax::{classify_pair, TwoQubitState};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pauli_na(k: usize) -> Matrix2<Complex<f64>> {
    let (z, o, i) = (Complex::new(0.0, 0.0), Complex::new(1.0, 0.0), Complex::new(0.0, 1.0));
    match k {
        0 => Matrix2::new(z, o, o, z),
        1 => Matrix2::new(z, -i, i, z),
        _ => Matrix2::new(o, z, z, -o),
    }
}

fn to_na(rho: &TwoQubitState) -> Matrix4<Complex<f64>> {
    let e = rho.entries();
    Matrix4::from_fn(|r, c| e[r][c])
}

/// `t_nm = tr[rho sigma_n (x) sigma_m]` computed with nalgebra.
fn correlations_na(rho: &TwoQubitState) -> Matrix3<f64> {
    let m = to_na(rho);
    Matrix3::from_fn(|n, k| (m * pauli_na(n).kronecker(&pauli_na(k))).trace().re)
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

fn na_mat(m: &Mat3) -> Matrix3<f64> {
    Matrix3::from_fn(|r, c| m[r][c])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn random_states_are_valid(seed in any::<u64>()) {
        let rho = random_state(seed);
        let e = rho.entries();
        let trace: f64 = (0..4).map(|k| e[k][k].re).sum();
        prop_assert!((trace - 1.0).abs() < 1e-12);
        prop_assert!(linalg::hermiticity_residual(e) < 1e-14);
        prop_assert!(linalg::hermitian_eigenvalues(e)[0] > -1e-12);
    }

    #[test]
    fn correlation_matrix_matches_nalgebra(seed in any::<u64>()) {
        let rho = random_state(seed);
        let t = rho.correlation_matrix();
        let oracle = correlations_na(&rho);
        for n in 0..3 {
            for m in 0..3 {
                prop_assert!((t.get(n, m) - oracle[(n, m)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn correlation_matrix_is_linear(s1 in any::<u64>(), s2 in any::<u64>(), p in 0.0..=1.0f64) {
        let (a, b) = (random_state(s1), random_state(s2));
        let t = mix(&a, p, &b).correlation_matrix();
        let (ta, tb) = (a.correlation_matrix(), b.correlation_matrix());
        for n in 0..3 {
            for m in 0..3 {
                let want = p * ta.get(n, m) + (1.0 - p) * tb.get(n, m);
                prop_assert!((t.get(n, m) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn local_unitaries_rotate_the_correlation_matrix(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_state_with(&mut r);
        let (u1, u2) = (random_unitary(&mut r), random_unitary(&mut r));
        let r1 = na_mat(&linalg::bloch_rotation(&u1));
        let r2 = na_mat(&linalg::bloch_rotation(&u2));
        let want = r1 * na_mat(rho.correlation_matrix().matrix()) * r2.transpose();
        let got = rho.apply_local_unitaries(&u1, &u2).correlation_matrix();
        for n in 0..3 {
            for m in 0..3 {
                prop_assert!((got.get(n, m) - want[(n, m)]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn spectrum_is_squared_singular_values(seed in any::<u64>()) {
        let rho = random_state(seed);
        let spec = state_spectrum(&rho).as_array();
        let svd = sorted_desc(correlations_na(&rho).singular_values().iter().map(|s| s * s).collect());
        for k in 0..3 {
            prop_assert!((spec[k] - svd[k]).abs() < 1e-9, "{spec:?} vs {svd:?}");
        }
    }

    #[test]
    fn spectrum_bounds(seed in any::<u64>()) {
        let s = state_spectrum(&random_state(seed));
        prop_assert!(s.t1 >= s.t2 && s.t2 >= s.t3 && s.t3 >= 0.0);
        prop_assert!(s.t1 <= 1.0 + 1e-9);
        prop_assert!(s.t1 + s.t2 + s.t3 <= 3.0 + 1e-9);
    }

    #[test]
    fn gram_eigenvalues_are_shared(entries in prop::array::uniform9(-2.0..2.0f64)) {
        let m: Mat3 = [[entries[0], entries[1], entries[2]], [entries[3], entries[4], entries[5]], [entries[6], entries[7], entries[8]]];
        let mt = linalg::transpose3(&m);
        let (left, _) = linalg::symmetric_eigen3(&linalg::mat3_mul(&mt, &m));
        let (right, _) = linalg::symmetric_eigen3(&linalg::mat3_mul(&m, &mt));
        for k in 0..3 {
            if left[k] > 1e-9 || right[k] > 1e-9 {
                prop_assert!((left[k] - right[k]).abs() < 1e-9, "{left:?} vs {right:?}");
            }
        }
        let oracle = sorted_desc((na_mat(&mt) * na_mat(&m)).symmetric_eigenvalues().iter().copied().collect());
        for k in 0..3 {
            prop_assert!((left[k] - oracle[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn maxima_are_local_unitary_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (ab, bc) = (random_state_with(&mut r), random_state_with(&mut r));
        let us: Vec<_> = (0..4).map(|_| random_unitary(&mut r)).collect();
        let ab2 = ab.apply_local_unitaries(&us[0], &us[1]);
        let bc2 = bc.apply_local_unitaries(&us[2], &us[3]);
        prop_assert!((chsh_max(&ab) - chsh_max(&ab2)).abs() < 1e-9);
        prop_assert!((bilocality_max(&ab, &bc) - bilocality_max(&ab2, &bc2)).abs() < 1e-9);
        prop_assert!((separable_bilocality_max(&ab, &bc) - separable_bilocality_max(&ab2, &bc2)).abs() < 1e-9);
    }

    #[test]
    fn star_maximum_ignores_branch_order(seed in any::<u64>(), n in 2usize..6, shift in 1usize..5) {
        let mut r = rng(seed);
        let states: Vec<_> = (0..n).map(|_| random_state_with(&mut r)).collect();
        let mut rotated = states.clone();
        rotated.rotate_left(shift % n);
        let mut reversed = states.clone();
        reversed.reverse();
        let base = star_max(&states).unwrap();
        prop_assert!((base - star_max(&rotated).unwrap()).abs() < 1e-12);
        prop_assert!((base - star_max(&reversed).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn bilocality_is_bounded_by_the_chsh_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (ab, bc) = (random_state_with(&mut r), random_state_with(&mut r));
        let (b, s_ab, s_bc) = (bilocality_max(&ab, &bc), chsh_max(&ab), chsh_max(&bc));
        prop_assert!(b * b <= s_ab * s_bc + 1e-12);
        // the unrestricted separable maximum attains the product
        let sep = separable_bilocality_max(&ab, &bc);
        prop_assert!((sep * sep - s_ab * s_bc).abs() < 1e-12);
        prop_assert!(sep >= b - 1e-12);
    }

    #[test]
    fn forbidden_region_never_occurs(seed in any::<u64>(), va in 0.0..=1.0f64, vc in 0.0..=1.0f64) {
        let mut r = rng(seed);
        let (ab, bc) = (random_state_with(&mut r), random_state_with(&mut r));
        prop_assert!(!classify_pair(&ab, &bc).is_forbidden());
        let (wa, wc) = (werner_state(va).unwrap(), werner_state(vc).unwrap());
        prop_assert!(!classify_pair(&wa, &wc).is_forbidden());
    }
}

#[test]
fn correlation_range_is_enforced() {
    let mut t = [[0.0; 3]; 3];
    t[1][2] = 1.0 + 1e-6;
    assert!(CorrelationMatrix::new(t).is_err());
    t[1][2] = -1.0;
    assert!(t_spectrum(&CorrelationMatrix::new(t).unwrap()).t1 > 0.99);
}

#[test]
fn werner_onsets_flip_once() {
    let eps = 1e-6;
    let onset = std::f64::consts::FRAC_1_SQRT_2;
    let w = |v: f64| werner_state(v).unwrap();
    assert!(!violates(chsh_max(&w(onset - eps))));
    assert!(violates(chsh_max(&w(onset + eps))));
    // one perfect source: bilocality switches on with the other at 1/2
    assert!(!violates(bilocality_max(&w(1.0), &w(0.5 - eps))));
    assert!(violates(bilocality_max(&w(1.0), &w(0.5 + eps))));
    // equal sources switch on at 1/sqrt(2)
    assert!(!violates(bilocality_max(&w(onset - eps), &w(onset - eps))));
    assert!(violates(bilocality_max(&w(onset + eps), &w(onset + eps))));

    let flips = |f: &dyn Fn(f64) -> bool| {
        let values: Vec<bool> = (0..=1000).map(|k| f(k as f64 / 1000.0)).collect();
        values.windows(2).filter(|p| p[0] != p[1]).count()
    };
    assert_eq!(flips(&|v| violates(bilocality_max(&w(v), &w(v)))), 1);
    assert_eq!(flips(&|v| violates(bilocality_max(&w(1.0), &w(v)))), 1);
    assert_eq!(flips(&|v| violates(chsh_max(&w(v)))), 1);
}

#[test]
fn forbidden_region_over_two_thousand_pairs() {
    for k in 0..2000u64 {
        let mut r = rng(0xF0_0000 + k);
        let (ab, bc) = (random_state_with(&mut r), random_state_with(&mut r));
        assert!(!classify_pair(&ab, &bc).is_forbidden(), "pair {k}");
    }
}
