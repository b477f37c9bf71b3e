//! Seeded verification suites behind `qnetmax verify`.

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use qnetmax::classify::classify_pair;
use qnetmax::criteria::{bilocality_max, chsh_max, state_spectrum};
use qnetmax::linalg::{self, Mat3};
use qnetmax::oracle::{maximize_bilocality, maximize_star, CentralClass, OptimizerConfig};
use qnetmax::qstate::{random_state_with, MeasurementVector};
use qnetmax::report::json_num;
use qnetmax::swap::theorem1_check;
use qnetmax::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// BSM correlators equal the `z z` / `x x` separable correlators.
    Theorem1,
    /// Numerical bilocality maximum against its closed form.
    Theorem3,
    /// Numerical star maximum (n = 3 and 4 alternating) against its closed form.
    Theorem4,
    /// Non-zero eigenvalues of `M^T M` and `M M^T` coincide.
    Lemma2,
    /// Eigenvalues of `T^T T` lie in `[0, 1]`.
    Lemma4,
    /// `B_max^2 <= S_AB S_BC`, and no non-bilocal pair is CHSH-local on both links.
    Prop1,
}

/// Aggregate over all instances of a suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub suite: Suite,
    pub seed: u64,
    pub instances: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub central: Option<CentralClass>,
    pub metric: &'static str,
    pub min: f64,
    pub max: f64,
    /// An instance passes when `lower <= metric <= upper`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    pub upper: f64,
    pub passed: usize,
    pub failed: usize,
    /// Indices of failing instances (at most the first 20).
    pub failures: Vec<usize>,
    pub ok: bool,
}

const MAX_LISTED_FAILURES: usize = 20;

struct Bounds {
    metric: &'static str,
    lower: Option<f64>,
    upper: f64,
}

impl Suite {
    fn bounds(self) -> Bounds {
        match self {
            Suite::Theorem1 => Bounds { metric: "max_correlator_difference", lower: Some(0.0), upper: 1e-12 },
            Suite::Theorem3 | Suite::Theorem4 => Bounds { metric: "gap", lower: Some(-1e-7), upper: 1e-4 },
            Suite::Lemma2 => Bounds { metric: "max_eigenvalue_difference", lower: Some(0.0), upper: 1e-9 },
            Suite::Lemma4 => Bounds { metric: "t_extreme", lower: Some(0.0), upper: 1.0 + 1e-9 },
            Suite::Prop1 => Bounds { metric: "bmax_sq_minus_chsh_product", lower: None, upper: 1e-12 },
        }
    }

    fn uses_optimizer(self) -> bool {
        matches!(self, Suite::Theorem3 | Suite::Theorem4)
    }
}

fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Lowest and highest reading of one instance, plus a failure that the
/// readings do not capture.
fn run_instance(suite: Suite, seed: u64, index: usize, cfg: &OptimizerConfig) -> Result<(f64, f64, bool)> {
    let mut rng = instance_rng(seed, index);
    Ok(match suite {
        Suite::Theorem1 => {
            let (ab, bc) = (random_state_with(&mut rng), random_state_with(&mut rng));
            let v: Vec<MeasurementVector> = (0..4).map(|_| MeasurementVector::random(&mut rng)).collect();
            let d = theorem1_check(&ab, &bc, [&v[0], &v[1]], [&v[2], &v[3]]);
            (d, d, false)
        }
        Suite::Theorem3 => {
            let (ab, bc) = (random_state_with(&mut rng), random_state_with(&mut rng));
            let gap = maximize_bilocality(&ab, &bc, cfg)?.gap;
            (gap, gap, false)
        }
        Suite::Theorem4 => {
            let n = if index % 2 == 0 { 3 } else { 4 };
            let states: Vec<_> = (0..n).map(|_| random_state_with(&mut rng)).collect();
            let gap = maximize_star(&states, cfg)?.gap;
            (gap, gap, false)
        }
        Suite::Lemma2 => {
            let m: Mat3 = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-1.0..=1.0)));
            let mt = linalg::transpose3(&m);
            let (left, _) = linalg::symmetric_eigen3(&linalg::mat3_mul(&mt, &m));
            let (right, _) = linalg::symmetric_eigen3(&linalg::mat3_mul(&m, &mt));
            let diff = (0..3)
                .filter(|&k| left[k] > 1e-9 || right[k] > 1e-9)
                .map(|k| (left[k] - right[k]).abs())
                .fold(0.0, f64::max);
            (diff, diff, false)
        }
        Suite::Lemma4 => {
            let s = state_spectrum(&random_state_with(&mut rng));
            (s.t3, s.t1, false)
        }
        Suite::Prop1 => {
            let (ab, bc) = (random_state_with(&mut rng), random_state_with(&mut rng));
            let b = bilocality_max(&ab, &bc);
            let excess = b * b - chsh_max(&ab) * chsh_max(&bc);
            (excess, excess, classify_pair(&ab, &bc).is_forbidden())
        }
    })
}

pub fn run_suite(
    suite: Suite,
    seed: u64,
    instances: usize,
    restarts: usize,
    central: CentralClass,
) -> Result<VerifySummary> {
    let cfg = OptimizerConfig { restarts, seed, central, ..OptimizerConfig::default() };
    if suite.uses_optimizer() {
        cfg.validate()?;
    }
    let bounds = suite.bounds();
    let readings: Vec<(f64, f64, bool)> = (0..instances)
        .into_par_iter()
        .map(|i| run_instance(suite, seed, i, &cfg))
        .collect::<Result<_>>()?;

    let mut failures = Vec::new();
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, &(low, high, extra)) in readings.iter().enumerate() {
        min = min.min(low);
        max = max.max(high);
        if extra || bounds.lower.is_some_and(|l| low < l) || high > bounds.upper || low.is_nan() || high.is_nan() {
            failures.push(i);
        }
    }
    let failed = failures.len();
    failures.truncate(MAX_LISTED_FAILURES);
    Ok(VerifySummary {
        suite,
        seed,
        instances,
        restarts: suite.uses_optimizer().then_some(restarts),
        central: suite.uses_optimizer().then_some(central),
        metric: bounds.metric,
        min: if instances == 0 { 0.0 } else { json_num(min) },
        max: if instances == 0 { 0.0 } else { json_num(max) },
        lower: bounds.lower,
        upper: bounds.upper,
        passed: instances - failed,
        failed,
        failures,
        ok: failed == 0,
    })
}
