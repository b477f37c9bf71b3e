//! Numerical maximization of the CHSH, bilocality and star-network
//! parameters over projective qubit measurements, used to certify the
//! closed forms in [`crate::criteria`] independently of any eigenvalue
//! computation.
//!
//! Each leaf's pair of observables is written as
//! `a0 = cos(alpha) n + sin(alpha) n'`, `a1 = cos(alpha) n - sin(alpha) n'`
//! with `(n, n')` the first two columns of a rotation `R`. For unrestricted
//! separable central settings the central observables are optimal in closed
//! form (`b` along `T^T n`). For the Bell-basis class the central pair is the
//! first two columns of a second rotation `Q`, searched like `R`. Frames and
//! angles are then improved by cyclic coordinate ascent; each coordinate is
//! a body-axis rotation of one frame or one angle, and every step is an
//! exact line search over a full turn (coarse scan, then golden section).

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::correlations::{bilocality_value, star_value, BilocalSettings, BranchSettings, StarSettings};
use crate::criteria;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat3, Vec3};
use crate::qstate::{CorrelationMatrix, MeasurementVector, TwoQubitState};

/// Which central-node measurements the search ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CentralClass {
    /// Any `(b^1_y . sigma) x ... x (b^n_y . sigma)`.
    #[default]
    Separable,
    /// Separable with `b^i_0 _|_ b^i_1` on every qubit: the observables a
    /// Bell-state measurement yields in locally rotated bases.
    BellBasis,
}

impl CentralClass {
    pub fn name(self) -> &'static str {
        match self {
            CentralClass::Separable => "separable",
            CentralClass::BellBasis => "bell-basis",
        }
    }
}

impl fmt::Display for CentralClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CentralClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "separable" => Ok(CentralClass::Separable),
            "bell-basis" => Ok(CentralClass::BellBasis),
            other => Err(Error::Parse(format!("unknown central class `{other}` (expected separable or bell-basis)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Maximum number of full coordinate cycles per restart.
    pub max_iters: usize,
    /// A restart has converged once a full cycle improves the objective by less than this.
    pub obj_tol: f64,
    pub seed: u64,
    pub central: CentralClass,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 32, max_iters: 500, obj_tol: 1e-10, seed: 0, central: CentralClass::Separable }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn with_central(self, central: CentralClass) -> Self {
        Self { central, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if !(self.obj_tol > 0.0) {
            return Err(Error::InvalidConfig(format!("obj_tol must be positive, got {}", self.obj_tol)));
        }
        Ok(())
    }
}

/// Two-party CHSH settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshSettings {
    pub a0: MeasurementVector,
    pub a1: MeasurementVector,
    pub b0: MeasurementVector,
    pub b1: MeasurementVector,
}

/// Normalized CHSH value `1/2 |<A0B0 + A0B1 + A1B0 - A1B1>|`.
pub fn chsh_value(rho: &TwoQubitState, s: &ChshSettings) -> f64 {
    let t = rho.correlation_matrix();
    let e = |a: &MeasurementVector, b: &MeasurementVector| t.bilinear(a.as_array(), b.as_array());
    0.5 * (e(&s.a0, &s.b0) + e(&s.a0, &s.b1) + e(&s.a1, &s.b0) - e(&s.a1, &s.b1)).abs()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OptimalSettings {
    Chsh(ChshSettings),
    Bilocal(BilocalSettings),
    Star(StarSettings),
}

impl OptimalSettings {
    /// `tan^2` of each leaf's half-opening angle, `|a0 - a1|^2 / |a0 + a1|^2`:
    /// one entry for CHSH, `[alpha, gamma]` for bilocal, one per branch for stars.
    pub fn tan_squared_angles(&self) -> Vec<f64> {
        match self {
            OptimalSettings::Chsh(s) => vec![tan_squared(&s.a0, &s.a1)],
            OptimalSettings::Bilocal(s) => vec![tan_squared(&s.a0, &s.a1), tan_squared(&s.c0, &s.c1)],
            OptimalSettings::Star(s) => s.branches.iter().map(|b| tan_squared(&b.a0, &b.a1)).collect(),
        }
    }
}

pub fn tan_squared(a0: &MeasurementVector, a1: &MeasurementVector) -> f64 {
    let sum = linalg::add(a0.as_array(), a1.as_array());
    let diff = linalg::sub(a0.as_array(), a1.as_array());
    linalg::dot(&diff, &diff) / linalg::dot(&sum, &sum)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimumCertificate {
    pub central: CentralClass,
    pub best_value: f64,
    pub best_settings: OptimalSettings,
    /// Closed form from [`criteria`] for the same network.
    pub closed_form: f64,
    /// `closed_form - best_value`.
    pub gap: f64,
    /// Closed-form maximum over unrestricted separable central settings.
    pub separable_bound: f64,
    /// Some source has an all-zero correlation matrix; no search was run.
    pub degenerate: bool,
    pub best_restart: usize,
    pub converged_restarts: usize,
}

pub fn maximize_bilocality(
    rho_ab: &TwoQubitState,
    rho_bc: &TwoQubitState,
    cfg: &OptimizerConfig,
) -> Result<OptimumCertificate> {
    cfg.validate()?;
    let t_ab = rho_ab.correlation_matrix();
    let t_bc = rho_bc.correlation_matrix();
    let bounds = (criteria::bilocality_max(rho_ab, rho_bc), criteria::separable_bilocality_max(rho_ab, rho_bc));
    // leaf A sees T_AB^T n; leaf C sees T_BC m
    let problem = Problem::new(vec![*t_ab.transpose().matrix(), *t_bc.matrix()], cfg.central);
    let build = |leaves: &[Leaf]| {
        let (a0, a1, b_a0, b_a1) = problem.leaf_settings(0, &leaves[0]);
        let (c0, c1, b_c0, b_c1) = problem.leaf_settings(1, &leaves[1]);
        let settings = BilocalSettings { a0, a1, b_a0, b_a1, b_c0, b_c1, c0, c1 };
        (bilocality_value(rho_ab, rho_bc, &settings).value, OptimalSettings::Bilocal(settings))
    };
    run(&problem, cfg, bounds, build)
}

/// Star network maximum; each state is ordered (leaf, central).
pub fn maximize_star(states: &[TwoQubitState], cfg: &OptimizerConfig) -> Result<OptimumCertificate> {
    cfg.validate()?;
    let bounds = (criteria::star_max(states)?, criteria::separable_star_max(states)?);
    let ts: Vec<CorrelationMatrix> = states.iter().map(|s| s.correlation_matrix()).collect();
    let problem = Problem::new(ts.iter().map(|t| *t.transpose().matrix()).collect(), cfg.central);
    let build = |leaves: &[Leaf]| {
        let branches = leaves
            .iter()
            .enumerate()
            .map(|(i, leaf)| {
                let (a0, a1, b0, b1) = problem.leaf_settings(i, leaf);
                BranchSettings { a0, a1, b0, b1 }
            })
            .collect();
        let settings = StarSettings { branches };
        let value = star_value(states, &settings).expect("arity matches").value;
        (value, OptimalSettings::Star(settings))
    };
    run(&problem, cfg, bounds, build)
}

/// CHSH maximum. Bob's two settings are always independent, so the
/// central class in `cfg` is ignored.
pub fn maximize_chsh(rho: &TwoQubitState, cfg: &OptimizerConfig) -> Result<OptimumCertificate> {
    cfg.validate()?;
    let cfg = cfg.with_central(CentralClass::Separable);
    let t = rho.correlation_matrix();
    let closed_form = criteria::chsh_max(rho);
    let problem = Problem::new(vec![*t.transpose().matrix()], cfg.central);
    let build = |leaves: &[Leaf]| {
        let (a0, a1, b0, b1) = problem.leaf_settings(0, &leaves[0]);
        let settings = ChshSettings { a0, a1, b0, b1 };
        (chsh_value(rho, &settings), OptimalSettings::Chsh(settings))
    };
    run(&problem, &cfg, (closed_form, closed_form), build)
}

/// One leaf's search state: leaf frame `R`, central frame `Q` (used by the
/// Bell-basis class only) and opening angle.
#[derive(Debug, Clone, Copy)]
struct Leaf {
    frame: Mat3,
    central: Mat3,
    angle: f64,
}

fn random_frame<R: Rng>(rng: &mut R) -> Mat3 {
    let u = *MeasurementVector::random(rng).as_array();
    let mut v = *MeasurementVector::random(rng).as_array();
    loop {
        let w = linalg::sub(&v, &linalg::scale(&u, linalg::dot(&u, &v)));
        if linalg::norm(&w) > 1e-3 {
            v = linalg::scale(&w, 1.0 / linalg::norm(&w));
            break;
        }
        v = *MeasurementVector::random(rng).as_array();
    }
    frame_from(&u, &v)
}

fn frame_from(u: &Vec3, v: &Vec3) -> Mat3 {
    let w = linalg::cross(u, v);
    [[u[0], v[0], w[0]], [u[1], v[1], w[1]], [u[2], v[2], w[2]]]
}

fn column(m: &Mat3, k: usize) -> Vec3 {
    [m[0][k], m[1][k], m[2][k]]
}

fn columns(m: &Mat3) -> [Vec3; 3] {
    std::array::from_fn(|k| column(m, k))
}

/// Re-orthonormalize after many small rotations.
fn reorthonormalize(m: &Mat3) -> Mat3 {
    let u = column(m, 0);
    let u = linalg::scale(&u, 1.0 / linalg::norm(&u));
    let v = column(m, 1);
    let v = linalg::sub(&v, &linalg::scale(&u, linalg::dot(&u, &v)));
    let v = linalg::scale(&v, 1.0 / linalg::norm(&v));
    frame_from(&u, &v)
}

fn rotate(m: &Mat3, axis: usize, theta: f64) -> Mat3 {
    reorthonormalize(&linalg::mat3_mul(m, &linalg::axis_rotation(axis, theta)))
}

impl Leaf {
    fn random<R: Rng>(rng: &mut R) -> Self {
        let frame = random_frame(rng);
        let central = random_frame(rng);
        Self { frame, central, angle: rng.random_range(0.0..std::f64::consts::TAU) }
    }
}

/// Per-leaf cache: images `M R e_j` of the leaf frame and the central frame columns.
#[derive(Clone, Copy)]
struct Cache {
    img: [Vec3; 3],
    q: [Vec3; 3],
}

/// The objective `prod_i (|cos a_i| x_i)^(1/k) + prod_i (|sin a_i| y_i)^(1/k)`
/// with `(x_i, y_i) = (|M_i n_i|, |M_i n'_i|)` for separable central settings
/// and `(|q_i . M_i n_i|, |q'_i . M_i n'_i|)` for the Bell-basis class.
struct Problem {
    mats: Vec<Mat3>,
    class: CentralClass,
}

const COARSE_STEPS: usize = 16;
const GOLDEN_TOL: f64 = 1e-10;

impl Problem {
    fn new(mats: Vec<Mat3>, class: CentralClass) -> Self {
        Self { mats, class }
    }

    fn degenerate(&self) -> bool {
        self.mats.iter().any(|m| m.iter().flatten().all(|&x| x == 0.0))
    }

    fn cache(&self, i: usize, leaf: &Leaf) -> Cache {
        Cache {
            img: std::array::from_fn(|k| linalg::mat_vec(&self.mats[i], &column(&leaf.frame, k))),
            q: columns(&leaf.central),
        }
    }

    fn root(&self, x: f64) -> f64 {
        match self.mats.len() {
            1 => x,
            2 => x.sqrt(),
            n => x.powf(1.0 / n as f64),
        }
    }

    fn magnitudes(&self, n_img: &Vec3, np_img: &Vec3, q0: &Vec3, q1: &Vec3) -> (f64, f64) {
        match self.class {
            CentralClass::Separable => (linalg::norm(n_img), linalg::norm(np_img)),
            CentralClass::BellBasis => (linalg::dot(q0, n_img).abs(), linalg::dot(q1, np_img).abs()),
        }
    }

    /// Per-leaf factors `(|cos a| x, |sin a| y)`.
    fn factors(angle: f64, (x, y): (f64, f64)) -> (f64, f64) {
        let (s, c) = angle.sin_cos();
        (c.abs() * x, s.abs() * y)
    }

    fn leaf_magnitudes(&self, c: &Cache) -> (f64, f64) {
        self.magnitudes(&c.img[0], &c.img[1], &c.q[0], &c.q[1])
    }

    fn combine(&self, first: f64, second: f64) -> f64 {
        self.root(first) + self.root(second)
    }

    fn value(&self, leaves: &[Leaf], caches: &[Cache]) -> f64 {
        let (mut p, mut q) = (1.0, 1.0);
        for (leaf, c) in leaves.iter().zip(caches) {
            let (f, g) = Self::factors(leaf.angle, self.leaf_magnitudes(c));
            p *= f;
            q *= g;
        }
        self.combine(p, q)
    }

    /// Leaf observables and the matching central observables.
    fn leaf_settings(
        &self,
        i: usize,
        leaf: &Leaf,
    ) -> (MeasurementVector, MeasurementVector, MeasurementVector, MeasurementVector) {
        let (s, c) = leaf.angle.sin_cos();
        let n = column(&leaf.frame, 0);
        let np = column(&leaf.frame, 1);
        let a0 = linalg::add(&linalg::scale(&n, c), &linalg::scale(&np, s));
        let a1 = linalg::sub(&linalg::scale(&n, c), &linalg::scale(&np, s));
        let (b0, b1) = match self.class {
            CentralClass::Separable => {
                let m = &self.mats[i];
                (linalg::mat_vec(m, &linalg::add(&a0, &a1)), linalg::mat_vec(m, &linalg::sub(&a0, &a1)))
            }
            CentralClass::BellBasis => (column(&leaf.central, 0), column(&leaf.central, 1)),
        };
        (
            MeasurementVector::direction_or(a0, MeasurementVector::Z),
            MeasurementVector::direction_or(a1, MeasurementVector::X),
            MeasurementVector::direction_or(b0, MeasurementVector::Z),
            MeasurementVector::direction_or(b1, MeasurementVector::X),
        )
    }

    /// One restart of cyclic coordinate ascent. Returns the final leaves,
    /// objective value and whether the tolerance was reached.
    fn ascend(&self, mut leaves: Vec<Leaf>, cfg: &OptimizerConfig) -> (Vec<Leaf>, f64, bool) {
        let k = leaves.len();
        let mut caches: Vec<Cache> = leaves.iter().enumerate().map(|(i, l)| self.cache(i, l)).collect();
        let mut current = self.value(&leaves, &caches);
        let central_axes = if self.class == CentralClass::BellBasis { 3 } else { 0 };
        for _ in 0..cfg.max_iters {
            let start = current;
            for i in 0..k {
                // products over the other leaves
                let (mut p_rest, mut q_rest) = (1.0, 1.0);
                for (j, (leaf, c)) in leaves.iter().zip(&caches).enumerate() {
                    if j != i {
                        let (f, g) = Self::factors(leaf.angle, self.leaf_magnitudes(c));
                        p_rest *= f;
                        q_rest *= g;
                    }
                }
                for axis in 0..3 {
                    let c = caches[i];
                    let angle = leaves[i].angle;
                    let eval = |theta: f64| {
                        let (n_img, np_img) = rotated_images(&c.img, axis, theta);
                        let (f, g) = Self::factors(angle, self.magnitudes(&n_img, &np_img, &c.q[0], &c.q[1]));
                        self.combine(p_rest * f, q_rest * g)
                    };
                    if let Some((theta, value)) = line_search(eval, current) {
                        leaves[i].frame = rotate(&leaves[i].frame, axis, theta);
                        caches[i] = self.cache(i, &leaves[i]);
                        current = value.max(self.value(&leaves, &caches));
                    }
                }
                for axis in 0..central_axes {
                    let c = caches[i];
                    let angle = leaves[i].angle;
                    let eval = |theta: f64| {
                        let (q0, q1) = rotated_images(&c.q, axis, theta);
                        let (f, g) = Self::factors(angle, self.magnitudes(&c.img[0], &c.img[1], &q0, &q1));
                        self.combine(p_rest * f, q_rest * g)
                    };
                    if let Some((theta, value)) = line_search(eval, current) {
                        leaves[i].central = rotate(&leaves[i].central, axis, theta);
                        caches[i] = self.cache(i, &leaves[i]);
                        current = value.max(self.value(&leaves, &caches));
                    }
                }
                let mags = self.leaf_magnitudes(&caches[i]);
                let base = leaves[i].angle;
                let eval = |theta: f64| {
                    let (f, g) = Self::factors(base + theta, mags);
                    self.combine(p_rest * f, q_rest * g)
                };
                if let Some((theta, _)) = line_search(eval, current) {
                    leaves[i].angle = (base + theta).rem_euclid(std::f64::consts::TAU);
                    current = self.value(&leaves, &caches);
                }
            }
            if k > 1 {
                // all opening angles together
                let snapshot: Vec<(f64, (f64, f64))> =
                    leaves.iter().zip(&caches).map(|(l, c)| (l.angle, self.leaf_magnitudes(c))).collect();
                let eval = |theta: f64| {
                    let (mut p, mut q) = (1.0, 1.0);
                    for &(angle, mags) in &snapshot {
                        let (f, g) = Self::factors(angle + theta, mags);
                        p *= f;
                        q *= g;
                    }
                    self.combine(p, q)
                };
                if let Some((theta, _)) = line_search(eval, current) {
                    for leaf in leaves.iter_mut() {
                        leaf.angle = (leaf.angle + theta).rem_euclid(std::f64::consts::TAU);
                    }
                    current = self.value(&leaves, &caches);
                }
            }
            if current - start < cfg.obj_tol {
                return (leaves, current, true);
            }
        }
        (leaves, current, false)
    }
}

/// First two columns of `[v0 v1 v2]` after rotating the frame by `theta`
/// about its own `axis`.
fn rotated_images(img: &[Vec3; 3], axis: usize, theta: f64) -> (Vec3, Vec3) {
    let (s, c) = theta.sin_cos();
    let comb = |p: &Vec3, kp: f64, q: &Vec3, kq: f64| linalg::add(&linalg::scale(p, kp), &linalg::scale(q, kq));
    match axis {
        0 => (img[0], comb(&img[1], c, &img[2], s)),
        1 => (comb(&img[0], c, &img[2], -s), img[1]),
        _ => (comb(&img[0], c, &img[1], s), comb(&img[0], -s, &img[1], c)),
    }
}

/// Maximize `f` over a full turn. Returns the step and value when it beats
/// `current` (the value at zero).
fn line_search(f: impl Fn(f64) -> f64, current: f64) -> Option<(f64, f64)> {
    use std::f64::consts::PI;
    let h = 2.0 * PI / COARSE_STEPS as f64;
    let mut best = (0.0, f(0.0));
    for k in 0..COARSE_STEPS {
        let theta = -PI + h * k as f64;
        let v = f(theta);
        if v > best.1 {
            best = (theta, v);
        }
    }
    // golden section on the bracket around the coarse winner
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best.0 - h, best.0 + h);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > GOLDEN_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    (best.1 > current).then_some(best)
}

fn run<F>(problem: &Problem, cfg: &OptimizerConfig, bounds: (f64, f64), build: F) -> Result<OptimumCertificate>
where
    F: Fn(&[Leaf]) -> (f64, OptimalSettings) + Sync,
{
    let (closed_form, separable_bound) = bounds;
    let k = problem.mats.len();
    let certificate = |value: f64, settings, degenerate, best_restart, converged_restarts| OptimumCertificate {
        central: cfg.central,
        best_value: value,
        best_settings: settings,
        closed_form,
        gap: closed_form - value,
        separable_bound,
        degenerate,
        best_restart,
        converged_restarts,
    };
    if problem.degenerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let leaves: Vec<Leaf> = (0..k).map(|_| Leaf::random(&mut rng)).collect();
        let (value, settings) = build(&leaves);
        return Ok(certificate(value, settings, true, 0, 0));
    }

    let outcomes: Vec<(Vec<Leaf>, f64, bool)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(r as u64);
            let leaves: Vec<Leaf> = (0..k).map(|_| Leaf::random(&mut rng)).collect();
            problem.ascend(leaves, cfg)
        })
        .collect();

    // strict comparison keeps the lowest index among ties
    let mut best_index = 0;
    for (r, outcome) in outcomes.iter().enumerate() {
        if outcome.1 > outcomes[best_index].1 {
            best_index = r;
        }
    }
    let converged_restarts = outcomes.iter().filter(|o| o.2).count();
    let (value, settings) = build(&outcomes[best_index].0);
    if converged_restarts == 0 {
        return Err(Error::NoConvergence { best: value, gap: closed_form - value });
    }
    Ok(certificate(value, settings, false, best_index, converged_restarts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{bell_state, colored_noise_state, maximally_mixed, mix, random_state, werner_state, BellState};
    use std::f64::consts::SQRT_2;

    fn singlet() -> TwoQubitState {
        bell_state(BellState::PsiMinus)
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        let bad = OptimizerConfig { restarts: 0, ..Default::default() };
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig(_))));
        let bad = OptimizerConfig { obj_tol: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn line_search_finds_interior_maximum() {
        let (theta, v) = line_search(|t| (t - 1.0).cos(), 1.0_f64.cos()).unwrap();
        assert!((theta - 1.0).abs() < 1e-6 && (v - 1.0).abs() < 1e-12);
        assert!(line_search(|t| t.cos(), 1.0).is_none());
    }

    #[test]
    fn bilocality_examples() {
        let sep = OptimizerConfig::default();
        let bell = sep.with_central(CentralClass::BellBasis);
        for cfg in [sep, bell] {
            let c = maximize_bilocality(&singlet(), &singlet(), &cfg).unwrap();
            assert!((c.best_value - SQRT_2).abs() < 1e-4, "{c:?}");
            let c = maximize_bilocality(&werner_state(0.8).unwrap(), &werner_state(0.9).unwrap(), &cfg).unwrap();
            assert!((c.best_value - 1.2).abs() < 1e-4, "{c:?}");
        }
    }

    #[test]
    fn central_class_decides_the_counterexample() {
        let ab = mix(&bell_state(BellState::PsiPlus), 0.6, &bell_state(BellState::PhiPlus));
        let bc = colored_noise_state(0.7, 1.0 / 3.0).unwrap();
        let cfg = OptimizerConfig::default();

        let c = maximize_bilocality(&ab, &bc, &cfg.with_central(CentralClass::BellBasis)).unwrap();
        assert!((c.best_value - 0.97).abs() < 1e-3 + 0.005, "{c:?}");
        assert!(c.gap.abs() < 1e-4, "{c:?}");

        // unrestricted central settings reach sqrt(S_AB S_BC) > 1
        let c = maximize_bilocality(&ab, &bc, &cfg).unwrap();
        assert!((c.best_value - c.separable_bound).abs() < 1e-6, "{c:?}");
        assert!(c.best_value > 1.04 && c.gap < -0.07, "{c:?}");
    }

    #[test]
    fn bell_basis_central_vectors_are_orthogonal() {
        let cfg = OptimizerConfig { restarts: 4, ..OptimizerConfig::default() }.with_central(CentralClass::BellBasis);
        let c = maximize_bilocality(&random_state(3), &random_state(4), &cfg).unwrap();
        let OptimalSettings::Bilocal(s) = &c.best_settings else { panic!("bilocal settings expected") };
        assert!(linalg::dot(s.b_a0.as_array(), s.b_a1.as_array()).abs() < 1e-12);
        assert!(linalg::dot(s.b_c0.as_array(), s.b_c1.as_array()).abs() < 1e-12);
    }

    #[test]
    fn class_names_round_trip() {
        for class in [CentralClass::Separable, CentralClass::BellBasis] {
            assert_eq!(class.name().parse::<CentralClass>().unwrap(), class);
        }
        assert!("bsm".parse::<CentralClass>().is_err());
    }

    #[test]
    fn chsh_examples() {
        let cfg = OptimizerConfig::default();
        let c = maximize_chsh(&singlet(), &cfg).unwrap();
        assert!((c.best_value - SQRT_2).abs() < 1e-5);
        let c = maximize_chsh(&werner_state(0.5).unwrap(), &cfg).unwrap();
        assert!((c.best_value - 0.5 * SQRT_2).abs() < 1e-5);
        let ab = mix(&bell_state(BellState::PsiPlus), 0.6, &bell_state(BellState::PhiPlus));
        let c = maximize_chsh(&ab, &cfg).unwrap();
        assert!((c.best_value - 1.02).abs() < 1e-3 + 0.005 && c.gap.abs() < 1e-5);
    }

    #[test]
    fn star_examples() {
        let cfg = OptimizerConfig::default();
        for class in [CentralClass::Separable, CentralClass::BellBasis] {
            let cfg = cfg.with_central(class);
            let c = maximize_star(&vec![singlet(); 3], &cfg).unwrap();
            assert!((c.best_value - SQRT_2).abs() < 1e-3);

            let (ab, bc) = (random_state(21), random_state(22));
            let star = maximize_star(&[ab.clone(), bc.swapped()], &cfg).unwrap();
            let biloc = maximize_bilocality(&ab, &bc, &cfg).unwrap();
            assert!((star.best_value - biloc.best_value).abs() < 1e-6);
        }

        let c = maximize_star(&[singlet(), maximally_mixed(), singlet()], &cfg).unwrap();
        assert!(c.degenerate && c.best_value.abs() < 1e-6);
        assert_eq!(maximize_star(&[], &cfg), Err(Error::EmptyNetwork));
    }

    #[test]
    fn deterministic_per_seed() {
        let cfg = OptimizerConfig { restarts: 4, ..OptimizerConfig::with_seed(99) };
        let (ab, bc) = (random_state(1), random_state(2));
        let first = maximize_bilocality(&ab, &bc, &cfg).unwrap();
        let second = maximize_bilocality(&ab, &bc, &cfg).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn exhausted_iterations_report_no_convergence() {
        let cfg = OptimizerConfig { restarts: 2, max_iters: 1, obj_tol: 1e-300, ..Default::default() };
        let err = maximize_bilocality(&random_state(5), &random_state(6), &cfg).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }
}
