//! Seeded generators for the synthetic problem families. Each family carries
//! its planted unit direction `beta*`; identical `(spec, m, seed)` always
//! produce identical datasets.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::Dataset;

/// Attempts allowed per requested sample before giving up.
pub const REJECTION_FACTOR: usize = 1000;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelMode {
    /// Exactly `ceil(m/2)` positive samples, alternating with negatives.
    #[default]
    Stratified,
    /// Independent fair coin per sample.
    Bernoulli,
}

/// `p'` coordinates equal to `+-1/sqrt(p')`, on the first `p'` indices or on a
/// seeded random subset.
pub fn planted_direction(p: usize, p_prime: usize, support_seed: Option<u64>) -> Vec<f64> {
    let mut beta = vec![0.0; p];
    let value = 1.0 / (p_prime as f64).sqrt();
    match support_seed {
        None => beta[..p_prime].fill(value),
        Some(seed) => {
            let mut rng = rng_from_seed(seed);
            let mut idx = sample(&mut rng, p, p_prime).into_vec();
            idx.sort_unstable();
            for j in idx {
                beta[j] = value;
            }
        }
    }
    beta
}

fn support_of(beta: &[f64]) -> Vec<usize> {
    beta.iter()
        .enumerate()
        .filter(|(_, b)| **b != 0.0)
        .map(|(j, _)| j)
        .collect()
}

fn check_planted(beta: &[f64], p: usize, p_prime: usize) -> Result<()> {
    if beta.len() != p {
        return Err(Error::DimensionMismatch(format!("beta* has {} entries, p={}", beta.len(), p)));
    }
    let nnz = beta.iter().filter(|b| **b != 0.0).count();
    if nnz != p_prime {
        return Err(Error::InvalidParameter(format!("beta* has {nnz} non-zeros, expected {p_prime}")));
    }
    let norm: f64 = beta.iter().map(|b| b * b).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("beta* must have unit L2 norm, got {norm}")));
    }
    Ok(())
}

fn target_labels<R: Rng>(m: usize, mode: LabelMode, rng: &mut R) -> Vec<f64> {
    match mode {
        LabelMode::Stratified => (0..m).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect(),
        LabelMode::Bernoulli => (0..m)
            .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
            .collect(),
    }
}

/// Linearly separable family with an empty band `|beta*^T x| < nu`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginProblemSpec {
    pub p: usize,
    pub p_prime: usize,
    pub nu: f64,
    pub beta_star: Vec<f64>,
    /// Support coordinates are uniform on `[-box_radius, box_radius]`.
    pub box_radius: f64,
    #[serde(default)]
    pub labels: LabelMode,
}

impl MarginProblemSpec {
    pub fn new(p: usize, p_prime: usize, nu: f64) -> Result<Self> {
        if p_prime == 0 || p_prime > p {
            return Err(Error::InvalidParameter(format!("need 1 <= p' <= p, got p'={p_prime}, p={p}")));
        }
        let spec = MarginProblemSpec {
            p,
            p_prime,
            nu,
            beta_star: planted_direction(p, p_prime, None),
            box_radius: 10.0 / nu,
            labels: LabelMode::Stratified,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_random_support(mut self, seed: u64) -> Self {
        self.beta_star = planted_direction(self.p, self.p_prime, Some(seed));
        self
    }

    pub fn with_box_radius(mut self, r: f64) -> Self {
        self.box_radius = r;
        self
    }

    pub fn with_labels(mut self, mode: LabelMode) -> Self {
        self.labels = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("nu must be > 0, got {}", self.nu)));
        }
        if !(self.box_radius > 0.0 && self.box_radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "box radius must be > 0, got {}",
                self.box_radius
            )));
        }
        check_planted(&self.beta_star, self.p, self.p_prime)
    }
}

pub fn gen_margin(spec: &MarginProblemSpec, m: usize, seed: u64) -> Result<Dataset> {
    spec.validate()?;
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let targets = target_labels(m, spec.labels, &mut rng);
    let support = support_of(&spec.beta_star);
    let cap = REJECTION_FACTOR * m;
    let mut attempts = 0;
    let mut labels = Vec::with_capacity(m);
    let mut rows = Vec::with_capacity(m);
    for &target in &targets {
        let row = loop {
            attempts += 1;
            if attempts > cap {
                return Err(Error::RejectionCap(cap));
            }
            let mut x: Vec<f64> = (0..spec.p).map(|_| StandardNormal.sample(&mut rng)).collect();
            for &j in &support {
                x[j] = rng.random_range(-spec.box_radius..=spec.box_radius);
            }
            let proj: f64 = support.iter().map(|&j| spec.beta_star[j] * x[j]).sum();
            if proj.abs() < spec.nu {
                continue;
            }
            // the support distribution is symmetric, so reflecting it picks the class
            if spec.labels == LabelMode::Stratified && proj.signum() != target {
                for &j in &support {
                    x[j] = -x[j];
                }
            }
            break x;
        };
        let proj: f64 = support.iter().map(|&j| spec.beta_star[j] * row[j]).sum();
        labels.push(proj.signum());
        rows.push(row);
    }
    Dataset::new(labels, rows)
}

/// Two Gaussian classes whose projection `v = y beta*^T x` is `N(mu, 1)`
/// truncated below at `-delta_trunc`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgaussianProblemSpec {
    pub p: usize,
    pub p_prime: usize,
    /// Nominal per-feature separation; `mu >= c sqrt(p')`.
    pub c: f64,
    pub mu: f64,
    pub delta_trunc: f64,
    /// Signs on the support give the direction of each class-mean shift.
    pub beta_star: Vec<f64>,
    #[serde(default)]
    pub labels: LabelMode,
}

impl SubgaussianProblemSpec {
    /// Per-feature class means `+-c` on the first `p'` features, so `mu = c sqrt(p')`.
    pub fn new(p: usize, p_prime: usize, c: f64, delta_trunc: f64) -> Result<Self> {
        if p_prime == 0 || p_prime > p {
            return Err(Error::InvalidParameter(format!("need 1 <= p' <= p, got p'={p_prime}, p={p}")));
        }
        let spec = SubgaussianProblemSpec {
            p,
            p_prime,
            c,
            mu: c * (p_prime as f64).sqrt(),
            delta_trunc,
            beta_star: planted_direction(p, p_prime, None),
            labels: LabelMode::Stratified,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The growing-dimension family: `mu = c sqrt(1 + 2 log p)` (raised to
    /// `c sqrt(p')` if that is larger) and `Delta = 2 log p`.
    pub fn growing(p: usize, p_prime: usize, c: f64) -> Result<Self> {
        let lp = (p as f64).ln();
        let mu = f64::max(c * (1.0 + 2.0 * lp).sqrt(), c * (p_prime as f64).sqrt());
        SubgaussianProblemSpec::new(p, p_prime, c, 2.0 * lp)?.with_mu(mu)
    }

    /// Override the projected mean; it must stay at or above `c sqrt(p')`.
    pub fn with_mu(mut self, mu: f64) -> Result<Self> {
        self.mu = mu;
        self.validate()?;
        Ok(self)
    }

    /// Flip the mean shift of every other discriminative feature.
    pub fn with_alternating_signs(mut self) -> Self {
        for (k, j) in support_of(&self.beta_star).into_iter().enumerate() {
            if k % 2 == 1 {
                self.beta_star[j] = -self.beta_star[j];
            }
        }
        self
    }

    pub fn with_random_support(mut self, seed: u64) -> Self {
        self.beta_star = planted_direction(self.p, self.p_prime, Some(seed));
        self
    }

    pub fn with_labels(mut self, mode: LabelMode) -> Self {
        self.labels = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta_trunc > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "truncation radius must be > 0, got {}",
                self.delta_trunc
            )));
        }
        if !(self.mu > 1.0) {
            return Err(Error::InvalidParameter(format!("mu must be > 1, got {}", self.mu)));
        }
        let floor = self.c * (self.p_prime as f64).sqrt();
        if self.mu < floor * (1.0 - 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "mu={} is below c sqrt(p') = {}",
                self.mu, floor
            )));
        }
        check_planted(&self.beta_star, self.p, self.p_prime)
    }
}

pub fn gen_subgaussian(spec: &SubgaussianProblemSpec, m: usize, seed: u64) -> Result<Dataset> {
    spec.validate()?;
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let labels = target_labels(m, spec.labels, &mut rng);
    let support = support_of(&spec.beta_star);
    let shift = spec.mu / (spec.p_prime as f64).sqrt();
    let cap = REJECTION_FACTOR * m;
    let mut attempts = 0;
    let mut rows = Vec::with_capacity(m);
    for &y in &labels {
        let mut x: Vec<f64> = (0..spec.p).map(|_| StandardNormal.sample(&mut rng)).collect();
        loop {
            attempts += 1;
            if attempts > cap {
                return Err(Error::RejectionCap(cap));
            }
            for &j in &support {
                let z: f64 = StandardNormal.sample(&mut rng);
                x[j] = y * spec.beta_star[j].signum() * shift + z;
            }
            let v: f64 = y * support.iter().map(|&j| spec.beta_star[j] * x[j]).sum::<f64>();
            if v >= -spec.delta_trunc {
                break;
            }
        }
        rows.push(x);
    }
    Dataset::new(labels, rows)
}

/// The four corners of the square, labeled by the sign of `x1 * x2`.
pub fn gen_xor(_seed: u64) -> Dataset {
    Dataset::new(
        vec![1.0, 1.0, -1.0, -1.0],
        vec![vec![1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0], vec![-1.0, 1.0]],
    )
    .expect("xor dataset is valid")
}

/// `copies` contradictory pairs `(x, +1), (x, -1)`.
pub fn gen_paired(x: &[f64], copies: usize) -> Result<Dataset> {
    if copies == 0 {
        return Err(Error::InvalidParameter("copies must be >= 1".into()));
    }
    let mut labels = Vec::with_capacity(2 * copies);
    let mut rows = Vec::with_capacity(2 * copies);
    for _ in 0..copies {
        for y in [1.0, -1.0] {
            labels.push(y);
            rows.push(x.to_vec());
        }
    }
    Dataset::new(labels, rows)
}

/// Projected margin `v_i = y_i beta^T x_i` of every sample.
pub fn projected_margins(d: &Dataset, beta: &[f64]) -> Vec<f64> {
    (0..d.m())
        .map(|i| d.label(i) * d.row(i).iter().zip(beta).map(|(a, b)| a * b).sum::<f64>())
        .collect()
}

/// Any generator, with the parameters needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ProblemSpec {
    Margin(MarginProblemSpec),
    Subgaussian(SubgaussianProblemSpec),
    Xor,
    Paired { x: Vec<f64>, copies: usize },
}

impl ProblemSpec {
    pub fn generate(&self, m: usize, seed: u64) -> Result<Dataset> {
        match self {
            ProblemSpec::Margin(s) => gen_margin(s, m, seed),
            ProblemSpec::Subgaussian(s) => gen_subgaussian(s, m, seed),
            ProblemSpec::Xor => Ok(gen_xor(seed)),
            ProblemSpec::Paired { x, copies } => gen_paired(x, *copies),
        }
    }

    pub fn beta_star(&self) -> Option<&[f64]> {
        match self {
            ProblemSpec::Margin(s) => Some(&s.beta_star),
            ProblemSpec::Subgaussian(s) => Some(&s.beta_star),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margin_axis_aligned() {
        let spec = MarginProblemSpec::new(2, 1, 0.5).unwrap();
        assert_eq!(spec.beta_star, vec![1.0, 0.0]);
        let d = gen_margin(&spec, 200, 3).unwrap();
        for i in 0..d.m() {
            let x1 = d.feature(i, 0);
            assert!(x1.abs() >= 0.5);
            assert_eq!(d.label(i), x1.signum());
        }
        assert_eq!(d.labels().iter().filter(|&&y| y > 0.0).count(), 100);
    }

    #[test]
    fn margin_is_deterministic_per_seed() {
        let spec = MarginProblemSpec::new(10, 3, 0.25).unwrap();
        assert_eq!(gen_margin(&spec, 30, 9).unwrap(), gen_margin(&spec, 30, 9).unwrap());
        assert_ne!(gen_margin(&spec, 30, 9).unwrap(), gen_margin(&spec, 30, 10).unwrap());
    }

    #[test]
    fn margin_rejection_cap() {
        // a box narrower than the band leaves nothing to accept
        let spec = MarginProblemSpec::new(3, 1, 1.0).unwrap().with_box_radius(0.5);
        assert_eq!(gen_margin(&spec, 2, 1).unwrap_err(), Error::RejectionCap(2000));
    }

    #[test]
    fn margin_bernoulli_labels_still_follow_direction() {
        let spec = MarginProblemSpec::new(5, 2, 0.5)
            .unwrap()
            .with_labels(LabelMode::Bernoulli)
            .with_random_support(4);
        let d = gen_margin(&spec, 100, 1).unwrap();
        for (v, _) in projected_margins(&d, &spec.beta_star).iter().zip(0..) {
            assert!(*v >= 0.5);
        }
    }

    #[test]
    fn planted_direction_is_unit_and_sparse() {
        for seed in [None, Some(5)] {
            let b = planted_direction(20, 4, seed);
            assert_eq!(b.iter().filter(|v| **v != 0.0).count(), 4);
            let n: f64 = b.iter().map(|v| v * v).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn subgaussian_truncation_and_balance() {
        let spec = SubgaussianProblemSpec::new(8, 2, 1.2, 0.5).unwrap();
        let d = gen_subgaussian(&spec, 501, 2).unwrap();
        let v = projected_margins(&d, &spec.beta_star);
        assert!(v.iter().all(|&v| v >= -0.5));
        assert_eq!(d.labels().iter().filter(|&&y| y > 0.0).count(), 251);
    }

    #[test]
    fn subgaussian_mu_floor_enforced() {
        let spec = SubgaussianProblemSpec::new(8, 4, 1.5, 1.0).unwrap();
        assert!((spec.mu - 3.0).abs() < 1e-15);
        assert!(spec.clone().with_mu(2.9).is_err());
        assert!(spec.with_mu(3.5).is_ok());
        assert!(SubgaussianProblemSpec::new(8, 1, 0.9, 1.0).is_err());
        assert!(SubgaussianProblemSpec::new(8, 1, 2.0, 0.0).is_err());
    }

    #[test]
    fn xor_layout() {
        let d = gen_xor(0);
        assert_eq!((d.m(), d.p()), (4, 2));
        assert_eq!(d.labels(), &[1.0, 1.0, -1.0, -1.0]);
        for i in 0..4 {
            assert_eq!(d.label(i), d.feature(i, 0) * d.feature(i, 1));
        }
    }

    #[test]
    fn paired_layout() {
        let d = gen_paired(&[1.0], 1).unwrap();
        assert_eq!(d.m(), 2);
        assert_eq!(d.labels(), &[1.0, -1.0]);
        assert_eq!(d.row(0), d.row(1));
        assert!(gen_paired(&[1.0], 0).is_err());
    }

    #[test]
    fn problem_spec_json_tags() {
        let s = ProblemSpec::Paired { x: vec![1.0, 2.0], copies: 3 };
        let j = serde_json::to_string(&s).unwrap();
        assert!(j.contains("\"family\":\"paired\""));
        assert_eq!(serde_json::from_str::<ProblemSpec>(&j).unwrap(), s);
    }
}
