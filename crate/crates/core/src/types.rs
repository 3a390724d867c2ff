//! Shared domain types. Everything here is an immutable value object except
//! [`QueryLedger`], which is owned by a single solver run.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `m` labeled samples in `p` dimensions. Features are stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    m: usize,
    p: usize,
    labels: Vec<f64>,
    features: Vec<f64>,
}

impl Dataset {
    /// Builds and validates a dataset from per-sample rows.
    pub fn new(labels: Vec<f64>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = labels.len();
        if rows.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "{} labels but {} feature rows",
                m,
                rows.len()
            )));
        }
        let p = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != p) {
            return Err(Error::DimensionMismatch(format!(
                "row {} has {} features, expected {}",
                i,
                r.len(),
                p
            )));
        }
        let features = rows.into_iter().flatten().collect();
        let d = Dataset { m, p, labels, features };
        validate_dataset(&d)?;
        Ok(d)
    }

    /// Assembles a dataset without checking any invariant. Pair with
    /// [`validate_dataset`] when the parts come from untrusted input.
    pub fn from_parts_unchecked(m: usize, p: usize, labels: Vec<f64>, features: Vec<f64>) -> Self {
        Dataset { m, p, labels, features }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> f64 {
        self.labels[i]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.p..(i + 1) * self.p]
    }

    pub fn feature(&self, i: usize, j: usize) -> f64 {
        self.features[i * self.p + j]
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.features.chunks(self.p.max(1)).take(self.m)
    }
}

/// Checks every [`Dataset`] invariant: positive dimensions, an `m x p` feature
/// matrix, labels in {-1, +1} and finite features.
pub fn validate_dataset(d: &Dataset) -> Result<()> {
    if d.m == 0 || d.p == 0 {
        return Err(Error::DimensionMismatch(format!(
            "dataset must have m >= 1 and p >= 1, got m={}, p={}",
            d.m, d.p
        )));
    }
    if d.labels.len() != d.m {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for m={}",
            d.labels.len(),
            d.m
        )));
    }
    if d.features.len() != d.m * d.p {
        return Err(Error::DimensionMismatch(format!(
            "{} feature values for an {}x{} matrix",
            d.features.len(),
            d.m,
            d.p
        )));
    }
    if let Some((row, &value)) = d
        .labels
        .iter()
        .enumerate()
        .find(|(_, &y)| y != 1.0 && y != -1.0)
    {
        return Err(Error::NonBinaryLabel { row, value });
    }
    if let Some(idx) = d.features.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteFeature { row: idx / d.p, col: idx % d.p });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SparseSvmConfig {
    pub lambda: f64,
    /// Drop the slack variables and require zero training loss.
    pub hard_margin: bool,
}

impl SparseSvmConfig {
    pub fn soft(lambda: f64) -> Self {
        SparseSvmConfig { lambda, hard_margin: false }
    }

    pub fn hard() -> Self {
        SparseSvmConfig { lambda: 0.0, hard_margin: true }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.hard_margin && !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "soft-margin training needs a finite lambda > 0, got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// Variable layout of an LP built from a dataset: `slack` hinge-loss variables
/// (zero for the hard-margin program) followed by the `features` positive parts
/// and the `features` negative parts of the weight vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpLayout {
    pub slack: usize,
    pub features: usize,
}

impl LpLayout {
    pub fn n(&self) -> usize {
        self.slack + 2 * self.features
    }

    pub fn beta_plus_offset(&self) -> usize {
        self.slack
    }

    pub fn beta_minus_offset(&self) -> usize {
        self.slack + self.features
    }

    pub fn is_hard(&self) -> bool {
        self.slack == 0
    }

    pub fn classify(&self, k: usize) -> VariableRef {
        if k < self.slack {
            VariableRef::Slack(k)
        } else if k < self.slack + self.features {
            VariableRef::BetaPlus(k - self.slack)
        } else {
            VariableRef::BetaMinus(k - self.slack - self.features)
        }
    }
}

/// Identity of one coordinate of the stacked `(xi, beta+, beta-)` vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VariableRef {
    Slack(usize),
    BetaPlus(usize),
    BetaMinus(usize),
}

/// A linear program with diagonal cost and constraint matrices:
/// minimize `c . x` subject to `A_i . x <= b_i` for every constraint, `x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpInstance {
    pub layout: LpLayout,
    pub n: usize,
    pub num_constraints: usize,
    pub c_diag: Vec<f64>,
    /// Row-major `num_constraints x n`; row `i` is the diagonal of `A_i`.
    pub a_diags: Vec<f64>,
    pub b: Vec<f64>,
}

impl LpInstance {
    pub fn a_row(&self, i: usize) -> &[f64] {
        &self.a_diags[i * self.n..(i + 1) * self.n]
    }

    pub fn a(&self, i: usize, k: usize) -> f64 {
        self.a_diags[i * self.n + k]
    }

    /// `A_i . x` for every constraint.
    pub fn constraint_values(&self, x: &[f64]) -> Vec<f64> {
        (0..self.num_constraints)
            .map(|i| dot(self.a_row(i), x))
            .collect()
    }

    /// Largest `A_i . x - b_i` over all constraints (positive means violated).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.constraint_values(x)
            .iter()
            .zip(&self.b)
            .map(|(ax, b)| ax - b)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        dot(&self.c_diag, x)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.a_diags.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// L1 norm of the stacked primal vector, summed slack block first.
pub fn stacked_l1(xi: &[f64], beta_plus: &[f64], beta_minus: &[f64]) -> f64 {
    let mut acc = 0.0;
    for v in xi.iter().chain(beta_plus).chain(beta_minus) {
        acc += v.abs();
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimalSolution {
    pub xi: Vec<f64>,
    pub beta_plus: Vec<f64>,
    pub beta_minus: Vec<f64>,
    pub objective: f64,
    pub norm_l1: f64,
}

impl PrimalSolution {
    /// Splits a stacked variable vector according to the LP layout and fills in
    /// the derived objective and norm.
    pub fn from_variables(lp: &LpInstance, x: &[f64]) -> Self {
        let l = lp.layout;
        let xi = x[..l.slack].to_vec();
        let beta_plus = x[l.beta_plus_offset()..l.beta_minus_offset()].to_vec();
        let beta_minus = x[l.beta_minus_offset()..l.n()].to_vec();
        let norm_l1 = stacked_l1(&xi, &beta_plus, &beta_minus);
        PrimalSolution { objective: lp.objective(x), xi, beta_plus, beta_minus, norm_l1 }
    }

    pub fn variables(&self) -> Vec<f64> {
        self.xi
            .iter()
            .chain(&self.beta_plus)
            .chain(&self.beta_minus)
            .copied()
            .collect()
    }

    pub fn layout(&self) -> LpLayout {
        LpLayout { slack: self.xi.len(), features: self.beta_plus.len() }
    }
}

/// Nonnegative multipliers of the `y_i beta^T x_i + xi_i >= 1` constraints.
///
/// `objective` is the dual LP value `sum_i alpha_i`, which strong duality makes
/// equal to the primal optimum; it coincides with `norm_l1` because every
/// right-hand side has magnitude one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualSolution {
    pub alpha: Vec<f64>,
    pub norm_l1: f64,
    pub objective: f64,
}

impl DualSolution {
    pub fn from_alpha(alpha: Vec<f64>) -> Self {
        let norm_l1 = l1(&alpha);
        DualSolution { objective: alpha.iter().sum(), alpha, norm_l1 }
    }
}

pub fn l1(v: &[f64]) -> f64 {
    let mut acc = 0.0;
    for x in v {
        acc += x.abs();
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaVector {
    pub beta: Vec<f64>,
    pub support: Vec<usize>,
    /// `sum_j (beta+_j + beta-_j)`, which equals `||beta||_1` at an optimum.
    pub l1_norm: f64,
}

impl BetaVector {
    /// Relative threshold for counting a weight as non-zero.
    pub const SUPPORT_RTOL: f64 = 1e-8;

    pub fn from_beta(beta: Vec<f64>) -> Self {
        let l1_norm = l1(&beta);
        Self::with_l1(beta, l1_norm)
    }

    pub(crate) fn with_l1(beta: Vec<f64>, l1_norm: f64) -> Self {
        let inf = beta.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let threshold = Self::SUPPORT_RTOL * inf.max(1.0);
        let support = beta
            .iter()
            .enumerate()
            .filter(|(_, v)| v.abs() > threshold)
            .map(|(j, _)| j)
            .collect();
        BetaVector { beta, support, l1_norm }
    }
}

/// Oracle invocation counts, by oracle kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    pub b_queries: u64,
    pub c_queries: u64,
    pub a_queries: u64,
    pub data_queries: u64,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total(&self) -> u64 {
        self.b_queries + self.c_queries + self.a_queries + self.data_queries
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_dataset_is_valid() {
        let d = Dataset::new(vec![1.0], vec![vec![0.5]]).unwrap();
        assert_eq!((d.m(), d.p()), (1, 1));
        assert!(validate_dataset(&d).is_ok());
    }

    #[test]
    fn zero_label_rejected() {
        let err = Dataset::new(vec![0.0], vec![vec![0.5]]).unwrap_err();
        assert_eq!(err, Error::NonBinaryLabel { row: 0, value: 0.0 });
    }

    #[test]
    fn row_count_mismatch_rejected() {
        let err = Dataset::new(vec![1.0, -1.0], vec![vec![0.5]]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
        let d = Dataset::from_parts_unchecked(2, 1, vec![1.0, -1.0], vec![0.5]);
        assert!(matches!(validate_dataset(&d), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = Dataset::new(vec![1.0, -1.0], vec![vec![0.5, 1.0], vec![0.5]]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn non_finite_feature_rejected() {
        let err = Dataset::new(vec![1.0, -1.0], vec![vec![0.5, 1.0], vec![0.5, f64::NAN]])
            .unwrap_err();
        assert_eq!(err, Error::NonFiniteFeature { row: 1, col: 1 });
    }

    #[test]
    fn soft_config_needs_positive_lambda() {
        assert!(SparseSvmConfig::soft(0.0).validate().is_err());
        assert!(SparseSvmConfig::soft(-1.0).validate().is_err());
        assert!(SparseSvmConfig::soft(0.1).validate().is_ok());
        assert!(SparseSvmConfig::hard().validate().is_ok());
    }

    #[test]
    fn support_threshold_is_relative() {
        let b = BetaVector::from_beta(vec![1e6, 1e-3, 0.0]);
        assert_eq!(b.support, vec![0]);
        let b = BetaVector::from_beta(vec![0.3, 1e-9, -0.2]);
        assert_eq!(b.support, vec![0, 2]);
        assert!(BetaVector::from_beta(vec![0.0; 3]).support.is_empty());
    }

    #[test]
    fn layout_classifies_blocks() {
        let l = LpLayout { slack: 2, features: 3 };
        assert_eq!(l.n(), 8);
        assert_eq!(l.classify(1), VariableRef::Slack(1));
        assert_eq!(l.classify(2), VariableRef::BetaPlus(0));
        assert_eq!(l.classify(7), VariableRef::BetaMinus(2));
    }
}
