//! Sparse SVM as a linear program over nonnegative variables, and the readout
//! of LP solutions back into a weight vector.
//!
//! Soft margin, `n = m + 2p` variables `(xi, beta+, beta-)`:
//!
//! ```text
//! min  (1/m) sum_i xi_i + lambda sum_j (beta+_j + beta-_j)
//! s.t. sum_j y_i x_ij (beta+_j - beta-_j) + xi_i >= 1
//! ```
//!
//! Hard margin drops `xi` and uses unit costs. Constraints are stored negated,
//! as `A_i . x <= -1`, so every right-hand side is `-1`. Constraint `i` touches
//! only its own slack variable.

use crate::error::{Error, Result};
use crate::types::{
    validate_dataset, BetaVector, Dataset, LpInstance, LpLayout, PrimalSolution, SparseSvmConfig,
};

pub fn build_soft_lp(d: &Dataset, cfg: &SparseSvmConfig) -> Result<LpInstance> {
    validate_dataset(d)?;
    if cfg.hard_margin {
        return Err(Error::InvalidParameter(
            "build_soft_lp called with a hard-margin config".into(),
        ));
    }
    cfg.validate()?;
    let (m, p) = (d.m(), d.p());
    let layout = LpLayout { slack: m, features: p };
    let n = layout.n();

    let mut c_diag = vec![1.0 / m as f64; m];
    c_diag.resize(n, cfg.lambda);

    let mut a_diags = vec![0.0; m * n];
    for i in 0..m {
        let row = &mut a_diags[i * n..(i + 1) * n];
        row[i] = -1.0;
        fill_feature_blocks(d, i, layout, row);
    }
    Ok(LpInstance { layout, n, num_constraints: m, c_diag, a_diags, b: vec![-1.0; m] })
}

/// Zero-loss program: minimize `||beta||_1` subject to `y_i beta^T x_i >= 1`.
/// Infeasible when the data are not linearly separable through the origin.
pub fn build_hard_lp(d: &Dataset) -> Result<LpInstance> {
    validate_dataset(d)?;
    let (m, p) = (d.m(), d.p());
    let layout = LpLayout { slack: 0, features: p };
    let n = layout.n();
    let mut a_diags = vec![0.0; m * n];
    for i in 0..m {
        fill_feature_blocks(d, i, layout, &mut a_diags[i * n..(i + 1) * n]);
    }
    Ok(LpInstance { layout, n, num_constraints: m, c_diag: vec![1.0; n], a_diags, b: vec![-1.0; m] })
}

pub fn build_lp(d: &Dataset, cfg: &SparseSvmConfig) -> Result<LpInstance> {
    if cfg.hard_margin {
        build_hard_lp(d)
    } else {
        build_soft_lp(d, cfg)
    }
}

fn fill_feature_blocks(d: &Dataset, i: usize, layout: LpLayout, row: &mut [f64]) {
    let y = d.label(i);
    let (plus, minus) = (layout.beta_plus_offset(), layout.beta_minus_offset());
    for (j, &x) in d.row(i).iter().enumerate() {
        row[plus + j] = -y * x;
        row[minus + j] = y * x;
    }
}

/// `beta_j = beta+_j - beta-_j`, with `l1_norm = sum_j (beta+_j + beta-_j)`.
pub fn read_beta(sol: &PrimalSolution) -> BetaVector {
    let beta = sol
        .beta_plus
        .iter()
        .zip(&sol.beta_minus)
        .map(|(p, m)| p - m)
        .collect();
    let l1_norm = sol.beta_plus.iter().zip(&sol.beta_minus).map(|(p, m)| p + m).sum();
    BetaVector::with_l1(beta, l1_norm)
}

/// Average hinge loss plus `lambda ||beta||_1`.
pub fn hinge_objective(d: &Dataset, beta: &[f64], lambda: f64) -> Result<f64> {
    let risk = empirical_hinge_risk(d, beta)?;
    let l1: f64 = beta.iter().map(|b| b.abs()).sum();
    Ok(risk + lambda * l1)
}

/// `(1/m) sum_i max(0, 1 - y_i beta^T x_i)`.
pub fn empirical_hinge_risk(d: &Dataset, beta: &[f64]) -> Result<f64> {
    if beta.len() != d.p() {
        return Err(Error::DimensionMismatch(format!(
            "beta has {} entries, dataset has p={}",
            beta.len(),
            d.p()
        )));
    }
    let total: f64 = (0..d.m()).map(|i| hinge_loss(d.label(i), d.row(i), beta)).sum();
    Ok(total / d.m() as f64)
}

pub fn hinge_loss(y: f64, x: &[f64], beta: &[f64]) -> f64 {
    let margin: f64 = x.iter().zip(beta).map(|(a, b)| a * b).sum();
    (1.0 - y * margin).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_sample(y: f64, x: f64) -> Dataset {
        Dataset::new(vec![y], vec![vec![x]]).unwrap()
    }

    #[test]
    fn soft_lp_single_sample_expansion() {
        let lp = build_soft_lp(&one_sample(1.0, 2.0), &SparseSvmConfig::soft(0.1)).unwrap();
        assert_eq!(lp.n, 3);
        assert_eq!(lp.num_constraints, 1);
        assert_eq!(lp.c_diag, vec![1.0, 0.1, 0.1]);
        assert_eq!(lp.a_diags, vec![-1.0, -2.0, 2.0]);
        assert_eq!(lp.b, vec![-1.0]);
    }

    #[test]
    fn negative_label_flips_feature_signs() {
        let lp = build_soft_lp(&one_sample(-1.0, 2.0), &SparseSvmConfig::soft(0.1)).unwrap();
        assert_eq!(lp.a_diags, vec![-1.0, 2.0, -2.0]);
    }

    #[test]
    fn hard_lp_single_sample_expansion() {
        let lp = build_hard_lp(&one_sample(1.0, 2.0)).unwrap();
        assert_eq!(lp.n, 2);
        assert_eq!(lp.c_diag, vec![1.0, 1.0]);
        assert_eq!(lp.a_diags, vec![-2.0, 2.0]);
        assert_eq!(lp.b, vec![-1.0]);
    }

    #[test]
    fn soft_lp_rejects_bad_lambda_and_hard_config() {
        let d = one_sample(1.0, 2.0);
        assert!(build_soft_lp(&d, &SparseSvmConfig::soft(0.0)).is_err());
        assert!(build_soft_lp(&d, &SparseSvmConfig::hard()).is_err());
        let bad = Dataset::from_parts_unchecked(1, 1, vec![2.0], vec![1.0]);
        assert!(build_soft_lp(&bad, &SparseSvmConfig::soft(0.1)).is_err());
        assert!(build_hard_lp(&bad).is_err());
    }

    #[test]
    fn slack_block_is_diagonal() {
        let d = Dataset::new(
            vec![1.0, -1.0, 1.0],
            vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]],
        )
        .unwrap();
        let lp = build_soft_lp(&d, &SparseSvmConfig::soft(0.5)).unwrap();
        for i in 0..3 {
            let row = lp.a_row(i);
            for k in 0..3 {
                assert_eq!(row[k], if k == i { -1.0 } else { 0.0 });
            }
            for j in 0..2 {
                let yx = d.label(i) * d.feature(i, j);
                assert_eq!(row[3 + j], -yx);
                assert_eq!(row[5 + j], yx);
            }
        }
        assert_eq!(&lp.c_diag[..3], &[1.0 / 3.0; 3]);
        assert!(lp.c_diag[3..].iter().all(|&c| c == 0.5));
    }

    #[test]
    fn unit_slack_point_is_feasible() {
        let d = Dataset::new(vec![1.0, -1.0], vec![vec![0.3, -2.0], vec![1.5, 0.7]]).unwrap();
        let lp = build_soft_lp(&d, &SparseSvmConfig::soft(0.2)).unwrap();
        let mut x = vec![0.0; lp.n];
        x[..2].fill(1.0);
        assert!(lp.max_violation(&x) <= 0.0);
        assert!((lp.objective(&x) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn read_beta_differences_parts() {
        let sol = PrimalSolution {
            xi: vec![],
            beta_plus: vec![0.3, 0.0],
            beta_minus: vec![0.0, 0.2],
            objective: 0.0,
            norm_l1: 0.5,
        };
        let b = read_beta(&sol);
        assert_eq!(b.beta, vec![0.3, -0.2]);
        assert!((b.l1_norm - 0.5).abs() < 1e-15);
        assert_eq!(b.support, vec![0, 1]);
    }

    #[test]
    fn read_beta_zero() {
        let sol = PrimalSolution {
            xi: vec![1.0],
            beta_plus: vec![0.0; 2],
            beta_minus: vec![0.0; 2],
            objective: 1.0,
            norm_l1: 1.0,
        };
        let b = read_beta(&sol);
        assert_eq!(b.beta, vec![0.0, 0.0]);
        assert!(b.support.is_empty());
    }

    #[test]
    fn zero_beta_has_unit_objective() {
        let d = Dataset::new(vec![1.0, -1.0, -1.0], vec![vec![3.0], vec![-1.0], vec![0.2]])
            .unwrap();
        for lambda in [0.0, 0.1, 7.0] {
            assert_eq!(hinge_objective(&d, &[0.0], lambda).unwrap(), 1.0);
        }
    }

    #[test]
    fn hinge_objective_dimension_check() {
        let d = one_sample(1.0, 1.0);
        assert!(hinge_objective(&d, &[1.0, 2.0], 0.1).is_err());
    }

    #[test]
    fn xor_average_loss_at_least_one() {
        let d = Dataset::new(
            vec![1.0, 1.0, -1.0, -1.0],
            vec![vec![1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0], vec![-1.0, 1.0]],
        )
        .unwrap();
        for beta in [[0.0, 0.0], [0.3, -0.1], [2.0, 5.0], [-0.4, 0.4]] {
            let risk = empirical_hinge_risk(&d, &beta).unwrap();
            assert!(risk >= 1.0 - 1e-15, "beta={beta:?} risk={risk}");
            assert!(hinge_objective(&d, &beta, 0.0).unwrap() >= 1.0 - 1e-15);
        }
        // inside the unit-margin box the losses pair up and sum to exactly 4
        let risk = empirical_hinge_risk(&d, &[0.25, -0.125]).unwrap();
        assert!((risk - 1.0).abs() < 1e-15);
    }

    #[test]
    fn paired_objective_never_below_one() {
        let d = Dataset::new(vec![1.0, -1.0], vec![vec![0.7, -1.2], vec![0.7, -1.2]]).unwrap();
        for beta in [[0.0, 0.0], [1.0, 1.0], [-3.0, 0.5]] {
            assert!(hinge_objective(&d, &beta, 0.05).unwrap() >= 1.0);
        }
    }
}
