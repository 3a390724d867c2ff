use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{solve_exact_working_set, ExactOptions};
use crate::formulation::{build_lp, read_beta};
use crate::mwu::{solve_mwu, MwuConfig};
use crate::oracle::OracleSet;
use crate::types::{Dataset, QueryLedger, SparseSvmConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Exact,
    Mwu,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub solver: SolverKind,
    pub svm: SparseSvmConfig,
    pub epsilon: f64,
    /// Primal norm bound for the MWU solver; defaults to [`default_norm_bounds`].
    pub primal_bound: Option<f64>,
    pub dual_bound: Option<f64>,
    pub tol: f64,
    pub seed: u64,
}

impl TrainConfig {
    pub fn exact(svm: SparseSvmConfig) -> Self {
        TrainConfig {
            solver: SolverKind::Exact,
            svm,
            epsilon: 0.05,
            primal_bound: None,
            dual_bound: None,
            tol: 1e-9,
            seed: 0,
        }
    }

    pub fn mwu(svm: SparseSvmConfig, epsilon: f64) -> Self {
        TrainConfig { solver: SolverKind::Mwu, epsilon, ..TrainConfig::exact(svm) }
    }
}

/// A priori norm bounds for the soft-margin LP. The all-slack point has
/// objective 1, so `sum xi <= m` and `||beta||_1 <= 1/lambda`; every
/// multiplier is capped by its slack cost `1/m`, so `||alpha||_1 <= 1`.
/// Hard-margin programs have no such bound.
pub fn default_norm_bounds(m: usize, svm: &SparseSvmConfig) -> Option<(f64, f64)> {
    if svm.hard_margin {
        None
    } else {
        Some((f64::max(m as f64, 1.0 / svm.lambda).max(1.0), 1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub solver: SolverKind,
    pub lambda: f64,
    pub hard_margin: bool,
    pub m: usize,
    pub p: usize,
    pub beta: Vec<f64>,
    pub support: Vec<usize>,
    pub xi: Vec<f64>,
    pub alpha: Vec<f64>,
    /// L1 norm of the stacked primal solution.
    pub primal_norm: f64,
    /// L1 norm of the dual solution.
    pub dual_norm: f64,
    pub objective: f64,
    pub dual_objective: f64,
    pub duality_gap: f64,
    pub max_violation: f64,
    pub ledger: QueryLedger,
    pub iterations: usize,
    pub wall_time_ms: f64,
}

pub fn train(d: &Dataset, cfg: &TrainConfig) -> Result<TrainReport> {
    let start = Instant::now();
    cfg.svm.validate()?;
    let lp = build_lp(d, &cfg.svm)?;
    let (primal, dual, x, ledger, iterations) = match cfg.solver {
        SolverKind::Exact => {
            let s = solve_exact_working_set(&lp, &ExactOptions::new(cfg.tol))?;
            (s.primal, s.dual, s.x, QueryLedger::new(), s.pivots)
        }
        SolverKind::Mwu => {
            let defaults = default_norm_bounds(d.m(), &cfg.svm);
            let (primal_bound, dual_bound) = match (cfg.primal_bound, cfg.dual_bound, defaults) {
                (Some(r), Some(s), _) => (r, s),
                (r, s, Some((dr, ds))) => (r.unwrap_or(dr), s.unwrap_or(ds)),
                _ => {
                    return Err(Error::InvalidParameter(
                        "the hard-margin MWU solve needs explicit primal and dual norm bounds".into(),
                    ))
                }
            };
            let mwu = MwuConfig::new(cfg.epsilon, primal_bound, dual_bound).with_seed(cfg.seed);
            let oracle = OracleSet::new(d, &cfg.svm)?;
            let s = solve_mwu(&lp, &mwu, &oracle)?;
            (s.primal, s.dual, s.x, s.report.ledger, s.report.iterations)
        }
    };
    let beta = read_beta(&primal);
    Ok(TrainReport {
        solver: cfg.solver,
        lambda: if cfg.svm.hard_margin { 0.0 } else { cfg.svm.lambda },
        hard_margin: cfg.svm.hard_margin,
        m: d.m(),
        p: d.p(),
        support: beta.support,
        beta: beta.beta,
        max_violation: lp.max_violation(&x).max(0.0),
        xi: primal.xi,
        primal_norm: primal.norm_l1,
        dual_norm: dual.norm_l1,
        objective: primal.objective,
        dual_objective: dual.objective,
        duality_gap: primal.objective - dual.objective,
        alpha: dual.alpha,
        ledger,
        iterations,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
