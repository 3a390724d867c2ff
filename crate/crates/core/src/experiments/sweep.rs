//! Scaling sweeps over (p, m, eps) grids.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::default_lambda;
use crate::datagen::{gen_paired, gen_subgaussian, SubgaussianProblemSpec};
use crate::error::{Error, Result};
use crate::exact::{solve_exact_working_set, ExactOptions};
use crate::experiments::train::SolverKind;
use crate::formulation::build_lp;
use crate::mwu::{solve_mwu, MwuConfig};
use crate::oracle::OracleSet;
use crate::types::{Dataset, SparseSvmConfig};

/// Environment variable holding the default worker count.
pub const JOBS_ENV: &str = "SPARSE_SVM_JOBS";

pub const SWEEP_HEADER: [&str; 11] = [
    "p", "m", "eps", "seed", "data_seed", "R_measured", "r_measured", "iterations", "a_queries", "data_queries",
    "wall_ms",
];

/// `--jobs` if given, else `SPARSE_SVM_JOBS`, else the number of cores.
pub fn resolve_jobs(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var(JOBS_ENV).ok().and_then(|v| v.parse().ok()))
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum SweepFamily {
    /// Growing-dimension subgaussian family.
    Subgaussian { p_prime: usize, c: f64 },
    /// `m/2` contradictory pairs at the point `e_1` in `R^p`.
    Paired,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: SweepFamily,
    pub solver: SolverKind,
    pub p: Vec<usize>,
    /// Sample sizes; `None` means `m = p/2` for each `p`.
    pub m: Option<Vec<usize>>,
    /// Ignored by the exact solver except as a grid axis.
    pub eps: Vec<f64>,
    pub replicates: usize,
    /// `None` means `1/sqrt(1 + 2 ln p)`.
    pub lambda: Option<f64>,
    pub seed: u64,
    /// Record wall-clock time; off by default so the CSV is reproducible.
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub p: usize,
    pub m: usize,
    pub eps: f64,
    pub replicate: usize,
    /// Position of the (p, m, replicate) triple; cells that differ only in
    /// `eps` share it and so share a dataset.
    pub instance: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: usize,
    pub m: usize,
    pub eps: f64,
    pub seed: u64,
    pub data_seed: u64,
    /// L1 norm of the exact primal optimum.
    #[serde(rename = "R_measured")]
    pub r_primal: f64,
    /// L1 norm of the exact dual optimum.
    #[serde(rename = "r_measured")]
    pub r_dual: f64,
    /// Pivots for the exact solver, oracle rounds for MWU.
    pub iterations: usize,
    pub a_queries: u64,
    pub data_queries: u64,
    pub wall_ms: Option<f64>,
}

impl SweepSpec {
    /// Cells in a fixed order: `p`, then `m`, then `eps`, then replicate.
    pub fn cells(&self) -> Vec<SweepCell> {
        let mut out = Vec::new();
        let mut base = 0;
        for &p in &self.p {
            let ms = match &self.m {
                Some(ms) => ms.clone(),
                None => vec![p / 2],
            };
            for &m in &ms {
                for &eps in &self.eps {
                    for replicate in 0..self.replicates {
                        out.push(SweepCell { p, m, eps, replicate, instance: base + replicate });
                    }
                }
                base += self.replicates;
            }
        }
        out
    }

    pub fn lambda_for(&self, p: usize) -> f64 {
        self.lambda.unwrap_or_else(|| default_lambda(p))
    }

    fn dataset(&self, cell: &SweepCell, seed: u64) -> Result<Dataset> {
        match self.family {
            SweepFamily::Subgaussian { p_prime, c } => {
                let spec = SubgaussianProblemSpec::growing(cell.p, p_prime, c)?;
                gen_subgaussian(&spec, cell.m, seed)
            }
            SweepFamily::Paired => {
                if cell.m % 2 != 0 || cell.p == 0 {
                    return Err(Error::InvalidParameter(format!(
                        "paired sweep needs even m and p >= 1, got m={}, p={}",
                        cell.m, cell.p
                    )));
                }
                let mut x = vec![0.0; cell.p];
                x[0] = 1.0;
                gen_paired(&x, cell.m / 2)
            }
        }
    }
}

/// Runs one cell. The solver stream of the cell at position `index` is seeded
/// with `spec.seed + index`; the dataset with `spec.seed + cell.instance`.
pub fn run_cell(spec: &SweepSpec, cell: &SweepCell, index: usize) -> Result<SweepRow> {
    let start = Instant::now();
    let seed = spec.seed + index as u64;
    let data_seed = spec.seed + cell.instance as u64;
    let d = spec.dataset(cell, data_seed)?;
    let svm = SparseSvmConfig::soft(spec.lambda_for(cell.p));
    let lp = build_lp(&d, &svm)?;
    let exact = solve_exact_working_set(&lp, &ExactOptions::new(1e-9))?;
    let (r_primal, r_dual) = (exact.primal.norm_l1, exact.dual.norm_l1);
    let (iterations, a_queries, data_queries) = match spec.solver {
        SolverKind::Exact => (exact.pivots, 0, 0),
        SolverKind::Mwu => {
            let cfg = MwuConfig::new(cell.eps, r_primal.max(1.0), r_dual.max(1.0)).with_seed(seed);
            let s = solve_mwu(&lp, &cfg, &OracleSet::new(&d, &svm)?)?;
            (s.report.iterations, s.report.ledger.a_queries, s.report.ledger.data_queries)
        }
    };
    Ok(SweepRow {
        p: cell.p,
        m: cell.m,
        eps: cell.eps,
        seed,
        data_seed,
        r_primal,
        r_dual,
        iterations,
        a_queries,
        data_queries,
        wall_ms: spec.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

/// Runs every cell on a pool of `jobs` threads. Rows come back in cell order
/// whatever the thread count.
pub fn run_sweep(spec: &SweepSpec, jobs: usize) -> Result<Vec<SweepRow>> {
    let cells = spec.cells();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| {
        cells.par_iter().enumerate().map(|(i, cell)| run_cell(spec, cell, i)).collect()
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidParameter("need at least two paired points".into()));
    }
    if x.iter().chain(y).any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidParameter("log-log fit needs positive values".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("x values are all equal".into()));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paired_spec(ms: Vec<usize>) -> SweepSpec {
        SweepSpec {
            family: SweepFamily::Paired,
            solver: SolverKind::Exact,
            p: vec![3],
            m: Some(ms),
            eps: vec![0.1],
            replicates: 1,
            lambda: Some(0.5),
            seed: 0,
            timing: false,
        }
    }

    #[test]
    fn paired_norm_tracks_m() {
        let rows = run_sweep(&paired_spec(vec![2, 4, 8]), 1).unwrap();
        let r: Vec<f64> = rows.iter().map(|r| r.r_primal).collect();
        for (row, want) in r.iter().zip([2.0, 4.0, 8.0]) {
            assert!((row - want).abs() < 1e-9);
        }
        assert!(rows.iter().all(|r| r.wall_ms.is_none()));
    }

    #[test]
    fn odd_paired_m_rejected() {
        assert!(run_sweep(&paired_spec(vec![3]), 1).is_err());
    }

    #[test]
    fn cell_order_and_seeds() {
        let mut spec = paired_spec(vec![2, 4]);
        spec.eps = vec![0.1, 0.2];
        spec.replicates = 2;
        spec.seed = 10;
        let cells = spec.cells();
        assert_eq!(cells.len(), 8);
        assert_eq!(cells[1], SweepCell { p: 3, m: 2, eps: 0.1, replicate: 1, instance: 1 });
        assert_eq!(cells[2].instance, 0);
        assert_eq!(cells[4].instance, 2);
        let rows = run_sweep(&spec, 2).unwrap();
        assert_eq!(rows[7].seed, 17);
        assert_eq!(rows[7].data_seed, 13);
    }

    #[test]
    fn empty_grid() {
        let mut spec = paired_spec(vec![2]);
        spec.p.clear();
        assert!(run_sweep(&spec, 1).unwrap().is_empty());
    }

    #[test]
    fn slope_of_power_law() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(1.5)).collect();
        assert!((log_log_slope(&x, &y).unwrap() - 1.5).abs() < 1e-12);
        assert!(log_log_slope(&[1.0], &[1.0]).is_err());
    }
}
