//! Norm-aware primal-dual multiplicative-weights solver.
//!
//! Writes the LP as `G x >= h` with `G = -A`, `h = -b`, and bisects on the
//! objective value `gamma`. For each `gamma` a multiplicative-weights player
//! holds a distribution `w` over the constraints, and the primal player answers
//! with the best single vertex of
//!
//! ```text
//! K(gamma) = { x >= 0 : ||x||_1 <= R, c.x <= gamma }
//! ```
//!
//! Weights of constraints the response satisfies shrink by `exp(-eta (G_i x - h_i))`.
//! The run ends when either the averaged response, repaired to exact
//! feasibility, costs at most `gamma + eps/2`, or no point of `K(gamma)`
//! satisfies the `w`-weighted constraint, which certifies `gamma` as too low.
//!
//! Every iteration reads `G^T w` and one column of `G` through the oracles, so
//! the ledger reflects the full access pattern. Per bisection phase the
//! standard analysis caps the work at
//! `4 rho^2 ln(m) / (eps/2)^2` iterations with width `rho = R max|A| + max h`;
//! with `phases <= ceil(log2(2 bracket / eps))` that is the
//! `O(R^2 r^2 log(n) / eps^2)` budget when `max|A|` is of order `r`.

use std::time::Instant;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::datagen::rng_from_seed;
use crate::error::{Error, Result};
use crate::oracle::OracleSet;
use crate::types::{DualSolution, LpInstance, PrimalSolution, QueryLedger, VariableRef};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MwuConfig {
    pub epsilon: f64,
    /// `R`: bound on the L1 norm of an optimal primal solution.
    pub primal_bound: f64,
    /// `r`: bound on the L1 norm of an optimal dual solution.
    pub dual_bound: f64,
    pub max_iters: usize,
    /// Seed for the sampling readout.
    pub seed: u64,
}

impl MwuConfig {
    pub fn new(epsilon: f64, primal_bound: f64, dual_bound: f64) -> Self {
        MwuConfig { epsilon, primal_bound, dual_bound, max_iters: 50_000_000, seed: 0 }
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon must be > 0, got {}", self.epsilon)));
        }
        if !(self.primal_bound >= 1.0 && self.primal_bound.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "primal norm bound must be >= 1, got {}",
                self.primal_bound
            )));
        }
        if !(self.dual_bound >= 1.0 && self.dual_bound.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dual norm bound must be >= 1, got {}",
                self.dual_bound
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be >= 1".into()));
        }
        Ok(())
    }
}

/// `|G_i x - h_i|` over the responses played, against the a priori width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthStats {
    pub bound: f64,
    pub max_observed: f64,
    pub mean_observed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MwuReport {
    pub iterations: usize,
    pub phases: usize,
    /// Objective of the returned primal.
    pub upper_bound: f64,
    /// Objective of the returned dual, which is exactly dual feasible.
    pub lower_bound: f64,
    pub gap: f64,
    pub eta: f64,
    pub width: WidthStats,
    pub ledger: QueryLedger,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone)]
pub struct MwuSolution {
    pub primal: PrimalSolution,
    pub dual: DualSolution,
    pub x: Vec<f64>,
    pub report: MwuReport,
}

/// Per-row accuracy of one bisection phase. Topping up slacks then costs at
/// most another `eps/4`, so a phase run to its budget lands within `eps/2`.
pub fn inner_accuracy(epsilon: f64) -> f64 {
    epsilon / 4.0
}

/// Iterations after which the averaged response of a phase violates no row,
/// the objective row included, by more than `inner_accuracy(eps)`.
pub fn phase_iteration_bound(width: f64, rows: usize, epsilon: f64) -> f64 {
    let inner = inner_accuracy(epsilon);
    4.0 * width * width * (rows.max(2) as f64).ln() / (inner * inner)
}

enum Phase {
    Feasible,
    Infeasible,
    Done,
}

struct Best {
    upper: f64,
    x: Vec<f64>,
    lower: f64,
    alpha: Vec<f64>,
}

struct Solver<'o, 'd> {
    oracle: &'o OracleSet<'d>,
    ledger: QueryLedger,
    m: usize,
    n: usize,
    c: Vec<f64>,
    h: Vec<f64>,
    slack: usize,
    radius: f64,
    eta: f64,
    width: f64,
    epsilon: f64,
    max_iters: usize,
    iterations: usize,
    width_sum: f64,
    width_max: f64,
    log_w: Vec<f64>,
    w: Vec<f64>,
    g: Vec<f64>,
    col: Vec<f64>,
    best: Best,
}

pub fn solve_mwu(lp: &LpInstance, cfg: &MwuConfig, oracle: &OracleSet) -> Result<MwuSolution> {
    let start = Instant::now();
    cfg.validate()?;
    if oracle.layout() != lp.layout || oracle.num_constraints() != lp.num_constraints {
        return Err(Error::DimensionMismatch(format!(
            "oracle serves {} constraints over {} variables, LP has {} over {}",
            oracle.num_constraints(),
            oracle.n(),
            lp.num_constraints,
            lp.n
        )));
    }
    let mut s = Solver::new(oracle, cfg)?;
    let (mut lo, mut hi) = (0.0, s.initial_upper(cfg.dual_bound));
    // whether some phase has shown that `hi` is reachable
    let mut hi_reached = s.best.upper <= hi;
    let mut phases = 0;
    loop {
        lo = f64::max(lo, s.best.lower);
        if s.best.upper < hi {
            hi = s.best.upper;
            hi_reached = true;
        }
        if s.best.upper - s.best.lower <= cfg.epsilon {
            break;
        }
        let collapsed = hi - lo <= cfg.epsilon / 2.0;
        if collapsed && hi_reached {
            break;
        }
        let gamma = if collapsed { hi } else { 0.5 * (lo + hi) };
        phases += 1;
        match s.run_phase(gamma)? {
            Phase::Feasible => {
                hi = gamma;
                hi_reached = true;
            }
            Phase::Infeasible if collapsed => return Err(Error::NoFeasibleSolutionWithinBounds),
            Phase::Infeasible => lo = gamma,
            Phase::Done => break,
        }
    }
    if !s.best.upper.is_finite() {
        return Err(Error::NoFeasibleSolutionWithinBounds);
    }
    let gap = s.best.upper - s.best.lower;
    if gap > cfg.epsilon {
        return Err(Error::NoFeasibleSolutionWithinBounds);
    }
    let primal = PrimalSolution::from_variables(lp, &s.best.x);
    // alpha need not be dual feasible; its certified value is the lower bound
    let mut dual = DualSolution::from_alpha(s.best.alpha.clone());
    dual.objective = s.best.lower;
    let report = MwuReport {
        iterations: s.iterations,
        phases,
        upper_bound: s.best.upper,
        lower_bound: s.best.lower,
        gap,
        eta: s.eta,
        width: WidthStats {
            bound: s.width,
            max_observed: s.width_max,
            mean_observed: if s.iterations > 0 { s.width_sum / s.iterations as f64 } else { 0.0 },
        },
        ledger: s.ledger,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok(MwuSolution { primal, dual, x: s.best.x, report })
}

impl<'o, 'd> Solver<'o, 'd> {
    fn new(oracle: &'o OracleSet<'d>, cfg: &MwuConfig) -> Result<Self> {
        let (m, n) = (oracle.num_constraints(), oracle.n());
        let mut ledger = QueryLedger::new();
        let c = (0..n).map(|k| oracle.query_c(k, &mut ledger)).collect::<Result<Vec<_>>>()?;
        let h = (0..m)
            .map(|i| oracle.query_b(i, &mut ledger).map(|b| -b))
            .collect::<Result<Vec<_>>>()?;
        if c.iter().any(|&v| !(v > 0.0)) || h.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::InvalidParameter(
                "solver needs positive costs and negative right-hand sides".into(),
            ));
        }
        let mut col = vec![0.0; m];
        let mut max_a: f64 = 0.0;
        for k in 0..n {
            oracle.a_column(k, &mut col, &mut ledger)?;
            max_a = col.iter().fold(max_a, |acc, v| acc.max(v.abs()));
        }
        let mut s = Solver {
            oracle,
            ledger,
            m,
            n,
            c,
            h,
            slack: oracle.layout().slack,
            radius: cfg.primal_bound,
            eta: 0.0,
            width: 0.0,
            epsilon: cfg.epsilon,
            max_iters: cfg.max_iters,
            iterations: 0,
            width_sum: 0.0,
            width_max: 0.0,
            log_w: vec![0.0; m + 1],
            w: vec![1.0 / (m + 1) as f64; m + 1],
            g: vec![0.0; n],
            col,
            best: Best { upper: f64::INFINITY, x: vec![0.0; n], lower: 0.0, alpha: vec![0.0; m] },
        };
        if s.slack == m {
            // beta = 0 with unit slacks is always feasible
            s.best.x[..m].copy_from_slice(&s.h);
            s.best.upper = dot(&s.h, &s.c[..m]);
        }
        let c_max = max_of(&s.c);
        let gamma_max = s.initial_upper(cfg.dual_bound);
        s.width = s.radius * max_a.max(c_max) + max_of(&s.h).max(gamma_max);
        s.eta = inner_accuracy(cfg.epsilon) / (2.0 * s.width * s.width);
        Ok(s)
    }

    fn initial_upper(&self, dual_bound: f64) -> f64 {
        // OPT = h.alpha* <= r max h, and OPT = c.x* <= R max c
        let by_norms = f64::min(dual_bound * max_of(&self.h), self.radius * max_of(&self.c));
        f64::min(self.best.upper, by_norms)
    }

    fn refresh_weights(&mut self) {
        let top = self.log_w.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let mut total = 0.0;
        for (w, l) in self.w.iter_mut().zip(self.log_w.iter_mut()) {
            *l -= top;
            *w = l.exp();
            total += *w;
        }
        for w in &mut self.w {
            *w /= total;
        }
    }

    /// `g = G^T w` over the constraint rows.
    fn read_weighted_columns(&mut self) {
        self.oracle.a_transpose_times(&self.w[..self.m], &mut self.g, &mut self.ledger);
        for v in &mut self.g {
            *v = -*v;
        }
    }

    /// Lower bound `s h.w - R max_k (s g_k - c_k)^+` carried by the multipliers
    /// `alpha = s w`. It is valid whenever some optimal primal has L1 norm at
    /// most `R`, and when the max term vanishes `alpha` is dual feasible outright.
    fn dual_value(&self, s: f64) -> f64 {
        let hw = dot(&self.h, &self.w[..self.m]);
        let excess = self
            .g
            .iter()
            .zip(&self.c)
            .fold(0.0, |acc: f64, (g, c)| acc.max(s * g - c));
        s * hw - self.radius * excess
    }

    fn record_dual(&mut self, s: f64) {
        let value = self.dual_value(s);
        if value > self.best.lower {
            self.best.lower = value;
            for (a, w) in self.best.alpha.iter_mut().zip(&self.w) {
                *a = s * w;
            }
        }
    }

    /// Candidate scalings for the current weights: the largest exactly
    /// feasible one and the one implied by the objective-row weight.
    fn certify_dual(&mut self) -> Result<()> {
        let mut tau = f64::INFINITY;
        for (g, c) in self.g.iter().zip(&self.c) {
            if *g > 0.0 {
                tau = tau.min(c / g);
            }
        }
        if !tau.is_finite() {
            // w^T G x <= 0 < w^T h for every x >= 0
            return Err(Error::Infeasible);
        }
        self.record_dual(tau);
        let w0 = self.w[self.m];
        if w0 > 0.0 {
            self.record_dual(1.0 / w0);
        }
        Ok(())
    }

    /// Golden-section search of the concave `dual_value` over the scaling.
    fn polish_dual(&mut self) {
        let hw = dot(&self.h, &self.w[..self.m]);
        let g_max = max_of(&self.g);
        if !(g_max > 0.0) || !(hw > 0.0) {
            return;
        }
        // beyond this scaling every extra unit of h.w costs at least R g_max > h.w
        let (mut a, mut b) = (0.0, 1.0);
        while self.dual_value(2.0 * b) > self.dual_value(b) && b < 1e12 {
            b *= 2.0;
        }
        b *= 2.0;
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let x1 = b - phi * (b - a);
            let x2 = a + phi * (b - a);
            if self.dual_value(x1) < self.dual_value(x2) {
                a = x1;
            } else {
                b = x2;
            }
        }
        self.record_dual(0.5 * (a + b));
    }

    fn run_phase(&mut self, gamma: f64) -> Result<Phase> {
        let (m, n) = (self.m, self.n);
        let mut x_sum = vec![0.0; n];
        let mut gx_sum = vec![0.0; m];
        let mut cost_sum = 0.0;
        let mut steps = 0usize;
        let budget = phase_iteration_bound(self.width, m + 1, self.epsilon).ceil() as usize;
        loop {
            if self.iterations >= self.max_iters {
                return Err(Error::IterationLimit(self.max_iters));
            }
            self.refresh_weights();
            self.read_weighted_columns();
            self.certify_dual()?;
            if self.best.upper - self.best.lower <= self.epsilon {
                return Ok(Phase::Done);
            }

            // best vertex of the radius-R simplex against the weighted rows
            let w0 = self.w[m];
            let mut k_best = None;
            let mut q_best = 0.0;
            for k in 0..n {
                let q = self.g[k] - w0 * self.c[k];
                if q > q_best {
                    q_best = q;
                    k_best = Some(k);
                }
            }
            let demand = dot(&self.h, &self.w[..m]) - w0 * gamma;
            if self.radius * q_best < demand {
                self.polish_dual();
                return Ok(Phase::Infeasible);
            }

            let mut widest: f64;
            match k_best {
                Some(k) => {
                    self.oracle.a_column(k, &mut self.col, &mut self.ledger)?;
                    x_sum[k] += self.radius;
                    cost_sum += self.c[k] * self.radius;
                    let objective_slack = gamma - self.c[k] * self.radius;
                    widest = objective_slack.abs();
                    self.log_w[m] -= self.eta * objective_slack;
                    for i in 0..m {
                        let gi = -self.col[i] * self.radius;
                        gx_sum[i] += gi;
                        let loss = gi - self.h[i];
                        widest = widest.max(loss.abs());
                        self.log_w[i] -= self.eta * loss;
                    }
                }
                None => {
                    // the origin: every constraint row is short by h_i
                    widest = gamma;
                    self.log_w[m] -= self.eta * gamma;
                    for i in 0..m {
                        widest = widest.max(self.h[i]);
                        self.log_w[i] += self.eta * self.h[i];
                    }
                }
            }
            steps += 1;
            self.iterations += 1;
            self.width_sum += widest;
            self.width_max = self.width_max.max(widest);

            if self.repair(&x_sum, &gx_sum, cost_sum, steps) <= gamma + self.epsilon / 2.0
                || steps >= budget
            {
                return Ok(Phase::Feasible);
            }
        }
    }

    /// Turns the averaged response into an exactly feasible point, either by
    /// topping up slacks or by scaling, and records it if it beats the best
    /// upper bound. Returns the repaired objective.
    fn repair(&mut self, x_sum: &[f64], gx_sum: &[f64], cost_sum: f64, steps: usize) -> f64 {
        let t = steps as f64;
        let mean_cost = cost_sum / t;
        let mut scale = f64::INFINITY;
        let mut top_up = 0.0;
        for i in 0..self.m {
            let gi = gx_sum[i] / t;
            scale = scale.min(gi / self.h[i]);
            if i < self.slack {
                top_up += self.c[i] * (self.h[i] - gi).max(0.0);
            }
        }
        let by_slack = if self.slack == self.m { mean_cost + top_up } else { f64::INFINITY };
        let by_scale = if scale > 0.0 { mean_cost / scale } else { f64::INFINITY };
        let value = by_slack.min(by_scale);
        if value < self.best.upper {
            self.best.upper = value;
            if by_slack <= by_scale {
                for (k, x) in self.best.x.iter_mut().enumerate() {
                    *x = x_sum[k] / t;
                }
                for i in 0..self.m {
                    self.best.x[i] += (self.h[i] - gx_sum[i] / t).max(0.0);
                }
            } else {
                for (k, x) in self.best.x.iter_mut().enumerate() {
                    *x = x_sum[k] / (t * scale);
                }
            }
        }
        value
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
}

/// `k` independent draws from `alpha / ||alpha||_1`.
pub fn sample_dual(dual: &DualSolution, k: usize, seed: u64) -> Result<Vec<usize>> {
    let dist = WeightedIndex::new(dual.alpha.iter().map(|a| a.abs()))
        .map_err(|e| Error::InvalidParameter(format!("cannot sample dual: {e}")))?;
    let mut rng = rng_from_seed(seed);
    Ok((0..k).map(|_| dist.sample(&mut rng)).collect())
}

/// `k` independent draws over the stacked `(xi, beta+, beta-)` vector,
/// proportional to magnitude.
pub fn sample_primal_support(primal: &PrimalSolution, k: usize, seed: u64) -> Result<Vec<VariableRef>> {
    let vars = primal.variables();
    let dist = WeightedIndex::new(vars.iter().map(|v| v.abs()))
        .map_err(|e| Error::InvalidParameter(format!("cannot sample primal: {e}")))?;
    let layout = primal.layout();
    let mut rng = rng_from_seed(seed);
    Ok((0..k).map(|_| layout.classify(dist.sample(&mut rng))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{gen_margin, gen_paired, gen_xor, MarginProblemSpec};
    use crate::exact::solve_exact;
    use crate::formulation::build_lp;
    use crate::types::{Dataset, SparseSvmConfig};

    fn solve(d: &Dataset, svm: &SparseSvmConfig, cfg: &MwuConfig) -> (LpInstance, Result<MwuSolution>) {
        let lp = build_lp(d, svm).unwrap();
        let oracle = OracleSet::new(d, svm).unwrap();
        let out = solve_mwu(&lp, cfg, &oracle);
        (lp, out)
    }

    #[test]
    fn paired_objective_near_one() {
        let d = gen_paired(&[0.6, -1.1], 1).unwrap();
        let (lp, out) = solve(&d, &SparseSvmConfig::soft(0.1), &MwuConfig::new(0.05, 4.0, 2.0));
        let s = out.unwrap();
        assert!((0.95..=1.05).contains(&s.primal.objective), "{}", s.primal.objective);
        assert!(lp.max_violation(&s.x) <= 0.05);
        assert!(s.dual.objective <= 1.0 + 1e-12 && s.dual.objective >= 0.95);
    }

    #[test]
    fn hard_margin_objective_below_norm_ceiling() {
        let spec = MarginProblemSpec::new(6, 2, 0.5).unwrap();
        let d = gen_margin(&spec, 16, 11).unwrap();
        let svm = SparseSvmConfig::hard();
        let exact = solve_exact(&build_lp(&d, &svm).unwrap(), 1e-9).unwrap();
        let r = exact.primal.norm_l1.max(1.0);
        let (lp, out) = solve(&d, &svm, &MwuConfig::new(0.1, r, r));
        let s = out.unwrap();
        assert!(s.primal.objective <= 2f64.sqrt() / 0.5 + 0.1);
        assert!(s.primal.objective <= exact.primal.objective + 0.1 + 1e-9);
        assert!(lp.max_violation(&s.x) <= 0.1);
    }

    #[test]
    fn xor_hard_margin_has_no_solution() {
        let (_, out) = solve(&gen_xor(0), &SparseSvmConfig::hard(), &MwuConfig::new(0.1, 4.0, 4.0));
        assert!(matches!(
            out.unwrap_err(),
            Error::Infeasible | Error::NoFeasibleSolutionWithinBounds
        ));
    }

    #[test]
    fn runs_are_deterministic_and_counted() {
        let spec = MarginProblemSpec::new(8, 2, 0.5).unwrap();
        let d = gen_margin(&spec, 12, 3).unwrap();
        let svm = SparseSvmConfig::soft(0.05);
        let cfg = MwuConfig::new(0.05, 6.0, 1.0);
        let (lp, a) = solve(&d, &svm, &cfg);
        let (_, b) = solve(&d, &svm, &cfg);
        let (a, b) = (a.unwrap(), b.unwrap());
        assert_eq!(a.x, b.x);
        assert_eq!(a.dual, b.dual);
        assert_eq!(a.report.ledger, b.report.ledger);
        assert_eq!(a.report.iterations, b.report.iterations);

        let r = &a.report;
        assert_eq!(r.ledger.c_queries, lp.n as u64);
        assert_eq!(r.ledger.b_queries, lp.num_constraints as u64);
        assert!(r.ledger.a_queries >= r.iterations as u64);
        assert!(r.width.max_observed <= r.width.bound + 1e-12);
        let per_phase = phase_iteration_bound(r.width.bound, lp.num_constraints + 1, 0.05).ceil();
        assert!(r.iterations as f64 <= r.phases.max(1) as f64 * per_phase);
        assert!(r.gap <= 0.05 && r.gap >= 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(MwuConfig::new(0.0, 1.0, 1.0).validate().is_err());
        assert!(MwuConfig::new(0.1, 0.5, 1.0).validate().is_err());
        assert!(MwuConfig::new(0.1, 1.0, 0.5).validate().is_err());
        assert!(MwuConfig::new(0.1, 1.0, 1.0).with_max_iters(0).validate().is_err());
        assert!(MwuConfig::new(0.1, 1.0, 1.0).validate().is_ok());
    }

    #[test]
    fn iteration_cap_is_reported() {
        let d = gen_margin(&MarginProblemSpec::new(8, 2, 0.5).unwrap(), 12, 3).unwrap();
        let cfg = MwuConfig::new(0.001, 6.0, 1.0).with_max_iters(5);
        let (_, out) = solve(&d, &SparseSvmConfig::soft(0.05), &cfg);
        assert_eq!(out.unwrap_err(), Error::IterationLimit(5));
    }

    #[test]
    fn dual_sampling_point_mass_and_support() {
        let point = DualSolution::from_alpha(vec![1.0, 0.0, 0.0]);
        assert!(sample_dual(&point, 200, 1).unwrap().iter().all(|&i| i == 0));

        let mut alpha = vec![0.0; 100];
        for i in [7, 42, 93] {
            alpha[i] = 0.2;
        }
        let draws = sample_dual(&DualSolution::from_alpha(alpha), 1000, 2).unwrap();
        assert!(draws.iter().all(|i| [7, 42, 93].contains(i)));

        assert!(sample_dual(&DualSolution::from_alpha(vec![0.0; 3]), 5, 0).is_err());
    }

    #[test]
    fn dual_sampling_frequency() {
        let draws = sample_dual(&DualSolution::from_alpha(vec![0.5, 0.5]), 10_000, 17).unwrap();
        let ones = draws.iter().filter(|&&i| i == 0).count() as f64 / 10_000.0;
        assert!((0.48..=0.52).contains(&ones), "{ones}");
    }

    #[test]
    fn primal_sampling_point_mass() {
        let primal = PrimalSolution {
            xi: vec![0.0; 3],
            beta_plus: vec![1.0, 0.0],
            beta_minus: vec![0.0, 0.0],
            objective: 0.0,
            norm_l1: 1.0,
        };
        let draws = sample_primal_support(&primal, 100, 4).unwrap();
        assert!(draws.iter().all(|v| *v == VariableRef::BetaPlus(0)));
        let zero = PrimalSolution { beta_plus: vec![0.0; 2], ..primal };
        assert!(sample_primal_support(&zero, 1, 0).is_err());
    }
}
