//! Bound checks at configurable scale, one CSV row per (instance, quantity).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};

use crate::bounds::{
    bernstein_bound, default_lambda, gauss_moments, hard_margin_norm_bound, normal_pdf,
    risk_bound, soft_margin_norm_bounds, variance_bound,
};
use crate::datagen::{
    gen_margin, gen_paired, gen_subgaussian, gen_xor, MarginProblemSpec, SubgaussianProblemSpec,
};
use crate::error::{Error, Result};
use crate::exact::{solve_exact_with, solve_exact_working_set, ExactOptions};
use crate::formulation::{build_hard_lp, build_lp, build_soft_lp, empirical_hinge_risk, read_beta};
use crate::mwu::{solve_mwu, MwuConfig};
use crate::oracle::OracleSet;
use crate::types::{Dataset, SparseSvmConfig};

pub const CHECK_HEADER: [&str; 10] = [
    "check", "instance", "seed", "quantity", "measured", "bound", "tolerance", "relation", "pass",
    "mandatory",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `|measured - bound| <= tolerance`
    Equal,
    /// `measured <= bound + tolerance`
    AtMost,
    /// `measured >= bound - tolerance`
    AtLeast,
}

impl Relation {
    pub fn holds(self, measured: f64, bound: f64, tolerance: f64) -> bool {
        match self {
            Relation::Equal => (measured - bound).abs() <= tolerance,
            Relation::AtMost => measured <= bound + tolerance,
            Relation::AtLeast => measured >= bound - tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub check: String,
    pub instance: String,
    pub seed: u64,
    pub quantity: String,
    pub measured: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
    /// Rows that only feed a frequency summary are informational.
    pub mandatory: bool,
}

impl CheckRow {
    fn new(check: &str, instance: String, seed: u64, quantity: &str) -> Self {
        CheckRow {
            check: check.into(),
            instance,
            seed,
            quantity: quantity.into(),
            measured: f64::NAN,
            bound: f64::NAN,
            tolerance: 0.0,
            relation: Relation::AtMost,
            pass: false,
            mandatory: true,
        }
    }

    fn compare(mut self, measured: f64, relation: Relation, bound: f64, tolerance: f64) -> Self {
        self.measured = measured;
        self.bound = bound;
        self.tolerance = tolerance;
        self.relation = relation;
        self.pass = relation.holds(measured, bound, tolerance);
        self
    }

    fn informational(mut self) -> Self {
        self.mandatory = false;
        self
    }
}

/// True when every mandatory row passes (vacuously true for no rows).
pub fn all_mandatory_pass(rows: &[CheckRow]) -> bool {
    rows.iter().filter(|r| r.mandatory).all(|r| r.pass)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum Check {
    /// Exact optimum of contradictory pairs: objective 1, `R = m`, `r = 1`.
    Paired { x: Vec<f64>, copies: Vec<usize>, lambda: f64 },
    /// Exact optimum of XOR: objective 1 and `beta = 0`; hard margin infeasible.
    Xor { lambdas: Vec<f64> },
    /// Hard-margin norm bound `sqrt(p')/nu` over a margin-family grid.
    HardMargin {
        p: Vec<usize>,
        p_prime: Vec<usize>,
        nu: Vec<f64>,
        instances: usize,
        m_cap: usize,
    },
    /// Truncated Gaussian moments against adaptive quadrature on a grid.
    Moments { points: usize, lo: f64, hi: f64 },
    /// Monte Carlo hinge-loss mean and variance against the closed forms.
    Domination { mu: Vec<f64>, delta_trunc: f64, draws: usize },
    /// Frequency with which the empirical risk of `beta*` exceeds the
    /// Bernstein bound.
    Bernstein {
        p: usize,
        p_prime: usize,
        c: f64,
        m: usize,
        trials: usize,
        delta: f64,
        significance: f64,
    },
    /// Frequency with which the exact primal and dual norms respect the
    /// soft-margin norm bounds on the growing-dimension family.
    NormBounds { p: Vec<usize>, p_prime: usize, c: f64, instances: usize, delta: f64 },
    /// MWU against the exact solver on random small soft-margin LPs.
    SolverAgreement { instances: usize, epsilon: f64, max_m: usize, max_p: usize },
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Paired { .. } => "paired",
            Check::Xor { .. } => "xor",
            Check::HardMargin { .. } => "hard-margin",
            Check::Moments { .. } => "moments",
            Check::Domination { .. } => "domination",
            Check::Bernstein { .. } => "bernstein",
            Check::NormBounds { .. } => "norm-bounds",
            Check::SolverAgreement { .. } => "solver-agreement",
        }
    }
}

/// Runs a check with `jobs` worker threads. Instance `k` uses seed `seed + k`,
/// so the rows do not depend on `jobs`.
pub fn run_check(check: &Check, seed: u64, jobs: usize) -> Result<Vec<CheckRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| match check {
        Check::Paired { x, copies, lambda } => paired(x, copies, *lambda),
        Check::Xor { lambdas } => xor(lambdas),
        Check::HardMargin { p, p_prime, nu, instances, m_cap } => {
            hard_margin(p, p_prime, nu, *instances, *m_cap, seed)
        }
        Check::Moments { points, lo, hi } => Ok(moments(*points, *lo, *hi)),
        Check::Domination { mu, delta_trunc, draws } => domination(mu, *delta_trunc, *draws, seed),
        Check::Bernstein { p, p_prime, c, m, trials, delta, significance } => {
            bernstein(*p, *p_prime, *c, *m, *trials, *delta, *significance, seed)
        }
        Check::NormBounds { p, p_prime, c, instances, delta } => {
            norm_bounds(p, *p_prime, *c, *instances, *delta, seed)
        }
        Check::SolverAgreement { instances, epsilon, max_m, max_p } => {
            solver_agreement(*instances, *epsilon, *max_m, *max_p, seed)
        }
    })
}

const EXACT_TOL: f64 = 1e-9;
const IDENTITY_TOL: f64 = 1e-8;

fn paired(x: &[f64], copies: &[usize], lambda: f64) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for &k in copies {
        let d = gen_paired(x, k)?;
        let lp = build_soft_lp(&d, &SparseSvmConfig::soft(lambda))?;
        let s = solve_exact_with(&lp, &ExactOptions::new(EXACT_TOL))?;
        let inst = format!("copies={k};m={}", d.m());
        let row = |q: &str| CheckRow::new("paired", inst.clone(), 0, q);
        rows.push(row("objective").compare(s.primal.objective, Relation::Equal, 1.0, IDENTITY_TOL));
        rows.push(row("primal_norm").compare(
            s.primal.norm_l1,
            Relation::Equal,
            d.m() as f64,
            IDENTITY_TOL,
        ));
        rows.push(row("dual_norm").compare(s.dual.norm_l1, Relation::Equal, 1.0, IDENTITY_TOL));
    }
    Ok(rows)
}

fn xor(lambdas: &[f64]) -> Result<Vec<CheckRow>> {
    let d = gen_xor(0);
    let mut rows = Vec::new();
    for &lambda in lambdas {
        let lp = build_soft_lp(&d, &SparseSvmConfig::soft(lambda))?;
        let s = solve_exact_with(&lp, &ExactOptions::new(EXACT_TOL))?;
        let beta = read_beta(&s.primal);
        let inst = format!("lambda={lambda}");
        let row = |q: &str| CheckRow::new("xor", inst.clone(), 0, q);
        rows.push(row("objective").compare(s.primal.objective, Relation::Equal, 1.0, IDENTITY_TOL));
        let beta_inf = beta.beta.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        rows.push(row("beta_max_abs").compare(beta_inf, Relation::Equal, 0.0, IDENTITY_TOL));
    }
    let hard = solve_exact_with(&build_hard_lp(&d)?, &ExactOptions::new(EXACT_TOL));
    let infeasible = matches!(hard, Err(Error::Infeasible));
    rows.push(CheckRow::new("xor", "hard".into(), 0, "hard_infeasible").compare(
        if infeasible { 1.0 } else { 0.0 },
        Relation::Equal,
        1.0,
        0.0,
    ));
    Ok(rows)
}

/// `m = ceil(4 p' / nu^2)`, capped.
pub fn hard_margin_sample_size(p_prime: usize, nu: f64, cap: usize) -> usize {
    ((4.0 * p_prime as f64 / (nu * nu)).ceil() as usize).min(cap).max(1)
}

fn hard_margin(
    ps: &[usize],
    p_primes: &[usize],
    nus: &[f64],
    instances: usize,
    m_cap: usize,
    seed: u64,
) -> Result<Vec<CheckRow>> {
    let mut jobs = Vec::new();
    for &p in ps {
        for &pp in p_primes {
            for &nu in nus {
                if pp > p {
                    continue;
                }
                for k in 0..instances {
                    jobs.push((p, pp, nu, k));
                }
            }
        }
    }
    jobs.par_iter()
        .enumerate()
        .map(|(idx, &(p, pp, nu, k))| {
            let s = seed + idx as u64;
            let spec = MarginProblemSpec::new(p, pp, nu)?;
            let m = hard_margin_sample_size(pp, nu, m_cap);
            let d = gen_margin(&spec, m, s)?;
            let sol = solve_exact_with(&build_hard_lp(&d)?, &ExactOptions::new(EXACT_TOL))?;
            let inst = format!("p={p};p'={pp};nu={nu};m={m};k={k}");
            Ok(CheckRow::new("hard-margin", inst, s, "beta_l1").compare(
                read_beta(&sol.primal).l1_norm,
                Relation::AtMost,
                hard_margin_norm_bound(pp, nu),
                1e-6,
            ))
        })
        .collect()
}

/// Adaptive Simpson quadrature of `t^k phi(t)` over `(-inf, x]`, with the lower
/// limit cut at -40 where the integrand is below 1e-340.
pub fn quadrature_moment(k: i32, x: f64) -> f64 {
    let f = |t: f64| t.powi(k) * normal_pdf(t);
    let lo = -40.0;
    if x <= lo {
        return 0.0;
    }
    // fixed breakpoints keep the first Simpson sample from missing the bulk
    let mut total = 0.0;
    let mut edges = vec![lo];
    for e in [-8.0, -4.0, -2.0, 0.0, 2.0, 4.0, 8.0] {
        if e < x {
            edges.push(e);
        }
    }
    edges.push(x);
    for w in edges.windows(2) {
        total += adaptive_simpson(&f, w[0], w[1], 1e-15, 60);
    }
    total
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let c = 0.5 * (a + b);
    let fc = f(c);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    simpson_step(f, a, b, fa, fb, fc, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let c = 0.5 * (a + b);
    let (d, e) = (0.5 * (a + c), 0.5 * (c + b));
    let (fd, fe) = (f(d), f(e));
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, c, fa, fc, fd, left, tol / 2.0, depth - 1)
        + simpson_step(f, c, b, fc, fb, fe, right, tol / 2.0, depth - 1)
}

fn moments(points: usize, lo: f64, hi: f64) -> Vec<CheckRow> {
    let mut rows = Vec::new();
    for i in 0..points {
        let x = if points == 1 { lo } else { lo + (hi - lo) * i as f64 / (points - 1) as f64 };
        let g = gauss_moments(x);
        for (k, v) in [(0, g.g0), (1, g.g1), (2, g.g2)] {
            rows.push(
                CheckRow::new("moments", format!("x={x}"), 0, &format!("G{k}")).compare(
                    v,
                    Relation::Equal,
                    quadrature_moment(k, x),
                    IDENTITY_TOL,
                ),
            );
        }
    }
    rows
}

/// `v ~ N(mu, 1)` conditioned on `v >= -delta_trunc`, by rejection.
pub fn truncated_normal<R: Rng>(mu: f64, delta_trunc: f64, rng: &mut R) -> f64 {
    loop {
        let z: f64 = StandardNormal.sample(rng);
        let v = mu + z;
        if v >= -delta_trunc {
            return v;
        }
    }
}

fn domination(mus: &[f64], delta_trunc: f64, draws: usize, seed: u64) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (idx, &mu) in mus.iter().enumerate() {
        let s = seed + idx as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for _ in 0..draws {
            let l = (1.0 - truncated_normal(mu, delta_trunc, &mut rng)).max(0.0);
            sum += l;
            sum_sq += l * l;
            lo = lo.min(l);
            hi = hi.max(l);
        }
        let n = draws as f64;
        let mean = sum / n;
        let var = (sum_sq - n * mean * mean) / (n - 1.0);
        let inst = format!("mu={mu};delta={delta_trunc};draws={draws}");
        let row = |q: &str| CheckRow::new("domination", inst.clone(), s, q);
        rows.push(row("mean_loss").compare(mean, Relation::AtMost, risk_bound(mu)?, 0.0));
        rows.push(row("var_loss").compare(var, Relation::AtMost, variance_bound(mu)?, 0.0));
        rows.push(row("min_loss").compare(lo, Relation::AtLeast, 0.0, 0.0));
        rows.push(row("max_loss").compare(hi, Relation::AtMost, delta_trunc + 1.0, 0.0));
    }
    Ok(rows)
}

/// One-sided binomial test of `H0: rate <= q`: the probability of seeing at
/// least `hits` successes in `n` trials at rate exactly `q`.
pub fn binomial_upper_tail(hits: u64, n: u64, q: f64) -> f64 {
    if hits == 0 {
        return 1.0;
    }
    let b = Binomial::new(q, n).expect("valid binomial parameters");
    b.sf(hits - 1)
}

#[allow(clippy::too_many_arguments)]
fn bernstein(
    p: usize,
    p_prime: usize,
    c: f64,
    m: usize,
    trials: usize,
    delta: f64,
    significance: f64,
    seed: u64,
) -> Result<Vec<CheckRow>> {
    let spec = SubgaussianProblemSpec::new(p, p_prime, c, 2.0 * (p as f64).ln())?;
    let bound = bernstein_bound(spec.mu, spec.delta_trunc, m, delta)?;
    let mut rows: Vec<CheckRow> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let s = seed + k as u64;
            let d = gen_subgaussian(&spec, m, s)?;
            let risk = empirical_hinge_risk(&d, &spec.beta_star)?;
            let inst = format!("p={p};p'={p_prime};c={c};m={m};trial={k}");
            Ok(CheckRow::new("bernstein", inst, s, "empirical_risk")
                .compare(risk, Relation::AtMost, bound, 0.0)
                .informational())
        })
        .collect::<Result<_>>()?;
    let exceed = rows.iter().filter(|r| !r.pass).count() as u64;
    let p_value = binomial_upper_tail(exceed, trials as u64, delta);
    let inst = format!("p={p};p'={p_prime};c={c};m={m};trials={trials};delta={delta}");
    rows.push(CheckRow::new("bernstein", inst.clone(), seed, "exceed_fraction").compare(
        exceed as f64 / trials.max(1) as f64,
        Relation::AtMost,
        delta,
        0.0,
    ).informational());
    rows.push(CheckRow::new("bernstein", inst, seed, "binomial_p_value").compare(
        p_value,
        Relation::AtLeast,
        significance,
        0.0,
    ));
    Ok(rows)
}

fn norm_bounds(
    ps: &[usize],
    p_prime: usize,
    c: f64,
    instances: usize,
    delta: f64,
    seed: u64,
) -> Result<Vec<CheckRow>> {
    let jobs: Vec<(usize, usize)> =
        ps.iter().flat_map(|&p| (0..instances).map(move |k| (p, k))).collect();
    let mut rows: Vec<CheckRow> = jobs
        .par_iter()
        .enumerate()
        .map(|(idx, &(p, k))| {
            let s = seed + idx as u64;
            let m = p / 2;
            let spec = SubgaussianProblemSpec::growing(p, p_prime, c)?;
            let d = gen_subgaussian(&spec, m, s)?;
            let lambda = default_lambda(p);
            let lp = build_soft_lp(&d, &SparseSvmConfig::soft(lambda))?;
            let sol = solve_exact_working_set(&lp, &ExactOptions::new(EXACT_TOL))?;
            let b = soft_margin_norm_bounds(p, m, lambda, delta)?;
            let inst = format!("p={p};m={m};k={k}");
            let row = |q: &str| CheckRow::new("norm-bounds", inst.clone(), s, q);
            Ok(vec![
                row("primal_norm")
                    .compare(sol.primal.norm_l1, Relation::AtMost, b.primal, 0.0)
                    .informational(),
                row("dual_norm")
                    .compare(sol.dual.norm_l1, Relation::AtMost, b.dual, 0.0)
                    .informational(),
            ])
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    for &p in ps {
        for q in ["primal_norm", "dual_norm"] {
            let prefix = format!("p={p};");
            let hits: Vec<bool> = rows
                .iter()
                .filter(|r| r.quantity == q && r.instance.starts_with(&prefix))
                .map(|r| r.pass)
                .collect();
            let freq = hits.iter().filter(|&&h| h).count() as f64 / hits.len().max(1) as f64;
            rows.push(
                CheckRow::new("norm-bounds", format!("p={p};instances={instances}"), seed, &format!("{q}_coverage"))
                    .compare(freq, Relation::AtLeast, 1.0 - delta, 0.0),
            );
        }
    }
    Ok(rows)
}

/// A random small soft-margin instance: features uniform on `[-1, 1]`, labels
/// from a random direction with 10% flipped, `lambda` uniform on `[0.02, 0.2]`.
pub fn random_soft_instance(seed: u64, max_m: usize, max_p: usize) -> Result<(Dataset, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.random_range(5.min(max_m)..=max_m);
    let p = rng.random_range(2.min(max_p)..=max_p);
    let lambda = rng.random_range(0.02..0.2);
    let dir: Vec<f64> = (0..p).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut labels = Vec::with_capacity(m);
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let x: Vec<f64> = (0..p).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s: f64 = x.iter().zip(&dir).map(|(a, b)| a * b).sum();
        let y = if s >= 0.0 { 1.0 } else { -1.0 };
        labels.push(if rng.random_bool(0.1) { -y } else { y });
        rows.push(x);
    }
    Ok((Dataset::new(labels, rows)?, lambda))
}

fn solver_agreement(
    instances: usize,
    epsilon: f64,
    max_m: usize,
    max_p: usize,
    seed: u64,
) -> Result<Vec<CheckRow>> {
    let per: Vec<Vec<CheckRow>> = (0..instances)
        .into_par_iter()
        .map(|k| {
            let s = seed + k as u64;
            let (d, lambda) = random_soft_instance(s, max_m, max_p)?;
            let svm = SparseSvmConfig::soft(lambda);
            let lp = build_lp(&d, &svm)?;
            let exact = solve_exact_with(&lp, &ExactOptions::new(EXACT_TOL))?;
            let cfg = MwuConfig::new(
                epsilon,
                exact.primal.norm_l1.max(1.0),
                exact.dual.norm_l1.max(1.0),
            )
            .with_seed(s);
            let mwu = solve_mwu(&lp, &cfg, &OracleSet::new(&d, &svm)?)?;
            let opt = exact.primal.objective;
            let inst = format!("m={};p={};lambda={lambda}", d.m(), d.p());
            let row = |q: &str| CheckRow::new("solver-agreement", inst.clone(), s, q);
            Ok(vec![
                row("exact_duality_gap").compare(
                    exact.certificate.duality_gap,
                    Relation::AtMost,
                    1e-8,
                    0.0,
                ),
                row("mwu_objective_error").compare(
                    (mwu.primal.objective - opt).abs(),
                    Relation::AtMost,
                    epsilon,
                    0.0,
                ),
                row("mwu_max_violation").compare(lp.max_violation(&mwu.x), Relation::AtMost, epsilon, 0.0),
                row("mwu_dual_shortfall").compare(opt - mwu.dual.objective, Relation::AtMost, epsilon, 0.0),
                row("mwu_dual_excess").compare(mwu.dual.objective - opt, Relation::AtMost, 0.0, 1e-9),
            ])
        })
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}
