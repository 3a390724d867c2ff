//! Dense-tableau two-phase simplex for `min c.x  s.t.  A x <= b, x >= 0`.
//!
//! Ground truth at desk scale: returns an optimal vertex together with the
//! dual multipliers read off the slack columns, and checks the optimality
//! conditions (primal and dual feasibility, complementary slackness, zero
//! duality gap) against the caller's tolerance before returning.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{dot, DualSolution, LpInstance, PrimalSolution};

/// Entering-variable selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PivotRule {
    /// Lowest-index improving column, lowest-index leaving variable on ties.
    Bland,
    /// Most negative reduced cost, falling back to Bland's rule for as long as
    /// pivots stay degenerate.
    DantzigWithBlandFallback,
}

#[derive(Debug, Clone, Copy)]
pub struct ExactOptions {
    pub tol: f64,
    pub pivot_rule: PivotRule,
    /// Pivot cap is `iteration_factor * (n + m)`.
    pub iteration_factor: usize,
}

impl ExactOptions {
    pub fn new(tol: f64) -> Self {
        ExactOptions { tol, pivot_rule: PivotRule::DantzigWithBlandFallback, iteration_factor: 50 }
    }

    pub fn with_pivot_rule(mut self, rule: PivotRule) -> Self {
        self.pivot_rule = rule;
        self
    }
}

/// Residuals of the optimality conditions for a primal/dual pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub complementarity: f64,
    pub duality_gap: f64,
}

impl Certificate {
    pub fn max_residual(&self) -> f64 {
        self.primal_infeasibility
            .max(self.dual_infeasibility)
            .max(self.complementarity)
            .max(self.duality_gap)
    }
}

#[derive(Debug, Clone)]
pub struct ExactSolution {
    pub primal: PrimalSolution,
    pub dual: DualSolution,
    /// Stacked primal variables.
    pub x: Vec<f64>,
    pub pivots: usize,
    pub certificate: Certificate,
}

pub fn solve_exact(lp: &LpInstance, tol: f64) -> Result<ExactSolution> {
    solve_exact_with(lp, &ExactOptions::new(tol))
}

pub fn solve_exact_with(lp: &LpInstance, opts: &ExactOptions) -> Result<ExactSolution> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be > 0, got {}", opts.tol)));
    }
    check_shapes(lp)?;
    if lp.layout.slack == 0 && lp.c_diag.iter().all(|&c| c >= 0.0) {
        return solve_through_dual(lp, opts);
    }
    let mut t = Tableau::new(lp, opts);
    t.phase_one()?;
    t.phase_two()?;

    let (mut x, mut alpha) = (t.primal(), t.duals());
    let mut cert = certify(lp, &x, &alpha);
    if cert.max_residual() > opts.tol {
        // accumulated tableau round-off; recompute from the final basis
        if let Some((xr, ar)) = t.refine(lp) {
            let c2 = certify(lp, &xr, &ar);
            if c2.max_residual() < cert.max_residual() {
                x = xr;
                alpha = ar;
                cert = c2;
            }
        }
    }
    finish(lp, opts, x, alpha, cert, t.pivots)
}

/// Columns priced in per round of [`solve_exact_working_set`].
const WORKING_SET_BATCH: usize = 32;

/// Same optimum as [`solve_exact_with`], computed by column generation for the
/// soft-margin LP: the simplex runs over the slack columns plus a growing set
/// of feature columns, and columns with negative reduced cost under the
/// current duals are priced in until none remain. Useful when `p` is large
/// and the optimal weight vector is sparse. Hard-margin LPs are solved in full.
pub fn solve_exact_working_set(lp: &LpInstance, opts: &ExactOptions) -> Result<ExactSolution> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be > 0, got {}", opts.tol)));
    }
    check_shapes(lp)?;
    let slack = lp.layout.slack;
    if slack == 0 || slack != lp.num_constraints {
        return solve_exact_with(lp, opts);
    }
    let m = lp.num_constraints;

    // first guess: price with every sample at its largest multiplier
    let seed_alpha: Vec<f64> = lp.c_diag[..m].to_vec();
    let reduced = reduced_costs(lp, &seed_alpha);
    let mut cols: Vec<usize> = (0..slack).collect();
    cols.extend(most_negative(&reduced, slack, &vec![false; lp.n], WORKING_SET_BATCH));

    let mut sub = restrict(lp, &cols);
    let mut t = Tableau::new(&sub, opts);
    t.max_pivots = opts.iteration_factor * (lp.n + m);
    t.phase_one()?;
    t.phase_two()?;
    let mut in_set = vec![false; lp.n];
    for &k in &cols {
        in_set[k] = true;
    }
    loop {
        let alpha = t.duals();
        let reduced = reduced_costs(lp, &alpha);
        let add = most_negative(&reduced, 0, &in_set, WORKING_SET_BATCH);
        if add.is_empty() {
            break;
        }
        let new_cols: Vec<Vec<f64>> =
            add.iter().map(|&k| (0..m).map(|i| lp.a(i, k)).collect()).collect();
        let new_costs: Vec<f64> = add.iter().map(|&k| lp.c_diag[k]).collect();
        t.insert_columns(&new_cols, &new_costs);
        for &k in &add {
            in_set[k] = true;
        }
        cols.extend(add);
        t.run(false)?;
    }
    sub = restrict(lp, &cols);

    let scatter = |xs: Vec<f64>| {
        let mut x = vec![0.0; lp.n];
        for (v, &k) in xs.into_iter().zip(&cols) {
            x[k] = v;
        }
        x
    };
    let (mut x, mut alpha) = (scatter(t.primal()), t.duals());
    let mut cert = certify(lp, &x, &alpha);
    if cert.max_residual() > opts.tol {
        if let Some((xr, ar)) = t.refine(&sub) {
            let xr = scatter(xr);
            let c2 = certify(lp, &xr, &ar);
            if c2.max_residual() < cert.max_residual() {
                x = xr;
                alpha = ar;
                cert = c2;
            }
        }
    }
    finish(lp, opts, x, alpha, cert, t.pivots)
}

/// Runs the simplex on the dual `min b . alpha` s.t. `-A^T alpha <= c`,
/// `alpha >= 0`. With `c >= 0` its slack basis is feasible, which skips the
/// phase 1 that a hard-margin program (every `b_i < 0`) would otherwise need
/// on all rows. An unbounded dual means an infeasible primal.
fn solve_through_dual(lp: &LpInstance, opts: &ExactOptions) -> Result<ExactSolution> {
    let (m, n) = (lp.num_constraints, lp.n);
    let mut a_diags = Vec::with_capacity(n * m);
    for k in 0..n {
        a_diags.extend((0..m).map(|i| -lp.a(i, k)));
    }
    let dual = LpInstance {
        layout: crate::types::LpLayout { slack: m, features: 0 },
        n: m,
        num_constraints: n,
        c_diag: lp.b.clone(),
        a_diags,
        b: lp.c_diag.clone(),
    };
    let mut t = Tableau::new(&dual, opts);
    t.max_pivots = opts.iteration_factor * (n + m);
    t.phase_one()?;
    match t.phase_two() {
        Err(Error::Unbounded) => return Err(Error::Infeasible),
        other => other?,
    }
    // the dual's multipliers are the primal variables
    let (mut alpha, mut x) = (t.primal(), t.duals());
    let mut cert = certify(lp, &x, &alpha);
    if cert.max_residual() > opts.tol {
        if let Some((ar, xr)) = t.refine(&dual) {
            let c2 = certify(lp, &xr, &ar);
            if c2.max_residual() < cert.max_residual() {
                x = xr;
                alpha = ar;
                cert = c2;
            }
        }
    }
    finish(lp, opts, x, alpha, cert, t.pivots)
}

fn reduced_costs(lp: &LpInstance, alpha: &[f64]) -> Vec<f64> {
    let mut reduced = lp.c_diag.clone();
    for (i, &a) in alpha.iter().enumerate() {
        if a != 0.0 {
            for (r, v) in reduced.iter_mut().zip(lp.a_row(i)) {
                *r += a * v;
            }
        }
    }
    reduced
}

/// Up to `limit` columns from `start` on, outside `taken`, with negative
/// reduced cost, most negative first (ties by index).
fn most_negative(reduced: &[f64], start: usize, taken: &[bool], limit: usize) -> Vec<usize> {
    let mut cand: Vec<usize> =
        (start..reduced.len()).filter(|&k| !taken[k] && reduced[k] < -COST_EPS).collect();
    cand.sort_by(|&a, &b| reduced[a].total_cmp(&reduced[b]).then(a.cmp(&b)));
    cand.truncate(limit);
    cand
}

/// The LP over the listed columns only. Its layout is a flat block of
/// variables and only serves the shape checks.
fn restrict(lp: &LpInstance, cols: &[usize]) -> LpInstance {
    let m = lp.num_constraints;
    let mut a_diags = Vec::with_capacity(m * cols.len());
    for i in 0..m {
        let row = lp.a_row(i);
        a_diags.extend(cols.iter().map(|&k| row[k]));
    }
    LpInstance {
        layout: crate::types::LpLayout { slack: cols.len(), features: 0 },
        n: cols.len(),
        num_constraints: m,
        c_diag: cols.iter().map(|&k| lp.c_diag[k]).collect(),
        a_diags,
        b: lp.b.clone(),
    }
}

fn finish(
    lp: &LpInstance,
    opts: &ExactOptions,
    mut x: Vec<f64>,
    mut alpha: Vec<f64>,
    cert: Certificate,
    pivots: usize,
) -> Result<ExactSolution> {
    if cert.max_residual() > opts.tol {
        return Err(Error::Numerical(format!(
            "optimality residuals exceed tolerance {}: {:?}",
            opts.tol, cert
        )));
    }
    for v in x.iter_mut() {
        *v = v.max(0.0);
    }
    for a in alpha.iter_mut() {
        *a = a.max(0.0);
    }
    Ok(ExactSolution {
        primal: PrimalSolution::from_variables(lp, &x),
        dual: DualSolution::from_alpha(alpha),
        x,
        pivots,
        certificate: cert,
    })
}

fn check_shapes(lp: &LpInstance) -> Result<()> {
    let (m, n) = (lp.num_constraints, lp.n);
    if lp.c_diag.len() != n || lp.b.len() != m || lp.a_diags.len() != m * n || lp.layout.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "LP with n={}, m={} has c={}, b={}, A={}",
            n,
            m,
            lp.c_diag.len(),
            lp.b.len(),
            lp.a_diags.len()
        )));
    }
    if m == 0 {
        return Err(Error::DimensionMismatch("LP has no constraints".into()));
    }
    Ok(())
}

/// Residuals of `x` and `alpha` (multipliers of `A_i . x <= b_i`, sign-flipped
/// so that `alpha >= 0`) against the optimality conditions.
pub fn certify(lp: &LpInstance, x: &[f64], alpha: &[f64]) -> Certificate {
    let (m, n) = (lp.num_constraints, lp.n);
    let ax = lp.constraint_values(x);
    let mut primal_inf: f64 = x.iter().map(|v| -v).fold(0.0, f64::max);
    let mut comp: f64 = 0.0;
    for i in 0..m {
        let slack = lp.b[i] - ax[i];
        primal_inf = primal_inf.max(-slack);
        comp = comp.max((alpha[i] * slack).abs());
    }
    // reduced costs c + A^T alpha must be nonnegative
    let mut reduced = lp.c_diag.clone();
    for i in 0..m {
        if alpha[i] != 0.0 {
            for (r, a) in reduced.iter_mut().zip(lp.a_row(i)) {
                *r += alpha[i] * a;
            }
        }
    }
    let mut dual_inf: f64 = alpha.iter().map(|a| -a).fold(0.0, f64::max);
    for k in 0..n {
        dual_inf = dual_inf.max(-reduced[k]);
        comp = comp.max((x[k] * reduced[k]).abs());
    }
    let primal_obj = dot(&lp.c_diag, x);
    let dual_obj = -dot(&lp.b, alpha);
    Certificate {
        primal_infeasibility: primal_inf.max(0.0),
        dual_infeasibility: dual_inf.max(0.0),
        complementarity: comp,
        duality_gap: (primal_obj - dual_obj).abs(),
    }
}

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-11;
const DEGENERATE_STREAK: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau {
    m: usize,
    n: usize,
    ncols: usize,
    width: usize,
    /// `(m + 1) x width`, last row is the objective row, last column the rhs.
    data: Vec<f64>,
    basis: Vec<usize>,
    kinds: Vec<ColKind>,
    /// Row sign applied so that every rhs is nonnegative.
    row_sign: Vec<f64>,
    costs: Vec<f64>,
    rule: PivotRule,
    tol: f64,
    pivots: usize,
    max_pivots: usize,
}

impl Tableau {
    fn new(lp: &LpInstance, opts: &ExactOptions) -> Self {
        let (m, n) = (lp.num_constraints, lp.n);
        let row_sign: Vec<f64> = lp.b.iter().map(|&b| if b < 0.0 { -1.0 } else { 1.0 }).collect();

        // Crash basis: a slack with coefficient +1, or a structural column that
        // is a positive multiple of a unit vector; otherwise an artificial.
        let mut unit_col = vec![None; m];
        let mut used = vec![false; n];
        for k in 0..n {
            let mut nz = (0..m).filter(|&i| lp.a(i, k) != 0.0);
            if let (Some(i), None) = (nz.next(), nz.next()) {
                if unit_col[i].is_none() && row_sign[i] * lp.a(i, k) > 0.0 && !used[k] {
                    unit_col[i] = Some(k);
                    used[k] = true;
                }
            }
        }
        let needs_art: Vec<usize> = (0..m)
            .filter(|&i| row_sign[i] < 0.0 && unit_col[i].is_none())
            .collect();
        let ncols = n + m + needs_art.len();
        let width = ncols + 1;
        let mut data = vec![0.0; (m + 1) * width];
        let mut kinds = vec![ColKind::Structural; n];
        kinds.extend(std::iter::repeat(ColKind::Slack).take(m));
        kinds.extend(std::iter::repeat(ColKind::Artificial).take(needs_art.len()));

        for i in 0..m {
            let s = row_sign[i];
            let row = &mut data[i * width..(i + 1) * width];
            for k in 0..n {
                row[k] = s * lp.a(i, k);
            }
            row[n + i] = s;
            row[ncols] = s * lp.b[i];
        }
        let mut basis = vec![usize::MAX; m];
        for (a, &i) in needs_art.iter().enumerate() {
            data[i * width + n + m + a] = 1.0;
            basis[i] = n + m + a;
        }
        for i in 0..m {
            if basis[i] != usize::MAX {
                continue;
            }
            if row_sign[i] > 0.0 {
                basis[i] = n + i;
            } else if let Some(k) = unit_col[i] {
                let piv = data[i * width + k];
                for v in &mut data[i * width..(i + 1) * width] {
                    *v /= piv;
                }
                basis[i] = k;
            }
        }
        let mut costs = lp.c_diag.clone();
        costs.resize(ncols, 0.0);
        Tableau {
            m,
            n,
            ncols,
            width,
            data,
            basis,
            kinds,
            row_sign,
            costs,
            rule: opts.pivot_rule,
            tol: opts.tol,
            pivots: 0,
            max_pivots: opts.iteration_factor * (n + m),
        }
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.data[r * self.width + self.ncols]
    }

    /// Rebuilds the objective row for the given column costs.
    fn load_objective(&mut self, costs: &[f64]) {
        let (m, w) = (self.m, self.width);
        let (body, obj) = self.data.split_at_mut(m * w);
        obj.fill(0.0);
        obj[..self.ncols].copy_from_slice(&costs[..self.ncols]);
        for r in 0..m {
            let cb = costs[self.basis[r]];
            if cb != 0.0 {
                let row = &body[r * w..(r + 1) * w];
                for (o, v) in obj.iter_mut().zip(row) {
                    *o -= cb * v;
                }
            }
        }
    }

    fn phase_one(&mut self) -> Result<()> {
        if !self.kinds.contains(&ColKind::Artificial) {
            return Ok(());
        }
        let costs: Vec<f64> = self
            .kinds
            .iter()
            .map(|k| if *k == ColKind::Artificial { 1.0 } else { 0.0 })
            .collect();
        self.load_objective(&costs);
        self.run(true)?;
        let infeas: f64 = (0..self.m)
            .filter(|&r| self.kinds[self.basis[r]] == ColKind::Artificial)
            .map(|r| self.rhs(r))
            .sum();
        if infeas > self.tol {
            return Err(Error::Infeasible);
        }
        // drive zero-level artificials out of the basis where possible
        for r in 0..self.m {
            if self.kinds[self.basis[r]] != ColKind::Artificial {
                continue;
            }
            self.data[r * self.width + self.ncols] = 0.0;
            let col = (0..self.n + self.m)
                .filter(|&c| self.at(r, c).abs() > 1e-9)
                .max_by(|&a, &b| self.at(r, a).abs().total_cmp(&self.at(r, b).abs()));
            if let Some(c) = col {
                self.pivot(r, c);
            }
        }
        Ok(())
    }

    fn phase_two(&mut self) -> Result<()> {
        let costs = self.costs.clone();
        self.load_objective(&costs);
        self.run(false)
    }

    fn entering(&self, allow_artificial: bool, bland: bool) -> Option<usize> {
        let obj = &self.data[self.m * self.width..];
        let eligible = |c: &usize| allow_artificial || self.kinds[*c] != ColKind::Artificial;
        if bland {
            (0..self.ncols).filter(eligible).find(|&c| obj[c] < -COST_EPS)
        } else {
            (0..self.ncols)
                .filter(eligible)
                .filter(|&c| obj[c] < -COST_EPS)
                .min_by(|&a, &b| obj[a].total_cmp(&obj[b]))
        }
    }

    fn leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.m {
            let a = self.at(r, col);
            if a > PIVOT_EPS {
                let ratio = self.rhs(r).max(0.0) / a;
                best = match best {
                    None => Some((r, ratio)),
                    Some((br, bratio)) => {
                        if ratio < bratio - 1e-12
                            || (ratio <= bratio + 1e-12 && self.basis[r] < self.basis[br])
                        {
                            Some((r, ratio))
                        } else {
                            Some((br, bratio))
                        }
                    }
                };
            }
        }
        best.map(|(r, _)| r)
    }

    fn run(&mut self, allow_artificial: bool) -> Result<()> {
        let mut bland = self.rule == PivotRule::Bland;
        let mut streak = 0;
        loop {
            let Some(col) = self.entering(allow_artificial, bland) else {
                return Ok(());
            };
            let Some(row) = self.leaving(col) else {
                return Err(Error::Unbounded);
            };
            if self.pivots >= self.max_pivots {
                return Err(Error::IterationLimit(self.max_pivots));
            }
            let degenerate = self.rhs(row) <= 1e-12;
            self.pivot(row, col);
            if self.rule == PivotRule::DantzigWithBlandFallback {
                if degenerate {
                    streak += 1;
                    if streak > DEGENERATE_STREAK {
                        bland = true;
                    }
                } else {
                    streak = 0;
                    bland = false;
                }
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        self.pivots += 1;
        let w = self.width;
        let piv = self.at(row, col);
        let mut prow = self.data[row * w..(row + 1) * w].to_vec();
        for v in prow.iter_mut() {
            *v /= piv;
        }
        prow[col] = 1.0;
        // only columns where the pivot row is non-zero change
        let nz: Vec<usize> = (0..w).filter(|&c| prow[c] != 0.0).collect();
        for r in 0..=self.m {
            if r == row {
                continue;
            }
            let base = r * w;
            let f = self.data[base + col];
            if f == 0.0 {
                continue;
            }
            for &c in &nz {
                self.data[base + c] -= f * prow[c];
            }
            self.data[base + col] = 0.0;
        }
        self.data[row * w..(row + 1) * w].copy_from_slice(&prow);
        self.basis[row] = col;
    }

    /// Adds structural columns (original, unsigned `A` entries) after the
    /// existing ones. With `B^-1 e_i = s_i T[:, n + i]`, the tableau column of
    /// `a` is `sum_i a_i T[:, n + i]`, objective row included.
    fn insert_columns(&mut self, cols: &[Vec<f64>], costs: &[f64]) {
        let (m, k) = (self.m, cols.len());
        let (old_n, old_w) = (self.n, self.width);
        let new_w = old_w + k;
        let mut data = vec![0.0; (m + 1) * new_w];
        for r in 0..=m {
            let src = &self.data[r * old_w..(r + 1) * old_w];
            let dst = &mut data[r * new_w..(r + 1) * new_w];
            dst[..old_n].copy_from_slice(&src[..old_n]);
            dst[old_n + k..].copy_from_slice(&src[old_n..]);
            for (j, col) in cols.iter().enumerate() {
                let mut v = 0.0;
                for (i, &a) in col.iter().enumerate() {
                    if a != 0.0 {
                        v += a * src[old_n + i];
                    }
                }
                dst[old_n + j] = v;
            }
        }
        let obj = &mut data[m * new_w..];
        for (j, &c) in costs.iter().enumerate() {
            obj[old_n + j] += c;
        }
        self.data = data;
        for b in &mut self.basis {
            if *b >= old_n {
                *b += k;
            }
        }
        self.kinds.splice(old_n..old_n, std::iter::repeat(ColKind::Structural).take(k));
        self.costs.splice(old_n..old_n, costs.iter().copied());
        self.n += k;
        self.ncols += k;
        self.width = new_w;
    }

    fn primal(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for r in 0..self.m {
            if self.basis[r] < self.n {
                x[self.basis[r]] = self.rhs(r);
            }
        }
        x
    }

    /// Multipliers of the original `<=` rows: the reduced cost of slack `i`
    /// equals `-y_i`, and `alpha = -y`.
    fn duals(&self) -> Vec<f64> {
        let obj = &self.data[self.m * self.width..];
        (0..self.m).map(|i| obj[self.n + i]).collect()
    }

    /// Re-solves `B x_B = b` and `B^T y = c_B` directly from the final basis.
    fn refine(&self, lp: &LpInstance) -> Option<(Vec<f64>, Vec<f64>)> {
        let m = self.m;
        let column = |c: usize| -> Vec<f64> {
            (0..m)
                .map(|i| {
                    if c < self.n {
                        self.row_sign[i] * lp.a(i, c)
                    } else if c - self.n == i {
                        self.row_sign[i]
                    } else {
                        0.0
                    }
                })
                .collect()
        };
        // a basic artificial marks a redundant row; B is singular without it
        if self.basis.iter().any(|&c| self.kinds[c] == ColKind::Artificial) {
            return None;
        }
        let mut bmat = vec![0.0; m * m];
        for (j, &c) in self.basis.iter().enumerate() {
            for (i, v) in column(c).into_iter().enumerate() {
                bmat[i * m + j] = v;
            }
        }
        let rhs: Vec<f64> = (0..m).map(|i| self.row_sign[i] * lp.b[i]).collect();
        let xb = lu_solve(&bmat, m, &rhs, false)?;
        let cb: Vec<f64> = self.basis.iter().map(|&c| self.costs[c]).collect();
        let yhat = lu_solve(&bmat, m, &cb, true)?;
        let mut x = vec![0.0; self.n];
        for (r, &c) in self.basis.iter().enumerate() {
            if c < self.n {
                x[c] = xb[r];
            }
        }
        let alpha = (0..m).map(|i| -self.row_sign[i] * yhat[i]).collect();
        Some((x, alpha))
    }
}

/// Solves `B z = rhs` (or `B^T z = rhs`) by Gaussian elimination with partial
/// pivoting.
fn lu_solve(b: &[f64], m: usize, rhs: &[f64], transpose: bool) -> Option<Vec<f64>> {
    let mut a: Vec<f64> = if transpose {
        let mut t = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                t[j * m + i] = b[i * m + j];
            }
        }
        t
    } else {
        b.to_vec()
    };
    let mut z = rhs.to_vec();
    for k in 0..m {
        let p = (k..m).max_by(|&i, &j| a[i * m + k].abs().total_cmp(&a[j * m + k].abs()))?;
        if a[p * m + k].abs() < 1e-14 {
            return None;
        }
        if p != k {
            for c in 0..m {
                a.swap(k * m + c, p * m + c);
            }
            z.swap(k, p);
        }
        let piv = a[k * m + k];
        for i in k + 1..m {
            let f = a[i * m + k] / piv;
            if f != 0.0 {
                for c in k..m {
                    a[i * m + c] -= f * a[k * m + c];
                }
                z[i] -= f * z[k];
            }
        }
    }
    for k in (0..m).rev() {
        let s: f64 = (k + 1..m).map(|c| a[k * m + c] * z[c]).sum();
        z[k] = (z[k] - s) / a[k * m + k];
    }
    Some(z)
}

/// Indices whose multiplier exceeds `tau * max_i alpha_i`.
pub fn support_vectors(dual: &DualSolution, tau: f64) -> Vec<usize> {
    let max = dual.alpha.iter().fold(0.0f64, |a, v| a.max(*v));
    if max <= 0.0 {
        return Vec::new();
    }
    dual.alpha
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > tau * max)
        .map(|(i, _)| i)
        .collect()
}
