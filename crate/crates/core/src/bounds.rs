//! Closed-form risk, variance and solution-norm bounds for the margin and
//! truncated-subgaussian problem families. All logarithms are natural.

use serde::{Deserialize, Serialize};
use statrs::function::erf::{erf, erfc};

use crate::error::{Error, Result};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Truncated moments `G_k(x) = int_{-inf}^x t^k phi(t) dt` for `k = 0, 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussMoments {
    pub g0: f64,
    pub g1: f64,
    pub g2: f64,
}

pub fn gauss_moments(x: f64) -> GaussMoments {
    // erfc keeps full relative precision deep in the left tail
    let g0 = 0.5 * erfc(-x / std::f64::consts::SQRT_2);
    let phi = normal_pdf(x);
    let g2 = if x == f64::NEG_INFINITY { 0.0 } else { g0 - x * phi };
    GaussMoments { g0, g1: -phi, g2 }
}

fn require_mu_above_one(mu: f64) -> Result<()> {
    if !(mu > 1.0) || !mu.is_finite() {
        return Err(Error::InvalidParameter(format!("mu must be a finite value > 1, got {mu}")));
    }
    Ok(())
}

fn require_confidence(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok(())
}

/// Upper bound on the expected hinge loss of the planted direction:
/// the `N(mu, 1)` density evaluated at 1.
pub fn risk_bound(mu: f64) -> Result<f64> {
    require_mu_above_one(mu)?;
    Ok(normal_pdf(1.0 - mu))
}

/// `[(1 - mu)^2 + 1] [1 + erf((1 - mu) / sqrt 2)]`, an upper bound on the
/// variance of the hinge loss. Defined for `mu >= 1`, where the dropped
/// `(1 - mu) phi(1 - mu)` term is nonpositive.
pub fn variance_bound(mu: f64) -> Result<f64> {
    if !(mu >= 1.0) || !mu.is_finite() {
        return Err(Error::InvalidParameter(format!("mu must be a finite value >= 1, got {mu}")));
    }
    let d = 1.0 - mu;
    Ok((d * d + 1.0) * erfc(-d / std::f64::consts::SQRT_2))
}

/// How the variance enters the middle term of the Bernstein bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BernsteinMiddle {
    /// `4 Var[L] sqrt(log(2/delta)/m)`, as plugged in for the empirical-risk bound.
    #[default]
    Variance,
    /// `4 sqrt(Var[L]) sqrt(log(2/delta)/m)`, the textbook form.
    StdDev,
}

/// With probability at least `1 - delta`, the empirical hinge risk of the planted
/// direction over `m` samples is below this value.
pub fn bernstein_bound(mu: f64, delta_trunc: f64, m: usize, delta: f64) -> Result<f64> {
    bernstein_bound_with(mu, delta_trunc, m, delta, BernsteinMiddle::Variance)
}

pub fn bernstein_bound_with(
    mu: f64,
    delta_trunc: f64,
    m: usize,
    delta: f64,
    middle: BernsteinMiddle,
) -> Result<f64> {
    require_mu_above_one(mu)?;
    require_confidence(delta)?;
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    if !(delta_trunc > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "truncation radius must be > 0, got {delta_trunc}"
        )));
    }
    let log_term = (2.0 / delta).ln();
    let m = m as f64;
    let v = variance_bound(mu)?;
    let spread = match middle {
        BernsteinMiddle::Variance => v,
        BernsteinMiddle::StdDev => v.sqrt(),
    };
    Ok(risk_bound(mu)? + 4.0 * spread * (log_term / m).sqrt()
        + 4.0 * (delta_trunc + 1.0) * log_term / m)
}

/// `1 / (sqrt(2 pi) p) + 4 (2 log p + 1) log(2/delta) / m`.
pub fn growing_family_risk_bound(p: usize, m: usize, delta: f64) -> Result<f64> {
    if p < 2 || m == 0 {
        return Err(Error::InvalidParameter(format!("need p >= 2 and m >= 1, got p={p}, m={m}")));
    }
    require_confidence(delta)?;
    let (p, m) = (p as f64, m as f64);
    Ok(INV_SQRT_2PI / p + 4.0 * (2.0 * p.ln() + 1.0) * (2.0 / delta).ln() / m)
}

/// Mean and truncation radius of the growing-dimension family:
/// `mu = c sqrt(1 + 2 log p)`, `Delta = 2 log p`.
pub fn growing_family_parameters(p: usize, c: f64) -> (f64, f64) {
    let lp = (p as f64).ln();
    (c * (1.0 + 2.0 * lp).sqrt(), 2.0 * lp)
}

/// `sqrt(p') / nu`, the largest L1 norm of the hard-margin optimum.
pub fn hard_margin_norm_bound(p_prime: usize, nu: f64) -> f64 {
    (p_prime as f64).sqrt() / nu
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBounds {
    pub primal: f64,
    pub dual: f64,
}

/// Bounds on the primal (`R`) and dual (`r`) L1 norms of the soft-margin LP
/// optimum. The primal bound carries the summed rather than averaged loss, so
/// its risk terms are the dual's multiplied by `m`.
pub fn soft_margin_norm_bounds(p: usize, m: usize, lambda: f64, delta: f64) -> Result<NormBounds> {
    if p < 2 || m == 0 {
        return Err(Error::InvalidParameter(format!("need p >= 2 and m >= 1, got p={p}, m={m}")));
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be >= 0, got {lambda}")));
    }
    require_confidence(delta)?;
    let (pf, mf) = (p as f64, m as f64);
    let growth = 1.0 + 2.0 * pf.ln();
    let log_term = (2.0 / delta).ln();
    let reg = lambda * growth.sqrt();
    Ok(NormBounds {
        primal: INV_SQRT_2PI * mf / pf + 4.0 * growth * log_term + reg,
        dual: INV_SQRT_2PI / pf + 4.0 * growth * log_term / mf + reg,
    })
}

/// Default regularization for the growing-dimension sweeps, chosen so that
/// `lambda sqrt(1 + 2 log p) = 1`.
pub fn default_lambda(p: usize) -> f64 {
    1.0 / (1.0 + 2.0 * (p as f64).ln()).sqrt()
}

/// `[1 + erf(-sqrt(2 log p))] p^2`, which tends to zero as `p` grows.
pub fn tail_decay_ratio(p: f64) -> f64 {
    erfc((2.0 * p.ln()).sqrt()) * p * p
}

/// `1 + erf(x / sqrt 2)`; exposed for callers that want the literal form.
pub fn one_plus_erf_scaled(x: f64) -> f64 {
    1.0 + erf(x / std::f64::consts::SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_at_zero() {
        let g = gauss_moments(0.0);
        assert!((g.g0 - 0.5).abs() < 1e-15);
        assert!((g.g1 + INV_SQRT_2PI).abs() < 1e-15);
        assert!((g.g2 - 0.5).abs() < 1e-15);
        assert!((g.g1 + 0.39894).abs() < 1e-5);
    }

    #[test]
    fn moments_vanish_in_left_tail() {
        let g = gauss_moments(-40.0);
        assert!(g.g0.abs() < 1e-300 && g.g1.abs() < 1e-300 && g.g2.abs() < 1e-300);
        let g = gauss_moments(f64::NEG_INFINITY);
        assert_eq!((g.g0, g.g1, g.g2), (0.0, -0.0, 0.0));
    }

    #[test]
    fn risk_bound_values() {
        assert!((risk_bound(1.0 + 1e-9).unwrap() - INV_SQRT_2PI).abs() < 1e-12);
        let expect = (-2.0f64).exp() / (2.0 * std::f64::consts::PI).sqrt();
        assert!((risk_bound(3.0).unwrap() - expect).abs() < 1e-15);
        assert!((risk_bound(3.0).unwrap() - 0.05399).abs() < 1e-5);
        let p = 100.0f64;
        let mu = 1.0 + (2.0 * p.ln()).sqrt();
        assert!((risk_bound(mu).unwrap() - INV_SQRT_2PI / p).abs() < 1e-15);
        assert!(risk_bound(1.0).is_err());
        assert!(risk_bound(0.5).is_err());
    }

    #[test]
    fn variance_bound_values() {
        assert!((variance_bound(1.0).unwrap() - 1.0).abs() < 1e-15);
        let v3 = variance_bound(3.0).unwrap();
        assert!((v3 - 5.0 * (1.0 - erf(2f64.sqrt()))).abs() < 1e-14);
        assert!((v3 - 0.2275).abs() < 1e-3);
        assert!(variance_bound(0.99).is_err());
        let grid: Vec<f64> = (0..=80).map(|k| 2.0 + 0.1 * k as f64).collect();
        for w in grid.windows(2) {
            assert!(variance_bound(w[1]).unwrap() < variance_bound(w[0]).unwrap());
        }
    }

    #[test]
    fn literal_erf_form_matches_erfc_form() {
        for mu in [1.0, 1.5, 2.0, 3.0] {
            let d = 1.0 - mu;
            let literal = (d * d + 1.0) * one_plus_erf_scaled(d);
            assert!((literal - variance_bound(mu).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn bernstein_limits_and_domain() {
        let mu = 2.5;
        let r = risk_bound(mu).unwrap();
        let far = bernstein_bound(mu, 3.0, 1_000_000_000, 0.1).unwrap();
        assert!((far - r).abs() < 1e-3);
        assert!(bernstein_bound(mu, 3.0, 100, 2.0).is_err());
        assert!(bernstein_bound(mu, 3.0, 0, 0.1).is_err());
        assert!(bernstein_bound(0.5, 3.0, 10, 0.1).is_err());
        let sd = bernstein_bound_with(mu, 3.0, 100, 0.1, BernsteinMiddle::StdDev).unwrap();
        assert!(sd > bernstein_bound(mu, 3.0, 100, 0.1).unwrap());
    }

    #[test]
    fn bernstein_independent_reevaluation() {
        let p = std::f64::consts::E;
        let mu = 1.0 + (2.0 * p.ln()).sqrt();
        let dt = 2.0 * p.ln();
        let (m, delta) = (100.0, 0.1);
        let l = (2.0f64 / delta).ln();
        let a = 1.0 / (2.0 * std::f64::consts::PI).sqrt() * (-(1.0 - mu) * (1.0 - mu) / 2.0).exp();
        let v = ((1.0 - mu).powi(2) + 1.0) * (1.0 + erf((1.0 - mu) / 2f64.sqrt()));
        let expect = a + 4.0 * l.sqrt() / f64::sqrt(m) * v + 4.0 * (dt + 1.0) * l / m;
        let got = bernstein_bound(mu, dt, 100, delta).unwrap();
        assert!((got - expect).abs() < 1e-13, "{got} vs {expect}");
    }

    #[test]
    fn growing_family_value_and_dominance() {
        let got = growing_family_risk_bound(100, 1000, 0.1).unwrap();
        let expect = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * 100.0)
            + 4.0 * (2.0 * 100f64.ln() + 1.0) * 20f64.ln() / 1000.0;
        assert!((got - expect).abs() < 1e-15);
        assert!(growing_family_risk_bound(1, 10, 0.1).is_err());
        // at fixed m the data term dominates for large p
        let big = growing_family_risk_bound(1_000_000, 50, 0.1).unwrap();
        let data_term = 4.0 * (2.0 * 1e6f64.ln() + 1.0) * 20f64.ln() / 50.0;
        assert!((big - data_term) / big < 1e-6);
    }

    #[test]
    fn growing_family_covers_first_and_third_bernstein_terms() {
        let delta = 0.1;
        for p in [10usize, 30, 100, 300, 1000, 3000, 10_000] {
            let mu = 1.0 + (2.0 * (p as f64).ln()).sqrt();
            let dt = 2.0 * (p as f64).ln();
            for m in [10usize, 100, 1000] {
                let l = (2.0f64 / delta).ln();
                let first = risk_bound(mu).unwrap();
                let third = 4.0 * (dt + 1.0) * l / m as f64;
                let bound = growing_family_risk_bound(p, m, delta).unwrap();
                assert!(first + third <= bound * (1.0 + 1e-12), "p={p} m={m}");
            }
        }
    }

    #[test]
    fn hard_margin_values() {
        assert_eq!(hard_margin_norm_bound(1, 1.0), 1.0);
        assert_eq!(hard_margin_norm_bound(4, 0.5), 4.0);
    }

    #[test]
    fn soft_bounds_structure() {
        let b = soft_margin_norm_bounds(100, 50, 0.0, 0.1).unwrap();
        let l = 20f64.ln();
        let g = 1.0 + 2.0 * 100f64.ln();
        assert!((b.dual - (INV_SQRT_2PI / 100.0 + 4.0 * g * l / 50.0)).abs() < 1e-14);
        assert!((b.primal - 50.0 * b.dual).abs() < 1e-12);
        assert!(soft_margin_norm_bounds(1, 50, 0.1, 0.1).is_err());
        assert!(soft_margin_norm_bounds(10, 50, -0.1, 0.1).is_err());
    }

    #[test]
    fn default_lambda_makes_reg_term_unit() {
        for p in [16usize, 64, 4096] {
            let lam = default_lambda(p);
            assert!((lam * (1.0 + 2.0 * (p as f64).ln()).sqrt() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn tail_ratio_decays() {
        let ps: Vec<f64> = (0..=50).map(|k| 10f64 * 10f64.powf(k as f64 * 0.1)).collect();
        for w in ps.windows(2) {
            assert!(tail_decay_ratio(w[1]) < tail_decay_ratio(w[0]));
        }
        assert!(tail_decay_ratio(1e6) < 0.15);
    }
}
