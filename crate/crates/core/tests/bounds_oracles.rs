use sparse_svm::bounds::{
    bernstein_bound, gauss_moments, normal_pdf, risk_bound, soft_margin_norm_bounds, variance_bound,
};

/// Composite Simpson over `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

fn moment(k: i32, x: f64) -> f64 {
    simpson(|t| t.powi(k) * normal_pdf(t), -40.0, x, 400_000)
}

/// `E[(1 - v)^q_+]` for `v ~ N(mu, 1)`.
fn hinge_moment(q: i32, mu: f64) -> f64 {
    simpson(|v| (1.0 - v).powi(q) * normal_pdf(v - mu), mu - 40.0, 1.0, 400_000)
}

#[test]
fn moments_match_composite_simpson() {
    for &x in &[-8.0, -3.5, -1.0, 0.0, 0.25, 2.0, 5.0, 8.0] {
        let g = gauss_moments(x);
        assert!((g.g0 - moment(0, x)).abs() < 1e-10, "G0({x})");
        assert!((g.g1 - moment(1, x)).abs() < 1e-10, "G1({x})");
        assert!((g.g2 - moment(2, x)).abs() < 1e-10, "G2({x})");
    }
}

#[test]
fn risk_and_variance_bounds_dominate_untruncated_moments() {
    for &mu in &[1.0001, 1.5, 2.0, 3.0, 5.0, 8.0] {
        let mean = hinge_moment(1, mu);
        let var = hinge_moment(2, mu) - mean * mean;
        assert!(mean <= risk_bound(mu).unwrap(), "mean at mu={mu}");
        assert!(var <= variance_bound(mu).unwrap(), "variance at mu={mu}");
    }
}

#[test]
fn risk_bound_is_density_at_one() {
    // phi(1 - mu) written out independently
    for &mu in &[1.5, 2.0, 4.0] {
        let want = (-(1.0f64 - mu).powi(2) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        assert!((risk_bound(mu).unwrap() - want).abs() < 1e-15);
    }
}

#[test]
fn bernstein_shrinks_to_risk_bound() {
    let mu = 3.0;
    let far = bernstein_bound(mu, 10.0, 100_000_000, 0.1).unwrap();
    assert!((far - risk_bound(mu).unwrap()).abs() < 1e-3);
    let near = bernstein_bound(mu, 10.0, 100, 0.1).unwrap();
    assert!(near > far);
}

#[test]
fn primal_bound_is_m_times_dual_bound_up_to_regularizer() {
    let (p, m, lambda) = (256, 128, 0.3);
    let b = soft_margin_norm_bounds(p, m, lambda, 0.1).unwrap();
    let reg = lambda * (1.0 + 2.0 * (p as f64).ln()).sqrt();
    assert!(((b.primal - reg) - m as f64 * (b.dual - reg)).abs() < 1e-9);
}
