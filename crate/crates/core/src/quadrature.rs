//! Composite Gauss–Legendre quadrature with panel doubling.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes per panel.
pub const RULE_ORDER: usize = 20;

/// Largest total node count tried before giving up.
pub const NODE_BUDGET: usize = 1 << 20;

/// Nodes and weights of the `order`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Roots of `P_order` are located by Newton iteration from the Chebyshev-like
/// initial guess `cos(π (i + 3/4) / (order + 1/2))`.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let n = order as f64;
    let mut rule = Vec::with_capacity(order);
    for i in 0..order {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(order, x);
            derivative = dp;
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(order, x);
        if dp.is_finite() {
            derivative = dp;
        }
        let weight = 2.0 / ((1.0 - x * x) * derivative * derivative);
        rule.push((x, weight));
    }
    rule
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=order {
        let k = k as f64;
        let next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = next;
    }
    let n = order as f64;
    let dp = n * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

fn default_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(RULE_ORDER))
}

fn composite(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let rule = default_rule();
    let width = (b - a) / panels as f64;
    let half = 0.5 * width;
    (0..panels)
        .map(|p| {
            let mid = a + (p as f64 + 0.5) * width;
            half * rule.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>()
        })
        .sum()
}

/// Integrates `f` over `[a, b]`, doubling the number of panels until two
/// successive estimates differ by less than `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut panels = 1;
    let mut previous = composite(&f, a, b, panels);
    let mut change = f64::INFINITY;
    while 2 * panels * RULE_ORDER <= NODE_BUDGET {
        panels *= 2;
        let current = composite(&f, a, b, panels);
        change = (current - previous).abs();
        previous = current;
        if change < tol {
            return Ok(current);
        }
    }
    Err(Error::QuadratureNonConvergence {
        best_estimate: previous,
        last_change: change,
        nodes: panels * RULE_ORDER,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        for order in [2, 5, 10, 20, 40] {
            let rule = gauss_legendre(order);
            let total: f64 = rule.iter().map(|&(_, w)| w).sum();
            assert!((total - 2.0).abs() < 1e-13, "order {order}: {total}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let rule = gauss_legendre(RULE_ORDER);
        for degree in 0..(2 * RULE_ORDER) as i32 {
            let got: f64 = rule.iter().map(|&(x, w)| w * x.powi(degree)).sum();
            let expected = if degree % 2 == 1 {
                0.0
            } else {
                2.0 / (degree as f64 + 1.0)
            };
            assert!((got - expected).abs() < 1e-14, "degree {degree}");
        }
    }

    #[test]
    fn integrates_smooth_functions() {
        let pi = std::f64::consts::PI;
        let got = integrate(f64::sin, 0.0, pi, 1e-13).unwrap();
        assert!((got - 2.0).abs() < 1e-13);
        let got = integrate(|x: f64| (-x * x).exp(), -6.0, 6.0, 1e-13).unwrap();
        assert!((got - pi.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn reports_best_estimate_on_failure() {
        // |x|^0.5 has a derivative singularity that defeats a 1e-300 tolerance
        match integrate(|x: f64| x.abs().sqrt(), -1.0, 1.0, 1e-300) {
            Err(Error::QuadratureNonConvergence { best_estimate, nodes, .. }) => {
                assert!((best_estimate - 4.0 / 3.0).abs() < 1e-6);
                assert!(nodes <= NODE_BUDGET);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
        assert!(integrate(f64::sin, 0.0, 1.0, 0.0).is_err());
    }
}
