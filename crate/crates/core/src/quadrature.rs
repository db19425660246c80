//! Adaptive composite Gauss-Legendre quadrature for smooth complex-valued
//! integrands on a real interval.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Points per panel.
pub const PANEL_ORDER: usize = 20;

/// Panels allowed before giving up.
pub const MAX_PANELS: usize = 4096;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = n.div_ceil(2);
        for i in 0..half {
            // Newton on P_n starting from the Tricomi-type initial guess.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integral of `f` over `[a, b]` together with the integral of `|f|`.
    pub fn panel<F: Fn(f64) -> Complex64>(&self, f: &F, a: f64, b: f64) -> (Complex64, f64) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut l1 = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(c + h * x);
            sum += v * *w;
            l1 += v.norm() * w;
        }
        (sum * h, l1 * h)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrates `f` over `[a, b]` by recursive bisection. A panel is accepted
/// when the one-panel and two-half-panel estimates agree to
/// `max(tol * |I|, 64 eps * ||f||_1)` scaled by the panel's share of `[a, b]`.
pub fn integrate_adaptive<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
) -> Result<Complex64> {
    let rule = GaussLegendre::new(PANEL_ORDER);
    let (whole, l1) = rule.panel(&f, a, b);
    let target = (tol * whole.norm()).max(64.0 * f64::EPSILON * l1);
    let width = b - a;

    let mut stack = vec![(a, b, whole)];
    let mut total = Complex64::new(0.0, 0.0);
    let mut panels = 1usize;
    while let Some((lo, hi, coarse)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let (left, _) = rule.panel(&f, lo, mid);
        let (right, _) = rule.panel(&f, mid, hi);
        let fine = left + right;
        let local = target * (hi - lo) / width;
        if (fine - coarse).norm() <= local {
            total += fine;
            continue;
        }
        panels += 1;
        if panels > max_panels {
            return Err(Error::QuadratureNonConvergence { panels: max_panels });
        }
        stack.push((mid, hi, right));
        stack.push((lo, mid, left));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(10);
        let w: f64 = rule.weights().iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
        // degree 19 is the highest exact degree for 10 points
        let (v, _) = rule.panel(&|x: f64| Complex64::new(x.powi(18), 0.0), -1.0, 1.0);
        assert!((v.re - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_oscillatory_exponential() {
        // int_0^1 e^{2 pi i 7 x} e^x dx = (e - 1) / (1 + 14 pi i)
        let v = integrate_adaptive(
            |x| Complex64::new(0.0, 14.0 * std::f64::consts::PI * x).exp() * x.exp(),
            0.0,
            1.0,
            1e-13,
            MAX_PANELS,
        )
        .unwrap();
        let exact = Complex64::new(std::f64::consts::E - 1.0, 0.0) / Complex64::new(1.0, 14.0 * std::f64::consts::PI);
        assert!((v - exact).norm() / exact.norm() < 1e-12);
    }

    #[test]
    fn nonconvergence_is_reported() {
        let r = integrate_adaptive(
            |x| Complex64::new((1e4 * x).sin() / (x - 0.5).abs().sqrt().max(1e-300), 0.0),
            0.0,
            1.0,
            1e-14,
            8,
        );
        assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
    }
}
