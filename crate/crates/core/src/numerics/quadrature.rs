//! Gauss–Legendre quadrature with process-wide cached node tables.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the Legendre recurrence; the Chebyshev-based
    /// initial guess converges in a handful of steps for every root.
    fn compute(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // Evaluate P_n(x) and P_n'(x) by upward recurrence.
                let mut p0 = 1.0;
                let mut p1 = x;
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// ∫_a^b f, mapping the reference nodes affinely onto `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = crate::numerics::CompensatedSum::new();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(half.mul_add(x, mid)));
        }
        half * acc.value()
    }

    /// Reference nodes/weights, for callers that map them by hand.
    pub fn nodes_weights(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Shared `n`-point rule. Tables are built once and leaked; only a few fixed
/// orders are ever requested.
pub fn gauss_legendre(n: usize) -> &'static GaussLegendre {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static GaussLegendre>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("quadrature cache poisoned");
    map.entry(n)
        .or_insert_with(|| Box::leak(Box::new(GaussLegendre::compute(n))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_polynomials_up_to_degree_2n_minus_1() {
        let rule = gauss_legendre(4);
        // degree 7 with a 4-point rule: ∫₀¹ x⁷ = 1/8
        let got = rule.integrate(0.0, 1.0, |x| x.powi(7));
        assert!((got - 0.125).abs() < 1e-15, "got {got}");
    }

    #[test]
    fn smooth_integrand_to_machine_precision() {
        let rule = gauss_legendre(16);
        let got = rule.integrate(0.0, 1.0, f64::exp);
        let exact = std::f64::consts::E - 1.0;
        assert!((got - exact).abs() < 1e-14, "got {got} exact {exact}");
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 2, 3, 16, 64, 256] {
            let rule = gauss_legendre(n);
            let total: f64 = rule.nodes_weights().map(|(_, w)| w).sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n} total {total}");
            assert_eq!(rule.len(), n);
        }
    }

    #[test]
    fn nodes_are_symmetric_and_sorted() {
        let rule = gauss_legendre(64);
        let pts: Vec<f64> = rule.nodes_weights().map(|(x, _)| x).collect();
        for w in pts.windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..pts.len() {
            assert!((pts[i] + pts[pts.len() - 1 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn cache_returns_same_table() {
        let a = gauss_legendre(24) as *const _;
        let b = gauss_legendre(24) as *const _;
        assert_eq!(a, b);
    }
}
