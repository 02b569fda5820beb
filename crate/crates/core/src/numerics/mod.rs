//! Floating-point plumbing: compensated summation, deterministic reductions,
//! dense polynomials, Gauss–Legendre quadrature, and accelerated alternating
//! series. Everything here is exact about *order of operations* — the heavy
//! sums in this crate must be bit-identical run to run.

pub mod quadrature;
pub mod series;

use num_complex::Complex64;

/// Neumaier-compensated accumulator. Unlike plain Kahan summation the
/// compensation also tracks the case where the addend dominates the running
/// sum, so cancellation-heavy series keep ~1 ulp of the true sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn of(values: impl IntoIterator<Item = f64>) -> f64 {
        let mut acc = Self::new();
        for v in values {
            acc.add(v);
        }
        acc.value()
    }
}

/// Complex compensated accumulator (componentwise Neumaier).
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Sums `parts` with a fixed balanced pairwise tree. The tree shape depends
/// only on `parts.len()`, so combining per-segment partials through this
/// function yields the same bits no matter how the partials were produced.
pub fn pairwise_sum(parts: &[f64]) -> f64 {
    match parts.len() {
        0 => 0.0,
        1 => parts[0],
        n => {
            let mid = n / 2;
            pairwise_sum(&parts[..mid]) + pairwise_sum(&parts[mid..])
        }
    }
}

/// Pairwise product with the same fixed-tree guarantee as [`pairwise_sum`].
pub fn pairwise_product(parts: &[Complex64]) -> Complex64 {
    match parts.len() {
        0 => Complex64::new(1.0, 0.0),
        1 => parts[0],
        n => {
            let mid = n / 2;
            pairwise_product(&parts[..mid]) * pairwise_product(&parts[mid..])
        }
    }
}

/// Dense real polynomial, coefficients in ascending degree order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// x^n
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0f64;
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul_add(x, c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(0.0);
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * (i + 1) as f64)
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = vec![0.0; self.coeffs.len() + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i + 1] = c / (i + 1) as f64;
        }
        Self::new(coeffs)
    }

    /// `self + self' + self'' + …` (finite because differentiation
    /// terminates). Shows up when integrating `poly(log t) / t²` in closed
    /// form: `∫ q(log t)/t² dt = -(q + q' + q'' + …)(log t) / t`.
    pub fn derivative_tail_sum(&self) -> Self {
        let mut total = self.clone();
        let mut d = self.derivative();
        while !(d.coeffs.len() == 1 && d.coeffs[0] == 0.0) {
            total = total.add(&d);
            d = d.derivative();
        }
        total
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0.0; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeffs.get(i).unwrap_or(&0.0) + other.coeffs.get(i).unwrap_or(&0.0);
        }
        Self::new(coeffs)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_survives_cancellation() {
        // Naive summation loses the 1.0s entirely.
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(CompensatedSum::of(xs), 2.0);

        let naive: f64 = xs.iter().sum();
        assert_eq!(naive, 0.0);
    }

    #[test]
    fn compensated_sum_harmonic_tail() {
        // Σ 1/k² forward vs backward must agree once compensated.
        let fwd = CompensatedSum::of((1..=100_000).map(|k| 1.0 / (k as f64 * k as f64)));
        let bwd = CompensatedSum::of((1..=100_000).rev().map(|k| 1.0 / (k as f64 * k as f64)));
        assert!((fwd - bwd).abs() < 1e-16, "fwd {fwd} bwd {bwd}");
    }

    #[test]
    fn pairwise_sum_matches_exact_on_integers() {
        let parts: Vec<f64> = (1..=1000).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&parts), 500_500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert_eq!(pairwise_sum(&[42.0]), 42.0);
    }

    #[test]
    fn pairwise_product_neutral_element() {
        let parts: Vec<Complex64> = (1..=6).map(|k| Complex64::new(k as f64, 0.0)).collect();
        assert_eq!(pairwise_product(&parts).re, 720.0);
        assert_eq!(pairwise_product(&[]), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn polynomial_eval_and_calculus() {
        // q(x) = 1 + 2x + 3x²
        let q = Polynomial::new(vec![1.0, 2.0, 3.0]);
        assert_eq!(q.eval(2.0), 17.0);
        assert_eq!(q.derivative().coeffs(), &[2.0, 6.0]);
        assert_eq!(q.antiderivative().coeffs(), &[0.0, 1.0, 1.0, 1.0]);
        assert_eq!(q.derivative_tail_sum().coeffs(), &[9.0, 8.0, 3.0]);

        let lin = Polynomial::new(vec![0.0, 1.0]);
        assert_eq!(lin.mul(&lin).coeffs(), &[0.0, 0.0, 1.0]);
        assert_eq!(Polynomial::monomial(3).eval(2.0), 8.0);
    }

    #[test]
    fn polynomial_trims_leading_zeros() {
        let p = Polynomial::new(vec![1.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 0);
        assert_eq!(Polynomial::constant(0.0).degree(), 0);
    }
}
