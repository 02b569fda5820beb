//! Even test functions with compactly supported Fourier transform, the
//! currency of every density statement in this crate, plus the random-matrix
//! density integrals they pair against.
//!
//! Conventions: `f̂(y) = ∫ f(x) e^{-2πixy} dx`, `f(0) = 1`, `supp f̂ ⊆ [-ν, ν]`.
//!
//! Two families:
//!
//! * **Fejér**: `f(x) = (sin(νπx)/(νπx))²`, `f̂` the triangle of height `1/ν`.
//!   Everything about it is closed-form; `f̂` is not smooth at `0, ±ν`.
//! * **Bump**: `f̂(x) = c·exp(-1/(1-(x/ν)²))` on `(-ν, ν)`, `C^∞`; `f` is
//!   entire in `x` and evaluated by a fixed 256-node Gauss–Legendre transform
//!   of the support (absolute accuracy ~1e-14 on `|Im z| ≤ 1`, verified
//!   against high-precision quadrature).

use crate::error::{Error, Result};
use crate::numerics::quadrature::gauss_legendre;
use crate::numerics::{CompensatedSum, Polynomial};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

const BUMP_RULE: usize = 256;
/// Degree cap for f̂-derivatives at 0 (all the expansions ever need).
pub const MAX_FHAT_DERIVATIVE: u32 = 8;

#[derive(Clone, Debug)]
pub enum TestFunction {
    Fejer {
        nu: f64,
    },
    Bump {
        nu: f64,
        /// Normalizing constant: `c = 1/(ν·∫_{-1}^{1} e^{-1/(1-u²)} du)`.
        norm_c: f64,
        /// Precomputed `(r_i, w_i·f̂(r_i))` on `[0, ν]` for the transform.
        nodes: Arc<Vec<(f64, f64)>>,
    },
}

fn check_nu(nu: f64) -> Result<f64> {
    if !(nu > 0.0 && nu <= 4.0 && nu.is_finite()) {
        return Err(Error::Domain(format!(
            "support radius nu must lie in (0, 4], got {nu}"
        )));
    }
    Ok(nu)
}

fn bump_profile(u: f64) -> f64 {
    if u * u >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

impl TestFunction {
    pub fn fejer(nu: f64) -> Result<Self> {
        Ok(TestFunction::Fejer { nu: check_nu(nu)? })
    }

    pub fn bump(nu: f64) -> Result<Self> {
        let nu = check_nu(nu)?;
        let rule = gauss_legendre(BUMP_RULE);
        // ∫_{-1}^{1} e^{-1/(1-u²)} du = 2∫₀¹.
        let unit = 2.0 * rule.integrate(0.0, 1.0, bump_profile);
        let norm_c = 1.0 / (nu * unit);
        let mut nodes = Vec::with_capacity(BUMP_RULE);
        let half = 0.5 * nu;
        for (x, w) in rule.nodes_weights() {
            let r = half * (x + 1.0);
            nodes.push((r, half * w * norm_c * bump_profile(r / nu)));
        }
        Ok(TestFunction::Bump {
            nu,
            norm_c,
            nodes: Arc::new(nodes),
        })
    }

    /// Parse-friendly constructor from a family name.
    pub fn from_family(name: &str, nu: f64) -> Result<Self> {
        match name {
            "fejer" => Self::fejer(nu),
            "bump" => Self::bump(nu),
            other => Err(Error::Domain(format!(
                "unknown test-function family '{other}' (expected 'fejer' or 'bump')"
            ))),
        }
    }

    pub fn nu(&self) -> f64 {
        match *self {
            TestFunction::Fejer { nu } => nu,
            TestFunction::Bump { nu, .. } => nu,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            TestFunction::Fejer { .. } => "fejer",
            TestFunction::Bump { .. } => "bump",
        }
    }

    /// Stable human-readable tag, e.g. `fejer(nu=0.5)`.
    pub fn descriptor(&self) -> String {
        format!("{}(nu={})", self.family_name(), self.nu())
    }

    /// `f̂(y)`; identically zero outside `[-ν, ν]`.
    pub fn eval_fhat(&self, y: f64) -> f64 {
        match *self {
            TestFunction::Fejer { nu } => {
                let a = y.abs();
                if a >= nu {
                    0.0
                } else {
                    (1.0 - a / nu) / nu
                }
            }
            TestFunction::Bump { nu, norm_c, .. } => norm_c * bump_profile(y / nu),
        }
    }

    /// `f̂(0)`.
    pub fn fhat_zero(&self) -> f64 {
        match *self {
            TestFunction::Fejer { nu } => 1.0 / nu,
            TestFunction::Bump { norm_c, .. } => norm_c * (-1.0f64).exp(),
        }
    }

    /// `f(t)` on the real axis.
    pub fn eval_f_real(&self, t: f64) -> f64 {
        match self {
            TestFunction::Fejer { nu } => {
                let w = nu * PI * t;
                if w.abs() < 1e-4 {
                    // (sin w / w)² = 1 - w²/3 + 2w⁴/45 - w⁶/315 + O(w⁸)
                    let w2 = w * w;
                    1.0 + w2 * (-1.0 / 3.0 + w2 * (2.0 / 45.0 - w2 / 315.0))
                } else {
                    let s = w.sin() / w;
                    s * s
                }
            }
            TestFunction::Bump { nodes, .. } => {
                // f(t) = 2∫₀^ν f̂(r)cos(2πrt) dr.
                let mut acc = CompensatedSum::new();
                for &(r, wf) in nodes.iter() {
                    acc.add(wf * (2.0 * PI * r * t).cos());
                }
                2.0 * acc.value()
            }
        }
    }

    /// `f(z)` for complex argument (entire continuation of the transform).
    pub fn eval_f(&self, z: Complex64) -> Complex64 {
        match self {
            TestFunction::Fejer { nu } => {
                let w = nu * PI * z;
                if w.norm() < 1e-4 {
                    let w2 = w * w;
                    Complex64::new(1.0, 0.0)
                        + w2 * (Complex64::new(-1.0 / 3.0, 0.0)
                            + w2 * (Complex64::new(2.0 / 45.0, 0.0) - w2 / 315.0))
                } else {
                    let s = w.sin() / w;
                    s * s
                }
            }
            TestFunction::Bump { nodes, .. } => {
                let mut re = CompensatedSum::new();
                let mut im = CompensatedSum::new();
                for &(r, wf) in nodes.iter() {
                    let c = (2.0 * PI * r * z).cos();
                    re.add(wf * c.re);
                    im.add(wf * c.im);
                }
                2.0 * Complex64::new(re.value(), im.value())
            }
        }
    }

    /// `f̂^{(j)}(0)` for `0 ≤ j ≤ 8`. Odd orders vanish by symmetry. The
    /// Fejér transform has a corner at 0, so only `j = 0` is defined there.
    pub fn fhat_derivative_at_zero(&self, j: u32) -> Result<f64> {
        if j > MAX_FHAT_DERIVATIVE {
            return Err(Error::Domain(format!(
                "f̂ derivatives implemented through order {MAX_FHAT_DERIVATIVE}, asked for {j}"
            )));
        }
        if j == 0 {
            return Ok(self.fhat_zero());
        }
        match *self {
            TestFunction::Fejer { .. } => Err(Error::Unsupported(
                "the Fejér transform is not differentiable at 0",
            )),
            TestFunction::Bump { nu, .. } => {
                if j % 2 == 1 {
                    return Ok(0.0);
                }
                let coeffs = bump_expansion_coeffs();
                let mut fact = 1.0;
                for i in 2..=j {
                    fact *= i as f64;
                }
                Ok(self.fhat_zero() * coeffs[j as usize] * fact / nu.powi(j as i32))
            }
        }
    }

    /// `∫_{-1}^{1} f̂(y) dy`.
    pub fn fhat_window_integral(&self) -> f64 {
        let nu = self.nu();
        match self {
            TestFunction::Fejer { .. } => {
                if nu <= 1.0 {
                    1.0
                } else {
                    (2.0 / nu) * (1.0 - 0.5 / nu)
                }
            }
            TestFunction::Bump { .. } => {
                if nu <= 1.0 {
                    1.0
                } else {
                    let rule = gauss_legendre(BUMP_RULE);
                    2.0 * rule.integrate(0.0, 1.0, |y| self.eval_fhat(y))
                }
            }
        }
    }

    /// Total variation of `f̂'` — drives the rigorous envelope
    /// `|f(τ)| ≤ TV(f̂')/(2πτ)²` used to truncate oscillatory integrals.
    pub fn fhat_derivative_total_variation(&self) -> f64 {
        match *self {
            // Jumps of the triangle's slope: 1/ν² + 2/ν² + 1/ν².
            TestFunction::Fejer { nu } => 4.0 / (nu * nu),
            TestFunction::Bump { nu, norm_c, .. } => {
                // f̂' is odd with a single extremum per side: TV = 4·max|f̂'|.
                // Dense sampling with a safety factor (the maximum is broad).
                let mut max = 0.0f64;
                for i in 1..4096 {
                    let u = i as f64 / 4096.0;
                    let g = bump_profile(u) * 2.0 * u / ((1.0 - u * u) * (1.0 - u * u));
                    max = max.max(norm_c * g / nu);
                }
                4.0 * max * 1.05
            }
        }
    }

    /// Checks the Plancherel pairing `∫ f(τ)·sin(2πτ)/(2πτ) dτ = ½∫_{-1}^1 f̂`
    /// by direct quadrature of the left side. Returns `(lhs, rhs)`.
    pub fn symplectic_pairing_check(&self) -> Result<(f64, f64)> {
        let tol = 1e-9;
        let tv = self.fhat_derivative_total_variation();
        // Tail beyond T: |2∫_T^∞| ≤ TV/(8π³T²) ≤ tol/2.
        let mut t_cut = (tv / (4.0 * PI.powi(3) * tol)).sqrt().ceil().max(8.0);
        if let TestFunction::Bump { nu, .. } = *self {
            // The smooth transform decays superexponentially: |f(τ)| < 5e-11
            // past 60/ν (and the TV envelope above is far too pessimistic —
            // it would push the cut beyond where the fixed-node transform
            // quadrature resolves cos(2πrτ) at all).
            t_cut = t_cut.min((60.0 / nu).ceil());
        }
        if t_cut > 2e5 {
            return Err(Error::Accuracy {
                context: "pairing-check truncation",
                achieved: t_cut,
                required: 2e5,
            });
        }
        let rule = gauss_legendre(16);
        let kernel = |t: f64| {
            let w = 2.0 * PI * t;
            if w.abs() < 1e-8 {
                1.0 - w * w / 6.0
            } else {
                w.sin() / w
            }
        };
        let mut panels = Vec::with_capacity(t_cut as usize);
        for n in 0..t_cut as u64 {
            let (a, b) = (n as f64, n as f64 + 1.0);
            panels.push(rule.integrate(a, b, |t| self.eval_f_real(t) * kernel(t)));
        }
        let lhs = 2.0 * crate::numerics::pairwise_sum(&panels);
        let rhs = 0.5 * self.fhat_window_integral();
        Ok((lhs, rhs))
    }
}

/// Taylor coefficients `e_j` of `exp(-Σ_{m≥1} u^{2m})` through degree 8:
/// `f̂(x) = f̂(0)·Σ e_j (x/ν)^j`.
fn bump_expansion_coeffs() -> [f64; 9] {
    // S = u² + u⁴ + u⁶ + u⁸ (truncated); exp(-S) = Σ (-S)^i/i!.
    let s = Polynomial::new(vec![0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
    let truncate = |p: &Polynomial| {
        let mut c = p.coeffs().to_vec();
        c.truncate(9);
        Polynomial::new(c)
    };
    let mut total = Polynomial::constant(1.0);
    let mut power = Polynomial::constant(1.0);
    let mut fact = 1.0;
    for i in 1..=4 {
        power = truncate(&power.mul(&s));
        fact *= i as f64;
        total = total.add(&power.scale(if i % 2 == 0 { 1.0 } else { -1.0 } / fact));
    }
    let mut out = [0.0; 9];
    for (j, slot) in out.iter_mut().enumerate() {
        *slot = total.coeffs().get(j).copied().unwrap_or(0.0);
    }
    out
}

/// Matrix symmetry types whose one-level densities have closed forms against
/// band-limited test functions (`supp f̂ ⊆ [-1, 1]` makes them exact).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixGroup {
    Unitary,
    Symplectic,
    Orthogonal,
    SpecialOrthogonalEven,
    SpecialOrthogonalOdd,
}

/// `∫ f(x) W_G(x) dx` for the standard density kernels `W_G`.
pub fn katz_sarnak_density(group: MatrixGroup, f: &TestFunction) -> f64 {
    let fhat0 = f.fhat_zero();
    let window = f.fhat_window_integral();
    let f0 = f.eval_f_real(0.0);
    match group {
        MatrixGroup::Unitary => fhat0,
        MatrixGroup::Symplectic => fhat0 - 0.5 * window,
        MatrixGroup::Orthogonal => fhat0 + 0.5 * f0,
        MatrixGroup::SpecialOrthogonalEven => fhat0 + 0.5 * window,
        MatrixGroup::SpecialOrthogonalOdd => fhat0 - 0.5 * window + f0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fejer_closed_forms() {
        let f = TestFunction::fejer(1.0).unwrap();
        assert_eq!(f.eval_f_real(0.0), 1.0);
        // f(1/2) = (sin(π/2)/(π/2))² = 4/π².
        let got = f.eval_f_real(0.5);
        let want = 4.0 / (PI * PI);
        assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        // Triangle transform.
        assert_eq!(f.fhat_zero(), 1.0);
        assert_eq!(f.eval_fhat(0.5), 0.5);
        assert_eq!(f.eval_fhat(1.0), 0.0);
        assert_eq!(f.eval_fhat(-0.25), 0.75);
        assert_eq!(f.fhat_window_integral(), 1.0);
    }

    #[test]
    fn fejer_taylor_branch_is_continuous() {
        let f = TestFunction::fejer(0.5).unwrap();
        // Arguments straddling |νπt| = 1e-4.
        let t0 = 1e-4 / (0.5 * PI);
        let below = f.eval_f_real(t0 * 0.999_999);
        let above = f.eval_f_real(t0 * 1.000_001);
        assert!((below - above).abs() < 1e-13, "{below} vs {above}");

        let zc = Complex64::new(t0 * 0.7, t0 * 0.7);
        let zf = Complex64::new(t0 * 1.4, t0 * 1.4);
        assert!((f.eval_f(zc).norm() - 1.0).abs() < 1e-6);
        assert!(f.eval_f(zf).is_finite());
    }

    #[test]
    fn fejer_window_above_one() {
        let f = TestFunction::fejer(2.0).unwrap();
        assert_eq!(f.fhat_zero(), 0.5);
        assert!((f.fhat_window_integral() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn bump_normalization() {
        for &nu in &[0.5, 1.0, 2.0] {
            let f = TestFunction::bump(nu).unwrap();
            // f(0) = ∫ f̂ = 1 by construction.
            let f0 = f.eval_f_real(0.0);
            assert!((f0 - 1.0).abs() < 1e-13, "nu={nu}: f(0) = {f0}");
        }
        // The unit-interval profile integral behind the constant:
        // ∫_{-1}^1 e^{-1/(1-u²)} du = 0.443993816168079438.
        let f = TestFunction::bump(1.0).unwrap();
        if let TestFunction::Bump { norm_c, .. } = f {
            let unit = 1.0 / norm_c;
            assert!(
                (unit - 0.443_993_816_168_079_44).abs() < 1e-13,
                "unit integral {unit}"
            );
        }
    }

    #[test]
    fn bump_transform_matches_reference_points() {
        // High-precision reference values for nu = 0.5.
        let f = TestFunction::bump(0.5).unwrap();
        let got = f.eval_f_real(0.5);
        assert!((got - 0.817_904_291_741_227_2).abs() < 1e-13, "{got}");
        let got = f.eval_f_real(10.0);
        assert!((got - 1.290_75e-3).abs() < 1e-7, "{got}");
        let got = f.eval_f_real(40.0);
        assert!((got - 1.880_14e-6).abs() < 1e-10, "{got}");
        // Deep tail: absolute accuracy holds even at 96 support periods.
        let got = f.eval_f_real(96.0);
        assert!((got - 1.996_02e-9).abs() < 1e-13, "{got}");
    }

    #[test]
    fn bump_fhat_shape() {
        let f = TestFunction::bump(0.5).unwrap();
        assert_eq!(f.eval_fhat(0.5), 0.0);
        assert_eq!(f.eval_fhat(0.7), 0.0);
        assert!(f.eval_fhat(0.49) > 0.0);
        assert!((f.eval_fhat(0.2) - f.eval_fhat(-0.2)).abs() == 0.0);
        assert_eq!(f.fhat_window_integral(), 1.0);
    }

    #[test]
    fn bump_derivatives_match_finite_differences() {
        let f = TestFunction::bump(0.8).unwrap();
        assert_eq!(
            f.fhat_derivative_at_zero(0).unwrap(),
            f.fhat_zero()
        );
        assert_eq!(f.fhat_derivative_at_zero(1).unwrap(), 0.0);
        assert_eq!(f.fhat_derivative_at_zero(7).unwrap(), 0.0);
        // Central differences on f̂ for orders 2 and 4.
        let h = 1e-2;
        let d2 = (f.eval_fhat(h) - 2.0 * f.eval_fhat(0.0) + f.eval_fhat(-h)) / (h * h);
        let got2 = f.fhat_derivative_at_zero(2).unwrap();
        assert!((d2 - got2).abs() < 1e-3 * got2.abs(), "{d2} vs {got2}");
        let d4 = (f.eval_fhat(2.0 * h) - 4.0 * f.eval_fhat(h) + 6.0 * f.eval_fhat(0.0)
            - 4.0 * f.eval_fhat(-h)
            + f.eval_fhat(-2.0 * h))
            / h.powi(4);
        let got4 = f.fhat_derivative_at_zero(4).unwrap();
        assert!((d4 - got4).abs() < 1e-2 * got4.abs(), "{d4} vs {got4}");
        // Expansion sign pattern: f̂(0)·(1, 0, -1/ν², …)
        assert!(got2 < 0.0);
        assert!(f.fhat_derivative_at_zero(8).unwrap() > 0.0);
        assert!(f.fhat_derivative_at_zero(9).is_err());
    }

    #[test]
    fn fejer_derivatives_unsupported() {
        let f = TestFunction::fejer(1.0).unwrap();
        assert!(f.fhat_derivative_at_zero(0).is_ok());
        assert!(matches!(
            f.fhat_derivative_at_zero(2),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn expansion_coefficients_exact() {
        let e = bump_expansion_coeffs();
        assert_eq!(e[0], 1.0);
        assert_eq!(e[2], -1.0);
        assert_eq!(e[4], -0.5);
        assert!((e[6] + 1.0 / 6.0).abs() < 1e-15);
        assert!((e[8] - 1.0 / 24.0).abs() < 1e-15);
        assert_eq!(e[1], 0.0);
        assert_eq!(e[3], 0.0);
    }

    #[test]
    fn pairing_identity_fejer() {
        for &nu in &[0.5, 1.0, 2.0] {
            let f = TestFunction::fejer(nu).unwrap();
            let (lhs, rhs) = f.symplectic_pairing_check().unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-8,
                "nu={nu}: lhs {lhs} rhs {rhs} diff {}",
                (lhs - rhs).abs()
            );
        }
    }

    #[test]
    fn pairing_identity_bump() {
        for &nu in &[0.5, 1.0] {
            let f = TestFunction::bump(nu).unwrap();
            let (lhs, rhs) = f.symplectic_pairing_check().unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-8,
                "nu={nu}: lhs {lhs} rhs {rhs} diff {}",
                (lhs - rhs).abs()
            );
            assert_eq!(rhs, 0.5);
        }
    }

    #[test]
    fn katz_sarnak_closed_forms() {
        // Fejér ν = 2: f̂(0) = 1/2, window = 3/4, f(0) = 1.
        let f = TestFunction::fejer(2.0).unwrap();
        assert!((katz_sarnak_density(MatrixGroup::Unitary, &f) - 0.5).abs() < 1e-15);
        assert!((katz_sarnak_density(MatrixGroup::Symplectic, &f) - 0.125).abs() < 1e-15);
        assert!((katz_sarnak_density(MatrixGroup::Orthogonal, &f) - 1.0).abs() < 1e-15);
        assert!(
            (katz_sarnak_density(MatrixGroup::SpecialOrthogonalEven, &f) - 0.875).abs() < 1e-15
        );
        assert!(
            (katz_sarnak_density(MatrixGroup::SpecialOrthogonalOdd, &f) - 1.125).abs() < 1e-14
        );
    }

    #[test]
    fn groups_separate_below_support_one() {
        // With supp f̂ ⊂ [-1,1]: USp + SOeven = 2·U and O - U = f(0)/2.
        let f = TestFunction::bump(0.9).unwrap();
        let u = katz_sarnak_density(MatrixGroup::Unitary, &f);
        let sp = katz_sarnak_density(MatrixGroup::Symplectic, &f);
        let so_e = katz_sarnak_density(MatrixGroup::SpecialOrthogonalEven, &f);
        let o = katz_sarnak_density(MatrixGroup::Orthogonal, &f);
        assert!((sp + so_e - 2.0 * u).abs() < 1e-14);
        assert!((o - u - 0.5 * f.eval_f_real(0.0)).abs() < 1e-13);
    }

    #[test]
    fn domain_validation() {
        assert!(TestFunction::fejer(0.0).is_err());
        assert!(TestFunction::fejer(-1.0).is_err());
        assert!(TestFunction::bump(5.0).is_err());
        assert!(TestFunction::from_family("fejer", 0.5).is_ok());
        assert!(TestFunction::from_family("gauss", 0.5).is_err());
    }

    #[test]
    fn descriptors_round_trip() {
        assert_eq!(
            TestFunction::fejer(0.5).unwrap().descriptor(),
            "fejer(nu=0.5)"
        );
        assert_eq!(TestFunction::bump(1.0).unwrap().descriptor(), "bump(nu=1)");
    }
}
