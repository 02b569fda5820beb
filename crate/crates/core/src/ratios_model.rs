//! The ratios-recipe pipeline for the family: gamma-factor averages, the
//! local factors `G_p(α,γ)` built from the δ-tables, the factorization
//! `G = Y·A` into a ζ/L head and an absolutely convergent Euler product `A`,
//! the two closed-form derivatives of `A`, the full ratio prediction
//! `R_K(α,γ) = G(α,γ) + (1/(1-2α))·(π/2K)^{2α}·G(-α,γ)`, and the predicted
//! family average of `L'/L(1/2 + r)` obtained by differentiating it.
//!
//! Shifts live on the strip `|Re α| < 1/4`, `Re γ > -1/4`, where every Euler
//! factor is `1 + O(p^{-3/2})` or better and all closed forms converge. The
//! real-shift entry points (`zeta_family`, `ratios_prediction_r`,
//! `predicted_logderiv_average`) reject nonzero imaginary parts rather than
//! evaluate ζ off the real axis.

use crate::error::{Error, Result};
use crate::gaussian_arith::{sieve, PrimeClass};
use crate::numerics::series::alternating_sum;
use crate::numerics::{pairwise_product, pairwise_sum, ComplexSum, CompensatedSum};
use crate::special::ln_gamma;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, LN_2, PI};

/// A validated shift pair `(α, γ)` for the ratio `L(1/2+α)/L(1/2+γ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftPoint {
    alpha: Complex64,
    gamma: Complex64,
}

impl ShiftPoint {
    /// Requires `-1/4 < Re α < 1/4` and `Re γ > -1/4` (finite throughout).
    pub fn new(alpha: Complex64, gamma: Complex64) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite() && gamma.re.is_finite() && gamma.im.is_finite())
        {
            return Err(Error::Domain("shift point must be finite".into()));
        }
        if alpha.re.abs() >= 0.25 {
            return Err(Error::Domain(format!(
                "Re(α) = {} outside the strip (-1/4, 1/4)",
                alpha.re
            )));
        }
        if gamma.re <= -0.25 {
            return Err(Error::Domain(format!(
                "Re(γ) = {} must exceed -1/4",
                gamma.re
            )));
        }
        Ok(Self { alpha, gamma })
    }

    pub fn from_real(alpha: f64, gamma: f64) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0), Complex64::new(gamma, 0.0))
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }

    /// The point `(-α, γ)`, needed for the second ratio term; negation keeps
    /// the strip, so this cannot fail.
    pub fn negated_alpha(&self) -> Self {
        Self {
            alpha: -self.alpha,
            gamma: self.gamma,
        }
    }

    pub fn is_real(&self) -> bool {
        self.alpha.im == 0.0 && self.gamma.im == 0.0
    }

    fn is_diagonal(&self) -> bool {
        self.alpha == self.gamma
    }
}

/// A truncated Euler product together with its truncation point and an
/// envelope estimate for the neglected tail.
#[derive(Clone, Copy, Debug)]
pub struct EulerProductValue {
    pub value: Complex64,
    pub cutoff: u64,
    pub tail_estimate: f64,
}

fn check_alpha_strip(alpha: Complex64) -> Result<()> {
    if !(alpha.re.is_finite() && alpha.im.is_finite()) || alpha.re.abs() >= 0.25 {
        return Err(Error::Domain(format!(
            "gamma-ratio shift α = {alpha} outside the strip |Re α| < 1/4"
        )));
    }
    Ok(())
}

/// `(1/K) Σ_{k=1}^{K} Γ(𝐤 - α)/Γ(𝐤 + α)` with `𝐤 = 2k + 1/2`, each ratio
/// taken through log-gamma differences, compensated summation.
pub fn gamma_ratio_average_exact(alpha: Complex64, family_size: u64) -> Result<Complex64> {
    check_alpha_strip(alpha)?;
    if family_size == 0 {
        return Err(Error::Domain("family size must be ≥ 1".into()));
    }
    let mut acc = ComplexSum::new();
    for k in 1..=family_size {
        let shift = Complex64::new(2.0 * k as f64 + 0.5, 0.0);
        acc.add((ln_gamma(shift - alpha) - ln_gamma(shift + alpha)).exp());
    }
    Ok(acc.value() / family_size as f64)
}

/// Main term of the same average: `(2K)^{-2α}/(1 - 2α)`.
pub fn gamma_ratio_average_asymptotic(alpha: Complex64, family_size: u64) -> Result<Complex64> {
    check_alpha_strip(alpha)?;
    if family_size == 0 {
        return Err(Error::Domain("family size must be ≥ 1".into()));
    }
    let scale = (-2.0 * alpha * (2.0 * family_size as f64).ln()).exp();
    Ok(scale / (Complex64::new(1.0, 0.0) - 2.0 * alpha))
}

/// `p^{-z}` as `exp(-z log p)`; keeps the imaginary part exactly zero for
/// real `z`, so real-shift pipelines stay on the real axis bit-for-bit.
fn prime_power_neg(p: u64, z: Complex64) -> Complex64 {
    (-z * (p as f64).ln()).exp()
}

/// Local ratio factor `G_p(α,γ)`, closed form per splitting class:
///
/// * split:    `(1 - 2p^{-(1+γ+α)} + p^{-(1+2γ)}) / (1 - p^{-(1+2α)})`
/// * inert:    `(1 - p^{-(1+2γ)}) / (1 - p^{-(1+2α)})`
/// * ramified: `(1 - 2^{-(1+γ+α)}) / (1 - 2^{-(1+2α)})`
///
/// On the diagonal `α = γ` the numerator equals the denominator in all three
/// forms, so the factor is returned as exactly `1`.
pub fn g_local(class: PrimeClass, p: u64, s: &ShiftPoint) -> Complex64 {
    debug_assert_eq!(class, PrimeClass::of(p));
    if s.is_diagonal() {
        return Complex64::new(1.0, 0.0);
    }
    let one = Complex64::new(1.0, 0.0);
    let cross = prime_power_neg(p, one + s.gamma + s.alpha);
    let gamma_pow = prime_power_neg(p, one + 2.0 * s.gamma);
    let alpha_pow = prime_power_neg(p, one + 2.0 * s.alpha);
    let numerator = match class {
        PrimeClass::Split => one - 2.0 * cross + gamma_pow,
        PrimeClass::Inert => one - gamma_pow,
        PrimeClass::Ramified => one - cross,
    };
    numerator / (one - alpha_pow)
}

/// Local factor of `A(α,γ)` (odd primes only; the `p = 2` content of `G`
/// sits entirely inside `Y`).
fn a_local(class: PrimeClass, p: u64, s: &ShiftPoint) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let q = prime_power_neg(p, one + s.alpha + s.gamma);
    let w = prime_power_neg(p, one + 2.0 * s.gamma);
    match class {
        PrimeClass::Split => (one - 2.0 * q + w) * (one - w) / ((one - q) * (one - q)),
        PrimeClass::Inert => (one - w) * (one + w) / ((one - q) * (one + q)),
        PrimeClass::Ramified => one,
    }
}

/// Truncated Euler product `A(α,γ) = Π_{2 < p ≤ P} A_p(α,γ)`, computed by a
/// deterministic parallel segment reduction. On the diagonal every factor is
/// exactly `1` (numerators and denominators coincide), so the product — and
/// its truncation error — is exactly `1` and `0`.
pub fn a_product(s: &ShiftPoint, cutoff: u64) -> EulerProductValue {
    if s.is_diagonal() {
        return EulerProductValue {
            value: Complex64::new(1.0, 0.0),
            cutoff,
            tail_estimate: 0.0,
        };
    }
    let parts = sieve::map_segments(cutoff, |_, primes| {
        let mut prod = Complex64::new(1.0, 0.0);
        for &p in primes {
            if p > 2 {
                prod *= a_local(PrimeClass::of(p), p, s);
            }
        }
        prod
    });
    let value = pairwise_product(&parts);
    // Each factor is 1 + O(p^{-2(1+m)}) with m = min(2Reγ, Re(α+γ)) > -1/2;
    // envelope the log-tail by 16·Σ_{n>P} n^{-2-2m}.
    let m = (2.0 * s.gamma.re).min(s.alpha.re + s.gamma.re);
    let decay = 1.0 + 2.0 * m;
    let pf = cutoff.max(2) as f64;
    let tail_estimate = 16.0 * pf.powf(-decay) / decay;
    EulerProductValue {
        value,
        cutoff,
        tail_estimate,
    }
}

/// `∂A/∂α` on the diagonal `α = γ = r`, in closed form:
/// `-2 Σ_{p ≡ 3(4), p ≤ P} log p/(p^{2+4r} - 1)`.
pub fn a_diag_derivative(r: f64, cutoff: u64) -> f64 {
    let parts = sieve::map_segments(cutoff, |_, primes| {
        let mut acc = CompensatedSum::new();
        for &p in primes {
            if p % 4 == 3 {
                let pf = p as f64;
                acc.add(pf.ln() / (pf.powf(2.0 + 4.0 * r) - 1.0));
            }
        }
        acc.value()
    });
    -2.0 * pairwise_sum(&parts)
}

/// `d/dr A(-r, r)` at `r = 0`, in closed form: `4 Σ_{p ≡ 3(4)} log p/(p²-1)`.
pub fn a_antidiag_derivative_at_zero(cutoff: u64) -> f64 {
    4.0 * crate::special_constants::prime_sum_p3(cutoff).0
}

/// ζ, ζ′, and the mod-4 `L(·, χ₁)`, `L′(·, χ₁)` at a real point.
#[derive(Clone, Copy, Debug)]
pub struct ZetaFamilyValues {
    pub zeta: f64,
    pub zeta_prime: f64,
    pub l_chi: f64,
    pub l_chi_prime: f64,
}

/// Accelerated alternating series with an internal two-depth consistency
/// check standing in for a rigorous error bound.
fn accelerated(context: &'static str, a: impl Fn(usize) -> f64 + Copy) -> Result<f64> {
    let deep = alternating_sum(64, a);
    let shallow = alternating_sum(48, a);
    let spread = (deep - shallow).abs();
    if spread > 1e-10 {
        return Err(Error::Accuracy {
            context,
            achieved: spread,
            required: 1e-10,
        });
    }
    Ok(deep)
}

/// `(ζ(s), ζ′(s))` through the alternating eta series
/// `η(s) = Σ (-1)^{n-1} n^{-s} = (1 - 2^{1-s}) ζ(s)`, valid across
/// `(0,1) ∪ (1,∞)`.
pub fn zeta_pair(s: f64) -> Result<(f64, f64)> {
    if s == 1.0 {
        return Err(Error::Pole("ζ(s) at s = 1".into()));
    }
    let eta = accelerated("zeta eta series", move |k| ((k + 1) as f64).powf(-s))?;
    let eta_prime = -accelerated("zeta eta-prime series", move |k| {
        let n = (k + 1) as f64;
        n.ln() * n.powf(-s)
    })?;
    let pole_factor = 1.0 - (2.0f64).powf(1.0 - s);
    let zeta = eta / pole_factor;
    let zeta_prime = (eta_prime - LN_2 * (2.0f64).powf(1.0 - s) * zeta) / pole_factor;
    Ok((zeta, zeta_prime))
}

/// `(L(s,χ₁), L′(s,χ₁))` through the directly alternating character series
/// `Σ (-1)^m (2m+1)^{-s}`, convergent for all `s > 0`.
pub fn l_chi_pair(s: f64) -> Result<(f64, f64)> {
    let l = accelerated("L(s,χ₁) series", move |k| ((2 * k + 1) as f64).powf(-s))?;
    let l_prime = -accelerated("L'(s,χ₁) series", move |k| {
        let n = (2 * k + 1) as f64;
        n.ln() * n.powf(-s)
    })?;
    Ok((l, l_prime))
}

/// The four Dirichlet-series values entering `Y` and the ratio theorem.
pub fn zeta_family(s: f64) -> Result<ZetaFamilyValues> {
    if !(0.4..3.0).contains(&s) {
        return Err(Error::Domain(format!("zeta_family wants s ∈ (0.4, 3), got {s}")));
    }
    let (zeta, zeta_prime) = zeta_pair(s)?;
    let (l_chi, l_chi_prime) = l_chi_pair(s)?;
    Ok(ZetaFamilyValues {
        zeta,
        zeta_prime,
        l_chi,
        l_chi_prime,
    })
}

/// `Y(α,γ) = L(1+2γ,χ₁)·ζ(1+2α) / (L(1+α+γ,χ₁)·ζ(1+α+γ))` at real shifts.
/// When `α + γ = 0` the reciprocal ζ-pole makes `Y` vanish identically.
fn y_factor(alpha: f64, gamma: f64) -> Result<f64> {
    let cross = 1.0 + (alpha + gamma);
    if cross == 1.0 {
        return Ok(0.0);
    }
    // Diagonal: numerator and denominator coincide algebraically; return the
    // exact value instead of a quotient of separately rounded evaluations.
    if alpha == gamma {
        return Ok(1.0);
    }
    let l_num = l_chi_pair(1.0 + 2.0 * gamma)?.0;
    let z_num = zeta_pair(1.0 + 2.0 * alpha)?.0;
    let den = zeta_family(cross)?;
    Ok(l_num * z_num / (den.l_chi * den.zeta))
}

/// Prefactor of the swapped-shift term: `(π/2K)^{2α}/(1 - 2α)`.
pub fn second_term_prefactor(alpha: f64, family_size: u64) -> f64 {
    (PI / (2.0 * family_size as f64)).powf(2.0 * alpha) / (1.0 - 2.0 * alpha)
}

/// The assembled ratio prediction at a real shift point.
#[derive(Clone, Copy, Debug)]
pub struct RatiosPrediction {
    /// `G(α,γ) = Y(α,γ)·A(α,γ)` truncated at the cutoff.
    pub g: Complex64,
    /// `G(α,γ) + (1/(1-2α))·(π/2K)^{2α}·G(-α,γ)`.
    pub r: Complex64,
    pub tail_estimate: f64,
}

/// `R_K(α,γ)` from the closed forms; real shifts only.
pub fn ratios_prediction_r(s: &ShiftPoint, family_size: u64, cutoff: u64) -> Result<RatiosPrediction> {
    if !s.is_real() {
        return Err(Error::Unsupported(
            "ratio prediction is evaluated on real shifts only",
        ));
    }
    if family_size == 0 {
        return Err(Error::Domain("family size must be ≥ 1".into()));
    }
    let alpha = s.alpha.re;
    let gamma = s.gamma.re;

    let a_direct = a_product(s, cutoff);
    let y_direct = y_factor(alpha, gamma)?;
    let g = y_direct * a_direct.value;

    // Swapped-shift term; on the diagonal γ = α its Y factor vanishes
    // through the reciprocal ζ-pole at 1 + γ - α = 1.
    let prefactor = second_term_prefactor(alpha, family_size);
    let (swapped, y_swapped, a_swapped_tail) = if gamma == alpha {
        (Complex64::new(0.0, 0.0), 0.0, 0.0)
    } else {
        let a_swapped = a_product(&s.negated_alpha(), cutoff);
        let y_swapped = y_factor(-alpha, gamma)?;
        (y_swapped * a_swapped.value, y_swapped, a_swapped.tail_estimate)
    };
    let r = g + prefactor * swapped;
    let tail_estimate = y_direct.abs() * a_direct.tail_estimate
        + prefactor.abs() * y_swapped.abs() * a_swapped_tail;
    Ok(RatiosPrediction {
        g,
        r,
        tail_estimate,
    })
}

/// Predicted family average of `L'/L(1/2 + r)`:
///
/// `ζ'/ζ(1+2r) + A'(r,r) - L'/L(1+2r,χ₁)
///  - (1/(1-2r))·(π/2K)^{2r}·(L(1+2r,χ₁)/L(1,χ₁))·ζ(1-2r)·A(-r,r)`
///
/// with `L(1,χ₁) = π/4`. Valid for `1/log K < r < 1/4`.
pub fn predicted_logderiv_average(r: f64, family_size: u64, cutoff: u64) -> Result<f64> {
    if family_size < 2 {
        return Err(Error::Domain("family size must be ≥ 2".into()));
    }
    let log_k = (family_size as f64).ln();
    if !(r > 1.0 / log_k && r < 0.25) {
        return Err(Error::Domain(format!(
            "shift r = {r} outside (1/log K, 1/4) = ({}, 0.25)",
            1.0 / log_k
        )));
    }
    let plus = zeta_family(1.0 + 2.0 * r)?;
    let minus_zeta = zeta_pair(1.0 - 2.0 * r)?.0;
    let a_swapped = a_product(&ShiftPoint::from_real(-r, r)?, cutoff).value.re;
    Ok(plus.zeta_prime / plus.zeta + a_diag_derivative(r, cutoff) - plus.l_chi_prime / plus.l_chi
        - second_term_prefactor(r, family_size) * (plus.l_chi / FRAC_PI_4) * minus_zeta * a_swapped)
}
