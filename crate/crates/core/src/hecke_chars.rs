//! The angular characters `Ξ_k(𝔞) = exp(i·4k·θ_𝔞)` on ideals of `Z[i]` and
//! the local coefficient combinatorics of their L-functions.
//!
//! For a rational prime `p` and the prime ideals above it, the Euler factor
//! of `L(s, Ξ_k)` at `p` determines three coefficient families:
//!
//! * `A_k(pˡ)` — the Dirichlet coefficient of the full ideal sum at norm
//!   `pˡ` (sum of `Ξ_k` over all ideals of that norm supported at `p`),
//! * `a_k(pˡ)` — the power sum `α₁ˡ + α₂ˡ` of the local roots, which is what
//!   `-L'/L` sums against `Λ`,
//! * `μ_k(pʰ)` — the coefficients of the *inverse* local factor (the ideal
//!   Möbius function), nonzero only for `h ≤ 2`.
//!
//! Averaging `μ_k(pʰ)·A_k(pⁿ)` over `k = 1..K` kills every oscillating
//! character term as `K → ∞`; the surviving constants form the δ-tables at
//! the heart of the averaged-ratios calculation. `char_average` computes the
//! finite-`K` character average in closed form.

use crate::error::{Error, Result};
use crate::gaussian_arith::{
    ideal_angle, two_square_unchecked, GaussianPrimeIdeal, PrimeClass,
};
use num_complex::Complex64;
use serde::Serialize;

/// Index of a character in the family; `k ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterIndex(u32);

impl CharacterIndex {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("character index k must be ≥ 1".into()));
        }
        Ok(Self(k))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// Analytic data of `L(s, Ξ_k)`: self-dual, root number +1, and a single
/// Γ-factor whose digamma argument at the central point is `𝐤 = 2k + 1/2`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LFunctionMeta {
    pub k: u32,
    /// Offset in the completed factor `Γ(s/2 + … )` evaluated on the critical
    /// line: the explicit-formula digamma terms are `ψ(𝐤 ± iπτ/M)`.
    pub gamma_shift: f64,
    pub root_number: f64,
    pub symmetry: &'static str,
}

pub fn l_function_meta(k: CharacterIndex) -> LFunctionMeta {
    LFunctionMeta {
        k: k.get(),
        gamma_shift: 2.0 * k.get() as f64 + 0.5,
        root_number: 1.0,
        symmetry: "symplectic",
    }
}

/// `Ξ_k` evaluated at a prime-power ideal (uses the already-reduced angle of
/// the power).
pub fn xi(k: u32, ideal: &GaussianPrimeIdeal) -> Complex64 {
    Complex64::from_polar(1.0, 4.0 * k as f64 * ideal.theta)
}

fn validated_prime_class(p: u64) -> Result<PrimeClass> {
    if !super::gaussian_arith::is_prime_for_api(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    Ok(PrimeClass::of(p))
}

fn split_theta(p: u64) -> f64 {
    let (a, b) = two_square_unchecked(p);
    ideal_angle(a as i64, b as i64).expect("nonzero generator")
}

/// `A_k(pˡ)` for split `p` with angle `θ`: the sum of `e^{i4kmθ}` over
/// `m = -l, -l+2, …, l`, written as a real cosine sum.
fn coeff_big_a_split(k: u32, theta: f64, l: u32) -> f64 {
    let base = 4.0 * k as f64 * theta;
    if l % 2 == 0 {
        let mut s = 1.0;
        for j in 1..=(l / 2) {
            s += 2.0 * (base * 2.0 * j as f64).cos();
        }
        s
    } else {
        let mut s = 0.0;
        let mut m = 1u32;
        while m <= l {
            s += 2.0 * (base * m as f64).cos();
            m += 2;
        }
        s
    }
}

/// Dirichlet coefficient `A_k(pˡ)` of the ideal sum at norm `pˡ`.
pub fn coeff_big_a(k: u32, p: u64, l: u32) -> Result<f64> {
    if k == 0 || l == 0 {
        return Err(Error::Domain("coeff_big_a wants k ≥ 1, l ≥ 1".into()));
    }
    Ok(match validated_prime_class(p)? {
        // (1+i)^l is the only ideal of norm 2ˡ; Ξ_k = (-1)^{lk}.
        PrimeClass::Ramified => {
            if (l as u64 * k as u64) % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        }
        // Norm pˡ needs l even (the ideal (p)^{l/2}), and Ξ_k((p)) = 1.
        PrimeClass::Inert => {
            if l % 2 == 0 {
                1.0
            } else {
                0.0
            }
        }
        PrimeClass::Split => coeff_big_a_split(k, split_theta(p), l),
    })
}

/// Power sum `a_k(pˡ)` of the local roots (the `Λ`-weighted coefficient in
/// `-L'/L`).
pub fn coeff_small_a(k: u32, p: u64, l: u32) -> Result<f64> {
    if k == 0 || l == 0 {
        return Err(Error::Domain("coeff_small_a wants k ≥ 1, l ≥ 1".into()));
    }
    Ok(match validated_prime_class(p)? {
        PrimeClass::Ramified => {
            if (l as u64 * k as u64) % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        }
        // Roots ±1: 1ˡ + (-1)ˡ.
        PrimeClass::Inert => {
            if l % 2 == 0 {
                2.0
            } else {
                0.0
            }
        }
        // Roots e^{±i4kθ}: 2cos(4klθ).
        PrimeClass::Split => {
            let theta = split_theta(p);
            2.0 * (4.0 * k as f64 * l as f64 * theta).cos()
        }
    })
}

/// `c_k(n) = Λ(n)·a_k(n)`: zero unless `n = pˡ`.
pub fn coeff_c(k: u32, n: u64) -> Result<f64> {
    if k == 0 || n == 0 {
        return Err(Error::Domain("coeff_c wants k ≥ 1, n ≥ 1".into()));
    }
    match prime_power_split(n) {
        Some((p, l)) => Ok((p as f64).ln() * coeff_small_a(k, p, l)?),
        None => Ok(0.0),
    }
}

/// Writes `n = pˡ` if it is a prime power.
pub fn prime_power_split(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut m = n;
    let mut p = 0u64;
    for d in 2..=m.isqrt().max(2) {
        if m % d == 0 {
            p = d;
            break;
        }
    }
    if p == 0 {
        return Some((n, 1)); // prime
    }
    let mut l = 0u32;
    while m % p == 0 {
        m /= p;
        l += 1;
    }
    if m == 1 {
        Some((p, l))
    } else {
        None
    }
}

/// Inverse-Euler-factor coefficient `μ_k(pʰ)`; zero for `h ≥ 3`.
pub fn coeff_mu(k: u32, p: u64, h: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("coeff_mu wants k ≥ 1".into()));
    }
    let class = validated_prime_class(p)?;
    Ok(match h {
        0 => 1.0,
        1 => -coeff_big_a(k, p, 1)?,
        2 => match class {
            PrimeClass::Inert => -1.0,
            PrimeClass::Split => 1.0,
            PrimeClass::Ramified => 0.0, // linear local factor
        },
        _ => 0.0,
    })
}

/// `K → ∞` limit of `⟨μ_k(pʰ)·A_k(pⁿ)⟩_{k ≤ K}`, by splitting class.
/// Every oscillating character average vanishes in the limit; the table holds
/// what survives.
#[derive(Clone, Debug, Default)]
pub struct DeltaTable {
    overrides: Vec<((PrimeClass, u32, u32), f64)>,
}

impl DeltaTable {
    pub fn canonical() -> Self {
        Self::default()
    }

    /// Test hook: replace one entry (used to prove the verification harness
    /// actually trips on a wrong table).
    pub fn with_override(class: PrimeClass, h: u32, n: u32, value: f64) -> Self {
        Self {
            overrides: vec![((class, h, n), value)],
        }
    }

    pub fn value(&self, class: PrimeClass, h: u32, n: u32) -> f64 {
        if let Some(&(_, v)) = self
            .overrides
            .iter()
            .find(|((c, hh, nn), _)| *c == class && *hh == h && *nn == n)
        {
            return v;
        }
        delta_limit(class, h, n)
    }
}

/// Canonical δ-table entry.
pub fn delta_limit(class: PrimeClass, h: u32, n: u32) -> f64 {
    let n_even = n % 2 == 0;
    match class {
        PrimeClass::Ramified => match (h, n_even) {
            (0, true) => 1.0,
            (1, false) => -1.0,
            _ => 0.0,
        },
        PrimeClass::Split => match (h, n_even) {
            (0, true) => 1.0,
            (1, false) => -2.0,
            (2, true) => 1.0,
            _ => 0.0,
        },
        PrimeClass::Inert => match (h, n_even) {
            (0, true) => 1.0,
            (2, true) => -1.0,
            _ => 0.0,
        },
    }
}

/// Finite-`K` average `⟨μ_k(pʰ)·A_k(pⁿ)⟩_{k=1..K}`, by direct summation.
pub fn delta_average_empirical(p: u64, h: u32, n: u32, big_k: u32) -> Result<f64> {
    if big_k == 0 {
        return Err(Error::Domain("delta_average_empirical wants K ≥ 1".into()));
    }
    let class = validated_prime_class(p)?;
    let theta = if class == PrimeClass::Split {
        split_theta(p)
    } else {
        0.0
    };
    let mut acc = crate::numerics::CompensatedSum::new();
    for k in 1..=big_k {
        let big_a_n = match class {
            PrimeClass::Split => coeff_big_a_split(k, theta, n),
            PrimeClass::Inert => {
                if n % 2 == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            PrimeClass::Ramified => {
                if (n as u64 * k as u64) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        };
        let mu = match h {
            0 => 1.0,
            1 => match class {
                PrimeClass::Split => -coeff_big_a_split(k, theta, 1),
                PrimeClass::Inert => 0.0,
                PrimeClass::Ramified => {
                    if k % 2 == 0 {
                        -1.0
                    } else {
                        1.0
                    }
                }
            },
            2 => match class {
                PrimeClass::Inert => -1.0,
                PrimeClass::Split => 1.0,
                PrimeClass::Ramified => 0.0,
            },
            _ => 0.0,
        };
        acc.add(mu * big_a_n);
    }
    Ok(acc.value() / big_k as f64)
}

/// `⟨Ξ_k(𝔞)⟩_{k=1..K}` in closed form: with `x = e^{i4θ}`,
/// `(1/K)·x·(1 - x^K)/(1 - x)`. Falls back to direct summation when `x` is
/// within `1e-8` of 1 (the geometric denominator loses precision), and clamps
/// the result into the unit disc.
pub fn char_average(ideal: &GaussianPrimeIdeal, big_k: u32) -> Complex64 {
    char_average_of_unit(Complex64::from_polar(1.0, 4.0 * ideal.theta), big_k)
}

/// The same average for an explicit point `x` on the unit circle.
pub fn char_average_of_unit(x: Complex64, big_k: u32) -> Complex64 {
    debug_assert!(big_k >= 1);
    let one = Complex64::new(1.0, 0.0);
    let kf = big_k as f64;
    let avg = if (one - x).norm() < 1e-8 {
        let mut acc = crate::numerics::ComplexSum::new();
        let mut pow = one;
        for _ in 0..big_k {
            pow *= x;
            acc.add(pow);
        }
        acc.value() / kf
    } else {
        x * (one - x.powi(big_k as i32)) / (kf * (one - x))
    };
    let norm = avg.norm();
    if norm > 1.0 {
        avg / norm
    } else {
        avg
    }
}
