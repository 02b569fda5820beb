//! Prime-side terms of the explicit formula and their leading asymptotics.
//!
//! Conventions shared by every sum here:
//!
//! * transform arguments are always built from the prime-power **exponent**
//!   and `log p` (never `log n`), so terms that must cancel between
//!   different sums — split primes between `S_ζ` and `S_L`, inert powers
//!   between `S_inert` and the `A'` tail, powers of 2 between `S_ζ` and the
//!   ramified term — receive bit-identical transform values;
//! * prime enumeration is segmented, each segment accumulates into a
//!   compensated sum, and the per-segment partials enter a fixed pairwise
//!   reduction: results do not depend on the thread count;
//! * every truncation is the support bound itself (`n ≤ K^ν` on the
//!   Dirichlet side, norms `≤ K^{2ν}` on the ideal side); enlarging it only
//!   appends terms where the transform vanishes.

use std::f64::consts::LN_2;

use num_complex::Complex64;

use crate::gaussian_arith::sieve::map_segments;
use crate::gaussian_arith::{ideal_angle, reduce_angle_multiple, two_square_unchecked};
use crate::hecke_chars::char_average_of_unit;
use crate::numerics::{pairwise_sum, ComplexSum, CompensatedSum};
use crate::special_constants;
use crate::test_functions::TestFunction;
use crate::{Error, Result};

use super::TermOptions;

fn log_family(family_size: u64) -> Result<f64> {
    if family_size < 2 {
        return Err(Error::Domain(format!(
            "family size must be at least 2, got {family_size}"
        )));
    }
    Ok((family_size as f64).ln())
}

/// `⌊K^{scale·ν}⌋` — the largest integer whose transform argument can lie
/// inside the support.
pub(crate) fn support_limit(family_size: u64, nu: f64, scale: f64) -> u64 {
    let m = (family_size as f64).ln();
    (scale * nu * m).exp().floor() as u64
}

fn checked_limit(limit: u64, options: &TermOptions) -> Result<u64> {
    if limit > options.norm_budget {
        return Err(Error::Capacity {
            required: limit,
            budget: options.norm_budget,
        });
    }
    Ok(limit)
}

/// `S_ζ = -(1/M) Σ_{n ≤ K^ν} Λ(n)/n · f̂(log n/M)` over prime powers
/// `n = p^a`.
pub fn s_zeta_sum(family_size: u64, t: &TestFunction, options: &TermOptions) -> Result<f64> {
    let m = log_family(family_size)?;
    let limit = checked_limit(support_limit(family_size, t.nu(), 1.0), options)?;
    Ok(zeta_sum_with_limit(m, t, limit))
}

fn zeta_sum_with_limit(m: f64, t: &TestFunction, limit: u64) -> f64 {
    let parts = map_segments(limit, |_, primes| {
        let mut acc = CompensatedSum::new();
        for &p in primes {
            let ln_p = (p as f64).ln();
            let mut pa = p;
            let mut a = 1u32;
            loop {
                acc.add(ln_p / pa as f64 * t.eval_fhat(a as f64 * ln_p / m));
                a += 1;
                match pa.checked_mul(p) {
                    Some(next) if next <= limit => pa = next,
                    _ => break,
                }
            }
        }
        acc.value()
    });
    -pairwise_sum(&parts) / m
}

/// `S_L = +(1/M) Σ_{n ≤ K^ν} Λ(n)χ₁(n)/n · f̂(log n/M)` with the quartic
/// character mod 4 (`χ₁(2) = 0`).
pub fn s_l_sum(family_size: u64, t: &TestFunction, options: &TermOptions) -> Result<f64> {
    let m = log_family(family_size)?;
    let limit = checked_limit(support_limit(family_size, t.nu(), 1.0), options)?;
    let parts = map_segments(limit, |_, primes| {
        let mut acc = CompensatedSum::new();
        for &p in primes {
            if p == 2 {
                continue;
            }
            let chi_p = if p % 4 == 1 { 1.0 } else { -1.0 };
            let ln_p = (p as f64).ln();
            let mut pa = p;
            let mut a = 1u32;
            let mut chi = chi_p;
            loop {
                acc.add(chi * (ln_p / pa as f64 * t.eval_fhat(a as f64 * ln_p / m)));
                a += 1;
                chi *= chi_p;
                match pa.checked_mul(p) {
                    Some(next) if next <= limit => pa = next,
                    _ => break,
                }
            }
        }
        acc.value()
    });
    Ok(pairwise_sum(&parts) / m)
}

/// The prime sum behind the diagonal-derivative tail:
/// `-(2/M) Σ_{p≡3(4)} Σ_{n≥1, p^{2n} ≤ K^ν} (log p/p^{2n}) · f̂(2n·log p/M)`.
pub fn s_aprime_sum(family_size: u64, t: &TestFunction, options: &TermOptions) -> Result<f64> {
    let m = log_family(family_size)?;
    let limit = checked_limit(support_limit(family_size, t.nu(), 1.0), options)?;
    let parts = map_segments(limit.isqrt(), |_, primes| {
        let mut acc = CompensatedSum::new();
        for &p in primes {
            if p % 4 != 3 {
                continue;
            }
            let ln_p = (p as f64).ln();
            let p2 = p * p;
            let mut pw = p2;
            let mut n = 1u32;
            loop {
                acc.add(ln_p / pw as f64 * t.eval_fhat(2.0 * n as f64 * ln_p / m));
                n += 1;
                match pw.checked_mul(p2) {
                    Some(next) if next <= limit => pw = next,
                    _ => break,
                }
            }
        }
        acc.value()
    });
    Ok(-2.0 * pairwise_sum(&parts) / m)
}

/// Inert-prime side of the explicit formula: only even powers of an inert
/// ideal carry a character value, giving
/// `-(2/M) Σ_{p≡3(4)} Σ_{l even, p^l ≤ K^{2ν}} (log p/p^{l/2}) · f̂(l·log p/(2M))`.
pub fn s_inert_sum(family_size: u64, t: &TestFunction, options: &TermOptions) -> Result<f64> {
    let m = log_family(family_size)?;
    let limit = checked_limit(support_limit(family_size, t.nu(), 2.0), options)?;
    // Norm p^{2j} ≤ limit ⟺ p^j ≤ ⌊√limit⌋.
    let half_limit = limit.isqrt();
    let parts = map_segments(half_limit, |_, primes| {
        let mut acc = CompensatedSum::new();
        for &p in primes {
            if p % 4 != 3 {
                continue;
            }
            let ln_p = (p as f64).ln();
            let mut pj = p;
            let mut j = 1u32;
            loop {
                acc.add(ln_p / pj as f64 * t.eval_fhat(2.0 * j as f64 * ln_p / (2.0 * m)));
                j += 1;
                match pj.checked_mul(p) {
                    Some(next) if next <= half_limit => pj = next,
                    _ => break,
                }
            }
        }
        acc.value()
    });
    Ok(-2.0 * pairwise_sum(&parts) / m)
}

/// Ramified terms `(exact, limit)` for the ideal above 2.
///
/// The `K → ∞` limit keeps only even powers. The exact finite-family average
/// inserts `⟨(-1)^{lk}⟩_{k ≤ K}`, which is `1` at even `l` and otherwise `0`
/// for even `K`, `-1/K` for odd `K` — so the exact value is the limit plus an
/// explicit parity correction, and the two are bit-identical for even `K`.
pub fn s_ram_sums(
    family_size: u64,
    t: &TestFunction,
    options: &TermOptions,
) -> Result<(f64, f64)> {
    let m = log_family(family_size)?;
    let limit = checked_limit(support_limit(family_size, t.nu(), 2.0), options)?;
    let mut even = CompensatedSum::new();
    let mut l = 2u32;
    while l < 64 && (1u128 << l) <= limit as u128 {
        let half = (1u64 << (l / 2)) as f64;
        even.add(LN_2 / half * t.eval_fhat(l as f64 * LN_2 / (2.0 * m)));
        l += 2;
    }
    let limit_value = -even.value() / m;
    let exact = if family_size % 2 == 0 {
        limit_value
    } else {
        let mut odd = CompensatedSum::new();
        let mut l = 1u32;
        while l < 64 && (1u128 << l) <= limit as u128 {
            let half = 2.0f64.powf(0.5 * l as f64);
            odd.add(LN_2 / half * t.eval_fhat(l as f64 * LN_2 / (2.0 * m)));
            l += 2;
        }
        limit_value + odd.value() / (m * family_size as f64)
    };
    Ok((exact, limit_value))
}

/// Split-prime side of the explicit formula,
/// `-(1/M) Σ_{p≡1(4)} Σ_{p^l ≤ K^{2ν}} (log p/p^{l/2}) · f̂(l·log p/(2M)) ·
/// (⟨Ξ_k(𝔭₁^l)⟩ + ⟨Ξ_k(𝔭₂^l)⟩)`.
///
/// Both conjugate ideals are averaged explicitly; their character averages
/// are conjugate up to rounding in the angle reduction, so the total is real
/// up to a residue that is checked against `10⁻¹⁰` before being dropped.
pub fn s_split_sum(family_size: u64, t: &TestFunction, options: &TermOptions) -> Result<f64> {
    let m = log_family(family_size)?;
    let limit = checked_limit(support_limit(family_size, t.nu(), 2.0), options)?;
    let big_k = u32::try_from(family_size).map_err(|_| {
        Error::Domain(format!(
            "family size {family_size} exceeds the character-average range"
        ))
    })?;
    split_sum_with_limit(m, t, big_k, limit)
}

fn split_sum_with_limit(m: f64, t: &TestFunction, big_k: u32, limit: u64) -> Result<f64> {
    let parts = map_segments(limit, |_, primes| {
        let mut acc = ComplexSum::new();
        for &p in primes {
            if p % 4 != 1 {
                continue;
            }
            let (a, b) = two_square_unchecked(p);
            let th1 = ideal_angle(a as i64, b as i64).expect("nonzero generator");
            let th2 = ideal_angle(b as i64, a as i64).expect("nonzero generator");
            let ln_p = (p as f64).ln();
            let mut norm = p;
            let mut l = 1u32;
            loop {
                let fh = t.eval_fhat(l as f64 * ln_p / (2.0 * m));
                if fh != 0.0 {
                    let x1 = Complex64::from_polar(1.0, 4.0 * reduce_angle_multiple(th1, l));
                    let x2 = Complex64::from_polar(1.0, 4.0 * reduce_angle_multiple(th2, l));
                    let mean = char_average_of_unit(x1, big_k) + char_average_of_unit(x2, big_k);
                    acc.add(mean * (ln_p / (norm as f64).sqrt() * fh));
                }
                l += 1;
                match norm.checked_mul(p) {
                    Some(next) if next <= limit => norm = next,
                    _ => break,
                }
            }
        }
        acc.value()
    });
    let re: Vec<f64> = parts.iter().map(|z| z.re).collect();
    let im: Vec<f64> = parts.iter().map(|z| z.im).collect();
    let total = Complex64::new(pairwise_sum(&re), pairwise_sum(&im)) * (-1.0 / m);
    if total.im.abs() > 1e-10 {
        return Err(Error::Consistency(format!(
            "split-prime sum has imaginary residue {:e}",
            total.im
        )));
    }
    Ok(total.re)
}

/// `-f(0)/2 - Σ_{j ≤ J} c_j · f̂^{(j-1)}(0)/M^j` with `J` from
/// [`TermOptions::zeta_expansion_order`].
///
/// Orders beyond 1 need `f̂`-derivatives at 0, which only exist for the
/// smooth kernel; a Fejér kernel with `J > 1` is rejected.
pub fn s_zeta_asymptotic(
    family_size: u64,
    t: &TestFunction,
    options: &TermOptions,
) -> Result<f64> {
    let m = log_family(family_size)?;
    let order = options.zeta_expansion_order;
    if order == 0 {
        return Err(Error::Domain("expansion order must be at least 1".into()));
    }
    let report = special_constants::constants_report(options.prime_cutoff, options.psi_cutoff)?;
    let mut acc = -t.eval_f_real(0.0) / 2.0;
    let mut mp = m;
    for j in 1..=order {
        let cj = if j == 1 {
            report.c1
        } else {
            *report.cj.get(j as usize - 2).ok_or_else(|| {
                Error::Domain(format!(
                    "expansion order {order} exceeds the precomputed coefficients"
                ))
            })?
        };
        acc -= cj * t.fhat_derivative_at_zero(j - 1)? / mp;
        mp *= m;
    }
    Ok(acc)
}

/// `S_L`'s leading behaviour `-(f̂(0)/M)·(L'/L)(1, χ₁)` — negative, since the
/// logarithmic derivative at 1 is positive.
pub fn s_l_asymptotic(family_size: u64, t: &TestFunction) -> Result<f64> {
    let m = log_family(family_size)?;
    Ok(-t.fhat_zero() / m * special_constants::lprime_over_l_at_one()?)
}

/// The diagonal-derivative tail's leading behaviour `-2·P₃·f̂(0)/M`.
pub fn s_aprime_asymptotic(
    family_size: u64,
    t: &TestFunction,
    options: &TermOptions,
) -> Result<f64> {
    let m = log_family(family_size)?;
    let report = special_constants::constants_report(options.prime_cutoff, options.psi_cutoff)?;
    Ok(-2.0 * report.p3 * t.fhat_zero() / m)
}

/// Archimedean-ratio correction `f(0)/2 - ½∫f̂·1_{[-1,1]} - (d/M)·f̂(1)`.
pub fn s_gamma_asymptotic(
    family_size: u64,
    t: &TestFunction,
    options: &TermOptions,
) -> Result<f64> {
    let m = log_family(family_size)?;
    let report = special_constants::constants_report(options.prime_cutoff, options.psi_cutoff)?;
    Ok(t.eval_f_real(0.0) / 2.0 - 0.5 * t.fhat_window_integral() - report.d / m * t.eval_fhat(1.0))
}
