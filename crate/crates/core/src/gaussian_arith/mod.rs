//! Arithmetic of prime ideals in `Z[i]`: splitting types, two-square
//! decompositions, first-quadrant angles, and enumeration of prime-power
//! ideals by norm.
//!
//! Angles live in `[0, π/2)` — the ideal `(a+bi)` equals `(i(a+bi))`, so its
//! angle is only defined modulo a quarter turn. Powers multiply the angle:
//! `θ_{𝔭^l} = l·θ_𝔭 (mod π/2)`, reduced in double-double arithmetic so the
//! reduced angle is accurate to ~1 ulp even after the multiplication.

pub mod cache;
pub mod psi;
pub mod sieve;

use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

/// Splitting type of a rational prime in `Z[i]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PrimeClass {
    /// `p ≡ 1 (mod 4)`: two conjugate ideals of norm `p`.
    Split,
    /// `p ≡ 3 (mod 4)`: one ideal of norm `p²`.
    Inert,
    /// `p = 2 = -i(1+i)²`: one ideal of norm 2.
    Ramified,
}

impl PrimeClass {
    /// Class of a prime `p`. The caller vouches for primality.
    pub fn of(p: u64) -> Self {
        match p & 3 {
            1 => PrimeClass::Split,
            2 => PrimeClass::Ramified,
            _ => PrimeClass::Inert,
        }
    }
}

/// A power `𝔭^l` of a prime ideal of `Z[i]`.
///
/// `gen_a + i·gen_b` generates the base ideal `𝔭` (first-quadrant, `a ≥ b`);
/// `theta` is the angle of the *power*, already reduced to `[0, π/2)`.
#[derive(Clone, Debug, Serialize)]
pub struct GaussianPrimeIdeal {
    pub p: u64,
    pub l: u32,
    pub class: PrimeClass,
    pub gen_a: u64,
    pub gen_b: u64,
    pub norm: u64,
    pub theta: f64,
    /// `log p` — the von Mangoldt weight of every power of `𝔭`.
    pub lambda_weight: f64,
}

/// `x·y mod m` without overflow.
#[inline]
fn mul_mod(x: u64, y: u64, m: u64) -> u64 {
    ((x as u128 * y as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic trial-division primality — fine for validating API inputs;
/// bulk enumeration goes through the sieve and never calls this.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = 7u64;
    while d * d <= n {
        for step in [0, 4] {
            let q = d + step;
            if q * q <= n && n % q == 0 {
                return false;
            }
        }
        d += 6;
    }
    true
}

/// Primality check for argument validation elsewhere in the crate.
pub(crate) fn is_prime_for_api(n: u64) -> bool {
    is_prime(n)
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r > 0 && r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Writes a split prime as `a² + b²` with `a > b > 0` (the canonical
/// representative; the three companions are `(b,a)` and sign flips).
///
/// Deterministic: the square root of `-1 mod p` comes from the smallest
/// quadratic non-residue, and the Euclid descent takes the first remainder
/// below `√p`.
pub fn two_square_decompose(p: u64) -> Result<(u64, u64)> {
    if PrimeClass::of(p) != PrimeClass::Split || !is_prime(p) {
        return Err(Error::Domain(format!(
            "two_square_decompose wants a prime ≡ 1 (mod 4), got {p}"
        )));
    }
    Ok(two_square_unchecked(p))
}

/// `two_square_decompose` without the primality check, for sieved input.
pub(crate) fn two_square_unchecked(p: u64) -> (u64, u64) {
    // Smallest quadratic non-residue z (Euler's criterion), then
    // x = z^{(p-1)/4} satisfies x² ≡ -1 (mod p).
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let x = pow_mod(z, (p - 1) / 4, p);
    let x = x.min(p - x);
    let mut r0 = p;
    let mut r1 = x;
    let sqrt_p = isqrt(p);
    while r1 > sqrt_p {
        let r = r0 % r1;
        r0 = r1;
        r1 = r;
    }
    let a = r1;
    let b = isqrt(p - a * a);
    debug_assert_eq!(a * a + b * b, p, "descent failed for {p}");
    (a.max(b), a.min(b))
}

/// First-quadrant angle of the ideal `(a + bi)`: `atan2(b, a) mod π/2`,
/// in `[0, π/2)`.
pub fn ideal_angle(a: i64, b: i64) -> Result<f64> {
    if a == 0 && b == 0 {
        return Err(Error::Domain("ideal_angle of 0".into()));
    }
    let t = (b as f64).atan2(a as f64).rem_euclid(FRAC_PI_2);
    Ok(if t >= FRAC_PI_2 { 0.0 } else { t })
}

// FRAC_PI_2 = PI2_HI + PI2_LO to ~107 bits.
const PI2_HI: f64 = FRAC_PI_2;
const PI2_LO: f64 = 6.123_233_995_736_766e-17;

/// `l·θ mod π/2`, reduced into `[0, π/2)`.
///
/// The product is split exactly into hi/lo parts with an FMA, and the
/// subtraction `l·θ - k·(π/2)` uses the two-part `π/2`, so the result keeps
/// full precision for every `l` that can occur under a `u64` norm bound
/// (`l ≤ 63`, hence `k ≤ 64`: the quotient is exactly representable).
pub fn reduce_angle_multiple(theta: f64, l: u32) -> f64 {
    debug_assert!((0.0..FRAC_PI_2).contains(&theta));
    let lf = l as f64;
    let p_hi = theta * lf;
    let p_lo = theta.mul_add(lf, -p_hi);
    let k = (p_hi / PI2_HI).floor();
    let mut r = (-k).mul_add(PI2_HI, p_hi) + (p_lo - k * PI2_LO);
    while r < 0.0 {
        r += PI2_HI;
    }
    while r >= PI2_HI {
        r -= PI2_HI;
    }
    r
}

impl GaussianPrimeIdeal {
    /// The power `𝔭^l` over the split prime `p = a² + b²`, for the conjugate
    /// with generator `a + bi` (`conj = false`) or `b + ai` (`conj = true`).
    fn split_power(p: u64, a: u64, b: u64, l: u32, conj: bool) -> Self {
        let (ga, gb) = if conj { (b, a) } else { (a, b) };
        let theta = ideal_angle(ga as i64, gb as i64).expect("nonzero generator");
        GaussianPrimeIdeal {
            p,
            l,
            class: PrimeClass::Split,
            gen_a: ga,
            gen_b: gb,
            norm: p.pow(l),
            theta: reduce_angle_multiple(theta, l),
            lambda_weight: (p as f64).ln(),
        }
    }

    fn inert_power(p: u64, l: u32) -> Self {
        GaussianPrimeIdeal {
            p,
            l,
            class: PrimeClass::Inert,
            gen_a: p,
            gen_b: 0,
            norm: (p * p).pow(l),
            theta: 0.0,
            lambda_weight: (p as f64).ln(),
        }
    }

    fn ramified_power(l: u32) -> Self {
        GaussianPrimeIdeal {
            p: 2,
            l,
            class: PrimeClass::Ramified,
            gen_a: 1,
            gen_b: 1,
            // (1+i)^l has angle l·π/4 mod π/2: π/4 for odd l, 0 for even.
            norm: 1u64 << l,
            theta: if l % 2 == 1 { std::f64::consts::FRAC_PI_4 } else { 0.0 },
            lambda_weight: std::f64::consts::LN_2,
        }
    }

    /// Distance of `theta` to the nearest multiple of `π/2`.
    pub fn angle_gap(&self) -> f64 {
        self.theta.min(FRAC_PI_2 - self.theta)
    }
}

/// All prime-power ideals `𝔭^l` with `N(𝔭^l) ≤ norm_limit`, both conjugates
/// for split primes, ordered by `(p, l, conjugate)`.
///
/// Refuses (rather than thrashes) when the limit exceeds `budget`.
pub fn enumerate_prime_power_ideals(
    norm_limit: u64,
    budget: u64,
) -> Result<Vec<GaussianPrimeIdeal>> {
    if norm_limit > budget {
        return Err(Error::Capacity {
            required: norm_limit,
            budget,
        });
    }
    let mut out = Vec::new();
    if norm_limit < 2 {
        return Ok(out);
    }
    let mut l = 1u32;
    while 1u64 << l <= norm_limit {
        out.push(GaussianPrimeIdeal::ramified_power(l));
        l += 1;
    }
    sieve::for_each_prime(3, norm_limit, |p| {
        match PrimeClass::of(p) {
            PrimeClass::Split => {
                let (a, b) = two_square_unchecked(p);
                let mut l = 1u32;
                let mut norm = p;
                while norm <= norm_limit {
                    out.push(GaussianPrimeIdeal::split_power(p, a, b, l, false));
                    out.push(GaussianPrimeIdeal::split_power(p, a, b, l, true));
                    l += 1;
                    norm = match norm.checked_mul(p) {
                        Some(n) => n,
                        None => break,
                    };
                }
            }
            PrimeClass::Inert => {
                let mut l = 1u32;
                let mut norm = match p.checked_mul(p) {
                    Some(n) => n,
                    None => return,
                };
                while norm <= norm_limit {
                    out.push(GaussianPrimeIdeal::inert_power(p, l));
                    l += 1;
                    norm = match norm.checked_mul(p * p) {
                        Some(n) => n,
                        None => break,
                    };
                }
            }
            PrimeClass::Ramified => unreachable!("p ≥ 3"),
        }
    });
    out.sort_by_key(|id| (id.p, id.l, id.gen_a < id.gen_b));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_classes() {
        assert_eq!(PrimeClass::of(2), PrimeClass::Ramified);
        assert_eq!(PrimeClass::of(3), PrimeClass::Inert);
        assert_eq!(PrimeClass::of(5), PrimeClass::Split);
        assert_eq!(PrimeClass::of(7), PrimeClass::Inert);
        assert_eq!(PrimeClass::of(13), PrimeClass::Split);
        assert_eq!(PrimeClass::of(1_000_003), PrimeClass::Inert);
    }

    #[test]
    fn two_square_small_primes() {
        assert_eq!(two_square_decompose(5).unwrap(), (2, 1));
        assert_eq!(two_square_decompose(13).unwrap(), (3, 2));
        assert_eq!(two_square_decompose(17).unwrap(), (4, 1));
        assert_eq!(two_square_decompose(29).unwrap(), (5, 2));
        assert_eq!(two_square_decompose(97).unwrap(), (9, 4));
    }

    #[test]
    fn two_square_large_prime() {
        // 1e9-region split prime; identity checked exactly.
        let p = 999_999_937u64;
        let (a, b) = two_square_decompose(p).unwrap();
        assert_eq!(a * a + b * b, p);
        assert!(a > b && b > 0);
    }

    #[test]
    fn two_square_rejects_bad_input() {
        assert!(two_square_decompose(7).is_err());
        assert!(two_square_decompose(2).is_err());
        assert!(two_square_decompose(25).is_err());
    }

    #[test]
    fn angles_basic() {
        assert_eq!(ideal_angle(1, 0).unwrap(), 0.0);
        assert_eq!(ideal_angle(0, 1).unwrap(), 0.0); // (i) = (1)·i
        let t = ideal_angle(1, 1).unwrap();
        assert!((t - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        // 2+i: atan(1/2).
        let t = ideal_angle(2, 1).unwrap();
        assert!((t - 0.463_647_609_000_806_1).abs() < 1e-15);
        assert!(ideal_angle(0, 0).is_err());
    }

    #[test]
    fn angle_reduction_matches_rational_arithmetic() {
        // l·θ mod π/2 for θ = atan(1/2), checked against a 30-digit reduction.
        let theta = 0.463_647_609_000_806_1;
        // Reference values for l = 7, 13, 31, 60 (computed at high precision).
        let cases = [
            (7u32, 0.103_940_609_415_849_42),
            (13u32, 1.315_029_936_625_789_4),
            (31u32, 0.235_908_937_870_919_33),
            (60u32, 1.115_318_984_535_123_1),
        ];
        for (l, want) in cases {
            let got = reduce_angle_multiple(theta, l);
            assert!(
                (got - want).abs() < 1e-13,
                "l = {l}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn enumeration_small_limit_by_hand() {
        // Norm ≤ 30: (1+i), (1+i)², (1+i)³, (1+i)⁴, then 5, 13, 17, 29 split
        // (two conjugates each), 25 = 5² powers, 9 = 3² inert. 7² = 49 > 30.
        let ids = enumerate_prime_power_ideals(30, u64::MAX).unwrap();
        let norms: Vec<u64> = ids.iter().map(|i| i.norm).collect();
        assert_eq!(
            norms,
            vec![2, 4, 8, 16, 9, 5, 5, 25, 25, 13, 13, 17, 17, 29, 29]
        );
        // Split entries carry both conjugates with swapped generators.
        let five: Vec<_> = ids.iter().filter(|i| i.norm == 5).collect();
        assert_eq!((five[0].gen_a, five[0].gen_b), (2, 1));
        assert_eq!((five[1].gen_a, five[1].gen_b), (1, 2));
        // Conjugate angles mirror about π/4.
        assert!((five[0].theta + five[1].theta - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn enumeration_respects_budget() {
        match enumerate_prime_power_ideals(1000, 100) {
            Err(Error::Capacity { required, budget }) => {
                assert_eq!((required, budget), (1000, 100));
            }
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn enumeration_counts_match_class_densities() {
        // Norm ≤ 1e5: count split base ideals = 2·π_{1 mod 4}(1e5).
        let ids = enumerate_prime_power_ideals(100_000, u64::MAX).unwrap();
        let split_base = ids
            .iter()
            .filter(|i| i.class == PrimeClass::Split && i.l == 1)
            .count();
        // π(1e5) = 9592; primes ≡ 1 (mod 4): 4783.
        assert_eq!(split_base, 2 * 4783);
        let inert_base = ids
            .iter()
            .filter(|i| i.class == PrimeClass::Inert && i.l == 1)
            .count();
        // Inert ideals have norm p² ≤ 1e5, p ≤ 316: primes ≡ 3 (mod 4): 34.
        assert_eq!(inert_base, 34);
        for id in &ids {
            assert!(id.norm <= 100_000);
            assert!((0.0..FRAC_PI_2).contains(&id.theta));
        }
    }

    #[test]
    fn ramified_powers_alternate_angle() {
        let ids = enumerate_prime_power_ideals(64, u64::MAX).unwrap();
        for id in ids.iter().filter(|i| i.class == PrimeClass::Ramified) {
            let want = if id.l % 2 == 1 {
                std::f64::consts::FRAC_PI_4
            } else {
                0.0
            };
            assert_eq!(id.theta, want, "l = {}", id.l);
        }
    }

    proptest! {
        #[test]
        fn prop_two_square_identity(idx in 0usize..2000) {
            // Scan an arithmetic strip for primes ≡ 1 (mod 4).
            let n = 5 + 4 * idx as u64;
            if is_prime(n) {
                let (a, b) = two_square_decompose(n).unwrap();
                prop_assert_eq!(a * a + b * b, n);
                prop_assert!(a > b && b > 0);
            }
        }

        #[test]
        fn prop_conjugate_angles_mirror(a in 1i64..2000, b in 1i64..2000) {
            let t1 = ideal_angle(a, b).unwrap();
            let t2 = ideal_angle(b, a).unwrap();
            // (a,b) and (b,a) mirror about π/4 unless a = b.
            if a == b {
                prop_assert!((t1 - t2).abs() < 1e-15);
            } else {
                prop_assert!((t1 + t2 - FRAC_PI_2).abs() < 1e-12);
            }
        }

        #[test]
        fn prop_angle_units_invariant(a in 1i64..3000, b in 0i64..3000) {
            // Multiplying the generator by i rotates by π/2: same ideal angle.
            let t1 = ideal_angle(a, b).unwrap();
            let t2 = ideal_angle(-b, a).unwrap();
            prop_assert!((t1 - t2).abs() < 1e-12, "{} vs {}", t1, t2);
        }

        #[test]
        fn prop_reduced_angle_in_range(theta in 0.0f64..1.5707, l in 1u32..64) {
            let r = reduce_angle_multiple(theta, l);
            prop_assert!((0.0..FRAC_PI_2).contains(&r));
            // Compare against naive reduction, modulo the quarter turn.
            let naive = (theta * l as f64).rem_euclid(FRAC_PI_2);
            let diff = (r - naive).abs();
            let wrapped = (diff - FRAC_PI_2).abs();
            prop_assert!(diff < 1e-9 || wrapped < 1e-9);
        }
    }
}
