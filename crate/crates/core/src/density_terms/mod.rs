//! Additive decomposition of the one-level density for the quartic-character
//! family over `Z[i]`.
//!
//! Both sides of the ledger are computed for a family size `K` and a test
//! function `f` with `supp f̂ ⊆ [-ν, ν]`: the archimedean term plus the
//! Dirichlet-series sums (`W_f`, `S_ζ`, `S_L`, `S_{A'}`, `S_Γ`) and the
//! explicit-formula prime sums over Gaussian ideals (`W_f`, `S_split`,
//! `S_inert`, `S_ram`). The two sides agree up to an explicitly computable
//! parity residue from the ramified prime — the *identity defect* — which
//! vanishes for even `K` and has a closed form for odd `K`.

mod prime_sums;
mod wf;

pub use prime_sums::{
    s_aprime_asymptotic, s_aprime_sum, s_gamma_asymptotic, s_inert_sum, s_l_asymptotic, s_l_sum,
    s_ram_sums, s_split_sum, s_zeta_asymptotic, s_zeta_sum,
};
pub use wf::{w_f_asymptotic, w_f_exact};

use serde::Serialize;

use crate::special_constants;
use crate::test_functions::TestFunction;
use crate::{Error, Result};

/// Truncation and budget knobs shared by all term computations.
#[derive(Clone, Copy, Debug)]
pub struct TermOptions {
    /// Hard ceiling on any prime/norm enumeration implied by `(K, ν)`;
    /// exceeding it is a capacity error, not a silent truncation.
    pub norm_budget: u64,
    /// Prime cutoff for the arithmetic constants (`P₃`, `d`, `c`).
    pub prime_cutoff: u64,
    /// Chebyshev-ψ integral cutoff behind `c₁` and the higher `c_j`.
    pub psi_cutoff: u64,
    /// Expansion order `J` used for the `S_ζ` asymptotic.
    pub zeta_expansion_order: u32,
}

impl Default for TermOptions {
    fn default() -> Self {
        TermOptions {
            norm_budget: 1 << 32,
            prime_cutoff: 1_000_000,
            psi_cutoff: 1_000_000,
            zeta_expansion_order: 1,
        }
    }
}

/// Every term of the decomposition for one `(K, f)` pair.
///
/// `D1_unconditional` is stored as the literal sum of its four stored
/// components, so the additive identity holds bitwise in any serialization.
#[derive(Clone, Debug, Serialize)]
pub struct TermReport {
    #[serde(rename = "K")]
    pub family_size: u64,
    #[serde(rename = "M")]
    pub log_family_size: f64,
    pub test_function: String,
    #[serde(rename = "W_f_exact")]
    pub w_f_exact: f64,
    #[serde(rename = "W_f_asymptotic")]
    pub w_f_asymptotic: f64,
    #[serde(rename = "S_zeta_sum")]
    pub s_zeta_sum: f64,
    #[serde(rename = "S_zeta_asymptotic")]
    pub s_zeta_asymptotic: f64,
    #[serde(rename = "S_L_sum")]
    pub s_l_sum: f64,
    #[serde(rename = "S_L_asymptotic")]
    pub s_l_asymptotic: f64,
    #[serde(rename = "S_Aprime_sum")]
    pub s_aprime_sum: f64,
    #[serde(rename = "S_Aprime_asymptotic")]
    pub s_aprime_asymptotic: f64,
    #[serde(rename = "S_Gamma_asymptotic")]
    pub s_gamma_asymptotic: f64,
    #[serde(rename = "S_inert")]
    pub s_inert: f64,
    #[serde(rename = "S_ram_exact")]
    pub s_ram_exact: f64,
    #[serde(rename = "S_ram_limit")]
    pub s_ram_limit: f64,
    #[serde(rename = "S_split")]
    pub s_split: f64,
    #[serde(rename = "D1_unconditional")]
    pub d1_unconditional: f64,
    #[serde(rename = "D1_conjectured")]
    pub d1_conjectured: f64,
    pub identity_defect: f64,
}

fn log_family(family_size: u64) -> Result<f64> {
    if family_size < 2 {
        return Err(Error::Domain(format!(
            "family size must be at least 2, got {family_size}"
        )));
    }
    Ok((family_size as f64).ln())
}

/// `S_inert + S_ram_exact − (S_ζ + S_L + S_{A'})` at shared support.
///
/// Every term of the three Dirichlet-side sums cancels against an ideal-side
/// term except the odd-power parity residue of the ramified prime: the defect
/// is `0` for even `K` and `+(1/KM)·Σ_{l odd} log2·2^{-l/2}·f̂(l·log2/(2M))`
/// for odd `K`.
pub fn identity_defect(family_size: u64, t: &TestFunction, options: &TermOptions) -> Result<f64> {
    let inert = s_inert_sum(family_size, t, options)?;
    let (ram_exact, _) = s_ram_sums(family_size, t, options)?;
    let zeta = s_zeta_sum(family_size, t, options)?;
    let l = s_l_sum(family_size, t, options)?;
    let aprime = s_aprime_sum(family_size, t, options)?;
    Ok(inert + ram_exact - (zeta + l + aprime))
}

/// Explicit-formula side: `W_f + S_split + S_inert + S_ram_exact`.
pub fn one_level_density_unconditional(
    family_size: u64,
    t: &TestFunction,
    options: &TermOptions,
) -> Result<f64> {
    let w = w_f_exact(family_size, t)?;
    let split = s_split_sum(family_size, t, options)?;
    let inert = s_inert_sum(family_size, t, options)?;
    let (ram_exact, _) = s_ram_sums(family_size, t, options)?;
    Ok(w + split + inert + ram_exact)
}

/// Conjectured density `f̂(0) − ½∫f̂·1_{[-1,1]} + (c·f̂(0) − d·f̂(1))/M`.
pub fn one_level_density_conjectured(
    family_size: u64,
    t: &TestFunction,
    options: &TermOptions,
) -> Result<f64> {
    let m = log_family(family_size)?;
    let report = special_constants::constants_report(options.prime_cutoff, options.psi_cutoff)?;
    Ok(t.fhat_zero() - 0.5 * t.fhat_window_integral()
        + (report.c * t.fhat_zero() - report.d * t.eval_fhat(1.0)) / m)
}

/// Unconditional main-theorem shape `f̂(0) − f(0)/2 + c·f̂(0)/M` (support
/// inside the unit interval, so no `f̂(1)` correction).
pub fn theorem_prediction(
    family_size: u64,
    t: &TestFunction,
    options: &TermOptions,
) -> Result<f64> {
    let m = log_family(family_size)?;
    let report = special_constants::constants_report(options.prime_cutoff, options.psi_cutoff)?;
    Ok(t.fhat_zero() - t.eval_f_real(0.0) / 2.0 + report.c * t.fhat_zero() / m)
}

/// The largest ideal norm any term for `(K, f)` will enumerate — `⌊K^{2ν}⌋`,
/// from the split/inert sums whose transform arguments carry a half factor.
/// Callers can check this against [`TermOptions::norm_budget`] before
/// starting a run; the individual sums enforce the same number internally.
pub fn required_norm_budget(family_size: u64, t: &TestFunction) -> Result<u64> {
    log_family(family_size)?;
    Ok(prime_sums::support_limit(family_size, t.nu(), 2.0))
}

/// Lower bound `5/4 − 1/(2ν)` for the limiting proportion of non-vanishing
/// central values, valid in the theorem-backed support range `0 < ν < 1`
/// (supremum `3/4` as `ν → 1⁻`).
pub fn nonvanishing_bound(nu: f64) -> Result<f64> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::Domain(format!(
            "nonvanishing bound needs 0 < nu < 1, got {nu}"
        )));
    }
    Ok(1.25 - 1.0 / (2.0 * nu))
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// [`nonvanishing_bound`] at the rational `ν = num/den`, in exact arithmetic:
/// returns the reduced fraction `(5·num − 2·den) / (4·num)`.
pub fn nonvanishing_bound_exact(num: u64, den: u64) -> Result<(i64, u64)> {
    if num == 0 || den == 0 || num >= den {
        return Err(Error::Domain(format!(
            "nonvanishing bound needs 0 < num/den < 1, got {num}/{den}"
        )));
    }
    let p = 5i128 * num as i128 - 2 * den as i128;
    let q = 4u128 * num as u128;
    let g = gcd(p.unsigned_abs(), q).max(1);
    let p = i64::try_from(p / g as i128)
        .map_err(|_| Error::Domain(format!("reduced numerator overflows for {num}/{den}")))?;
    let q = u64::try_from(q / g)
        .map_err(|_| Error::Domain(format!("reduced denominator overflows for {num}/{den}")))?;
    Ok((p, q))
}

/// Computes every term of the decomposition for one `(K, f)` pair.
pub fn term_report(family_size: u64, t: &TestFunction, options: &TermOptions) -> Result<TermReport> {
    let m = log_family(family_size)?;
    let w_f_exact = wf::w_f_exact(family_size, t)?;
    let w_f_asymptotic = wf::w_f_asymptotic(family_size, t)?;
    let s_zeta = prime_sums::s_zeta_sum(family_size, t, options)?;
    let s_zeta_asym = prime_sums::s_zeta_asymptotic(family_size, t, options)?;
    let s_l = prime_sums::s_l_sum(family_size, t, options)?;
    let s_l_asym = prime_sums::s_l_asymptotic(family_size, t)?;
    let s_aprime = prime_sums::s_aprime_sum(family_size, t, options)?;
    let s_aprime_asym = prime_sums::s_aprime_asymptotic(family_size, t, options)?;
    let s_gamma_asym = prime_sums::s_gamma_asymptotic(family_size, t, options)?;
    let s_inert = prime_sums::s_inert_sum(family_size, t, options)?;
    let (s_ram_exact, s_ram_limit) = prime_sums::s_ram_sums(family_size, t, options)?;
    let s_split = prime_sums::s_split_sum(family_size, t, options)?;
    Ok(TermReport {
        family_size,
        log_family_size: m,
        test_function: t.descriptor(),
        w_f_exact,
        w_f_asymptotic,
        s_zeta_sum: s_zeta,
        s_zeta_asymptotic: s_zeta_asym,
        s_l_sum: s_l,
        s_l_asymptotic: s_l_asym,
        s_aprime_sum: s_aprime,
        s_aprime_asymptotic: s_aprime_asym,
        s_gamma_asymptotic: s_gamma_asym,
        s_inert,
        s_ram_exact,
        s_ram_limit,
        s_split,
        d1_unconditional: w_f_exact + s_split + s_inert + s_ram_exact,
        d1_conjectured: one_level_density_conjectured(family_size, t, options)?,
        identity_defect: s_inert + s_ram_exact - (s_zeta + s_l + s_aprime),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke_chars::prime_power_split;
    use crate::numerics::CompensatedSum;
    use std::f64::consts::LN_2;

    fn opts() -> TermOptions {
        TermOptions {
            prime_cutoff: 100_000,
            psi_cutoff: 100_000,
            ..TermOptions::default()
        }
    }

    #[test]
    fn unconditional_density_is_the_bitwise_sum_of_its_components() {
        let t = TestFunction::fejer(0.5).unwrap();
        let r = term_report(1000, &t, &opts()).unwrap();
        let sum = r.w_f_exact + r.s_split + r.s_inert + r.s_ram_exact;
        assert_eq!(r.d1_unconditional.to_bits(), sum.to_bits());
        assert_eq!(
            r.d1_unconditional.to_bits(),
            one_level_density_unconditional(1000, &t, &opts())
                .unwrap()
                .to_bits()
        );
    }

    #[test]
    fn identity_defect_vanishes_for_even_families() {
        let t = TestFunction::fejer(0.5).unwrap();
        let defect = identity_defect(1000, &t, &opts()).unwrap();
        assert!(defect.abs() <= 1e-12, "defect {defect}");
    }

    #[test]
    fn identity_defect_matches_the_odd_family_closed_form() {
        let t = TestFunction::fejer(0.5).unwrap();
        let kk = 1001u64;
        let m = (kk as f64).ln();
        let defect = identity_defect(kk, &t, &opts()).unwrap();
        let bound = (m).exp(); // K^{2ν} = K at ν = 1/2
        let mut want = 0.0;
        let mut l = 1u32;
        while (1u128 << l) as f64 <= bound {
            want += LN_2 / 2f64.powf(0.5 * l as f64) * t.eval_fhat(l as f64 * LN_2 / (2.0 * m));
            l += 2;
        }
        want /= m * kk as f64;
        assert!((defect - want).abs() <= 1e-12, "{defect} vs {want}");
        assert!(defect > 0.0);
    }

    // §6.2 regrouping, checked against an independent direct summation: over
    // prime powers n ≤ K^ν, the combination χ₁(n) - 1 keeps -2·Λ(n)/n for
    // n ≡ 3 (4), drops n ≡ 1 (4), and keeps -Λ(n)/n at powers of two.
    #[test]
    fn zeta_plus_l_reproduces_the_congruence_regrouping() {
        let t = TestFunction::fejer(0.5).unwrap();
        let kk = 1000u64;
        let m = (kk as f64).ln();
        let combined =
            s_zeta_sum(kk, &t, &opts()).unwrap() + s_l_sum(kk, &t, &opts()).unwrap();
        let limit = (0.5 * m).exp().floor() as u64;
        let mut acc = CompensatedSum::new();
        for n in 2..=limit {
            if let Some((p, _)) = prime_power_split(n) {
                let weight = (p as f64).ln() / n as f64 * t.eval_fhat((n as f64).ln() / m);
                if n % 4 == 3 {
                    acc.add(-2.0 * weight);
                } else if n % 2 == 0 {
                    acc.add(-weight);
                }
            }
        }
        let regrouped = acc.value() / m;
        assert!(
            (combined - regrouped).abs() <= 1e-12,
            "{combined} vs {regrouped}"
        );
    }

    #[test]
    fn conjectured_and_theorem_densities_agree_inside_the_unit_support() {
        let options = opts();
        for t in [
            TestFunction::fejer(0.5).unwrap(),
            TestFunction::bump(0.5).unwrap(),
        ] {
            let conj = one_level_density_conjectured(1000, &t, &options).unwrap();
            let thm = theorem_prediction(1000, &t, &options).unwrap();
            assert!((conj - thm).abs() <= 1e-12, "{} {conj} vs {thm}", t.descriptor());
        }
    }

    #[test]
    fn wide_support_turns_on_the_fhat_at_one_correction() {
        let t = TestFunction::fejer(2.0).unwrap();
        let options = opts();
        let m = 1000f64.ln();
        let report =
            special_constants::constants_report(options.prime_cutoff, options.psi_cutoff).unwrap();
        let conj = one_level_density_conjectured(1000, &t, &options).unwrap();
        let without = t.fhat_zero() - 0.5 * t.fhat_window_integral() + report.c * t.fhat_zero() / m;
        assert!(((conj - without) - -report.d / (4.0 * m)).abs() < 1e-15);
    }

    #[test]
    fn nonvanishing_bound_closed_forms() {
        assert!((nonvanishing_bound(0.5).unwrap() - 0.25).abs() < 1e-15);
        assert!((nonvanishing_bound(0.9).unwrap() - (1.25 - 5.0 / 9.0)).abs() < 1e-15);
        assert!(nonvanishing_bound(1.0).is_err());
        assert!(nonvanishing_bound(0.0).is_err());
        assert!(nonvanishing_bound(-0.3).is_err());
    }

    #[test]
    fn nonvanishing_bound_exact_rationals() {
        assert_eq!(nonvanishing_bound_exact(999, 1000).unwrap(), (2995, 3996));
        assert_eq!(nonvanishing_bound_exact(9, 10).unwrap(), (25, 36));
        assert_eq!(nonvanishing_bound_exact(1, 2).unwrap(), (1, 4));
        assert_eq!(nonvanishing_bound_exact(2, 5).unwrap(), (0, 1));
        assert!(nonvanishing_bound_exact(3, 3).is_err());
        assert!(nonvanishing_bound_exact(0, 5).is_err());
        // Agreement with the floating-point form.
        let (p, q) = nonvanishing_bound_exact(999, 1000).unwrap();
        let f = nonvanishing_bound(0.999).unwrap();
        assert!((f - p as f64 / q as f64).abs() < 1e-12);
    }

    #[test]
    fn report_serializes_with_the_documented_field_names() {
        let t = TestFunction::fejer(0.5).unwrap();
        let r = term_report(100, &t, &opts()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        let obj = v.as_object().unwrap();
        let want = [
            "K",
            "M",
            "test_function",
            "W_f_exact",
            "W_f_asymptotic",
            "S_zeta_sum",
            "S_zeta_asymptotic",
            "S_L_sum",
            "S_L_asymptotic",
            "S_Aprime_sum",
            "S_Aprime_asymptotic",
            "S_Gamma_asymptotic",
            "S_inert",
            "S_ram_exact",
            "S_ram_limit",
            "S_split",
            "D1_unconditional",
            "D1_conjectured",
            "identity_defect",
        ];
        assert_eq!(obj.len(), want.len());
        for key in want {
            assert!(obj.contains_key(key), "missing field {key}");
        }
        assert_eq!(obj["test_function"], "fejer(nu=0.5)");
    }

    #[test]
    fn reports_are_bit_identical_across_thread_counts() {
        let t = TestFunction::fejer(0.6).unwrap();
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| term_report(500, &t, &opts()).unwrap())
        };
        let a = run(1);
        let b = run(7);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
