//! Named end-to-end verification checks.
//!
//! Each check bundles one gating property of the crate — an exact identity,
//! a closed-form cross-check against an independent route, or a
//! convergence-rate experiment — and returns a verdict together with the
//! measured numbers. The CLI `verify` subcommand and the acceptance
//! test-suite both run exactly these.

use std::f64::consts::{LN_2, SQRT_2};
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::density_terms::{
    identity_defect, nonvanishing_bound, nonvanishing_bound_exact, s_gamma_asymptotic,
    s_split_sum, s_zeta_asymptotic, s_zeta_sum, term_report, theorem_prediction, TermOptions,
};
use crate::gaussian_arith::PrimeClass;
use crate::hecke_chars::{delta_average_empirical, DeltaTable};
use crate::numerics::CompensatedSum;
use crate::ratios_model::{
    a_antidiag_derivative_at_zero, a_diag_derivative, a_product, g_local,
    gamma_ratio_average_asymptotic, gamma_ratio_average_exact, ShiftPoint,
};
use crate::special_constants;
use crate::test_functions::TestFunction;
use crate::{Error, Result};

/// Verdict of one named check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    /// Non-gating checks report a trend and never fail a run.
    pub gating: bool,
    pub passed: bool,
    pub detail: String,
}

/// Deliberately wrong inputs for exercising the failure paths end to end.
#[derive(Clone, Copy, Debug)]
pub enum Fault {
    /// Replace one limiting-average table entry before running the δ-table
    /// check.
    DeltaTableEntry {
        class: PrimeClass,
        h: u32,
        n: u32,
        value: f64,
    },
}

/// Configuration for a verification run.
#[derive(Clone, Debug, Default)]
pub struct VerifyConfig {
    pub options: TermOptions,
    pub fault: Option<Fault>,
}

const CHECK_NAMES: [&str; 11] = [
    "identity",
    "gamma-average",
    "wf-rate",
    "szeta-rate",
    "constants",
    "euler-derivatives",
    "delta-tables",
    "split-decay",
    "end-to-end",
    "nonvanishing",
    "split-gamma-transition",
];

/// Names of all checks, in execution order.
pub fn all_check_names() -> &'static [&'static str] {
    &CHECK_NAMES
}

/// Runs the named check, or all of them when `filter` is `None`.
pub fn run_checks(filter: Option<&str>, cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let names: Vec<&'static str> = match filter {
        None => CHECK_NAMES.to_vec(),
        Some(name) => {
            let hit = CHECK_NAMES.iter().find(|&&n| n == name).copied();
            vec![hit.ok_or_else(|| {
                Error::Domain(format!(
                    "unknown check '{name}' (expected one of: {})",
                    CHECK_NAMES.join(", ")
                ))
            })?]
        }
    };
    names.into_iter().map(|name| run_one(name, cfg)).collect()
}

fn run_one(name: &'static str, cfg: &VerifyConfig) -> Result<CheckResult> {
    match name {
        "identity" => check_identity(cfg),
        "gamma-average" => check_gamma_average(),
        "wf-rate" => check_wf_rate(),
        "szeta-rate" => check_szeta_rate(cfg),
        "constants" => check_constants(),
        "euler-derivatives" => check_euler_derivatives(),
        "delta-tables" => check_delta_tables(cfg),
        "split-decay" => check_split_decay(cfg),
        "end-to-end" => check_end_to_end(cfg),
        "nonvanishing" => check_nonvanishing(),
        "split-gamma-transition" => check_split_gamma_transition(cfg),
        other => Err(Error::Domain(format!("unknown check '{other}'"))),
    }
}

/// Parity identity between the two sides of the decomposition: the defect
/// vanishes for even `K`, matches its closed form for odd `K`, and is
/// required to sit under `(1/K)·(Σ_{l odd} log2·2^{-l/2})/M = (√2·log2)/(KM)`.
fn check_identity(cfg: &VerifyConfig) -> Result<CheckResult> {
    let t = TestFunction::fejer(0.5)?;
    let mut passed = true;
    let mut detail = String::new();

    for kk in [100u64, 1000, 10_000] {
        let defect = identity_defect(kk, &t, &cfg.options)?;
        let ok = defect.abs() <= 1e-12;
        passed &= ok;
        let _ = write!(detail, "K={kk}: |defect|={:.3e} (≤1e-12: {ok}); ", defect.abs());
    }

    for kk in [101u64, 1001] {
        let m = (kk as f64).ln();
        let defect = identity_defect(kk, &t, &cfg.options)?;
        // Closed form: +(1/KM)·Σ_{l odd, 2^l ≤ K} log2·2^{-l/2}·f̂(l·log2/2M).
        let norm_bound = m.exp();
        let mut closed = 0.0;
        let mut l = 1u32;
        while (1u128 << l) as f64 <= norm_bound {
            closed += LN_2 / 2f64.powf(0.5 * l as f64) * t.eval_fhat(l as f64 * LN_2 / (2.0 * m));
            l += 2;
        }
        closed /= m * kk as f64;
        let matches = (defect - closed).abs() <= 1e-12;
        let bound = SQRT_2 * LN_2 / (kk as f64 * m);
        let bounded = defect.abs() <= bound;
        passed &= matches && bounded;
        let _ = write!(
            detail,
            "K={kk}: defect={defect:.6e} closed={closed:.6e} (match: {matches}), bound={bound:.6e} (|defect|≤bound: {bounded}); "
        );
    }

    Ok(CheckResult {
        name: "identity",
        gating: true,
        passed,
        detail,
    })
}

/// Gamma-factor family average at `α = 0.1`: the error of the asymptotic
/// halves (ratio in `[0.4, 0.6]`) under each doubling of `K`.
fn check_gamma_average() -> Result<CheckResult> {
    let alpha = Complex64::new(0.1, 0.0);
    let err = |kk: u64| -> Result<f64> {
        Ok((gamma_ratio_average_exact(alpha, kk)? - gamma_ratio_average_asymptotic(alpha, kk)?)
            .norm())
    };
    let (e1, e2, e4) = (err(1000)?, err(2000)?, err(4000)?);
    let r1 = e2 / e1;
    let r2 = e4 / e2;
    let passed = (0.4..=0.6).contains(&r1) && (0.4..=0.6).contains(&r2);
    Ok(CheckResult {
        name: "gamma-average",
        gating: true,
        passed,
        detail: format!(
            "err(1000)={e1:.3e}, err(2000)={e2:.3e}, err(4000)={e4:.3e}; ratios {r1:.4}, {r2:.4} (need [0.4, 0.6])"
        ),
    })
}

/// Archimedean term: `|W_f_exact − W_f_asymptotic|` shrinks by a factor in
/// `[1.7, 2.3]` per doubling of `K` (Fejér, ν = 1/2).
fn check_wf_rate() -> Result<CheckResult> {
    let t = TestFunction::fejer(0.5)?;
    let mut errs = Vec::new();
    for kk in [1u64 << 8, 1 << 9, 1 << 10, 1 << 11] {
        errs.push(
            (crate::density_terms::w_f_exact(kk, &t)?
                - crate::density_terms::w_f_asymptotic(kk, &t)?)
            .abs(),
        );
    }
    let mut passed = true;
    let mut detail = format!(
        "errors {:.3e}, {:.3e}, {:.3e}, {:.3e}; ratios ",
        errs[0], errs[1], errs[2], errs[3]
    );
    for w in errs.windows(2) {
        let r = w[0] / w[1];
        passed &= (1.7..=2.3).contains(&r);
        let _ = write!(detail, "{r:.4} ");
    }
    detail.push_str("(need [1.7, 2.3])");
    Ok(CheckResult {
        name: "wf-rate",
        gating: true,
        passed,
        detail,
    })
}

/// `S_ζ` expansion at order 1 (smooth kernel, ν = 1/2): the residual scaled
/// by `M²` stays within a factor 10 across the grid `K = 2¹⁰, 2¹², …, 2²⁰`.
fn check_szeta_rate(cfg: &VerifyConfig) -> Result<CheckResult> {
    let t = TestFunction::bump(0.5)?;
    let options = TermOptions {
        zeta_expansion_order: 1,
        ..cfg.options
    };
    let mut scaled = Vec::new();
    let mut detail = String::new();
    for e in (10..=20).step_by(2) {
        let kk = 1u64 << e;
        let m = (kk as f64).ln();
        let r = (s_zeta_sum(kk, &t, &options)? - s_zeta_asymptotic(kk, &t, &options)?) * m * m;
        let _ = write!(detail, "K=2^{e}: {r:.5}; ");
        scaled.push(r.abs());
    }
    let max = scaled.iter().cloned().fold(f64::MIN, f64::max);
    let min = scaled.iter().cloned().fold(f64::MAX, f64::min);
    let passed = max / min <= 10.0;
    let _ = write!(detail, "max/min = {:.3} (need ≤ 10)", max / min);
    Ok(CheckResult {
        name: "szeta-rate",
        gating: true,
        passed,
        detail,
    })
}

/// Arithmetic constants: dual-route η(i), closed form vs. series for
/// `L'/L(1, χ₁)`, and stability of `d`, `c` under doubling both cutoffs.
fn check_constants() -> Result<CheckResult> {
    let mut passed = true;
    let mut detail = String::new();

    let eta_ok = special_constants::eta_at_i().is_ok();
    passed &= eta_ok;
    let _ = write!(detail, "eta dual-route ≤ 1e-10: {eta_ok}; ");

    let closed = special_constants::lprime_over_l_at_one()?;
    let series = special_constants::lprime_over_l_series_oracle();
    let l_ok = (closed - series).abs() <= 1e-6;
    passed &= l_ok;
    let _ = write!(
        detail,
        "L'/L(1) closed {closed:.12} vs series {series:.12} (≤1e-6: {l_ok}); "
    );

    let base = special_constants::constants_report(1_000_000, 1_000_000)?;
    let fine = special_constants::constants_report(2_000_000, 2_000_000)?;
    let d_shift = (fine.d - base.d).abs();
    let c_shift = (fine.c - base.c).abs();
    let d_ok = d_shift <= 1e-8;
    let c_ok = c_shift <= 1e-8;
    passed &= d_ok && c_ok;
    let _ = write!(
        detail,
        "cutoff doubling: |Δd|={d_shift:.3e} (≤1e-8: {d_ok}), |Δc|={c_shift:.3e} (≤1e-8: {c_ok})"
    );

    Ok(CheckResult {
        name: "constants",
        gating: true,
        passed,
        detail,
    })
}

/// Closed-form Euler-product derivatives vs. central finite differences.
fn check_euler_derivatives() -> Result<CheckResult> {
    let cutoff = 100_000;
    let step = 1e-5;

    let up = a_product(&ShiftPoint::from_real(0.01 + step, 0.01)?, cutoff);
    let down = a_product(&ShiftPoint::from_real(0.01 - step, 0.01)?, cutoff);
    let fd_diag = (up.value.re - down.value.re) / (2.0 * step);
    let closed_diag = a_diag_derivative(0.01, cutoff);
    let rel_diag = ((fd_diag - closed_diag) / closed_diag).abs();

    let up = a_product(&ShiftPoint::from_real(-step, step)?, cutoff);
    let down = a_product(&ShiftPoint::from_real(step, -step)?, cutoff);
    let fd_anti = (up.value.re - down.value.re) / (2.0 * step);
    let closed_anti = a_antidiag_derivative_at_zero(cutoff);
    let rel_anti = ((fd_anti - closed_anti) / closed_anti).abs();

    let passed = rel_diag <= 1e-6 && rel_anti <= 1e-6;
    Ok(CheckResult {
        name: "euler-derivatives",
        gating: true,
        passed,
        detail: format!(
            "diagonal: closed {closed_diag:.10} vs fd {fd_diag:.10} (rel {rel_diag:.2e}); antidiagonal: closed {closed_anti:.10} vs fd {fd_anti:.10} (rel {rel_anti:.2e}); need ≤ 1e-6"
        ),
    })
}

/// Limiting coefficient averages: empirical `K = 10⁴` averages within `5/K`
/// of the table, and the local ratios factor matches the table-driven series.
fn check_delta_tables(cfg: &VerifyConfig) -> Result<CheckResult> {
    let table = match cfg.fault {
        Some(Fault::DeltaTableEntry { class, h, n, value }) => {
            DeltaTable::with_override(class, h, n, value)
        }
        None => DeltaTable::canonical(),
    };
    let mut passed = true;
    let mut detail = String::new();

    let kk = 10_000u32;
    let mut worst = (0.0f64, String::new());
    for p in [2u64, 5, 13, 3, 7] {
        let class = PrimeClass::of(p);
        for h in 0..=2u32 {
            for n in 0..=3u32 {
                let limit = table.value(class, h, n);
                let emp = delta_average_empirical(p, h, n, kk)?;
                let dev = (emp - limit).abs() * kk as f64;
                if dev > worst.0 {
                    worst = (dev, format!("(p={p}, h={h}, n={n})"));
                }
                if dev > 5.0 {
                    passed = false;
                    let _ = write!(detail, "cell (p={p}, h={h}, n={n}): |avg−limit|·K = {dev:.4} > 5; ");
                }
            }
        }
    }
    let _ = write!(detail, "worst cell {} at {:.4}/K; ", worst.1, worst.0);

    let mut series_worst = 0.0f64;
    for (alpha, gamma) in [(0.05, 0.1), (0.12, 0.03), (0.08, 0.2)] {
        let s = ShiftPoint::from_real(alpha, gamma)?;
        for (class, p) in [
            (PrimeClass::Ramified, 2u64),
            (PrimeClass::Split, 5),
            (PrimeClass::Inert, 3),
        ] {
            let mut series = CompensatedSum::new();
            for h in 0..=2u32 {
                for n in 0..=400u32 {
                    let coeff = table.value(class, h, n);
                    if coeff != 0.0 {
                        let expo = h as f64 * (0.5 + gamma) + n as f64 * (0.5 + alpha);
                        series.add(coeff * (p as f64).powf(-expo));
                    }
                }
            }
            let diff = (g_local(class, p, &s).re - series.value()).abs();
            series_worst = series_worst.max(diff);
        }
    }
    let series_ok = series_worst <= 1e-10;
    passed &= series_ok;
    let _ = write!(
        detail,
        "local factor vs δ-series worst diff {series_worst:.3e} (≤1e-10: {series_ok})"
    );

    Ok(CheckResult {
        name: "delta-tables",
        gating: true,
        passed,
        detail,
    })
}

/// Split-prime sum decay at ν = 0.8: the scaled size `|S_split|·K^{0.2}/log K`
/// stays bounded across `K = 2¹⁰, 2¹², 2¹⁴, 2¹⁶` — the grid maximum may not
/// spike above 3× the smaller of its adjacent neighbours. (Decaying faster
/// than the scaling is fine; the failure mode under test is growth.)
fn check_split_decay(cfg: &VerifyConfig) -> Result<CheckResult> {
    let t = TestFunction::fejer(0.8)?;
    let mut scaled = Vec::new();
    let mut detail = String::new();
    for e in [10u32, 12, 14, 16] {
        let kk = 1u64 << e;
        let s = s_split_sum(kk, &t, &cfg.options)?;
        let v = s.abs() * (kk as f64).powf(0.2) / (kk as f64).ln();
        let _ = write!(detail, "K=2^{e}: S_split={s:.6e}, scaled={v:.6}; ");
        scaled.push(v);
    }
    let peak = scaled
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut adjacent = f64::MAX;
    if peak > 0 {
        adjacent = adjacent.min(scaled[peak - 1]);
    }
    if peak + 1 < scaled.len() {
        adjacent = adjacent.min(scaled[peak + 1]);
    }
    let passed = scaled[peak] <= 3.0 * adjacent;
    let _ = write!(
        detail,
        "peak {:.6} vs adjacent min {:.6} (need peak ≤ 3× adjacent)",
        scaled[peak], adjacent
    );
    Ok(CheckResult {
        name: "split-decay",
        gating: true,
        passed,
        detail,
    })
}

/// End-to-end density: `(D1_unconditional − theorem_prediction)·M²` stays
/// within a factor 10 across `K = 2¹⁰ … 2²⁰` (smooth kernel, ν = 1/2).
fn check_end_to_end(cfg: &VerifyConfig) -> Result<CheckResult> {
    let t = TestFunction::bump(0.5)?;
    let mut scaled = Vec::new();
    let mut detail = String::new();
    for e in 10..=20u32 {
        let kk = 1u64 << e;
        let m = (kk as f64).ln();
        let report = term_report(kk, &t, &cfg.options)?;
        let r = (report.d1_unconditional - theorem_prediction(kk, &t, &cfg.options)?) * m * m;
        let _ = write!(detail, "K=2^{e}: {r:.5}; ");
        scaled.push(r.abs());
    }
    let max = scaled.iter().cloned().fold(f64::MIN, f64::max);
    let min = scaled.iter().cloned().fold(f64::MAX, f64::min);
    let passed = max / min <= 10.0;
    let _ = write!(detail, "max/min = {:.3} (need ≤ 10)", max / min);
    Ok(CheckResult {
        name: "end-to-end",
        gating: true,
        passed,
        detail,
    })
}

/// Nonvanishing proportion bound in exact rational arithmetic, approaching
/// its supremum `3/4` as `ν → 1⁻`.
fn check_nonvanishing() -> Result<CheckResult> {
    let (p, q) = nonvanishing_bound_exact(999, 1000)?;
    let exact_ok = (p, q) == (2995, 3996);
    let float = nonvanishing_bound(0.999)?;
    let agree = (float - p as f64 / q as f64).abs() <= 1e-12;
    let approaching = float < 0.75 && 0.75 - float < 6e-4;
    let near_sup = nonvanishing_bound(0.999_999)?;
    let sup_ok = 0.75 - near_sup < 1e-6 && near_sup < 0.75;
    let passed = exact_ok && agree && approaching && sup_ok;
    Ok(CheckResult {
        name: "nonvanishing",
        gating: true,
        passed,
        detail: format!(
            "bound(999/1000) = {p}/{q} = {float:.7} (exact form: {exact_ok}); supremum approach: bound(1-1e-6) = {near_sup:.9} (→ 3/4: {sup_ok})"
        ),
    })
}

/// Exploratory small-`K` comparison of the split-prime sum against the
/// archimedean-ratio asymptotic: same sign and within a factor 2. Never
/// gates a run — `M = log K` is far from the asymptotic regime here.
fn check_split_gamma_transition(cfg: &VerifyConfig) -> Result<CheckResult> {
    let t = TestFunction::fejer(1.2)?;
    let mut passed = true;
    let mut detail = String::new();
    for kk in [100u64, 200] {
        let split = s_split_sum(kk, &t, &cfg.options)?;
        let gamma = s_gamma_asymptotic(kk, &t, &cfg.options)?;
        let same_sign = split.signum() == gamma.signum();
        let ratio = (split / gamma).abs();
        let within = (0.5..=2.0).contains(&ratio);
        passed &= same_sign && within;
        let _ = write!(
            detail,
            "K={kk}: S_split={split:.6e}, S_Gamma_asym={gamma:.6e}, same sign: {same_sign}, |ratio|={ratio:.3}; "
        );
    }
    detail.push_str("(reported only, non-gating)");
    Ok(CheckResult {
        name: "split-gamma-transition",
        gating: false,
        passed,
        detail,
    })
}
