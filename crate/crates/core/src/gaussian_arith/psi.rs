//! The Chebyshev function `ψ(t) = Σ_{pˡ ≤ t} log p` as an exact step stream,
//! and closed-form integrals `∫₁ᵀ w(log t)·(ψ(t) − t)/t² dt` for polynomial
//! weights `w`.
//!
//! On each interval `[a, b)` between consecutive prime powers `ψ` is constant,
//! and with `Q = w + w' + w'' + …` and `W = ∫w`:
//!
//! `∫_a^b w(log t)(ψ_a − t)/t² dt = ψ_a·[-Q(log t)/t]_a^b − [W(log t)]_a^b`
//!
//! so the whole integral is a finite exact sum — no quadrature error, only
//! compensated rounding.

use crate::numerics::{CompensatedSum, Polynomial};

/// One jump of `ψ`: at `t = p^l` the function increases by `log p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiStep {
    pub t: u64,
    pub log_p: f64,
}

/// All prime-power jump points `≤ limit`, in increasing order of `t`.
///
/// Primes come straight from the sieve; higher powers are few (`O(√limit)`)
/// and merged in.
pub fn psi_steps(limit: u64) -> Vec<PsiStep> {
    let mut steps = Vec::new();
    if limit < 2 {
        return steps;
    }
    let mut powers: Vec<PsiStep> = Vec::new();
    super::sieve::for_each_prime(2, limit, |p| {
        steps.push(PsiStep {
            t: p,
            log_p: (p as f64).ln(),
        });
        if let Some(mut n) = p.checked_mul(p) {
            let lp = (p as f64).ln();
            while n <= limit {
                powers.push(PsiStep { t: n, log_p: lp });
                n = match n.checked_mul(p) {
                    Some(m) => m,
                    None => break,
                };
            }
        }
    });
    steps.extend(powers);
    steps.sort_by_key(|s| s.t);
    steps
}

/// `∫₁ᵀ w(log t)(ψ(t) − t)/t² dt` exactly, for each requested `T`.
///
/// `t_values` must be increasing; a single pass over the step stream yields
/// all of them (used to compare a cutoff against its double without
/// re-sieving).
pub fn psi_weighted_integral_many(t_values: &[u64], weight: &Polynomial) -> Vec<f64> {
    assert!(!t_values.is_empty());
    assert!(t_values.windows(2).all(|w| w[0] < w[1]), "T values must increase");
    assert!(t_values[0] >= 1);
    let t_max = *t_values.last().unwrap();

    let q = weight.derivative_tail_sum();
    let w_anti = weight.antiderivative();
    // F(t) = -Q(log t)/t is the antiderivative of w(log t)/t².
    let f_at = |t: f64| -> f64 {
        let lt = t.ln();
        -q.eval(lt) / t
    };
    let w_at = |t: f64| w_anti.eval(t.ln());

    let mut acc = CompensatedSum::new();
    let mut psi = CompensatedSum::new();
    let mut cur = 1.0f64;
    let mut out = Vec::with_capacity(t_values.len());
    let mut next_t = 0usize;

    // Value of the integral at t_end, given ψ constant on [cur, t_end].
    let flush_to = |t_end: f64, cur: f64, acc: &CompensatedSum, psi: &CompensatedSum| -> f64 {
        acc.value() + psi.value() * (f_at(t_end) - f_at(cur)) - (w_at(t_end) - w_at(cur))
    };

    for step in psi_steps(t_max) {
        let t = step.t as f64;
        while next_t < t_values.len() && (t_values[next_t] as f64) < t {
            out.push(flush_to(t_values[next_t] as f64, cur, &acc, &psi));
            next_t += 1;
        }
        // Commit the interval [cur, t) and apply the jump.
        acc.add(psi.value() * (f_at(t) - f_at(cur)));
        acc.add(-(w_at(t) - w_at(cur)));
        cur = t;
        psi.add(step.log_p);
    }
    while next_t < t_values.len() {
        out.push(flush_to(t_values[next_t] as f64, cur, &acc, &psi));
        next_t += 1;
    }
    out
}

/// Single-cutoff convenience form of [`psi_weighted_integral_many`].
pub fn psi_weighted_integral(t_limit: u64, weight: &Polynomial) -> f64 {
    psi_weighted_integral_many(&[t_limit], weight)[0]
}
