//! Segmented sieve of Eratosthenes with a deterministic parallel map.
//!
//! Work is split into fixed spans of 2²⁰ integers regardless of thread count;
//! per-segment results are collected in segment order and combined by the
//! caller with a fixed pairwise tree. This is what makes every prime sum in
//! the crate bit-identical between `--threads 1` and `--threads N`.

use rayon::prelude::*;

/// Width of one sieve segment. Fixed: changing it would change summation
/// order and therefore the low bits of every report.
pub const SEGMENT_SPAN: u64 = 1 << 20;

/// Primes `≤ limit` by a plain sieve; used for base primes and small jobs.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Primes inside `[lo, hi]`, given base primes covering `√hi`.
fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    debug_assert!(lo >= 2);
    let span = (hi - lo + 1) as usize;
    let mut composite = vec![false; span];
    for &p in base {
        if p * p > hi {
            break;
        }
        let mut start = lo.div_ceil(p) * p;
        if start < p * p {
            start = p * p;
        }
        let mut j = start;
        while j <= hi {
            composite[(j - lo) as usize] = true;
            j += p;
        }
    }
    (0..span)
        .filter(|&i| !composite[i])
        .map(|i| lo + i as u64)
        .collect()
}

/// Number of segments covering `[1, limit]`.
fn segment_count(limit: u64) -> u64 {
    limit.div_ceil(SEGMENT_SPAN)
}

/// Applies `job` to each segment's primes in parallel and returns the results
/// **in segment order**. Segment `s` holds the primes in
/// `[s·2²⁰ + 1, (s+1)·2²⁰] ∩ [2, limit]`.
pub fn map_segments<T, F>(limit: u64, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &[u64]) -> T + Sync,
{
    if limit < 2 {
        return Vec::new();
    }
    let base = small_primes(limit.isqrt());
    (0..segment_count(limit))
        .into_par_iter()
        .map(|s| {
            let lo = (s * SEGMENT_SPAN + 1).max(2);
            let hi = ((s + 1) * SEGMENT_SPAN).min(limit);
            let primes = sieve_segment(lo, hi, &base);
            job(s, &primes)
        })
        .collect()
}

/// Sequentially visits every prime in `[lo, hi]` in increasing order.
pub fn for_each_prime<F: FnMut(u64)>(lo: u64, hi: u64, mut f: F) {
    if hi < 2 || hi < lo {
        return;
    }
    let lo = lo.max(2);
    let base = small_primes(hi.isqrt());
    let first_seg = (lo - 1) / SEGMENT_SPAN;
    for s in first_seg..segment_count(hi) {
        let seg_lo = (s * SEGMENT_SPAN + 1).max(2);
        let seg_hi = ((s + 1) * SEGMENT_SPAN).min(hi);
        for p in sieve_segment(seg_lo, seg_hi, &base) {
            if p >= lo {
                f(p);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_prefix() {
        assert_eq!(small_primes(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(small_primes(1), Vec::<u64>::new());
        assert_eq!(small_primes(2), vec![2]);
    }

    #[test]
    fn segment_boundaries_match_plain_sieve() {
        // Straddle the first segment boundary.
        let lim = SEGMENT_SPAN + 5000;
        let plain = small_primes(lim);
        let mut segmented = Vec::new();
        for_each_prime(2, lim, |p| segmented.push(p));
        assert_eq!(plain, segmented);
    }

    #[test]
    fn prime_counting_checkpoints() {
        // π(1e6) = 78498.
        let mut count = 0u64;
        for_each_prime(2, 1_000_000, |_| count += 1);
        assert_eq!(count, 78_498);
    }

    #[test]
    fn ranged_iteration() {
        let mut got = Vec::new();
        for_each_prime(90, 120, |p| got.push(p));
        assert_eq!(got, vec![97, 101, 103, 107, 109, 113]);
    }

    #[test]
    fn map_segments_ordered_and_complete() {
        let lim = 3 * SEGMENT_SPAN + 123;
        let counts = map_segments(lim, |s, primes| (s, primes.len() as u64));
        assert_eq!(counts.len(), 4);
        for (i, &(s, _)) in counts.iter().enumerate() {
            assert_eq!(i as u64, s);
        }
        let total: u64 = counts.iter().map(|&(_, c)| c).sum();
        let mut expect = 0u64;
        for_each_prime(2, lim, |_| expect += 1);
        assert_eq!(total, expect);
    }

    #[test]
    fn map_segments_deterministic_across_pools() {
        let lim = 2 * SEGMENT_SPAN;
        let run = || {
            let parts = map_segments(lim, |_, primes| {
                primes.iter().map(|&p| 1.0 / p as f64).sum::<f64>()
            });
            crate::numerics::pairwise_sum(&parts)
        };
        let reference = run();
        for threads in [1, 2, 7] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let got = pool.install(run);
            assert_eq!(got.to_bits(), reference.to_bits(), "threads = {threads}");
        }
    }
}
