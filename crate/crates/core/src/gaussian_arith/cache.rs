//! On-disk cache of sieved rational primes with their splitting data, so a
//! long enumeration can be reused across runs.
//!
//! Layout (all little-endian):
//!
//! ```text
//! magic   : 6 bytes  = "GPRIM\0"
//! version : u32      = 1
//! limit   : u64      — norm bound the cache was built for
//! records : repeated — p: u64, class: u8 (1 split, 2 ramified, 3 inert),
//!                      a: u32, b: u32   (a² + b² = p for split, else 0)
//! ```
//!
//! A cache for `limit` holds every prime that generates an ideal of norm
//! `≤ limit`: split `p ≤ limit`, inert `p ≤ √limit`, and 2. Readers validate
//! magic, version, record framing, class bytes, and ordering before trusting
//! anything.

use crate::error::{Error, Result};
use crate::gaussian_arith::{two_square_unchecked, PrimeClass};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

pub const CACHE_MAGIC: [u8; 6] = *b"GPRIM\0";
pub const CACHE_VERSION: u32 = 1;
const RECORD_BYTES: usize = 8 + 1 + 4 + 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeCacheRecord {
    pub p: u64,
    pub class: PrimeClass,
    pub a: u32,
    pub b: u32,
}

fn class_to_byte(c: PrimeClass) -> u8 {
    match c {
        PrimeClass::Split => 1,
        PrimeClass::Ramified => 2,
        PrimeClass::Inert => 3,
    }
}

fn class_from_byte(b: u8) -> Option<PrimeClass> {
    match b {
        1 => Some(PrimeClass::Split),
        2 => Some(PrimeClass::Ramified),
        3 => Some(PrimeClass::Inert),
        _ => None,
    }
}

pub fn write_prime_cache(
    path: &Path,
    norm_limit: u64,
    records: &[PrimeCacheRecord],
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&CACHE_MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    w.write_all(&norm_limit.to_le_bytes())?;
    for r in records {
        w.write_all(&r.p.to_le_bytes())?;
        w.write_all(&[class_to_byte(r.class)])?;
        w.write_all(&r.a.to_le_bytes())?;
        w.write_all(&r.b.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_prime_cache(path: &Path) -> Result<(u64, Vec<PrimeCacheRecord>)> {
    let mut r = BufReader::new(File::open(path)?);
    let mut head = [0u8; 6 + 4 + 8];
    r.read_exact(&mut head)
        .map_err(|_| Error::CacheFormat("file shorter than header".into()))?;
    if head[..6] != CACHE_MAGIC {
        return Err(Error::CacheFormat(format!(
            "bad magic {:?}, want {:?}",
            &head[..6],
            CACHE_MAGIC
        )));
    }
    let version = u32::from_le_bytes(head[6..10].try_into().unwrap());
    if version != CACHE_VERSION {
        return Err(Error::CacheFormat(format!(
            "unsupported version {version}, want {CACHE_VERSION}"
        )));
    }
    let limit = u64::from_le_bytes(head[10..18].try_into().unwrap());

    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len() % RECORD_BYTES != 0 {
        return Err(Error::CacheFormat(format!(
            "truncated: {} trailing bytes",
            body.len() % RECORD_BYTES
        )));
    }
    let mut records = Vec::with_capacity(body.len() / RECORD_BYTES);
    let mut prev_p = 0u64;
    for chunk in body.chunks_exact(RECORD_BYTES) {
        let p = u64::from_le_bytes(chunk[..8].try_into().unwrap());
        let class = class_from_byte(chunk[8])
            .ok_or_else(|| Error::CacheFormat(format!("invalid class byte {}", chunk[8])))?;
        let a = u32::from_le_bytes(chunk[9..13].try_into().unwrap());
        let b = u32::from_le_bytes(chunk[13..17].try_into().unwrap());
        if class != PrimeClass::of(p) {
            return Err(Error::CacheFormat(format!(
                "class byte disagrees with p = {p} (mod 4)"
            )));
        }
        if p <= prev_p {
            return Err(Error::CacheFormat(format!(
                "records out of order at p = {p}"
            )));
        }
        if class == PrimeClass::Split {
            let (a64, b64) = (a as u64, b as u64);
            if a64 * a64 + b64 * b64 != p || a64 <= b64 || b == 0 {
                return Err(Error::CacheFormat(format!(
                    "split record {p} has bad generator ({a}, {b})"
                )));
            }
        }
        prev_p = p;
        records.push(PrimeCacheRecord { p, class, a, b });
    }
    Ok((limit, records))
}

/// Sieves, decomposes, and writes the cache for `norm_limit`; returns the
/// record count.
pub fn build_prime_cache(path: &Path, norm_limit: u64, budget: u64) -> Result<usize> {
    if norm_limit > budget {
        return Err(Error::Capacity {
            required: norm_limit,
            budget,
        });
    }
    let inert_bound = norm_limit.isqrt();
    let mut records = Vec::new();
    if norm_limit >= 2 {
        records.push(PrimeCacheRecord {
            p: 2,
            class: PrimeClass::Ramified,
            a: 1,
            b: 1,
        });
    }
    super::sieve::for_each_prime(3, norm_limit, |p| match PrimeClass::of(p) {
        PrimeClass::Split => {
            let (a, b) = two_square_unchecked(p);
            records.push(PrimeCacheRecord {
                p,
                class: PrimeClass::Split,
                a: a as u32,
                b: b as u32,
            });
        }
        PrimeClass::Inert => {
            if p <= inert_bound {
                records.push(PrimeCacheRecord {
                    p,
                    class: PrimeClass::Inert,
                    a: 0,
                    b: 0,
                });
            }
        }
        PrimeClass::Ramified => {}
    });
    write_prime_cache(path, norm_limit, &records)?;
    Ok(records.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> std::path::PathBuf {
        let mut p = std::env::temp_dir();
        p.push(format!("gprim-test-{}-{name}", std::process::id()));
        p
    }

    #[test]
    fn roundtrip() {
        let path = tmp("roundtrip");
        let n = build_prime_cache(&path, 1000, u64::MAX).unwrap();
        let (limit, records) = read_prime_cache(&path).unwrap();
        assert_eq!(limit, 1000);
        assert_eq!(records.len(), n);
        // 2, then split primes ≤ 1000 (there are 80), inert ≤ 31 (3,7,11,19,23,31).
        assert_eq!(records[0].p, 2);
        let split = records
            .iter()
            .filter(|r| r.class == PrimeClass::Split)
            .count();
        assert_eq!(split, 80);
        let inert: Vec<u64> = records
            .iter()
            .filter(|r| r.class == PrimeClass::Inert)
            .map(|r| r.p)
            .collect();
        assert_eq!(inert, vec![3, 7, 11, 19, 23, 31]);
        // Spot-check a decomposition survived the disk trip.
        let r13 = records.iter().find(|r| r.p == 13).unwrap();
        assert_eq!((r13.a, r13.b), (3, 2));
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn rejects_bad_magic() {
        let path = tmp("magic");
        std::fs::write(&path, b"NOTGPRIMxxxxxxxxxxxx").unwrap();
        match read_prime_cache(&path) {
            Err(Error::CacheFormat(msg)) => assert!(msg.contains("magic"), "{msg}"),
            other => panic!("want format error, got {other:?}"),
        }
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn rejects_wrong_version() {
        let path = tmp("version");
        let mut bytes = Vec::new();
        bytes.extend_from_slice(&CACHE_MAGIC);
        bytes.extend_from_slice(&7u32.to_le_bytes());
        bytes.extend_from_slice(&100u64.to_le_bytes());
        std::fs::write(&path, &bytes).unwrap();
        match read_prime_cache(&path) {
            Err(Error::CacheFormat(msg)) => assert!(msg.contains("version"), "{msg}"),
            other => panic!("want format error, got {other:?}"),
        }
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn rejects_truncated_record() {
        let path = tmp("truncated");
        build_prime_cache(&path, 100, u64::MAX).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes.pop();
        std::fs::write(&path, &bytes).unwrap();
        match read_prime_cache(&path) {
            Err(Error::CacheFormat(msg)) => assert!(msg.contains("truncated"), "{msg}"),
            other => panic!("want format error, got {other:?}"),
        }
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn rejects_corrupt_class_byte() {
        let path = tmp("class");
        build_prime_cache(&path, 100, u64::MAX).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[18 + 8] = 9; // class byte of the first record
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(
            read_prime_cache(&path),
            Err(Error::CacheFormat(_))
        ));
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn build_respects_budget() {
        let path = tmp("budget");
        assert!(matches!(
            build_prime_cache(&path, 1_000_000, 10),
            Err(Error::Capacity { .. })
        ));
    }
}
