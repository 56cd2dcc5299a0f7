//! Binary cache files for primes, class-number tables, and traces.
//!
//! Layout: magic `STAV`, a version byte, a payload-kind byte, a
//! little-endian u64 record count, fixed-width little-endian records, and a
//! trailing FNV-1a checksum over everything before it.
//!
//! The first record of a prime cache is the sieve limit; the first record
//! of a class-number cache is a `(limit, 0, 0)` sentinel.  Readers verify
//! the checksum before decoding and re-validate structural invariants
//! while decoding, so a corrupted file surfaces as an integrity error
//! rather than bad numbers.

use std::fs;
use std::path::Path;

use crate::curves::TraceTable;
use crate::error::{Error, Result};
use crate::numthy::primes::PrimeTable;
use crate::sum::log_to_fixed;
use crate::quadforms::ClassNumberTable;

pub const MAGIC: [u8; 4] = *b"STAV";
pub const VERSION: u8 = 0x01;

pub const KIND_PRIMES: u8 = 0x01;
pub const KIND_CLASS_NUMBERS: u8 = 0x02;
pub const KIND_TRACES: u8 = 0x03;

const HEADER_LEN: usize = 14;
const CHECKSUM_LEN: usize = 8;

/// 64-bit FNV-1a over a byte slice.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// FNV-1a over the little-endian encoding of a `(p, r)` pair, used to pick
/// deterministic verification samples.
pub fn pair_hash(p: u64, r: u32) -> u64 {
    let mut bytes = [0u8; 12];
    bytes[..8].copy_from_slice(&p.to_le_bytes());
    bytes[8..].copy_from_slice(&r.to_le_bytes());
    fnv1a64(&bytes)
}

fn record_len(kind: u8) -> Result<usize> {
    match kind {
        KIND_PRIMES => Ok(8),
        KIND_CLASS_NUMBERS => Ok(16),
        KIND_TRACES => Ok(20),
        other => Err(Error::integrity(format!(
            "unknown cache payload kind 0x{other:02x}"
        ))),
    }
}

fn encode(kind: u8, count: u64, records: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + records.len() + CHECKSUM_LEN);
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(kind);
    out.extend_from_slice(&count.to_le_bytes());
    out.extend_from_slice(records);
    let sum = fnv1a64(&out);
    out.extend_from_slice(&sum.to_le_bytes());
    out
}

/// Header facts of a cache file after its checksum has been verified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CacheInfo {
    pub kind: u8,
    pub records: u64,
    pub bytes: u64,
}

/// Validate the framing of a cache file: magic, version, record geometry,
/// and the trailing checksum.  Decoding is left to the typed readers.
pub fn inspect(path: &Path) -> Result<CacheInfo> {
    let bytes = fs::read(path)?;
    let name = path.display();
    if bytes.len() < HEADER_LEN + CHECKSUM_LEN {
        return Err(Error::integrity(format!(
            "cache file {name} is truncated at {} bytes",
            bytes.len()
        )));
    }
    if bytes[..4] != MAGIC {
        return Err(Error::integrity(format!(
            "cache file {name} does not start with the expected magic"
        )));
    }
    if bytes[4] != VERSION {
        return Err(Error::integrity(format!(
            "cache file {name} has version 0x{:02x}, expected 0x{VERSION:02x}",
            bytes[4]
        )));
    }
    let kind = bytes[5];
    let rec_len = record_len(kind)?;
    let count = u64::from_le_bytes(bytes[6..14].try_into().unwrap());
    let body = &bytes[..bytes.len() - CHECKSUM_LEN];
    let stored = u64::from_le_bytes(bytes[bytes.len() - CHECKSUM_LEN..].try_into().unwrap());
    if fnv1a64(body) != stored {
        return Err(Error::integrity(format!(
            "cache file {name} fails its checksum"
        )));
    }
    let payload = body.len() - HEADER_LEN;
    if payload as u64 != count * rec_len as u64 {
        return Err(Error::integrity(format!(
            "cache file {name} holds {payload} payload bytes but declares {count} records"
        )));
    }
    Ok(CacheInfo {
        kind,
        records: count,
        bytes: bytes.len() as u64,
    })
}

fn read_payload(path: &Path, expect_kind: u8) -> Result<Vec<u8>> {
    let info = inspect(path)?;
    if info.kind != expect_kind {
        return Err(Error::integrity(format!(
            "cache file {} holds payload kind 0x{:02x}, expected 0x{expect_kind:02x}",
            path.display(),
            info.kind
        )));
    }
    let bytes = fs::read(path)?;
    Ok(bytes[HEADER_LEN..bytes.len() - CHECKSUM_LEN].to_vec())
}

/// Write a prime table: the sieve limit, then every prime, as u64 records.
pub fn write_primes(path: &Path, table: &PrimeTable) -> Result<()> {
    let mut records = Vec::with_capacity(8 * (table.primes().len() + 1));
    records.extend_from_slice(&table.limit().to_le_bytes());
    for &p in table.primes() {
        records.extend_from_slice(&p.to_le_bytes());
    }
    let out = encode(KIND_PRIMES, table.primes().len() as u64 + 1, &records);
    Ok(fs::write(path, out)?)
}

/// Read a prime table back, recomputing the fixed-point logarithms.
pub fn read_primes(path: &Path) -> Result<PrimeTable> {
    let payload = read_payload(path, KIND_PRIMES)?;
    let mut words = payload
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()));
    let limit = words.next().ok_or_else(|| {
        Error::integrity(format!("prime cache {} has no limit record", path.display()))
    })?;
    let primes: Vec<u64> = words.collect();
    let mut prev = 1u64;
    for &p in &primes {
        if p <= prev || p > limit {
            return Err(Error::integrity(format!(
                "prime cache {} is not an increasing sequence below its limit {limit}",
                path.display()
            )));
        }
        prev = p;
    }
    let logs = primes.iter().map(|&p| log_to_fixed((p as f64).ln())).collect();
    Ok(PrimeTable::from_parts(limit, primes, logs))
}

/// Write a class-number table: a `(limit, 0, 0)` sentinel, then one
/// `(p, r, h)` record per entry in table order.
pub fn write_class_numbers(path: &Path, table: &ClassNumberTable) -> Result<()> {
    let mut records = Vec::with_capacity(16 * (table.entry_count() + 1));
    let mut push = |p: u64, r: u32, h: u32| {
        records.extend_from_slice(&p.to_le_bytes());
        records.extend_from_slice(&r.to_le_bytes());
        records.extend_from_slice(&h.to_le_bytes());
    };
    push(table.limit(), 0, 0);
    let mut count = 1u64;
    for e in table.entries() {
        push(e.p, e.r, e.h);
        count += 1;
    }
    let out = encode(KIND_CLASS_NUMBERS, count, &records);
    Ok(fs::write(path, out)?)
}

/// Read a class-number table back, re-deriving the row geometry.
pub fn read_class_numbers(path: &Path) -> Result<ClassNumberTable> {
    let payload = read_payload(path, KIND_CLASS_NUMBERS)?;
    let name = path.display();
    let mut records = payload.chunks_exact(16).map(|c| {
        (
            u64::from_le_bytes(c[..8].try_into().unwrap()),
            u32::from_le_bytes(c[8..12].try_into().unwrap()),
            u32::from_le_bytes(c[12..].try_into().unwrap()),
        )
    });
    let (limit, r0, h0) = records.next().ok_or_else(|| {
        Error::integrity(format!("class-number cache {name} has no limit record"))
    })?;
    if r0 != 0 || h0 != 0 {
        return Err(Error::integrity(format!(
            "class-number cache {name} has a malformed limit record"
        )));
    }
    let mut primes: Vec<u64> = Vec::new();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (p, r, h) in records {
        if primes.last() != Some(&p) {
            primes.push(p);
            rows.push(Vec::new());
        }
        let row = rows.last_mut().unwrap();
        if r as usize != row.len() + 1 {
            return Err(Error::integrity(format!(
                "class-number cache {name} breaks trace order at p={p} r={r}"
            )));
        }
        row.push(h);
    }
    ClassNumberTable::from_rows(limit, primes, rows).map_err(|e| {
        Error::integrity(format!("class-number cache {name} fails reconstruction: {e}"))
    })
}

/// Write a trace table: one `(p, a, b, lambda)` record per nonsingular
/// coefficient pair, in `(a, b)` scan order.
pub fn write_traces(path: &Path, table: &TraceTable) -> Result<()> {
    let p = table.p();
    let mut records = Vec::new();
    let mut count = 0u64;
    for a in 0..p {
        for b in 0..p {
            if let Some(lambda) = table.trace(a, b) {
                records.extend_from_slice(&p.to_le_bytes());
                records.extend_from_slice(&(a as i32).to_le_bytes());
                records.extend_from_slice(&(b as i32).to_le_bytes());
                records.extend_from_slice(&(lambda as i32).to_le_bytes());
                count += 1;
            }
        }
    }
    let out = encode(KIND_TRACES, count, &records);
    Ok(fs::write(path, out)?)
}

/// Read a trace table back; unmentioned pairs are singular, and the
/// singular count must come out to exactly `p`.
pub fn read_traces(path: &Path) -> Result<TraceTable> {
    let payload = read_payload(path, KIND_TRACES)?;
    let name = path.display();
    let mut p = None;
    let mut entries = Vec::with_capacity(payload.len() / 20);
    for c in payload.chunks_exact(20) {
        let rec_p = u64::from_le_bytes(c[..8].try_into().unwrap());
        let a = i32::from_le_bytes(c[8..12].try_into().unwrap());
        let b = i32::from_le_bytes(c[12..16].try_into().unwrap());
        let lambda = i32::from_le_bytes(c[16..].try_into().unwrap());
        match p {
            None => p = Some(rec_p),
            Some(q) if q != rec_p => {
                return Err(Error::integrity(format!(
                    "trace cache {name} mixes primes {q} and {rec_p}"
                )));
            }
            _ => {}
        }
        if a < 0 || b < 0 {
            return Err(Error::integrity(format!(
                "trace cache {name} has a negative coefficient record"
            )));
        }
        entries.push((a as u64, b as u64, lambda));
    }
    let p = p.ok_or_else(|| Error::integrity(format!("trace cache {name} is empty")))?;
    TraceTable::from_entries(p, entries)
        .map_err(|e| Error::integrity(format!("trace cache {name} fails reconstruction: {e}")))
}
