//! Persistent cache for expensive tables.
//!
//! File layout (all integers little-endian):
//!
//! ```text
//! magic   9 bytes  "CYCLOLAB1"
//! kind    1 byte   1 = sieve, 2 = cn_table, 3 = cyclotomic_coeffs
//! params  3 × u64  kind-specific (unused slots zero)
//! count   u64      number of integers in the payload
//! payload count ×  [sign u8][len u32][len magnitude bytes, little-endian]
//! crc     u32      CRC-32 (IEEE) over the payload bytes only
//! ```
//!
//! A checksum failure or truncation is a hard `CacheInvalid` error; a
//! kind/parameter mismatch is a clean miss (`Ok(None)`) so stale files are
//! never silently reused. Writes go through a temp file and rename.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rug::integer::Order;
use rug::Integer;

use crate::arith::SieveTables;
use crate::cyclotomic::IntPoly;
use crate::error::{Error, Result};
use crate::ramanujan::CnTable;

pub const CACHE_MAGIC: &[u8; 9] = b"CYCLOLAB1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayloadKind {
    Sieve = 1,
    CnTable = 2,
    CyclotomicCoeffs = 3,
}

impl PayloadKind {
    fn from_byte(b: u8) -> Option<Self> {
        match b {
            1 => Some(PayloadKind::Sieve),
            2 => Some(PayloadKind::CnTable),
            3 => Some(PayloadKind::CyclotomicCoeffs),
            _ => None,
        }
    }
}

pub enum CachePayload {
    Sieve(SieveTables),
    CnTable(CnTable),
    CyclotomicCoeffs { n: u64, poly: IntPoly },
}

impl CachePayload {
    fn kind(&self) -> PayloadKind {
        match self {
            CachePayload::Sieve(_) => PayloadKind::Sieve,
            CachePayload::CnTable(_) => PayloadKind::CnTable,
            CachePayload::CyclotomicCoeffs { .. } => PayloadKind::CyclotomicCoeffs,
        }
    }

    fn params(&self) -> [u64; 3] {
        match self {
            CachePayload::Sieve(s) => [s.limit, 0, 0],
            CachePayload::CnTable(t) => [t.n_max, t.m_max, 0],
            CachePayload::CyclotomicCoeffs { n, .. } => [*n, 0, 0],
        }
    }
}

/// Table-driven CRC-32 (IEEE 802.3, reflected 0xEDB88320).
pub fn crc32(data: &[u8]) -> u32 {
    static TABLE: std::sync::OnceLock<[u32; 256]> = std::sync::OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = [0u32; 256];
        for (i, slot) in t.iter_mut().enumerate() {
            let mut c = i as u32;
            for _ in 0..8 {
                c = if c & 1 == 1 { 0xEDB8_8320 ^ (c >> 1) } else { c >> 1 };
            }
            *slot = c;
        }
        t
    });
    let mut crc = 0xFFFF_FFFFu32;
    for &b in data {
        crc = table[((crc ^ b as u32) & 0xFF) as usize] ^ (crc >> 8);
    }
    crc ^ 0xFFFF_FFFF
}

fn push_int_bytes(buf: &mut Vec<u8>, negative: bool, magnitude_le: &[u8]) {
    buf.push(negative as u8);
    buf.extend_from_slice(&(magnitude_le.len() as u32).to_le_bytes());
    buf.extend_from_slice(magnitude_le);
}

fn push_i64(buf: &mut Vec<u8>, v: i64) {
    let mag = v.unsigned_abs();
    let bytes = mag.to_le_bytes();
    let len = (8 - mag.leading_zeros() as usize / 8).min(8);
    push_int_bytes(buf, v < 0, &bytes[..len]);
}

fn push_u64(buf: &mut Vec<u8>, v: u64) {
    let bytes = v.to_le_bytes();
    let len = (8 - v.leading_zeros() as usize / 8).min(8);
    push_int_bytes(buf, false, &bytes[..len]);
}

fn push_integer(buf: &mut Vec<u8>, v: &Integer) {
    let digits = v.to_digits::<u8>(Order::Lsf);
    push_int_bytes(buf, *v < 0, &digits);
}

struct IntReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> IntReader<'a> {
    fn next_raw(&mut self) -> Result<(bool, &'a [u8])> {
        let fail = || Error::CacheInvalid {
            reason: "payload truncated".into(),
        };
        if self.pos + 5 > self.data.len() {
            return Err(fail());
        }
        let negative = self.data[self.pos] != 0;
        let len = u32::from_le_bytes(self.data[self.pos + 1..self.pos + 5].try_into().unwrap())
            as usize;
        self.pos += 5;
        if self.pos + len > self.data.len() {
            return Err(fail());
        }
        let mag = &self.data[self.pos..self.pos + len];
        self.pos += len;
        Ok((negative, mag))
    }

    fn next_i64(&mut self) -> Result<i64> {
        let (neg, mag) = self.next_raw()?;
        if mag.len() > 8 {
            return Err(Error::CacheInvalid {
                reason: "integer wider than 64 bits where i64 expected".into(),
            });
        }
        let mut bytes = [0u8; 8];
        bytes[..mag.len()].copy_from_slice(mag);
        let v = u64::from_le_bytes(bytes) as i64;
        Ok(if neg { -v } else { v })
    }

    fn next_u64(&mut self) -> Result<u64> {
        let v = self.next_i64()?;
        u64::try_from(v).map_err(|_| Error::CacheInvalid {
            reason: "negative value where unsigned expected".into(),
        })
    }

    fn next_integer(&mut self) -> Result<Integer> {
        let (neg, mag) = self.next_raw()?;
        let mut v = Integer::from_digits(mag, Order::Lsf);
        if neg {
            v = -v;
        }
        Ok(v)
    }
}

fn encode(payload: &CachePayload) -> (Vec<u8>, u64) {
    let mut buf = Vec::new();
    let count;
    match payload {
        CachePayload::Sieve(s) => {
            let (mu, phi, sigma, spf) = s.raw_parts();
            count = 4 * s.limit;
            for n in 1..=s.limit as usize {
                push_i64(&mut buf, mu[n] as i64);
            }
            for n in 1..=s.limit as usize {
                push_u64(&mut buf, phi[n]);
            }
            for n in 1..=s.limit as usize {
                push_u64(&mut buf, sigma[n]);
            }
            for n in 1..=s.limit as usize {
                push_u64(&mut buf, spf[n] as u64);
            }
        }
        CachePayload::CnTable(t) => {
            let values = t.values();
            count = values.len() as u64;
            for &v in values {
                push_i64(&mut buf, v);
            }
        }
        CachePayload::CyclotomicCoeffs { poly, .. } => {
            count = poly.coeffs().len() as u64;
            for c in poly.coeffs() {
                push_integer(&mut buf, c);
            }
        }
    }
    (buf, count)
}

/// Serializes and atomically writes one payload.
pub fn save_to_path(path: &Path, payload: &CachePayload) -> Result<()> {
    let (body, count) = encode(payload);
    let mut file = Vec::with_capacity(body.len() + 64);
    file.extend_from_slice(CACHE_MAGIC);
    file.push(payload.kind() as u8);
    for p in payload.params() {
        file.extend_from_slice(&p.to_le_bytes());
    }
    file.extend_from_slice(&count.to_le_bytes());
    file.extend_from_slice(&body);
    file.extend_from_slice(&crc32(&body).to_le_bytes());

    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))
        .map_err(|e| Error::io(path, e))?;
    tmp.write_all(&file).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

struct Header {
    kind: PayloadKind,
    params: [u64; 3],
    count: u64,
    body_start: usize,
}

fn read_header(data: &[u8], path: &Path) -> Result<Header> {
    let invalid = |reason: &str| Error::CacheInvalid {
        reason: format!("{}: {reason}", path.display()),
    };
    if data.len() < 9 + 1 + 24 + 8 + 4 {
        return Err(invalid("file shorter than header"));
    }
    if &data[..9] != CACHE_MAGIC {
        return Err(invalid("bad magic"));
    }
    let kind = PayloadKind::from_byte(data[9]).ok_or_else(|| invalid("unknown payload kind"))?;
    let mut params = [0u64; 3];
    for (i, p) in params.iter_mut().enumerate() {
        *p = u64::from_le_bytes(data[10 + 8 * i..18 + 8 * i].try_into().unwrap());
    }
    let count = u64::from_le_bytes(data[34..42].try_into().unwrap());
    Ok(Header {
        kind,
        params,
        count,
        body_start: 42,
    })
}

/// Loads and fully validates a cache file.
pub fn load_from_path(path: &Path) -> Result<CachePayload> {
    let data = fs::read(path).map_err(|e| Error::io(path, e))?;
    let header = read_header(&data, path)?;
    let invalid = |reason: &str| Error::CacheInvalid {
        reason: format!("{}: {reason}", path.display()),
    };
    if data.len() < header.body_start + 4 {
        return Err(invalid("file shorter than checksum"));
    }
    let body = &data[header.body_start..data.len() - 4];
    let stored_crc = u32::from_le_bytes(data[data.len() - 4..].try_into().unwrap());
    if crc32(body) != stored_crc {
        return Err(invalid("checksum mismatch"));
    }
    let mut reader = IntReader { data: body, pos: 0 };
    let payload = match header.kind {
        PayloadKind::Sieve => {
            let limit = header.params[0];
            if header.count != 4 * limit {
                return Err(invalid("count does not match sieve limit"));
            }
            let n = limit as usize + 1;
            let mut mu = vec![0i8; n];
            let mut phi = vec![0u64; n];
            let mut sigma = vec![0u64; n];
            let mut spf = vec![0u32; n];
            for v in mu.iter_mut().skip(1) {
                *v = i8::try_from(reader.next_i64()?)
                    .map_err(|_| invalid("mu out of i8 range"))?;
            }
            for v in phi.iter_mut().skip(1) {
                *v = reader.next_u64()?;
            }
            for v in sigma.iter_mut().skip(1) {
                *v = reader.next_u64()?;
            }
            for v in spf.iter_mut().skip(1) {
                *v = u32::try_from(reader.next_u64()?)
                    .map_err(|_| invalid("spf out of u32 range"))?;
            }
            CachePayload::Sieve(SieveTables::from_raw_parts(limit, mu, phi, sigma, spf))
        }
        PayloadKind::CnTable => {
            let (n_max, m_max) = (header.params[0], header.params[1]);
            if header.count != n_max * m_max {
                return Err(invalid("count does not match table dimensions"));
            }
            let mut values = Vec::with_capacity(header.count as usize);
            for _ in 0..header.count {
                values.push(reader.next_i64()?);
            }
            CachePayload::CnTable(CnTable::from_values(n_max, m_max, values))
        }
        PayloadKind::CyclotomicCoeffs => {
            let n = header.params[0];
            let mut coeffs = Vec::with_capacity(header.count as usize);
            for _ in 0..header.count {
                coeffs.push(reader.next_integer()?);
            }
            CachePayload::CyclotomicCoeffs {
                n,
                poly: IntPoly::from_coeffs(coeffs),
            }
        }
    };
    if reader.pos != body.len() {
        return Err(invalid("trailing bytes after payload"));
    }
    Ok(payload)
}

/// How a cached-table request was satisfied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheStatus {
    /// Loaded from a valid cache file.
    Hit,
    /// No usable cache (absent or parameter mismatch); value was computed.
    Miss,
    /// A cache file existed but failed validation; value was recomputed
    /// and the file rewritten. Carries the validation error text.
    Invalid(String),
}

fn sieve_cache_file(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("sieve_{limit}.cyclolab"))
}

/// Loads a sieve from `dir` if a valid cache for exactly this limit exists,
/// otherwise builds it (and writes the cache back when a directory is given).
pub fn sieve_cached(limit: u64, dir: Option<&Path>) -> Result<(SieveTables, CacheStatus)> {
    let Some(dir) = dir else {
        return Ok((SieveTables::build(limit)?, CacheStatus::Miss));
    };
    let path = sieve_cache_file(dir, limit);
    let mut status = CacheStatus::Miss;
    if path.exists() {
        match load_from_path(&path) {
            Ok(CachePayload::Sieve(s)) if s.limit == limit => {
                return Ok((s, CacheStatus::Hit));
            }
            Ok(_) => status = CacheStatus::Miss,
            Err(Error::CacheInvalid { reason }) => status = CacheStatus::Invalid(reason),
            Err(e) => return Err(e),
        }
    }
    let sieve = SieveTables::build(limit)?;
    save_to_path(&path, &CachePayload::Sieve(sieve))?;
    // re-load instead of moving the freshly built tables so the cache file
    // itself is exercised on the write path
    match load_from_path(&path)? {
        CachePayload::Sieve(s) => Ok((s, status)),
        _ => Err(Error::CacheInvalid {
            reason: "rewritten sieve cache has wrong kind".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic;

    #[test]
    fn crc32_known_vector() {
        assert_eq!(crc32(b"123456789"), 0xCBF4_3926);
        assert_eq!(crc32(b""), 0);
    }

    #[test]
    fn sieve_roundtrip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sieve.cyclolab");
        let sieve = SieveTables::build(1000).unwrap();
        save_to_path(&path, &CachePayload::Sieve(sieve)).unwrap();
        let CachePayload::Sieve(back) = load_from_path(&path).unwrap() else {
            panic!("wrong kind");
        };
        let reference = SieveTables::build(1000).unwrap();
        assert_eq!(back.limit, 1000);
        for n in 1..=1000u64 {
            assert_eq!(back.mu(n), reference.mu(n));
            assert_eq!(back.phi(n), reference.phi(n));
            assert_eq!(back.sigma(n), reference.sigma(n));
            assert_eq!(back.spf(n), reference.spf(n));
        }
    }

    #[test]
    fn cn_table_roundtrip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cn.cyclolab");
        let table = CnTable::build(50, 50).unwrap();
        save_to_path(&path, &CachePayload::CnTable(table)).unwrap();
        let CachePayload::CnTable(back) = load_from_path(&path).unwrap() else {
            panic!("wrong kind");
        };
        let reference = CnTable::build(50, 50).unwrap();
        for n in 1..=50 {
            for m in 1..=50 {
                assert_eq!(back.get(n, m), reference.get(n, m));
            }
        }
    }

    #[test]
    fn cyclotomic_roundtrip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("phi105.cyclolab");
        let poly = cyclotomic::cyclotomic(105).unwrap();
        save_to_path(
            &path,
            &CachePayload::CyclotomicCoeffs {
                n: 105,
                poly: poly.clone(),
            },
        )
        .unwrap();
        let CachePayload::CyclotomicCoeffs { n, poly: back } = load_from_path(&path).unwrap()
        else {
            panic!("wrong kind");
        };
        assert_eq!(n, 105);
        assert_eq!(back, poly);
    }

    #[test]
    fn flipped_byte_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sieve.cyclolab");
        let sieve = SieveTables::build(64).unwrap();
        save_to_path(&path, &CachePayload::Sieve(sieve)).unwrap();
        let mut bytes = fs::read(&path).unwrap();
        let mid = 42 + (bytes.len() - 42 - 4) / 2;
        bytes[mid] ^= 0x55;
        fs::write(&path, &bytes).unwrap();
        match load_from_path(&path) {
            Err(Error::CacheInvalid { reason }) => {
                assert!(reason.contains("checksum"), "reason: {reason}")
            }
            other => panic!("expected CacheInvalid, got {other:?}", other = other.is_ok()),
        }
    }

    #[test]
    fn sieve_cached_hits_and_recovers() {
        let dir = tempfile::tempdir().unwrap();
        let (first, status) = sieve_cached(200, Some(dir.path())).unwrap();
        assert_eq!(status, CacheStatus::Miss);
        assert_eq!(first.limit, 200);
        let (_, status) = sieve_cached(200, Some(dir.path())).unwrap();
        assert_eq!(status, CacheStatus::Hit);
        // different limit: separate file, clean miss
        let (_, status) = sieve_cached(300, Some(dir.path())).unwrap();
        assert_eq!(status, CacheStatus::Miss);
        // corrupt the 200 file and watch the recompute path kick in
        let path = sieve_cache_file(dir.path(), 200);
        let mut bytes = fs::read(&path).unwrap();
        let len = bytes.len();
        bytes[len - 10] ^= 0xFF;
        fs::write(&path, &bytes).unwrap();
        let (again, status) = sieve_cached(200, Some(dir.path())).unwrap();
        assert!(matches!(status, CacheStatus::Invalid(_)));
        assert_eq!(again.limit, 200);
        let (_, status) = sieve_cached(200, Some(dir.path())).unwrap();
        assert_eq!(status, CacheStatus::Hit);
    }
}
