//! Versioned binary cache for operator tables.
//!
//! One file per mode. Layout, all integers little endian:
//!
//! ```text
//! magic      b"LVOP"
//! version    u8
//! mode       i32
//! family     u8          0 holomorphic, 1 anti
//! max_index  u32
//! order      u8 flag, then i64 when the flag is 1
//! path       u8          construction tag
//! alpha, beta, pa[1..=max_index], pb[1..=max_index]   polynomials
//!
//! polynomial = u32 term count, terms in increasing monomial order
//! term       = u16 factor count, factors, rational
//! factor     = u8 tag (0 a, 1 abar, 2 lambda, 3 c), u32 index (a, abar only), u32 exponent
//! rational   = u32 length + numerator (two's complement), u32 length + denominator
//! ```
//!
//! Decoding accepts only canonical encodings: sorted factors and terms,
//! reduced fractions with positive denominator, no zero coefficients,
//! minimal integer encodings and no trailing bytes. Anything else is an
//! error, never a partially loaded operator.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::build::{Construction, OperatorTable, TableEntry};
use super::operator::{DiffOperator, Family};
use crate::poly::{CoeffPoly, Generator, Monomial};
use crate::rational::Rational;

pub const MAGIC: &[u8; 4] = b"LVOP";
pub const FORMAT_VERSION: u8 = 1;
pub const FILE_EXTENSION: &str = "lvop";

// bounds on untrusted input
const MAX_INDEX: u32 = 4096;
const MAX_INT_BYTES: u32 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported format version {0}")]
    Version(u8),
    #[error("unexpected end of data")]
    Truncated,
    #[error("{0} trailing bytes")]
    Trailing(usize),
    #[error("invalid data: {0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
    #[error("cache decode: {0}")]
    Decode(#[from] DecodeError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, DecodeError> {
    Err(DecodeError::Invalid(msg.into()))
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u16(&mut self, v: u16) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn i32(&mut self, v: i32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn i64(&mut self, v: i64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn bigint(&mut self, v: &BigInt) {
        let bytes = v.to_signed_bytes_le();
        self.u32(bytes.len() as u32);
        self.0.extend_from_slice(&bytes);
    }
    fn rational(&mut self, r: &Rational) {
        self.bigint(r.numer());
        self.bigint(r.denom());
    }
    fn poly(&mut self, p: &CoeffPoly) {
        self.u32(p.len() as u32);
        for (m, c) in p.terms() {
            self.u16(m.factors().len() as u16);
            for &(g, e) in m.factors() {
                match g {
                    Generator::A(i) => {
                        self.u8(0);
                        self.u32(i);
                    }
                    Generator::Abar(i) => {
                        self.u8(1);
                        self.u32(i);
                    }
                    Generator::Lambda => self.u8(2),
                    Generator::CC => self.u8(3),
                }
                self.u32(e);
            }
            self.rational(c);
        }
    }
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        if self.data.len() - self.pos < n {
            return Err(DecodeError::Truncated);
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }
    fn u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.take(1)?[0])
    }
    fn u16(&mut self) -> Result<u16, DecodeError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u32(&mut self) -> Result<u32, DecodeError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn i32(&mut self) -> Result<i32, DecodeError> {
        Ok(i32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn i64(&mut self) -> Result<i64, DecodeError> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn bigint(&mut self) -> Result<BigInt, DecodeError> {
        let len = self.u32()?;
        if len > MAX_INT_BYTES {
            return invalid("integer too long");
        }
        let bytes = self.take(len as usize)?;
        let v = BigInt::from_signed_bytes_le(bytes);
        if v.to_signed_bytes_le() != bytes {
            return invalid("non-minimal integer encoding");
        }
        Ok(v)
    }
    fn rational(&mut self) -> Result<Rational, DecodeError> {
        let n = self.bigint()?;
        let d = self.bigint()?;
        if !d.is_positive() {
            return invalid("denominator must be positive");
        }
        if n.is_zero() {
            return invalid("zero coefficient");
        }
        if !n.gcd(&d).is_one() {
            return invalid("fraction not reduced");
        }
        Ok(Rational::new_raw(n, d))
    }
    fn generator(&mut self) -> Result<Generator, DecodeError> {
        let tag = self.u8()?;
        Ok(match tag {
            0 | 1 => {
                let i = self.u32()?;
                if i == 0 || i > MAX_INDEX {
                    return invalid("generator index out of range");
                }
                if tag == 0 {
                    Generator::A(i)
                } else {
                    Generator::Abar(i)
                }
            }
            2 => Generator::Lambda,
            3 => Generator::CC,
            t => return invalid(format!("unknown generator tag {t}")),
        })
    }
    fn poly(&mut self) -> Result<CoeffPoly, DecodeError> {
        let count = self.u32()? as usize;
        // every term needs at least 2 + 2 * 5 bytes
        if count > self.remaining() / 12 {
            return Err(DecodeError::Truncated);
        }
        let mut terms: Vec<(Monomial, Rational)> = Vec::with_capacity(count);
        for _ in 0..count {
            let nf = self.u16()? as usize;
            let mut factors: Vec<(Generator, u32)> = Vec::with_capacity(nf.min(64));
            for _ in 0..nf {
                let g = self.generator()?;
                let e = self.u32()?;
                if e == 0 {
                    return invalid("zero exponent");
                }
                if let Some(&(prev, _)) = factors.last() {
                    if prev >= g {
                        return invalid("factors out of order");
                    }
                }
                factors.push((g, e));
            }
            let mono = Monomial::from_pairs(factors);
            let c = self.rational()?;
            if let Some((prev, _)) = terms.last() {
                if *prev >= mono {
                    return invalid("terms out of order");
                }
            }
            terms.push((mono, c));
        }
        Ok(CoeffPoly::from_terms(terms))
    }
}

pub fn encode_entry(entry: &TableEntry) -> Vec<u8> {
    let op = &entry.op;
    let mut w = Writer(Vec::new());
    w.0.extend_from_slice(MAGIC);
    w.u8(FORMAT_VERSION);
    w.i32(op.mode);
    w.u8(match op.family {
        Family::Holomorphic => 0,
        Family::Anti => 1,
    });
    w.u32(op.max_index());
    match entry.series_order {
        Some(o) => {
            w.u8(1);
            w.i64(o);
        }
        None => w.u8(0),
    }
    w.u8(entry.construction.tag());
    w.poly(&op.alpha);
    w.poly(&op.beta);
    for p in op.pa.iter().chain(&op.pb) {
        w.poly(p);
    }
    w.0
}

pub fn decode_entry(data: &[u8]) -> Result<TableEntry, DecodeError> {
    let mut r = Reader { data, pos: 0 };
    if r.take(4).map_err(|_| DecodeError::BadMagic)? != MAGIC {
        return Err(DecodeError::BadMagic);
    }
    let version = r.u8()?;
    if version != FORMAT_VERSION {
        return Err(DecodeError::Version(version));
    }
    let mode = r.i32()?;
    let family = match r.u8()? {
        0 => Family::Holomorphic,
        1 => Family::Anti,
        t => return invalid(format!("unknown family {t}")),
    };
    let max_index = r.u32()?;
    if max_index > MAX_INDEX {
        return invalid("max_index out of range");
    }
    let series_order = match r.u8()? {
        0 => None,
        1 => Some(r.i64()?),
        t => return invalid(format!("bad order flag {t}")),
    };
    let construction = Construction::from_tag(r.u8()?)
        .ok_or(DecodeError::Invalid("unknown construction".into()))?;
    let alpha = r.poly()?;
    let beta = r.poly()?;
    // each polynomial takes at least 4 bytes
    if (2 * max_index as usize) > r.remaining() / 4 {
        return Err(DecodeError::Truncated);
    }
    let mut pa = Vec::with_capacity(max_index as usize);
    for _ in 0..max_index {
        pa.push(r.poly()?);
    }
    let mut pb = Vec::with_capacity(max_index as usize);
    for _ in 0..max_index {
        pb.push(r.poly()?);
    }
    if r.remaining() != 0 {
        return Err(DecodeError::Trailing(r.remaining()));
    }
    let op = DiffOperator {
        mode,
        family,
        alpha,
        beta,
        pa,
        pb,
    };
    let mirror = op.mirror();
    let (op, mirror) = match family {
        Family::Holomorphic => (op, mirror),
        Family::Anti => (mirror, op),
    };
    Ok(TableEntry {
        op,
        mirror,
        construction,
        series_order,
    })
}

pub fn entry_path(dir: &Path, mode: i32) -> PathBuf {
    let name = if mode < 0 {
        format!("mode_m{}.{FILE_EXTENSION}", -(mode as i64))
    } else {
        format!("mode_{mode}.{FILE_EXTENSION}")
    };
    dir.join(name)
}

/// What a cache load found.
#[derive(Debug, Default)]
pub struct LoadReport {
    pub loaded: Vec<i32>,
    /// Files written by another format version; left alone.
    pub stale: Vec<PathBuf>,
    /// Files that failed to decode, with the reason.
    pub corrupt: Vec<(PathBuf, String)>,
}

pub fn cache_files(dir: &Path) -> Result<Vec<PathBuf>, CacheError> {
    let mut out = Vec::new();
    if !dir.exists() {
        return Ok(out);
    }
    for e in fs::read_dir(dir)? {
        let p = e?.path();
        if p.extension().and_then(|s| s.to_str()) == Some(FILE_EXTENSION) {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

/// Loads every decodable entry into `table`.
pub fn load(dir: &Path, table: &mut OperatorTable) -> Result<LoadReport, CacheError> {
    let mut report = LoadReport::default();
    for path in cache_files(dir)? {
        let data = fs::read(&path)?;
        match decode_entry(&data) {
            Ok(entry) => {
                report.loaded.push(entry.op.mode);
                table.insert(entry);
            }
            Err(DecodeError::Version(_)) => report.stale.push(path),
            Err(e) => report.corrupt.push((path, e.to_string())),
        }
    }
    report.loaded.sort();
    Ok(report)
}

pub fn save(dir: &Path, table: &OperatorTable) -> Result<usize, CacheError> {
    fs::create_dir_all(dir)?;
    let mut n = 0;
    for (&mode, entry) in table.entries() {
        fs::write(entry_path(dir, mode), encode_entry(entry))?;
        n += 1;
    }
    Ok(n)
}

/// Removes the cache files; other files in the directory are kept.
pub fn clear(dir: &Path) -> Result<usize, CacheError> {
    let files = cache_files(dir)?;
    for p in &files {
        fs::remove_file(p)?;
    }
    Ok(files.len())
}
