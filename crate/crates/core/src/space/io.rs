//! Versioned binary space files.
//!
//! Layout (little endian): magic `HYPSPACE`, `u32` version, `u8` scalar
//! width, `u8` weighting, `u8` entropy normalisation flag, context type
//! string, vocabulary block, context-index block, count CSR, weighted CSR,
//! marginals, then a SHA-256 digest of everything before it.

use std::fs;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::corpus::{ContextSpec, Vocabulary};
use crate::Scalar;

use super::matrix::{ContextIndex, CooccurrenceMatrix};
use super::weighted::{Weighting, WeightedSpace};
use super::SpaceError;

pub const MAGIC: &[u8; 8] = b"HYPSPACE";
pub const FORMAT_VERSION: u32 = 1;
const DIGEST_LEN: usize = 32;

struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }
    fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn str(&mut self, s: &str) {
        self.u32(s.len() as u32);
        self.buf.extend_from_slice(s.as_bytes());
    }
    fn usizes(&mut self, v: &[usize]) {
        self.u64(v.len() as u64);
        v.iter().for_each(|&x| self.u64(x as u64));
    }
    fn u32s(&mut self, v: &[u32]) {
        self.u64(v.len() as u64);
        v.iter().for_each(|&x| self.u32(x));
    }
    fn u64s(&mut self, v: &[u64]) {
        self.u64(v.len() as u64);
        v.iter().for_each(|&x| self.u64(x));
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

fn corrupt(msg: impl Into<String>) -> SpaceError {
    SpaceError::CorruptSpace(msg.into())
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], SpaceError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| corrupt("unexpected end of data"))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8, SpaceError> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32, SpaceError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64, SpaceError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn len(&mut self, elem: usize) -> Result<usize, SpaceError> {
        let n = self.u64()? as usize;
        if n.saturating_mul(elem) > self.buf.len() - self.pos {
            return Err(corrupt("length field exceeds file size"));
        }
        Ok(n)
    }
    fn str(&mut self) -> Result<String, SpaceError> {
        let n = self.u32()? as usize;
        let bytes = self.take(n)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| corrupt("invalid utf-8 string"))
    }
    fn usizes(&mut self) -> Result<Vec<usize>, SpaceError> {
        let n = self.len(8)?;
        (0..n).map(|_| self.u64().map(|v| v as usize)).collect()
    }
    fn u32s(&mut self) -> Result<Vec<u32>, SpaceError> {
        let n = self.len(4)?;
        (0..n).map(|_| self.u32()).collect()
    }
    fn u64s(&mut self) -> Result<Vec<u64>, SpaceError> {
        let n = self.len(8)?;
        (0..n).map(|_| self.u64()).collect()
    }
    fn scalars<F: Scalar>(&mut self) -> Result<Vec<F>, SpaceError> {
        let n = self.len(F::WIDTH)?;
        (0..n).map(|_| self.take(F::WIDTH).map(F::read_le)).collect()
    }
}

pub fn encode<F: Scalar>(space: &WeightedSpace<F>) -> Vec<u8> {
    let mut w = Writer { buf: Vec::new() };
    w.buf.extend_from_slice(MAGIC);
    w.u32(FORMAT_VERSION);
    w.u8(F::WIDTH as u8);
    w.u8(space.weighting.tag());
    w.u8(space.normalize_entropy as u8);
    w.str(&space.context_spec.to_string());

    w.u64(space.vocab.len() as u64);
    for (_, key, freq) in space.vocab.iter() {
        w.str(key);
        w.u64(freq);
    }
    let ctx = space.base.contexts();
    w.u64(ctx.len() as u64);
    ctx.names().iter().for_each(|n| w.str(n));

    let m = &space.base;
    w.usizes(&m.row_ptr);
    w.u32s(&m.cols);
    w.u64s(&m.counts);

    w.usizes(&space.row_ptr);
    w.u32s(&space.cols);
    w.u64(space.values.len() as u64);
    space.values.iter().for_each(|v| v.write_le(&mut w.buf));

    w.u64s(&m.row_sums);
    w.u64s(&m.col_sums);
    w.u64(m.total);

    let digest = Sha256::digest(&w.buf);
    w.buf.extend_from_slice(&digest);
    w.buf
}

fn check_csr(row_ptr: &[usize], cols: &[u32], n_rows: usize, n_cols: usize) -> Result<(), SpaceError> {
    if row_ptr.len() != n_rows + 1 || row_ptr[0] != 0 || row_ptr[n_rows] != cols.len() {
        return Err(corrupt("row pointer shape mismatch"));
    }
    for r in 0..n_rows {
        let (a, b) = (row_ptr[r], row_ptr[r + 1]);
        if a > b || b > cols.len() {
            return Err(corrupt("row pointers not monotone"));
        }
        let row = &cols[a..b];
        if row.windows(2).any(|p| p[0] >= p[1]) || row.iter().any(|&c| c as usize >= n_cols) {
            return Err(corrupt("column ids out of order or range"));
        }
    }
    Ok(())
}

pub fn decode<F: Scalar>(bytes: &[u8]) -> Result<WeightedSpace<F>, SpaceError> {
    if bytes.len() < MAGIC.len() + 4 || &bytes[..MAGIC.len()] != MAGIC {
        return Err(corrupt("bad magic bytes"));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(corrupt(format!(
            "unsupported format version {version} (this build reads version {FORMAT_VERSION})"
        )));
    }
    if bytes.len() < 12 + DIGEST_LEN {
        return Err(corrupt("unexpected end of data"));
    }
    let (body, digest) = bytes.split_at(bytes.len() - DIGEST_LEN);
    if Sha256::digest(body).as_slice() != digest {
        return Err(corrupt("checksum mismatch"));
    }

    let mut r = Reader { buf: body, pos: 12 };
    let width = r.u8()? as usize;
    if width != F::WIDTH {
        return Err(corrupt(format!("file stores {width}-byte scalars, expected {}", F::WIDTH)));
    }
    let weighting = Weighting::from_tag(r.u8()?).ok_or_else(|| corrupt("unknown weighting tag"))?;
    let normalize_entropy = match r.u8()? {
        0 => false,
        1 => true,
        _ => return Err(corrupt("bad entropy flag")),
    };
    let context_spec: ContextSpec = r.str()?.parse().map_err(|e| corrupt(format!("{e}")))?;

    let n_vocab = r.len(12)?;
    let mut entries = Vec::with_capacity(n_vocab);
    for _ in 0..n_vocab {
        entries.push((r.str()?, r.u64()?));
    }
    if entries.windows(2).any(|p| p[0].0 >= p[1].0) {
        return Err(corrupt("vocabulary not in id order"));
    }
    let vocab = Vocabulary::from_entries(entries);

    let n_ctx = r.len(4)?;
    let names: Vec<String> = (0..n_ctx).map(|_| r.str()).collect::<Result<_, _>>()?;
    let mut seen = std::collections::HashSet::with_capacity(names.len());
    if !names.iter().all(|n| seen.insert(n.as_str())) {
        return Err(corrupt("duplicate context names"));
    }
    let contexts = ContextIndex::from_names(names);

    let row_ptr = r.usizes()?;
    let cols = r.u32s()?;
    let counts = r.u64s()?;
    check_csr(&row_ptr, &cols, vocab.len(), n_ctx)?;
    if counts.len() != cols.len() || counts.contains(&0) {
        return Err(corrupt("count block inconsistent"));
    }
    let w_row_ptr = r.usizes()?;
    let w_cols = r.u32s()?;
    let values = r.scalars::<F>()?;
    check_csr(&w_row_ptr, &w_cols, vocab.len(), n_ctx)?;
    if values.len() != w_cols.len() {
        return Err(corrupt("weighted block inconsistent"));
    }
    let row_sums = r.u64s()?;
    let col_sums = r.u64s()?;
    let total = r.u64()?;
    if r.pos != body.len() {
        return Err(corrupt("trailing bytes"));
    }

    let mut base = CooccurrenceMatrix {
        row_ptr,
        cols,
        counts,
        contexts,
        ..Default::default()
    };
    base.recompute_marginals();
    if base.row_sums != row_sums || base.col_sums != col_sums || base.total != total {
        return Err(corrupt("marginals do not match counts"));
    }
    Ok(WeightedSpace::assemble(
        vocab,
        context_spec,
        base,
        weighting,
        normalize_entropy,
        w_row_ptr,
        w_cols,
        values,
    ))
}

pub fn save_space<F: Scalar>(space: &WeightedSpace<F>, path: impl AsRef<Path>) -> Result<(), SpaceError> {
    let mut f = fs::File::create(path)?;
    f.write_all(&encode(space))?;
    f.sync_all()?;
    Ok(())
}

pub fn load_space<F: Scalar>(path: impl AsRef<Path>) -> Result<WeightedSpace<F>, SpaceError> {
    decode(&fs::read(path)?)
}
