//! Versioned binary file formats for the on-disk caches: canonical
//! enumerations of totally isotropic subspaces and pair-classification
//! tables. Strict readers surface [`CodecError`]; the cache fast paths
//! treat any defect as a miss and recompute.
//!
//! Enumeration files (`*.enumA.bin`), version tag `PSENUM01`:
//! magic(8) · name_len(u16) · name · n(u16) · a(u16) · q(u16) · count(u64) ·
//! count·a·n row bytes. Pair files (`*.pairsAxB.bin`), tag `PSPAIR01`:
//! magic(8) · name_len(u16) · name · a(u16) · b(u16) · q(u16) · na(u64) ·
//! nb(u64) · na·nb packed bytes, one `(s << 4) | k` per ordered pair.
//! All integers little-endian.

use crate::geometry::{PolarSpace, Subspace};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

const ENUM_MAGIC: &[u8; 8] = b"PSENUM01";
const PAIR_MAGIC: &[u8; 8] = b"PSPAIR01";

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("file format version {found:?} is not {expected:?}")]
    VersionMismatch { found: String, expected: String },
    #[error("malformed file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Space name as used in cache file names: `Q+:5:3` → `Qp_5_3`.
pub fn mangled_name(space_name: &str) -> String {
    space_name.replace("Q+", "Qp").replace("Q-", "Qm").replace(':', "_")
}

pub fn enumeration_path(dir: &Path, space: &PolarSpace, a: u16) -> PathBuf {
    dir.join(format!("{}.enum{}.bin", mangled_name(&space.name()), a))
}

pub fn pair_path(dir: &Path, space: &PolarSpace, a: u16, b: u16) -> PathBuf {
    dir.join(format!("{}.pairs{}x{}.bin", mangled_name(&space.name()), a, b))
}

fn push_u16(buf: &mut Vec<u8>, v: u16) {
    buf.extend_from_slice(&v.to_le_bytes());
}

fn push_u64(buf: &mut Vec<u8>, v: u64) {
    buf.extend_from_slice(&v.to_le_bytes());
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8], CodecError> {
        if self.pos + len > self.data.len() {
            return Err(CodecError::Malformed("truncated file".into()));
        }
        let s = &self.data[self.pos..self.pos + len];
        self.pos += len;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16, CodecError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, CodecError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn finish(&self) -> Result<(), CodecError> {
        if self.pos == self.data.len() {
            Ok(())
        } else {
            Err(CodecError::Malformed("trailing bytes after payload".into()))
        }
    }
}

fn check_magic(cur: &mut Cursor, expected: &[u8; 8]) -> Result<(), CodecError> {
    let found = cur.take(8)?;
    if found == expected {
        return Ok(());
    }
    if found[..6] == expected[..6] {
        return Err(CodecError::VersionMismatch {
            found: String::from_utf8_lossy(found).into_owned(),
            expected: String::from_utf8_lossy(expected).into_owned(),
        });
    }
    Err(CodecError::Malformed("unrecognized magic bytes".into()))
}

fn read_name(cur: &mut Cursor) -> Result<String, CodecError> {
    let len = cur.u16()? as usize;
    let bytes = cur.take(len)?;
    String::from_utf8(bytes.to_vec()).map_err(|_| CodecError::Malformed("name is not UTF-8".into()))
}

/// Serialize an enumeration level.
pub fn encode_enumeration(space: &PolarSpace, a: u16, list: &[Subspace]) -> Vec<u8> {
    let name = space.name();
    let n = space.ambient();
    let mut buf = Vec::with_capacity(32 + name.len() + list.len() * (a as usize) * (n as usize));
    buf.extend_from_slice(ENUM_MAGIC);
    push_u16(&mut buf, name.len() as u16);
    buf.extend_from_slice(name.as_bytes());
    push_u16(&mut buf, n);
    push_u16(&mut buf, a);
    push_u16(&mut buf, space.field().order());
    push_u64(&mut buf, list.len() as u64);
    for s in list {
        buf.extend_from_slice(s.rows_flat());
    }
    buf
}

/// Strict decode: every header field must match the space, rows must be
/// canonical (reduced row-echelon form), and the list strictly sorted.
pub fn decode_enumeration(space: &PolarSpace, a: u16, data: &[u8]) -> Result<Vec<Subspace>, CodecError> {
    let mut cur = Cursor { data, pos: 0 };
    check_magic(&mut cur, ENUM_MAGIC)?;
    let name = read_name(&mut cur)?;
    if name != space.name() {
        return Err(CodecError::Malformed(format!(
            "file is for space {name}, expected {}",
            space.name()
        )));
    }
    let n = cur.u16()?;
    let file_a = cur.u16()?;
    let q = cur.u16()?;
    if n != space.ambient() || file_a != a || q != space.field().order() {
        return Err(CodecError::Malformed("header dimensions do not match the space".into()));
    }
    let count = cur.u64()? as usize;
    let row_bytes = a as usize * n as usize;
    let mut list = Vec::with_capacity(count);
    for _ in 0..count {
        let flat = cur.take(row_bytes)?;
        if flat.iter().any(|&x| x as u16 >= q) {
            return Err(CodecError::Malformed("coordinate outside the field".into()));
        }
        let sub = Subspace::from_rows(space.field(), n, flat);
        if sub.dim() != a || sub.rows_flat() != flat {
            return Err(CodecError::Malformed("row block is not a canonical basis".into()));
        }
        if let Some(prev) = list.last() {
            if prev >= &sub {
                return Err(CodecError::Malformed("entries are not strictly sorted".into()));
            }
        }
        list.push(sub);
    }
    cur.finish()?;
    Ok(list)
}

/// Serialize a pair-classification table: `table[i·na + j]` holds the packed
/// class byte of (b-space i, a-space j).
pub fn encode_pair_table(
    space: &PolarSpace,
    a: u16,
    b: u16,
    na: usize,
    nb: usize,
    table: &[u8],
) -> Vec<u8> {
    let name = space.name();
    assert_eq!(table.len(), na * nb);
    let mut buf = Vec::with_capacity(40 + name.len() + table.len());
    buf.extend_from_slice(PAIR_MAGIC);
    push_u16(&mut buf, name.len() as u16);
    buf.extend_from_slice(name.as_bytes());
    push_u16(&mut buf, a);
    push_u16(&mut buf, b);
    push_u16(&mut buf, space.field().order());
    push_u64(&mut buf, na as u64);
    push_u64(&mut buf, nb as u64);
    buf.extend_from_slice(table);
    buf
}

pub fn decode_pair_table(
    space: &PolarSpace,
    a: u16,
    b: u16,
    na: usize,
    nb: usize,
    data: &[u8],
) -> Result<Vec<u8>, CodecError> {
    let mut cur = Cursor { data, pos: 0 };
    check_magic(&mut cur, PAIR_MAGIC)?;
    let name = read_name(&mut cur)?;
    if name != space.name() {
        return Err(CodecError::Malformed(format!(
            "file is for space {name}, expected {}",
            space.name()
        )));
    }
    let fa = cur.u16()?;
    let fb = cur.u16()?;
    let q = cur.u16()?;
    let fna = cur.u64()? as usize;
    let fnb = cur.u64()? as usize;
    if fa != a || fb != b || q != space.field().order() || fna != na || fnb != nb {
        return Err(CodecError::Malformed("header does not match the requested table".into()));
    }
    let table = cur.take(na * nb)?.to_vec();
    cur.finish()?;
    let d = space.rank() as u8;
    for &byte in &table {
        let (s, k) = (byte >> 4, byte & 0x0f);
        if s > d || k > d {
            return Err(CodecError::Malformed("pair class out of range".into()));
        }
    }
    Ok(table)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

/// Cache fast path: any defect is a miss.
pub fn load_enumeration(dir: &Path, space: &PolarSpace, a: u16) -> Option<Vec<Subspace>> {
    let path = enumeration_path(dir, space, a);
    let mut data = Vec::new();
    std::fs::File::open(path).ok()?.read_to_end(&mut data).ok()?;
    decode_enumeration(space, a, &data).ok()
}

/// Cache write, best effort: failures leave the in-memory result intact.
pub fn store_enumeration(dir: &Path, space: &PolarSpace, a: u16, list: &[Subspace]) {
    let bytes = encode_enumeration(space, a, list);
    let _ = write_atomic(&enumeration_path(dir, space, a), &bytes);
}

pub fn load_pair_table(dir: &Path, space: &PolarSpace, a: u16, b: u16, na: usize, nb: usize) -> Option<Vec<u8>> {
    let path = pair_path(dir, space, a, b);
    let mut data = Vec::new();
    std::fs::File::open(path).ok()?.read_to_end(&mut data).ok()?;
    decode_pair_table(space, a, b, na, nb, &data).ok()
}

pub fn store_pair_table(dir: &Path, space: &PolarSpace, a: u16, b: u16, na: usize, nb: usize, table: &[u8]) {
    let bytes = encode_pair_table(space, a, b, na, nb, table);
    let _ = write_atomic(&pair_path(dir, space, a, b), &bytes);
}

/// The directory the caches live in: `POLARSPACE_CACHE` if set, otherwise
/// `.polarspace-cache` under the working directory.
pub fn default_cache_dir() -> PathBuf {
    match std::env::var_os("POLARSPACE_CACHE") {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from(".polarspace-cache"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::parse_space;

    #[test]
    fn enumeration_roundtrip_and_validation() {
        let space = parse_space("Q:4:2").unwrap();
        let points = space.enumerate_isotropic(1).unwrap().to_vec();
        let bytes = encode_enumeration(&space, 1, &points);
        let back = decode_enumeration(&space, 1, &bytes).unwrap();
        assert_eq!(back, points);

        // Version bump is a VersionMismatch, garbage is Malformed.
        let mut wrong_version = bytes.clone();
        wrong_version[7] = b'9';
        assert!(matches!(
            decode_enumeration(&space, 1, &wrong_version),
            Err(CodecError::VersionMismatch { .. })
        ));
        assert!(matches!(
            decode_enumeration(&space, 1, b"garbage-bytes"),
            Err(CodecError::Malformed(_))
        ));
        let mut truncated = bytes.clone();
        truncated.truncate(bytes.len() - 3);
        assert!(matches!(decode_enumeration(&space, 1, &truncated), Err(CodecError::Malformed(_))));

        // A different space must reject the file.
        let other = parse_space("W:3:2").unwrap();
        assert!(decode_enumeration(&other, 1, &bytes).is_err());
    }

    #[test]
    fn pair_table_roundtrip() {
        let space = parse_space("Q:4:2").unwrap();
        let table = vec![0x12u8, 0x02, 0x11, 0x22, 0x01, 0x12];
        let bytes = encode_pair_table(&space, 1, 2, 3, 2, &table);
        let back = decode_pair_table(&space, 1, 2, 3, 2, &bytes).unwrap();
        assert_eq!(back, table);
        assert!(decode_pair_table(&space, 2, 2, 3, 2, &bytes).is_err());
        // Class byte outside the rank range.
        let bad = encode_pair_table(&space, 1, 2, 3, 2, &[0x13u8, 0, 0, 0, 0, 0]);
        assert!(matches!(decode_pair_table(&space, 1, 2, 3, 2, &bad), Err(CodecError::Malformed(_))));
    }

    #[test]
    fn disk_cache_round_trips_through_polar_space() {
        let dir = tempfile::tempdir().unwrap();
        let space = parse_space("Q:4:3").unwrap().with_disk_cache(dir.path().to_path_buf());
        let lines: Vec<_> = space.enumerate_isotropic(2).unwrap().to_vec();
        assert!(enumeration_path(dir.path(), &space, 2).exists());
        // A fresh space instance must load the cached level bit-identically.
        let space2 = parse_space("Q:4:3").unwrap().with_disk_cache(dir.path().to_path_buf());
        assert_eq!(space2.enumerate_isotropic(2).unwrap(), &lines[..]);
        // Corrupt the cache: the loader must fall back to recomputation.
        let path = enumeration_path(dir.path(), &space, 2);
        let mut data = std::fs::read(&path).unwrap();
        let len = data.len();
        data[len - 1] ^= 0xff;
        std::fs::write(&path, &data).unwrap();
        let space3 = parse_space("Q:4:3").unwrap().with_disk_cache(dir.path().to_path_buf());
        assert_eq!(space3.enumerate_isotropic(2).unwrap(), &lines[..]);
    }

    #[test]
    fn mangled_names() {
        assert_eq!(mangled_name("Q+:5:3"), "Qp_5_3");
        assert_eq!(mangled_name("Q-:7:2"), "Qm_7_2");
        assert_eq!(mangled_name("H:4:4"), "H_4_4");
    }
}
