//! Binary coefficient cache.
//!
//! Layout: `b"GL3C"`, `u32` version, kind byte, `u64` count N, then N
//! `f64` values λ(1,1)…λ(1,N). All integers and floats little-endian.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{CoefficientProvider, FormKind};
use crate::error::{LabError, Result};

pub const CACHE_MAGIC: &[u8; 4] = b"GL3C";
pub const CACHE_VERSION: u32 = 1;

pub fn write_cache(provider: &CoefficientProvider, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    w.write_all(&[provider.kind().code()])?;
    w.write_all(&(provider.max_index() as u64).to_le_bytes())?;
    for v in provider.table() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_cache(path: &Path) -> Result<CoefficientProvider> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != CACHE_MAGIC {
        return Err(LabError::Format("not a coefficient cache (bad magic)".into()));
    }
    let mut word = [0u8; 4];
    r.read_exact(&mut word)?;
    let version = u32::from_le_bytes(word);
    if version != CACHE_VERSION {
        return Err(LabError::Format(format!("unsupported cache version {version}")));
    }
    let mut kind = [0u8; 1];
    r.read_exact(&mut kind)?;
    let kind = FormKind::from_code(kind[0])
        .ok_or_else(|| LabError::Format(format!("unknown form kind byte {}", kind[0])))?;
    let mut long = [0u8; 8];
    r.read_exact(&mut long)?;
    let n = u64::from_le_bytes(long) as usize;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != 8 * n {
        return Err(LabError::Format(format!(
            "cache declares {n} values but holds {} bytes",
            bytes.len()
        )));
    }
    let table = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    CoefficientProvider::from_table(kind, table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_rejections() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d3.gl3c");
        let p = CoefficientProvider::build(FormKind::EisensteinD3, 200).unwrap();
        write_cache(&p, &path).unwrap();
        let q = read_cache(&path).unwrap();
        assert_eq!(q.kind(), FormKind::EisensteinD3);
        assert_eq!(p.table(), q.table());

        let mut raw = std::fs::read(&path).unwrap();
        raw[4] = 2;
        std::fs::write(&path, &raw).unwrap();
        assert!(matches!(read_cache(&path), Err(LabError::Format(_))));
        raw[4] = 1;
        raw[0] = b'X';
        std::fs::write(&path, &raw).unwrap();
        assert!(matches!(read_cache(&path), Err(LabError::Format(_))));
    }
}
