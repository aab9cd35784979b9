//! Binary parameter checkpoints.
//!
//! Layout, all integers little-endian: the magic `JGN1`, a `u64` tensor
//! count, then per tensor a `u32` name length, the UTF-8 name, a `u32` rank,
//! `rank` `u64` dimensions and the values as `f64`.

use std::fs;
use std::path::Path;

use jengan_core::nn::{Module, Param};

use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"JGN1";

/// A named tensor as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredTensor {
    pub name: String,
    pub shape: Vec<usize>,
    pub values: Vec<f64>,
}

impl From<&Param> for StoredTensor {
    fn from(p: &Param) -> Self {
        StoredTensor { name: p.name.clone(), shape: p.shape.clone(), values: p.value.clone() }
    }
}

pub fn encode(tensors: &[StoredTensor]) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(tensors.len() as u64).to_le_bytes());
    for t in tensors {
        out.extend_from_slice(&(t.name.len() as u32).to_le_bytes());
        out.extend_from_slice(t.name.as_bytes());
        out.extend_from_slice(&(t.shape.len() as u32).to_le_bytes());
        for &d in &t.shape {
            out.extend_from_slice(&(d as u64).to_le_bytes());
        }
        for v in &t.values {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

/// Cursor over a checkpoint image that reports truncation instead of panicking.
struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.at.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::Checkpoint(format!("truncated at byte {}", self.at)))?;
        let s = &self.bytes[self.at..end];
        self.at = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn len(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| Error::Checkpoint("length overflows usize".into()))
    }
}

pub fn decode(bytes: &[u8]) -> Result<Vec<StoredTensor>> {
    let mut r = Reader { bytes, at: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::Checkpoint("bad magic".into()));
    }
    let count = r.len()?;
    let mut out = Vec::new();
    for _ in 0..count {
        let name_len = r.u32()? as usize;
        let name = String::from_utf8(r.take(name_len)?.to_vec())
            .map_err(|_| Error::Checkpoint("tensor name is not UTF-8".into()))?;
        let rank = r.u32()? as usize;
        let shape = (0..rank).map(|_| r.len()).collect::<Result<Vec<_>>>()?;
        let n = shape
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::Checkpoint(format!("{name}: shape overflows")))?;
        let raw = r.take(n.checked_mul(8).ok_or_else(|| Error::Checkpoint(format!("{name}: too large")))?)?;
        let values = raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
        out.push(StoredTensor { name, shape, values });
    }
    if r.at != bytes.len() {
        return Err(Error::Checkpoint(format!("{} trailing bytes", bytes.len() - r.at)));
    }
    Ok(out)
}

/// Tensors of every module, in visiting order.
pub fn collect(modules: &[&dyn Module]) -> Vec<StoredTensor> {
    let mut out = Vec::new();
    for m in modules {
        m.visit_params(&mut |p| out.push(StoredTensor::from(p)));
    }
    out
}

/// Copies stored values into `module` by name; every parameter must be
/// present with the same shape.
pub fn restore(module: &mut dyn Module, tensors: &[StoredTensor]) -> Result<()> {
    let mut missing = None;
    module.visit_params_mut(&mut |p| match tensors.iter().find(|t| t.name == p.name) {
        Some(t) if t.shape == p.shape => p.value.copy_from_slice(&t.values),
        Some(t) => {
            missing.get_or_insert(format!("{}: stored shape {:?}, model {:?}", p.name, t.shape, p.shape));
        }
        None => {
            missing.get_or_insert(format!("{} not in checkpoint", p.name));
        }
    });
    match missing {
        Some(msg) => Err(Error::Checkpoint(msg)),
        None => Ok(()),
    }
}

pub fn save(path: impl AsRef<Path>, tensors: &[StoredTensor]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode(tensors)).map_err(Error::io(path))
}

pub fn load(path: impl AsRef<Path>) -> Result<Vec<StoredTensor>> {
    let path = path.as_ref();
    decode(&fs::read(path).map_err(Error::io(path))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<StoredTensor> {
        vec![
            StoredTensor { name: "a.weight".into(), shape: vec![2, 3], values: (0..6).map(f64::from).collect() },
            StoredTensor { name: "scalar".into(), shape: vec![], values: vec![-0.5] },
            StoredTensor { name: "empty".into(), shape: vec![0], values: vec![] },
        ]
    }

    #[test]
    fn round_trip() {
        assert_eq!(decode(&encode(&sample())).unwrap(), sample());
    }

    #[test]
    fn layout_is_fixed() {
        let bytes = encode(&sample()[1..2]);
        let mut expected = b"JGN1".to_vec();
        expected.extend_from_slice(&1u64.to_le_bytes());
        expected.extend_from_slice(&6u32.to_le_bytes());
        expected.extend_from_slice(b"scalar");
        expected.extend_from_slice(&0u32.to_le_bytes());
        expected.extend_from_slice(&(-0.5f64).to_le_bytes());
        assert_eq!(bytes, expected);
    }

    #[test]
    fn truncation_and_garbage_are_rejected() {
        let bytes = encode(&sample());
        for cut in [0, 3, 11, 20, bytes.len() - 1] {
            assert!(matches!(decode(&bytes[..cut]), Err(Error::Checkpoint(_))), "cut {cut}");
        }
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(decode(&extra).is_err());
        let mut bad = bytes;
        bad[0] = b'X';
        assert!(decode(&bad).is_err());
    }
}
