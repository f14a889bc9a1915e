//! Binary feature-cube container.
//!
//! Layout (little-endian): magic `MTSD1`; `u32` instance count `m`,
//! attribute count `n`, series length `T`; `n` length-prefixed UTF-8
//! attribute names; `u32` class count and length-prefixed class names; per
//! instance a `u32` class id and `n * T` `f64` values, attribute-major;
//! finally the CRC-32 of every preceding byte.

use std::path::Path;

use crate::dsp::FeatureCube;
use crate::error::{Error, Result};
use crate::logiset::{Logiset, Mode};

pub const MAGIC: &[u8; 5] = b"MTSD1";

/// Labelled cubes sharing one schema.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeDataset {
    pub attributes: Vec<String>,
    pub classes: Vec<String>,
    pub series_len: usize,
    pub instances: Vec<(FeatureCube, usize)>,
}

impl CubeDataset {
    pub fn new(classes: Vec<String>, instances: Vec<(FeatureCube, usize)>) -> Result<Self> {
        let (first, _) = instances.first().ok_or(Error::EmptyDataset)?;
        let attributes = first.names().to_vec();
        let series_len = first.len();
        for (cube, label) in &instances {
            if cube.names() != attributes.as_slice() || cube.len() != series_len {
                return Err(Error::SchemaMismatch("cubes differ in attributes or length".into()));
            }
            if *label >= classes.len() {
                return Err(Error::UnknownLabel(format!("class index {label}")));
            }
        }
        Ok(Self {
            attributes,
            classes,
            series_len,
            instances,
        })
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn to_logiset(&self, mode: Mode) -> Result<Logiset> {
        Logiset::build(self.instances.clone(), self.classes.clone(), mode)
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        for v in [self.instances.len(), self.attributes.len(), self.series_len] {
            put_u32(&mut out, v)?;
        }
        for name in &self.attributes {
            put_str(&mut out, name)?;
        }
        put_u32(&mut out, self.classes.len())?;
        for c in &self.classes {
            put_str(&mut out, c)?;
        }
        for (cube, label) in &self.instances {
            put_u32(&mut out, *label)?;
            for s in cube.all_series() {
                for v in s {
                    out.extend_from_slice(&v.to_le_bytes());
                }
            }
        }
        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_le_bytes());
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < MAGIC.len() + 4 || &bytes[..MAGIC.len()] != MAGIC {
            return Err(Error::CorruptFile("bad magic".into()));
        }
        let (body, tail) = bytes.split_at(bytes.len() - 4);
        let stored = u32::from_le_bytes(tail.try_into().expect("4 bytes"));
        if crc32fast::hash(body) != stored {
            return Err(Error::CorruptFile("checksum mismatch".into()));
        }
        let mut r = Reader {
            buf: body,
            pos: MAGIC.len(),
        };
        let m = r.u32()? as usize;
        let n = r.u32()? as usize;
        let t = r.u32()? as usize;
        let attributes = (0..n).map(|_| r.string()).collect::<Result<Vec<_>>>()?;
        let k = r.u32()? as usize;
        let classes = (0..k).map(|_| r.string()).collect::<Result<Vec<_>>>()?;
        let mut instances = Vec::with_capacity(m.min(1 << 20));
        for _ in 0..m {
            let label = r.u32()? as usize;
            let series = (0..n)
                .map(|_| (0..t).map(|_| r.f64()).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let cube = FeatureCube::new(attributes.clone(), series)
                .map_err(|e| Error::CorruptFile(e.to_string()))?;
            instances.push((cube, label));
        }
        if r.pos != body.len() {
            return Err(Error::CorruptFile("trailing bytes".into()));
        }
        Self::new(classes, instances).map_err(|e| Error::CorruptFile(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        super::write_atomic(path, &self.to_bytes()?)
    }
}

fn put_u32(out: &mut Vec<u8>, v: usize) -> Result<()> {
    let v = u32::try_from(v).map_err(|_| Error::invalid("value exceeds u32"))?;
    out.extend_from_slice(&v.to_le_bytes());
    Ok(())
}

fn put_str(out: &mut Vec<u8>, s: &str) -> Result<()> {
    put_u32(out, s.len())?;
    out.extend_from_slice(s.as_bytes());
    Ok(())
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::CorruptFile("truncated".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn string(&mut self) -> Result<String> {
        let n = self.u32()? as usize;
        String::from_utf8(self.take(n)?.to_vec()).map_err(|_| Error::CorruptFile("invalid UTF-8".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CubeDataset {
        let names = vec!["a".to_string(), "é".to_string()];
        let cube = |x: f64| FeatureCube::new(names.clone(), vec![vec![x, -0.0, f64::MIN_POSITIVE], vec![1e300, x / 3.0, 0.1]]).unwrap();
        CubeDataset::new(vec!["no".into(), "yes".into()], vec![(cube(1.0), 1), (cube(-2.5), 0)]).unwrap()
    }

    #[test]
    fn round_trip_bit_exact() {
        let d = sample();
        let bytes = d.to_bytes().unwrap();
        assert_eq!(&bytes[..5], b"MTSD1");
        assert_eq!(u32::from_le_bytes(bytes[5..9].try_into().unwrap()), 2);
        let back = CubeDataset::from_bytes(&bytes).unwrap();
        for ((a, la), (b, lb)) in d.instances.iter().zip(&back.instances) {
            assert_eq!(la, lb);
            for (x, y) in a.all_series().iter().flatten().zip(b.all_series().iter().flatten()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
        assert_eq!(back.to_bytes().unwrap(), bytes);
    }

    #[test]
    fn layout_size() {
        let bytes = sample().to_bytes().unwrap();
        let header = 5 + 12 + (4 + 1) + (4 + 2) + 4 + (4 + 2) + (4 + 3);
        assert_eq!(bytes.len(), header + 2 * (4 + 2 * 3 * 8) + 4);
    }

    #[test]
    fn corruption_detected() {
        let mut bytes = sample().to_bytes().unwrap();
        let mid = bytes.len() / 2;
        bytes[mid] ^= 1;
        assert!(matches!(CubeDataset::from_bytes(&bytes), Err(Error::CorruptFile(_))));
        assert!(matches!(CubeDataset::from_bytes(b"MTSD2xxxxxxxx"), Err(Error::CorruptFile(_))));
        assert!(matches!(CubeDataset::from_bytes(b""), Err(Error::CorruptFile(_))));
    }
}
