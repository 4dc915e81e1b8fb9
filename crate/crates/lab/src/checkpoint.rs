//! Binary state snapshots.
//!
//! Layout, all little-endian: `b"DGBO"`, `u32` version, `u64` N, `f64` L,
//! `f64` alpha, `f64` t, then N `f64` samples.

use std::path::Path;

use dgbo_core::spectral::{Grid, RealField};

use crate::error::LabError;

pub const MAGIC: &[u8; 4] = b"DGBO";
pub const VERSION: u32 = 1;
const HEADER: usize = 4 + 4 + 8 + 8 + 8 + 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub length: f64,
    pub alpha: f64,
    pub t: f64,
    pub samples: Vec<f64>,
}

impl Checkpoint {
    pub fn from_field(u: &RealField<f64>, alpha: f64, t: f64) -> Self {
        Self {
            length: u.grid().length(),
            alpha,
            t,
            samples: u.samples().to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn to_field(&self) -> dgbo_core::Result<RealField<f64>> {
        let grid = Grid::new(self.n(), self.length)?;
        RealField::new(&grid, self.samples.clone())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER + 8 * self.n());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.n() as u64).to_le_bytes());
        out.extend_from_slice(&self.length.to_le_bytes());
        out.extend_from_slice(&self.alpha.to_le_bytes());
        out.extend_from_slice(&self.t.to_le_bytes());
        for v in &self.samples {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, String> {
        if bytes.len() < HEADER {
            return Err(format!("file too short for a header ({} bytes)", bytes.len()));
        }
        if &bytes[0..4] != MAGIC {
            return Err("bad magic, not a DGBO checkpoint".into());
        }
        let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
        let u64_at = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
        let f64_at = |i: usize| f64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
        let version = u32_at(4);
        if version != VERSION {
            return Err(format!("unsupported checkpoint version {version}"));
        }
        let n = u64_at(8) as usize;
        let expected = n
            .checked_mul(8)
            .and_then(|p| p.checked_add(HEADER))
            .ok_or("sample count overflows")?;
        if bytes.len() != expected {
            return Err(format!(
                "header announces {n} samples ({expected} bytes) but file has {} bytes",
                bytes.len()
            ));
        }
        let samples = (0..n).map(|j| f64_at(HEADER + 8 * j)).collect();
        Ok(Self {
            length: f64_at(16),
            alpha: f64_at(24),
            t: f64_at(32),
            samples,
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), LabError> {
        std::fs::write(path, self.to_bytes()).map_err(|e| LabError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self, LabError> {
        let bytes = std::fs::read(path).map_err(|e| LabError::io(path, e))?;
        Self::from_bytes(&bytes).map_err(|message| LabError::Format {
            path: path.display().to_string(),
            message,
        })
    }
}
