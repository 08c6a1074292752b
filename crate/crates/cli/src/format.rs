//! On-disk formats: binary vector files, CSV vectors and turnstile stream files.
//!
//! Binary layout: `b"JLV1"`, dim as `u32` LE, count as `u64` LE, then
//! `count * dim` `f64` LE values, row-major.

use std::fs;
use std::path::Path;

use jlt_core::streaming::TurnstileUpdate;

use crate::error::{CliError, CliResult};

pub const MAGIC: &[u8; 4] = b"JLV1";
pub const HEADER_LEN: usize = 16;

/// Dense row-major matrix of vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFile {
    pub dim: usize,
    pub rows: Vec<Vec<f64>>,
}

impl VectorFile {
    pub fn new(dim: usize, rows: Vec<Vec<f64>>) -> CliResult<Self> {
        if dim == 0 || rows.is_empty() {
            return Err(CliError::usage("vector files need dim >= 1 and count >= 1"));
        }
        if dim > u32::MAX as usize {
            return Err(CliError::usage(format!("dim {dim} does not fit in 32 bits")));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(CliError::dim(format!("row {i} has length {}, expected {dim}", r.len())));
        }
        Ok(Self { dim, rows })
    }

    pub fn count(&self) -> usize {
        self.rows.len()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 8 * self.dim * self.count());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(self.dim as u32).to_le_bytes());
        out.extend_from_slice(&(self.count() as u64).to_le_bytes());
        for v in self.rows.iter().flatten() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> CliResult<Self> {
        if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
            return Err(CliError::parse("not a JLV1 vector file"));
        }
        let dim = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
        let count = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
        let expected = usize::try_from(count)
            .ok()
            .and_then(|c| c.checked_mul(dim))
            .and_then(|n| n.checked_mul(8))
            .and_then(|n| n.checked_add(HEADER_LEN));
        if expected != Some(bytes.len()) {
            return Err(CliError::parse(format!(
                "length {} does not match header (dim {dim}, count {count})",
                bytes.len()
            )));
        }
        let body = &bytes[HEADER_LEN..];
        let rows = if dim == 0 {
            Vec::new()
        } else {
            body.chunks_exact(8 * dim)
                .map(|row| row.chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().unwrap())).collect())
                .collect()
        };
        Self::new(dim, rows).map_err(|e| CliError::parse(e.message))
    }

    /// One vector per line, comma-separated decimals. Blank lines are skipped.
    pub fn from_csv(text: &str) -> CliResult<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::parse(format!("line {}: {e}", lineno + 1)))?;
            rows.push(row);
        }
        let dim = rows.first().map_or(0, Vec::len);
        Self::new(dim, rows).map_err(|e| match e.code {
            crate::error::ExitCode::Dimension => e,
            _ => CliError::parse(e.message),
        })
    }

    pub fn read(path: &Path, format: InputFormat) -> CliResult<Self> {
        match format {
            InputFormat::Binary => Self::from_bytes(&fs::read(path).map_err(|e| CliError::io(path, e))?),
            InputFormat::Csv => Self::from_csv(&fs::read_to_string(path).map_err(|e| CliError::io(path, e))?),
        }
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        fs::write(path, self.to_bytes()).map_err(|e| CliError::io(path, e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum InputFormat {
    #[default]
    Binary,
    Csv,
}

/// Parsed stream file. `d` and `max_abs` come from an optional `#d=<d> M=<M>` line.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StreamFile {
    pub d: Option<u64>,
    pub max_abs: Option<u64>,
    pub updates: Vec<TurnstileUpdate>,
}

impl StreamFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut out = StreamFile::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let bad = |what: &str| CliError::parse(format!("line {}: {what}: `{raw}`", lineno + 1));
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                for field in comment.split_whitespace() {
                    if let Some(v) = field.strip_prefix("d=") {
                        out.d = Some(v.parse().map_err(|_| bad("bad d"))?);
                    } else if let Some(v) = field.strip_prefix("M=") {
                        out.max_abs = Some(v.parse().map_err(|_| bad("bad M"))?);
                    }
                }
                continue;
            }
            let (i, v) = line.split_once(',').ok_or_else(|| bad("expected `index,value`"))?;
            let index: u64 = i.trim().parse().map_err(|_| bad("bad index"))?;
            let value: i64 = v.trim().parse().map_err(|_| bad("bad value"))?;
            if let Some(d) = out.d {
                if index >= d {
                    return Err(CliError::dim(format!(
                        "line {}: index {index} outside [0, {d})",
                        lineno + 1
                    )));
                }
            }
            if let Some(m) = out.max_abs {
                if value.unsigned_abs() > m {
                    return Err(bad("value exceeds M"));
                }
            }
            out.updates.push(TurnstileUpdate::new(index, value));
        }
        Ok(out)
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        Self::parse(&fs::read_to_string(path).map_err(|e| CliError::io(path, e))?)
    }
}
