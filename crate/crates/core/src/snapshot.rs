//! Binary snapshot of a configuration.
//!
//! Layout (all integers little-endian):
//!
//! | bytes      | field                                   |
//! |------------|-----------------------------------------|
//! | 4          | magic `SGRD`                            |
//! | 2          | version (u16) = 1                       |
//! | 4, 4, 4    | n, w, K (u32)                           |
//! | 8          | p (IEEE-754 f64)                        |
//! | 8          | seed (u64)                              |
//! | n*n        | cells row-major, 0x00 = -1, 0x01 = +1   |
//! | 4          | CRC-32 (IEEE) of everything above       |

use thiserror::Error;

use crate::grid::{GridConfig, GridState, Spin};

pub const MAGIC: &[u8; 4] = b"SGRD";
pub const VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 4 * 3 + 8 + 8;

#[derive(Debug, Error, PartialEq)]
pub enum SnapshotError {
    #[error("bad magic {0:?}")]
    BadMagic([u8; 4]),
    #[error("unsupported snapshot version {0}")]
    UnsupportedVersion(u16),
    #[error("length mismatch: expected {expected} bytes, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Checksum { stored: u32, computed: u32 },
    #[error("invalid cell byte {0:#04x}")]
    InvalidCell(u8),
    #[error("invalid header: {0}")]
    InvalidHeader(String),
}

pub fn write(state: &GridState) -> Vec<u8> {
    let cfg = state.config();
    let mut out = Vec::with_capacity(HEADER_LEN + cfg.n * cfg.n + 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(cfg.n as u32).to_le_bytes());
    out.extend_from_slice(&(cfg.w as u32).to_le_bytes());
    out.extend_from_slice(&(cfg.k as u32).to_le_bytes());
    out.extend_from_slice(&cfg.p.to_le_bytes());
    out.extend_from_slice(&cfg.seed.to_le_bytes());
    out.extend(state.types().iter().map(|&t| (t == Spin::Plus) as u8));
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().unwrap())
}

/// Decode a snapshot. `tau_tilde` is not stored; the decoded config carries
/// `K / N`, which reproduces the same integer threshold.
pub fn read(bytes: &[u8]) -> Result<GridState, SnapshotError> {
    if bytes.len() < 4 {
        return Err(SnapshotError::LengthMismatch { expected: HEADER_LEN + 4, found: bytes.len() });
    }
    let magic: [u8; 4] = bytes[..4].try_into().unwrap();
    if &magic != MAGIC {
        return Err(SnapshotError::BadMagic(magic));
    }
    if bytes.len() < 6 {
        return Err(SnapshotError::LengthMismatch { expected: HEADER_LEN + 4, found: bytes.len() });
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(SnapshotError::UnsupportedVersion(version));
    }
    if bytes.len() < HEADER_LEN {
        return Err(SnapshotError::LengthMismatch { expected: HEADER_LEN + 4, found: bytes.len() });
    }
    let n = u32_at(bytes, 6) as usize;
    let w = u32_at(bytes, 10) as usize;
    let k = u32_at(bytes, 14) as usize;
    let p = f64::from_le_bytes(bytes[18..26].try_into().unwrap());
    let seed = u64::from_le_bytes(bytes[26..34].try_into().unwrap());
    let expected = HEADER_LEN + n * n + 4;
    if bytes.len() != expected {
        return Err(SnapshotError::LengthMismatch { expected, found: bytes.len() });
    }
    let body = &bytes[..expected - 4];
    let stored = u32_at(bytes, expected - 4);
    let computed = crc32fast::hash(body);
    if stored != computed {
        return Err(SnapshotError::Checksum { stored, computed });
    }
    let big_n = (2 * w + 1) * (2 * w + 1);
    if k > big_n {
        return Err(SnapshotError::InvalidHeader(format!("K = {k} exceeds N = {big_n}")));
    }
    let mut config = GridConfig::new_unchecked_size(n, w, k as f64 / big_n as f64, p, seed)
        .map_err(|e| SnapshotError::InvalidHeader(e.to_string()))?;
    config.k = k;
    let types = body[HEADER_LEN..]
        .iter()
        .map(|&b| match b {
            0 => Ok(Spin::Minus),
            1 => Ok(Spin::Plus),
            other => Err(SnapshotError::InvalidCell(other)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    GridState::from_types(config, types).map_err(|e| SnapshotError::InvalidHeader(e.to_string()))
}
