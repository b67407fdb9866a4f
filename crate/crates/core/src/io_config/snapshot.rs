use std::path::Path;

use num_complex::Complex64;

use crate::galerkin::State;
use crate::spectral::{GridSpec, SpectralField};

const MAGIC: &[u8; 4] = b"OLDB";
pub const SNAPSHOT_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 + 4 + 8;

#[derive(Debug, thiserror::Error)]
pub enum SnapshotError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic bytes (not a snapshot file)")]
    BadMagic,
    #[error("unsupported snapshot version {0}")]
    UnsupportedVersion(u32),
    #[error("CRC mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    CrcMismatch { stored: u32, computed: u32 },
    #[error("truncated snapshot: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("invalid grid in header: N = {n}, K = {k}")]
    InvalidGrid { n: u32, k: u32 },
}

/// Byte length of a snapshot on `grid`.
pub fn snapshot_len(grid: GridSpec) -> usize {
    HEADER_LEN + grid.mode_count() * (2 + 4) * 16 + 4
}

fn put_coeffs<const C: usize>(out: &mut Vec<u8>, f: &SpectralField<C>) {
    for mode in f.coeffs() {
        for z in mode {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
}

pub fn encode_snapshot(state: &State) -> Vec<u8> {
    let grid = state.grid();
    let mut out = Vec::with_capacity(snapshot_len(grid));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    out.extend_from_slice(&(grid.n() as u32).to_le_bytes());
    out.extend_from_slice(&(grid.cutoff() as u32).to_le_bytes());
    out.extend_from_slice(&state.t.to_le_bytes());
    put_coeffs(&mut out, &state.v);
    put_coeffs(&mut out, &state.tau);
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().unwrap())
}

fn f64_at(b: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(b[at..at + 8].try_into().unwrap())
}

fn take_coeffs<const C: usize>(b: &[u8], at: &mut usize, grid: GridSpec) -> SpectralField<C> {
    let mut coeffs = vec![[Complex64::default(); C]; grid.mode_count()];
    for mode in coeffs.iter_mut() {
        for z in mode.iter_mut() {
            *z = Complex64::new(f64_at(b, *at), f64_at(b, *at + 8));
            *at += 16;
        }
    }
    SpectralField::from_coeffs(grid, coeffs).expect("length matches the grid")
}

pub fn decode_snapshot(bytes: &[u8]) -> Result<State, SnapshotError> {
    if bytes.len() < HEADER_LEN + 4 {
        if bytes.len() >= 4 && &bytes[..4] != MAGIC {
            return Err(SnapshotError::BadMagic);
        }
        return Err(SnapshotError::Truncated {
            expected: HEADER_LEN + 4,
            found: bytes.len(),
        });
    }
    if &bytes[..4] != MAGIC {
        return Err(SnapshotError::BadMagic);
    }
    let version = u32_at(bytes, 4);
    if version != SNAPSHOT_VERSION {
        return Err(SnapshotError::UnsupportedVersion(version));
    }
    let (n, k) = (u32_at(bytes, 8), u32_at(bytes, 12));
    let grid = GridSpec::new(n as usize)
        .ok()
        .filter(|g| g.cutoff() == k as usize)
        .ok_or(SnapshotError::InvalidGrid { n, k })?;
    let expected = snapshot_len(grid);
    if bytes.len() != expected {
        return Err(SnapshotError::Truncated {
            expected,
            found: bytes.len(),
        });
    }
    let body = &bytes[..expected - 4];
    let stored = u32_at(bytes, expected - 4);
    let computed = crc32fast::hash(body);
    if stored != computed {
        return Err(SnapshotError::CrcMismatch { stored, computed });
    }
    let t = f64_at(bytes, 16);
    let mut at = HEADER_LEN;
    let v = take_coeffs::<2>(bytes, &mut at, grid);
    let tau = take_coeffs::<4>(bytes, &mut at, grid);
    Ok(State { v, tau, t })
}

pub fn write_snapshot(path: impl AsRef<Path>, state: &State) -> Result<(), SnapshotError> {
    std::fs::write(path, encode_snapshot(state))?;
    Ok(())
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<State, SnapshotError> {
    decode_snapshot(&std::fs::read(path)?)
}
