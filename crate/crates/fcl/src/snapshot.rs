//! Binary state snapshots.
//!
//! Spin chain: `"FCSC"`, version `u32`, `L u32`, then `2^L` amplitudes as
//! little-endian `(re, im)` f64 pairs. Walk: `"FCQW"`, version, `L`, position
//! block count, coin count, then `L * 2 * 2^L` amplitudes in engine order.

use std::path::Path;

use fcl_core::spin::{SpinRegister, SpinState};
use fcl_core::walk::WalkState;
use fcl_core::Complex64;

use crate::error::{FclError, Result};

pub const SPIN_MAGIC: &[u8; 4] = b"FCSC";
pub const WALK_MAGIC: &[u8; 4] = b"FCQW";
pub const VERSION: u32 = 1;

fn put_amps(out: &mut Vec<u8>, amps: &[Complex64]) {
    for a in amps {
        out.extend_from_slice(&a.re.to_le_bytes());
        out.extend_from_slice(&a.im.to_le_bytes());
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.bytes.len() < n {
            return Err(FclError::Snapshot("truncated file".into()));
        }
        let (head, rest) = self.bytes.split_at(n);
        self.bytes = rest;
        Ok(head)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn header(&mut self, magic: &[u8; 4]) -> Result<usize> {
        if self.take(4)? != magic {
            return Err(FclError::Snapshot(format!("expected magic {:?}", String::from_utf8_lossy(magic))));
        }
        let version = self.u32()?;
        if version != VERSION {
            return Err(FclError::Snapshot(format!("unsupported version {version}")));
        }
        Ok(self.u32()? as usize)
    }

    fn amps(&mut self, count: usize) -> Result<Vec<Complex64>> {
        let raw = self.take(count.checked_mul(16).ok_or_else(|| FclError::Snapshot("size overflow".into()))?)?;
        if !self.bytes.is_empty() {
            return Err(FclError::Snapshot(format!("{} trailing bytes", self.bytes.len())));
        }
        Ok(raw
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect())
    }
}

fn checked_len(l: usize, max: usize) -> Result<usize> {
    if l > max {
        return Err(FclError::Snapshot(format!("L = {l} exceeds the engine limit {max}")));
    }
    Ok(1usize << l)
}

pub fn encode_spin(state: &SpinState) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + 16 * state.amplitudes().len());
    out.extend_from_slice(SPIN_MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(state.sites() as u32).to_le_bytes());
    put_amps(&mut out, state.amplitudes());
    out
}

pub fn decode_spin(bytes: &[u8]) -> Result<SpinState> {
    let mut r = Reader { bytes };
    let l = r.header(SPIN_MAGIC)?;
    let dim = checked_len(l, fcl_core::MAX_SPIN_SITES)?;
    let amps = r.amps(dim)?;
    SpinState::from_amplitudes(l, amps).map_err(|e| FclError::Snapshot(e.to_string()))
}

pub fn encode_walk(state: &WalkState) -> Vec<u8> {
    let mut out = Vec::with_capacity(20 + 16 * state.amplitudes().len());
    out.extend_from_slice(WALK_MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(state.sites() as u32).to_le_bytes());
    out.extend_from_slice(&(state.sites() as u32).to_le_bytes());
    out.extend_from_slice(&2u32.to_le_bytes());
    put_amps(&mut out, state.amplitudes());
    out
}

pub fn decode_walk(bytes: &[u8]) -> Result<WalkState> {
    let mut r = Reader { bytes };
    let l = r.header(WALK_MAGIC)?;
    let (positions, coins) = (r.u32()? as usize, r.u32()? as usize);
    if positions != l || coins != 2 {
        return Err(FclError::Snapshot(format!("expected {l} positions and 2 coin states, got {positions} and {coins}")));
    }
    let dim = checked_len(l, fcl_core::MAX_WALK_SITES)?;
    let amps = r.amps(2 * l * dim)?;
    WalkState::from_amplitudes(l, amps).map_err(|e| FclError::Snapshot(e.to_string()))
}

pub fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| FclError::io(dir, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| FclError::io(path, e))
}

pub fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| FclError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use fcl_core::{CouplingMode, ModelParams, WalkParams};

    #[test]
    fn spin_round_trip_is_bit_exact() {
        let mut s = SpinState::plus(6).unwrap();
        s.apply_floquet(&ModelParams::new(0.7, 0.3, 6).unwrap()).unwrap();
        let bytes = encode_spin(&s);
        assert_eq!(&bytes[..4], b"FCSC");
        assert_eq!(bytes.len(), 12 + 16 * 64);
        assert_eq!(decode_spin(&bytes).unwrap().amplitudes(), s.amplitudes());
    }

    #[test]
    fn walk_round_trip_is_bit_exact() {
        let model = ModelParams::new(0.2, 0.6, 4).unwrap();
        let params = WalkParams::new(model, 1.6, 0.785, CouplingMode::Global).unwrap();
        let mut w = WalkState::initial(4, 2, 0).unwrap();
        w.step(&params).unwrap();
        let bytes = encode_walk(&w);
        assert_eq!(&bytes[..4], b"FCQW");
        assert_eq!(decode_walk(&bytes).unwrap().amplitudes(), w.amplitudes());
    }

    #[test]
    fn rejects_corrupt_input() {
        let bytes = encode_spin(&SpinState::plus(4).unwrap());
        assert!(decode_walk(&bytes).is_err());
        assert!(decode_spin(&bytes[..bytes.len() - 1]).is_err());
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(decode_spin(&extra).is_err());
        let mut wrong_version = bytes;
        wrong_version[4] = 9;
        assert!(decode_spin(&wrong_version).is_err());
    }
}
