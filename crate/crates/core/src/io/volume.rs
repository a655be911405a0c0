//! Binary cost-volume container.
//!
//! ```text
//! offset  size  field
//!      0     8  magic "DFFCOST\0"
//!      8     4  version (u32, currently 1)
//!     12     4  width (u32)
//!     16     4  height (u32)
//!     20     4  hypothesis count D (u32)
//!     24     4  flags (u32): bit 0 squashed, bit 1 normalized
//!     28     4  reserved, zero
//!     32     8  c_max (f64)
//!     40     8  f1 (f64)
//!     48    16  reserved, zero
//!     64  4·W·H·D  costs as f32, one row-major W×H plane per hypothesis
//!      …   8·D  hypothesis depths in meters (f64)
//! ```
//!
//! Every field is little-endian.

use std::fs;
use std::path::Path;

use crate::cost_volume::{CostVolume, DepthHypotheses};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"DFFCOST\0";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 64;

const FLAG_SQUASHED: u32 = 1;
const FLAG_NORMALIZED: u32 = 2;

pub fn encode_cost_volume(volume: &CostVolume) -> Vec<u8> {
    let (w, h, d) = (volume.width(), volume.height(), volume.depth_count());
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * w * h * d + 8 * d);
    out.extend_from_slice(MAGIC);
    for v in [VERSION, w as u32, h as u32, d as u32] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    let mut flags = 0;
    if volume.is_squashed() {
        flags |= FLAG_SQUASHED;
    }
    if volume.is_normalized() {
        flags |= FLAG_NORMALIZED;
    }
    out.extend_from_slice(&flags.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&volume.c_max().to_le_bytes());
    out.extend_from_slice(&volume.f1().to_le_bytes());
    out.resize(HEADER_LEN, 0);
    for c in volume.costs() {
        out.extend_from_slice(&(*c as f32).to_le_bytes());
    }
    for h in volume.hypotheses().depths() {
        out.extend_from_slice(&h.to_le_bytes());
    }
    out
}

pub fn decode_cost_volume(bytes: &[u8]) -> std::result::Result<CostVolume, String> {
    if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
        return Err("not a cost volume file".into());
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let version = u32_at(8);
    if version != VERSION {
        return Err(format!("unsupported cost volume version {version}"));
    }
    let (w, h, d) = (u32_at(12) as usize, u32_at(16) as usize, u32_at(20) as usize);
    let flags = u32_at(24);
    let expected = HEADER_LEN + 4 * w * h * d + 8 * d;
    if bytes.len() != expected {
        return Err(format!("expected {expected} bytes, found {}", bytes.len()));
    }
    let costs: Vec<f64> = bytes[HEADER_LEN..HEADER_LEN + 4 * w * h * d]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
        .collect();
    let hyps: Vec<f64> = bytes[HEADER_LEN + 4 * w * h * d..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let hypotheses = DepthHypotheses::new(hyps).map_err(|e| e.to_string())?;
    CostVolume::from_parts(
        w,
        h,
        hypotheses,
        costs,
        flags & FLAG_SQUASHED != 0,
        flags & FLAG_NORMALIZED != 0,
        f64_at(32),
        f64_at(40),
    )
    .map_err(|e| e.to_string())
}

pub fn save_cost_volume(path: impl AsRef<Path>, volume: &CostVolume) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_cost_volume(volume)).map_err(|e| Error::io(path, e))
}

pub fn load_cost_volume(path: impl AsRef<Path>) -> Result<CostVolume> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_cost_volume(&bytes).map_err(|m| Error::format(path, m))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn volume(w: usize, h: usize, costs: Vec<f64>, hyps: Vec<f64>) -> CostVolume {
        let d = hyps.len();
        let slices = costs.chunks(w * h).map(<[f64]>::to_vec).collect();
        let v = CostVolume::from_slices(w, h, DepthHypotheses::new(hyps).unwrap(), slices).unwrap();
        assert_eq!(v.depth_count(), d);
        v
    }

    #[test]
    fn header_layout() {
        let v = volume(2, 1, vec![0.0, 1.0, 0.5, 0.25], vec![1.0, 2.0]).squashed(0.3, 0.999).unwrap();
        let bytes = encode_cost_volume(&v);
        assert_eq!(bytes.len(), 64 + 16 + 16);
        assert_eq!(&bytes[..8], MAGIC);
        assert_eq!(u32::from_le_bytes(bytes[24..28].try_into().unwrap()), FLAG_SQUASHED);
        assert_eq!(f64::from_le_bytes(bytes[32..40].try_into().unwrap()), 0.3);
        assert!(bytes[48..64].iter().all(|b| *b == 0));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(decode_cost_volume(b"short").is_err());
        let v = volume(1, 1, vec![0.0, 1.0], vec![1.0, 2.0]);
        let mut bytes = encode_cost_volume(&v);
        bytes.pop();
        assert!(decode_cost_volume(&bytes).is_err());
        let mut bytes = encode_cost_volume(&v);
        bytes[8] = 9;
        assert!(decode_cost_volume(&bytes).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(w in 1usize..5, h in 1usize..5, d in 2usize..6, seed in any::<u64>(), normalized in any::<bool>()) {
            let costs: Vec<f64> = (0..w * h * d).map(|i| ((seed.wrapping_add(i as u64) % 1000) as f64) / 999.0).collect();
            let hyps: Vec<f64> = (0..d).map(|k| 0.1 + 0.25 * k as f64).collect();
            let mut v = volume(w, h, costs, hyps);
            if normalized {
                v = crate::cost_volume::normalize_per_pixel(v);
            }
            let back = decode_cost_volume(&encode_cost_volume(&v)).unwrap();
            prop_assert_eq!(back.hypotheses(), v.hypotheses());
            prop_assert_eq!(back.is_normalized(), v.is_normalized());
            for (a, b) in back.costs().iter().zip(v.costs()) {
                prop_assert_eq!(*a, *b as f32 as f64);
            }
        }
    }
}
