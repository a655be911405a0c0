//! Portable float map (PFM) depth I/O.
//!
//! Written files are single-channel (`Pf`), little-endian (scale `-1.0`),
//! with rows stored bottom to top as the format requires. Invalid depth
//! pixels are written as `0.0` and read back as invalid.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::DepthMap;

pub fn write_pfm(path: impl AsRef<Path>, depth: &DepthMap) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pfm(depth)).map_err(|e| Error::io(path, e))
}

pub fn encode_pfm(depth: &DepthMap) -> Vec<u8> {
    let (w, h) = depth.dims();
    let mut out = Vec::with_capacity(32 + 4 * w * h);
    let _ = write!(out, "Pf\n{w} {h}\n-1.0\n");
    for y in (0..h).rev() {
        for x in 0..w {
            let v = depth.get(x, y).unwrap_or(0.0) as f32;
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn read_pfm(path: impl AsRef<Path>) -> Result<DepthMap> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pfm(&bytes).map_err(|m| Error::format(path, m))
}

pub fn decode_pfm(bytes: &[u8]) -> std::result::Result<DepthMap, String> {
    let mut pos = 0;
    let mut token = || -> std::result::Result<String, String> {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err("truncated PFM header".into());
        }
        let t = String::from_utf8_lossy(&bytes[start..pos]).into_owned();
        Ok(t)
    };
    let magic = token()?;
    let channels = match magic.as_str() {
        "Pf" => 1,
        "PF" => 3,
        other => return Err(format!("not a PFM file (magic {other:?})")),
    };
    let width: usize = token()?.parse().map_err(|_| "bad PFM width".to_string())?;
    let height: usize = token()?.parse().map_err(|_| "bad PFM height".to_string())?;
    let scale: f64 = token()?.parse().map_err(|_| "bad PFM scale".to_string())?;
    if scale == 0.0 || !scale.is_finite() {
        return Err("PFM scale must be nonzero".into());
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    let little_endian = scale < 0.0;
    let needed = 4 * width * height * channels;
    if bytes.len() < pos + needed {
        return Err(format!("PFM raster truncated: need {needed} bytes, have {}", bytes.len().saturating_sub(pos)));
    }
    let raster = &bytes[pos..pos + needed];
    let mut depth = vec![0.0; width * height];
    for y in 0..height {
        for x in 0..width {
            let i = 4 * channels * (y * width + x);
            let b = [raster[i], raster[i + 1], raster[i + 2], raster[i + 3]];
            let v = if little_endian { f32::from_le_bytes(b) } else { f32::from_be_bytes(b) };
            // bottom-to-top rows; first channel only
            depth[(height - 1 - y) * width + x] = v as f64;
        }
    }
    DepthMap::new(width, height, depth).map_err(|e| e.to_string())
}
