//! PNG image I/O. Stored values are treated as gamma-2.2 encoded and
//! linearized on load unless told otherwise.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use png::{BitDepth, ColorType, Transformations};

use crate::error::{Error, Result};
use crate::image::{DepthMap, Image};

pub const DISPLAY_GAMMA: f64 = 2.2;

/// Millimetres per unit in 16-bit depth PNGs.
pub const DEPTH_PNG_UNITS_PER_M: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PngDepth {
    Eight,
    Sixteen,
}

pub fn read_png(path: impl AsRef<Path>, linearize: bool) -> Result<Image> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut decoder = png::Decoder::new(std::io::BufReader::new(file));
    decoder.set_transformations(Transformations::EXPAND);
    let mut reader = decoder.read_info().map_err(|e| Error::format(path, e.to_string()))?;
    let mut buf = vec![0; reader.output_buffer_size().unwrap_or(0)];
    let info = reader.next_frame(&mut buf).map_err(|e| Error::format(path, e.to_string()))?;
    let (w, h) = (info.width as usize, info.height as usize);
    let src_channels = info.color_type.samples();
    let channels = match info.color_type {
        ColorType::Grayscale | ColorType::GrayscaleAlpha => 1,
        _ => 3,
    };
    let sixteen = info.bit_depth == BitDepth::Sixteen;
    let max = if sixteen { 65535.0 } else { 255.0 };
    let sample = |i: usize| -> f64 {
        if sixteen {
            u16::from_be_bytes([buf[2 * i], buf[2 * i + 1]]) as f64 / max
        } else {
            buf[i] as f64 / max
        }
    };
    let mut data = vec![0.0; w * h * channels];
    for p in 0..w * h {
        for c in 0..channels {
            let v = sample(p * src_channels + c);
            data[c * w * h + p] = if linearize { v.powf(DISPLAY_GAMMA) } else { v };
        }
    }
    Image::new(w, h, channels, data)
}

/// Writes `image` clamped to `[0, 1]`, gamma-encoding it when `encode` is set.
pub fn write_png(path: impl AsRef<Path>, image: &Image, depth: PngDepth, encode: bool) -> Result<()> {
    let (w, h) = image.dims();
    let channels = image.channels();
    let mut samples = Vec::with_capacity(w * h * channels);
    for p in 0..w * h {
        for c in 0..channels {
            let v = image.data()[c * w * h + p].clamp(0.0, 1.0);
            samples.push(if encode { v.powf(1.0 / DISPLAY_GAMMA) } else { v });
        }
    }
    let color = if channels == 1 { ColorType::Grayscale } else { ColorType::Rgb };
    write_samples(path.as_ref(), w, h, color, depth, &samples)
}

/// 16-bit grayscale depth in millimetres; invalid pixels become 0.
pub fn write_depth_png16(path: impl AsRef<Path>, depth: &DepthMap) -> Result<()> {
    let (w, h) = depth.dims();
    let samples: Vec<f64> = (0..w * h)
        .map(|i| {
            let d = depth.get(i % w, i / w).unwrap_or(0.0);
            (d * DEPTH_PNG_UNITS_PER_M / 65535.0).clamp(0.0, 1.0)
        })
        .collect();
    write_samples(path.as_ref(), w, h, ColorType::Grayscale, PngDepth::Sixteen, &samples)
}

/// 8-bit grayscale of values in `[0, 1]`, written without gamma encoding.
pub fn write_gray8(path: impl AsRef<Path>, width: usize, height: usize, values: &[f64]) -> Result<()> {
    let samples: Vec<f64> = values.iter().map(|v| v.clamp(0.0, 1.0)).collect();
    write_samples(path.as_ref(), width, height, ColorType::Grayscale, PngDepth::Eight, &samples)
}

fn write_samples(path: &Path, w: usize, h: usize, color: ColorType, depth: PngDepth, samples: &[f64]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut encoder = png::Encoder::new(BufWriter::new(file), w as u32, h as u32);
    encoder.set_color(color);
    let bytes: Vec<u8> = match depth {
        PngDepth::Eight => {
            encoder.set_depth(BitDepth::Eight);
            samples.iter().map(|v| (v * 255.0).round() as u8).collect()
        }
        PngDepth::Sixteen => {
            encoder.set_depth(BitDepth::Sixteen);
            samples
                .iter()
                .flat_map(|v| ((v * 65535.0).round() as u16).to_be_bytes())
                .collect()
        }
    };
    let mut writer = encoder.write_header().map_err(|e| Error::format(path, e.to_string()))?;
    writer.write_image_data(&bytes).map_err(|e| Error::format(path, e.to_string()))?;
    writer.finish().map_err(|e| Error::format(path, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::textured_image;

    #[test]
    fn sixteen_bit_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.png");
        let img = textured_image(10, 7, 3, 1);
        write_png(&path, &img, PngDepth::Sixteen, true).unwrap();
        let back = read_png(&path, true).unwrap();
        assert_eq!(back.dims(), (10, 7));
        assert_eq!(back.channels(), 3);
        for (a, b) in back.data().iter().zip(img.data()) {
            assert!((a - b).abs() < 1e-4);
        }
    }

    #[test]
    fn eight_bit_gray() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.png");
        write_gray8(&path, 2, 1, &[0.0, 1.0]).unwrap();
        let back = read_png(&path, false).unwrap();
        assert_eq!(back.data(), &[0.0, 1.0]);
    }

    #[test]
    fn depth_png_scale() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.png");
        write_depth_png16(&path, &DepthMap::new(2, 1, vec![1.5, 0.0]).unwrap()).unwrap();
        let back = read_png(&path, false).unwrap();
        assert!((back.data()[0] * 65535.0 - 1500.0).abs() < 1e-9);
        assert_eq!(back.data()[1], 0.0);
    }

    #[test]
    fn missing_file() {
        assert!(matches!(read_png("/nonexistent/x.png", true), Err(Error::Io { .. })));
    }
}
