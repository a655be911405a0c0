//! Wiener–Hunt deconvolution with a Laplacian smoothness prior.
//!
//! The restored spectrum is `conj(H)·Y / (|H|² + λ·|L|²)`, where `L` is the
//! transfer function of the 5-point discrete Laplacian. Each plane is
//! reflect-padded and its padding band is tapered towards the plane mean so
//! the circular transform sees no discontinuity at the tile border.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use crate::convolve::Boundary;
use crate::error::{Error, Result};
use crate::fft::{embed_centered, Fft2};
use crate::image::Image;
use crate::psf::Psf;

pub const DEFAULT_REG_WEIGHT: f64 = 1e-3;

const MIN_MARGIN: usize = 8;

/// Padding margin for kernels of half size up to `max_half`.
pub fn default_margin(max_half: usize) -> usize {
    (2 * max_half + 4).max(MIN_MARGIN)
}

/// Reusable deconvolution setup for one image size, margin and
/// regularization weight. Immutable after construction; share it freely.
#[derive(Clone)]
pub struct WienerHunt {
    width: usize,
    height: usize,
    margin: usize,
    reg_weight: f64,
    fft: Fft2,
    /// λ·|L|² per frequency.
    prior: Vec<f64>,
}

impl WienerHunt {
    pub fn new(width: usize, height: usize, margin: usize, reg_weight: f64) -> Result<Self> {
        if !(reg_weight.is_finite() && reg_weight > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "regularization weight must be positive, got {reg_weight}"
            )));
        }
        if width == 0 || height == 0 {
            return Err(Error::DimensionMismatch("empty image".into()));
        }
        let pw = fft_friendly(width + 2 * margin);
        let ph = fft_friendly(height + 2 * margin);
        let fft = Fft2::new(pw, ph);
        let mut prior = Vec::with_capacity(pw * ph);
        for v in 0..ph {
            let cy = (2.0 * PI * v as f64 / ph as f64).cos();
            for u in 0..pw {
                let cx = (2.0 * PI * u as f64 / pw as f64).cos();
                let l = 4.0 - 2.0 * cx - 2.0 * cy;
                prior.push(reg_weight * l * l);
            }
        }
        Ok(WienerHunt {
            width,
            height,
            margin,
            reg_weight,
            fft,
            prior,
        })
    }

    pub fn reg_weight(&self) -> f64 {
        self.reg_weight
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    /// Dimensions of the padded working tile.
    pub fn tile_dims(&self) -> (usize, usize) {
        (self.fft.width(), self.fft.height())
    }

    /// Spectrum of the padded, tapered plane.
    pub fn plane_spectrum(&self, plane: &[f64]) -> Vec<Complex64> {
        self.fft.forward_real(&self.tapered_tile(plane))
    }

    pub fn kernel_spectrum(&self, psf: &Psf) -> Vec<Complex64> {
        let mut k = embed_centered(psf.kernel(), psf.side(), self.fft.width(), self.fft.height());
        self.fft.forward(&mut k);
        k
    }

    /// Restores one plane given its spectrum and the kernel spectrum.
    /// Output is cropped back to the image size and left unclamped.
    pub fn restore(&self, plane_spec: &[Complex64], kernel_spec: &[Complex64]) -> Vec<f64> {
        let mut buf: Vec<Complex64> = plane_spec
            .iter()
            .zip(kernel_spec)
            .zip(&self.prior)
            .map(|((y, h), p)| h.conj() * y / (h.norm_sqr() + p))
            .collect();
        self.fft.inverse(&mut buf);
        self.crop(&buf)
    }

    pub fn deconvolve_plane(&self, plane: &[f64], psf: &Psf) -> Vec<f64> {
        if psf.is_identity() {
            return plane.to_vec();
        }
        self.restore(&self.plane_spectrum(plane), &self.kernel_spectrum(psf))
    }

    fn crop(&self, buf: &[Complex64]) -> Vec<f64> {
        let pw = self.fft.width();
        let m = self.margin;
        let mut out = Vec::with_capacity(self.width * self.height);
        for y in 0..self.height {
            let start = (y + m) * pw + m;
            out.extend(buf[start..start + self.width].iter().map(|c| c.re));
        }
        out
    }

    fn tapered_tile(&self, plane: &[f64]) -> Vec<f64> {
        let (w, h, m) = (self.width, self.height, self.margin);
        let (pw, ph) = self.tile_dims();
        let mean = plane.iter().sum::<f64>() / plane.len() as f64;
        let wx = taper_profile(w, m, pw);
        let wy = taper_profile(h, m, ph);
        // reflect-pad by `m` on the top/left, the remainder on the bottom/right
        let xs: Vec<usize> = (0..pw)
            .map(|x| Boundary::Reflect.index(x as isize - m as isize, w).unwrap())
            .collect();
        let mut tile = Vec::with_capacity(pw * ph);
        for (y, wy) in wy.iter().enumerate() {
            let sy = Boundary::Reflect.index(y as isize - m as isize, h).unwrap();
            let row = &plane[sy * w..(sy + 1) * w];
            tile.extend(xs.iter().zip(&wx).map(|(&sx, wx)| mean + wx * wy * (row[sx] - mean)));
        }
        tile
    }
}

/// Deconvolves every channel and clamps the result to `[0, 1]`.
pub fn wiener_hunt_deconvolve(image: &Image, psf: &Psf, reg_weight: f64) -> Result<Image> {
    Ok(wiener_hunt_deconvolve_raw(image, psf, reg_weight)?.clamp01())
}

/// Same as [`wiener_hunt_deconvolve`] without clamping; ringing overshoot is
/// preserved.
pub fn wiener_hunt_deconvolve_raw(image: &Image, psf: &Psf, reg_weight: f64) -> Result<Image> {
    let (w, h) = image.dims();
    let plan = WienerHunt::new(w, h, default_margin(psf.half()), reg_weight)?;
    let planes = image.planes().map(|p| plan.deconvolve_plane(p, psf)).collect();
    Image::from_planes(w, h, planes)
}

/// Weight 1 over the image, raised-cosine fall-off to 0 across the padding
/// on both sides (the left band is `margin` wide, the right band takes the
/// rest of the tile).
fn taper_profile(n: usize, margin: usize, padded: usize) -> Vec<f64> {
    let right = padded - n - margin;
    (0..padded)
        .map(|i| {
            let t = if i < margin {
                (margin - i) as f64 / (margin + 1) as f64
            } else if i >= margin + n {
                (i + 1 - margin - n) as f64 / (right + 1) as f64
            } else {
                0.0
            };
            0.5 * (1.0 + (PI * t).cos())
        })
        .collect()
}

/// Smallest `n' ≥ n` whose only prime factors are 2, 3 and 5.
fn fft_friendly(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r.is_multiple_of(p) {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}
