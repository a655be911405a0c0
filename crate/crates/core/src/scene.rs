//! Procedural test scenes: textures, depth layouts and image statistics used
//! by the renderer tests, the CLI and the demo.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::convolve::{convolve, Boundary};
use crate::image::{DepthMap, Image};
use crate::psf::Psf;

const CHECKER_PERIOD: usize = 8;
const NOISE_BLUR_SIGMA: f64 = 1.2;

/// Checkerboard blended with band-limited noise, values in `[0.05, 0.95]`.
/// Deterministic for a given seed.
pub fn textured_image(width: usize, height: usize, channels: usize, seed: u64) -> Image {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let smoothing = gaussian_psf(NOISE_BLUR_SIGMA, 3);
    let mut planes = Vec::with_capacity(channels);
    for c in 0..channels {
        let white: Vec<f64> = (0..width * height).map(|_| rng.gen::<f64>()).collect();
        let noise = Image::new(width, height, 1, white).expect("finite noise");
        let noise = convolve(&noise, &smoothing, Boundary::Reflect).expect("valid kernel");
        let (lo, hi) = min_max(noise.data());
        let phase = c * 3;
        let mut plane = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                let checker = (((x + phase) / CHECKER_PERIOD + y / CHECKER_PERIOD) % 2) as f64;
                let n = (noise.get(x, y, 0) - lo) / (hi - lo).max(1e-12);
                plane.push((0.05 + 0.9 * (0.4 * checker + 0.6 * n)).clamp(0.05, 0.95));
            }
        }
        planes.push(plane);
    }
    Image::from_planes(width, height, planes).expect("consistent planes")
}

/// Texture seed of the standard scene.
pub const STANDARD_SEED: u64 = 7;
/// Depth range of the standard scene's left-to-right ramp.
pub const STANDARD_NEAR_M: f64 = 0.15;
pub const STANDARD_FAR_M: f64 = 0.6;

/// Reference scene used by the benchmarks and the command line: a 3-channel
/// texture over a horizontal depth ramp.
pub fn standard_scene(width: usize, height: usize) -> (Image, DepthMap) {
    (
        textured_image(width, height, 3, STANDARD_SEED),
        ramp_depth(width, height, STANDARD_NEAR_M, STANDARD_FAR_M),
    )
}

/// Normalized Gaussian kernel of half size `half`.
pub fn gaussian_psf(sigma: f64, half: usize) -> Psf {
    let side = 2 * half + 1;
    let mut k = Vec::with_capacity(side * side);
    for j in 0..side {
        for i in 0..side {
            let dx = i as f64 - half as f64;
            let dy = j as f64 - half as f64;
            k.push((-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp());
        }
    }
    Psf::from_kernel(side, k).expect("valid gaussian kernel")
}

/// Fronto-parallel plane at `depth_m`.
pub fn plane_depth(width: usize, height: usize, depth_m: f64) -> DepthMap {
    DepthMap::constant(width, height, depth_m).expect("positive depth")
}

/// Left half at `near_m`, right half at `far_m`.
pub fn two_plane_depth(width: usize, height: usize, near_m: f64, far_m: f64) -> DepthMap {
    let depth = (0..width * height)
        .map(|i| if i % width < width / 2 { near_m } else { far_m })
        .collect();
    DepthMap::new(width, height, depth).expect("positive depths")
}

/// Depth ramp from `near_m` at the left edge to `far_m` at the right edge.
pub fn ramp_depth(width: usize, height: usize, near_m: f64, far_m: f64) -> DepthMap {
    let step = if width > 1 { (far_m - near_m) / (width - 1) as f64 } else { 0.0 };
    let depth = (0..width * height).map(|i| near_m + step * (i % width) as f64).collect();
    DepthMap::new(width, height, depth).expect("positive depths")
}

/// Adds zero-mean Gaussian noise. Samples are not clamped.
pub fn add_gaussian_noise(image: &Image, sigma: f64, seed: u64) -> Image {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("valid sigma");
    image
        .clone()
        .map(|v| v + normal.sample(&mut rng))
        .expect("finite samples")
}

/// Per-pixel standard deviation of luminance over a `(2r+1)²` window.
pub fn local_contrast(image: &Image, radius: usize) -> Vec<f64> {
    let (w, h) = image.dims();
    let lum = image.luminance();
    let r = radius as isize;
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let (mut s, mut s2, mut n) = (0.0, 0.0, 0.0);
            for dy in -r..=r {
                for dx in -r..=r {
                    let sx = Boundary::Reflect.index(x + dx, w).unwrap();
                    let sy = Boundary::Reflect.index(y + dy, h).unwrap();
                    let v = lum[sy * w + sx];
                    s += v;
                    s2 += v * v;
                    n += 1.0;
                }
            }
            let mean = s / n;
            out.push((s2 / n - mean * mean).max(0.0).sqrt());
        }
    }
    out
}

/// Pixels whose local contrast exceeds `threshold`.
pub fn high_contrast_mask(image: &Image, radius: usize, threshold: f64) -> Vec<bool> {
    local_contrast(image, radius).into_iter().map(|c| c > threshold).collect()
}

/// Variance of the 4-neighbour Laplacian of luminance (focus measure).
pub fn laplacian_variance(image: &Image) -> f64 {
    let (w, h) = image.dims();
    let lum = image.luminance();
    if w < 3 || h < 3 {
        return 0.0;
    }
    let mut vals = Vec::with_capacity((w - 2) * (h - 2));
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let c = lum[y * w + x];
            vals.push(lum[y * w + x - 1] + lum[y * w + x + 1] + lum[(y - 1) * w + x] + lum[(y + 1) * w + x] - 4.0 * c);
        }
    }
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / vals.len() as f64
}

/// Peak signal-to-noise ratio in dB for unit-range images.
pub fn psnr(a: &Image, b: &Image) -> f64 {
    let mse = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        / a.data().len() as f64;
    10.0 * (1.0 / mse).log10()
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}
