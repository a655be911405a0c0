//! Linear convolution with explicit boundary handling.

use rustfft::num_complex::Complex64;

use crate::error::Result;
use crate::fft::{embed_centered, Fft2};
use crate::image::Image;
use crate::psf::Psf;

/// How samples outside the image are synthesized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Clamp to the nearest edge sample.
    #[default]
    Replicate,
    /// Half-sample symmetric mirror (`... b a | a b c ... x y z | z y ...`).
    Reflect,
    /// Zero outside the image.
    Zero,
}

impl Boundary {
    /// Maps a possibly out-of-range coordinate onto `0..n`.
    pub fn index(self, i: isize, n: usize) -> Option<usize> {
        let n_i = n as isize;
        if (0..n_i).contains(&i) {
            return Some(i as usize);
        }
        match self {
            Boundary::Replicate => Some(i.clamp(0, n_i - 1) as usize),
            Boundary::Reflect => {
                let m = i.rem_euclid(2 * n_i);
                Some(if m < n_i { m } else { 2 * n_i - 1 - m } as usize)
            }
            Boundary::Zero => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConvMethod {
    /// Direct summation for small kernels, FFT otherwise.
    #[default]
    Auto,
    Direct,
    Fft,
}

const DIRECT_MAX_SIDE: usize = 7;

pub fn convolve(image: &Image, psf: &Psf, boundary: Boundary) -> Result<Image> {
    convolve_with(image, psf, boundary, ConvMethod::Auto)
}

pub fn convolve_with(image: &Image, psf: &Psf, boundary: Boundary, method: ConvMethod) -> Result<Image> {
    if psf.is_identity() {
        return Ok(image.clone());
    }
    let use_fft = match method {
        ConvMethod::Auto => psf.side() > DIRECT_MAX_SIDE,
        ConvMethod::Direct => false,
        ConvMethod::Fft => true,
    };
    let (w, h) = image.dims();
    let planes = if use_fft {
        let pad = psf.half();
        let fft = Fft2::new(w + 2 * pad, h + 2 * pad);
        let kspec = {
            let mut k = embed_centered(psf.kernel(), psf.side(), fft.width(), fft.height());
            fft.forward(&mut k);
            k
        };
        image
            .planes()
            .map(|p| convolve_plane_fft(p, w, h, pad, boundary, &fft, &kspec))
            .collect()
    } else {
        image.planes().map(|p| convolve_plane_direct(p, w, h, psf, boundary)).collect()
    };
    Image::from_planes(w, h, planes)
}

pub(crate) fn pad_plane(plane: &[f64], w: usize, h: usize, pad: usize, boundary: Boundary) -> Vec<f64> {
    let (pw, ph) = (w + 2 * pad, h + 2 * pad);
    let mut out = vec![0.0; pw * ph];
    for y in 0..ph {
        let Some(sy) = boundary.index(y as isize - pad as isize, h) else {
            continue;
        };
        for x in 0..pw {
            if let Some(sx) = boundary.index(x as isize - pad as isize, w) {
                out[y * pw + x] = plane[sy * w + sx];
            }
        }
    }
    out
}

fn convolve_plane_fft(
    plane: &[f64],
    w: usize,
    h: usize,
    pad: usize,
    boundary: Boundary,
    fft: &Fft2,
    kspec: &[Complex64],
) -> Vec<f64> {
    let padded = pad_plane(plane, w, h, pad, boundary);
    let mut spec = fft.forward_real(&padded);
    for (s, k) in spec.iter_mut().zip(kspec) {
        *s *= k;
    }
    fft.inverse(&mut spec);
    let pw = fft.width();
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        let row = &spec[(y + pad) * pw + pad..(y + pad) * pw + pad + w];
        out.extend(row.iter().map(|c| c.re));
    }
    out
}

fn convolve_plane_direct(plane: &[f64], w: usize, h: usize, psf: &Psf, boundary: Boundary) -> Vec<f64> {
    let half = psf.half() as isize;
    let mut out = vec![0.0; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = 0.0;
            for dy in -half..=half {
                let Some(sy) = boundary.index(y - dy, h) else {
                    continue;
                };
                for dx in -half..=half {
                    if let Some(sx) = boundary.index(x - dx, w) {
                        acc += psf.weight(dx, dy) * plane[sy * w + sx];
                    }
                }
            }
            out[y as usize * w + x as usize] = acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::psf::make_disk_psf;

    fn random_image(w: usize, h: usize, c: usize, seed: u64) -> Image {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Image::new(w, h, c, (0..w * h * c).map(|_| rng.gen::<f64>()).collect()).unwrap()
    }

    /// Brute-force spatial convolution, written independently of the library
    /// path: explicit clamp-to-edge indexing and a square disk lookup.
    fn brute_force(img: &Image, psf: &Psf) -> Vec<f64> {
        let (w, h) = img.dims();
        let side = psf.side() as isize;
        let half = side / 2;
        let mut out = Vec::new();
        for c in 0..img.channels() {
            for y in 0..h as isize {
                for x in 0..w as isize {
                    let mut s = 0.0;
                    for j in 0..side {
                        for i in 0..side {
                            let sx = (x - (i - half)).clamp(0, w as isize - 1) as usize;
                            let sy = (y - (j - half)).clamp(0, h as isize - 1) as usize;
                            s += psf.kernel()[(j * side + i) as usize] * img.get(sx, sy, c);
                        }
                    }
                    out.push(s);
                }
            }
        }
        out
    }

    #[test]
    fn identity_is_bit_exact() {
        let img = random_image(9, 7, 3, 1);
        for method in [ConvMethod::Auto, ConvMethod::Direct, ConvMethod::Fft] {
            let out = convolve_with(&img, &Psf::identity(), Boundary::Replicate, method).unwrap();
            assert_eq!(out, img);
        }
    }

    #[test]
    fn constant_image_is_preserved() {
        let img = Image::filled(20, 13, 1, 0.37).unwrap();
        for d in [1.5, 4.0, 9.3] {
            for method in [ConvMethod::Direct, ConvMethod::Fft] {
                let out = convolve_with(&img, &make_disk_psf(d), Boundary::Replicate, method).unwrap();
                assert!(out.data().iter().all(|v| (v - 0.37).abs() < 1e-9));
            }
        }
    }

    #[test]
    fn fft_and_direct_match_brute_force() {
        let img = random_image(16, 16, 3, 7);
        let psf = make_disk_psf(4.0);
        assert_eq!(psf.side(), 5);
        let oracle = brute_force(&img, &psf);
        for method in [ConvMethod::Direct, ConvMethod::Fft] {
            let out = convolve_with(&img, &psf, Boundary::Replicate, method).unwrap();
            for (a, b) in out.data().iter().zip(&oracle) {
                assert!((a - b).abs() <= 1e-9, "{method:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn boundary_index_maps() {
        assert_eq!(Boundary::Replicate.index(-3, 4), Some(0));
        assert_eq!(Boundary::Replicate.index(6, 4), Some(3));
        assert_eq!(Boundary::Reflect.index(-1, 4), Some(0));
        assert_eq!(Boundary::Reflect.index(-2, 4), Some(1));
        assert_eq!(Boundary::Reflect.index(4, 4), Some(3));
        assert_eq!(Boundary::Reflect.index(9, 4), Some(1));
        assert_eq!(Boundary::Zero.index(-1, 4), None);
    }

    #[test]
    fn reflect_and_zero_paths_agree() {
        let img = random_image(11, 9, 1, 3);
        let psf = make_disk_psf(5.2);
        for b in [Boundary::Reflect, Boundary::Zero] {
            let d = convolve_with(&img, &psf, b, ConvMethod::Direct).unwrap();
            let f = convolve_with(&img, &psf, b, ConvMethod::Fft).unwrap();
            for (a, c) in d.data().iter().zip(f.data()) {
                assert!((a - c).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn linearity() {
        let a = random_image(16, 12, 1, 11);
        let b = random_image(16, 12, 1, 12);
        let psf = make_disk_psf(6.0);
        let combo = Image::new(
            16,
            12,
            1,
            a.data().iter().zip(b.data()).map(|(x, y)| 0.3 * x - 1.7 * y).collect(),
        )
        .unwrap();
        let ca = convolve(&a, &psf, Boundary::Replicate).unwrap();
        let cb = convolve(&b, &psf, Boundary::Replicate).unwrap();
        let cc = convolve(&combo, &psf, Boundary::Replicate).unwrap();
        for i in 0..cc.data().len() {
            assert!((cc.data()[i] - (0.3 * ca.data()[i] - 1.7 * cb.data()[i])).abs() < 1e-9);
        }
    }
}
