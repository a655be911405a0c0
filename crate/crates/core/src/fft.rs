//! Row-column 2D FFT on top of `rustfft`.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Planned forward and inverse transforms for a `width × height` grid. The
/// plan is immutable and may be shared across threads.
#[derive(Clone)]
pub struct Fft2 {
    width: usize,
    height: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(width: usize, height: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft2 {
            width,
            height,
            row_fwd: planner.plan_fft_forward(width),
            row_inv: planner.plan_fft_inverse(width),
            col_fwd: planner.plan_fft_forward(height),
            col_inv: planner.plan_fft_inverse(height),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        self.run(buf, &self.row_fwd, &self.col_fwd);
    }

    /// Inverse transform including the `1/(w·h)` normalization.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.run(buf, &self.row_inv, &self.col_inv);
        let scale = 1.0 / self.len() as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    fn run(&self, buf: &mut [Complex64], rows: &Arc<dyn Fft<f64>>, cols: &Arc<dyn Fft<f64>>) {
        assert_eq!(buf.len(), self.len(), "buffer does not match FFT plan");
        let (w, h) = (self.width, self.height);
        rows.process(buf);
        let mut t = vec![Complex64::default(); w * h];
        transpose(buf, &mut t, w, h);
        cols.process(&mut t);
        transpose(&t, buf, h, w);
    }

    /// Spectrum of a real plane.
    pub fn forward_real(&self, plane: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = plane.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut buf);
        buf
    }
}

/// `src` is `w` wide and `h` tall; `dst` becomes `h` wide and `w` tall.
fn transpose(src: &[Complex64], dst: &mut [Complex64], w: usize, h: usize) {
    const BLOCK: usize = 16;
    for by in (0..h).step_by(BLOCK) {
        for bx in (0..w).step_by(BLOCK) {
            for y in by..(by + BLOCK).min(h) {
                for x in bx..(bx + BLOCK).min(w) {
                    dst[x * h + y] = src[y * w + x];
                }
            }
        }
    }
}

/// Places a centered `side × side` kernel on a `w × h` grid with its center
/// at the origin (wrapping negative offsets).
pub(crate) fn embed_centered(kernel: &[f64], side: usize, w: usize, h: usize) -> Vec<Complex64> {
    let half = (side / 2) as isize;
    let mut buf = vec![Complex64::default(); w * h];
    for j in 0..side {
        for i in 0..side {
            let x = (i as isize - half).rem_euclid(w as isize) as usize;
            let y = (j as isize - half).rem_euclid(h as isize) as usize;
            buf[y * w + x] += Complex64::new(kernel[j * side + i], 0.0);
        }
    }
    buf
}
