//! Disk point spread functions.

use std::f64::consts::PI;

/// Square, odd-sized, normalized blur kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct Psf {
    radius_px: f64,
    side: usize,
    kernel: Vec<f64>,
}

impl Psf {
    pub fn identity() -> Self {
        Psf {
            radius_px: 0.0,
            side: 1,
            kernel: vec![1.0],
        }
    }

    /// Wraps an arbitrary kernel, normalizing it to unit sum. Returns `None`
    /// for even sides, negative weights or a zero sum.
    pub fn from_kernel(side: usize, kernel: Vec<f64>) -> Option<Self> {
        if side.is_multiple_of(2) || kernel.len() != side * side {
            return None;
        }
        if kernel.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return None;
        }
        let sum: f64 = kernel.iter().sum();
        if sum <= 0.0 {
            return None;
        }
        Some(Psf {
            radius_px: (side / 2) as f64,
            side,
            kernel: kernel.into_iter().map(|v| v / sum).collect(),
        })
    }

    pub fn radius_px(&self) -> f64 {
        self.radius_px
    }

    pub fn side(&self) -> usize {
        self.side
    }

    /// Half side length in whole pixels.
    pub fn half(&self) -> usize {
        self.side / 2
    }

    /// Row-major weights.
    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }

    pub fn weight(&self, dx: isize, dy: isize) -> f64 {
        let h = self.half() as isize;
        if dx.abs() > h || dy.abs() > h {
            return 0.0;
        }
        self.kernel[((dy + h) as usize) * self.side + (dx + h) as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.side == 1
    }
}

/// Uniform disk of diameter `coc_diameter_px`, rasterized with exact
/// pixel-area coverage on the rim. Diameters below one pixel give the
/// identity kernel.
pub fn make_disk_psf(coc_diameter_px: f64) -> Psf {
    if !(coc_diameter_px >= 1.0) || !coc_diameter_px.is_finite() {
        return Psf::identity();
    }
    let r = 0.5 * coc_diameter_px;
    let half = r.ceil() as usize;
    let side = 2 * half + 1;
    let mut kernel = Vec::with_capacity(side * side);
    for j in 0..side {
        let y = j as f64 - half as f64;
        for i in 0..side {
            let x = i as f64 - half as f64;
            kernel.push(disk_cell_overlap(r, x - 0.5, x + 0.5, y - 0.5, y + 0.5));
        }
    }
    let sum: f64 = kernel.iter().sum();
    debug_assert!((sum - PI * r * r).abs() < 1e-9 * sum.max(1.0));
    for v in &mut kernel {
        *v /= sum;
    }
    Psf {
        radius_px: r,
        side,
        kernel,
    }
}

/// Area of the intersection of the origin-centered disk of radius `r` with
/// the rectangle `[x0, x1] × [y0, y1]`.
pub(crate) fn disk_cell_overlap(r: f64, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let a = x0.max(-r);
    let b = x1.min(r);
    if a >= b || y0 >= y1 {
        return 0.0;
    }
    let h = |x: f64| (r * r - x * x).max(0.0).sqrt();
    // antiderivative of h
    let g = |x: f64| 0.5 * (x * h(x) + r * r * (x / r).clamp(-1.0, 1.0).asin());

    let mut cuts = vec![a, b];
    for y in [y0, y1] {
        if y.abs() < r {
            let xc = h(y);
            cuts.extend([-xc, xc].into_iter().filter(|&x| x > a && x < b));
        }
    }
    cuts.sort_by(f64::total_cmp);

    let mut area = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let hm = h(0.5 * (lo + hi));
        if y1.min(hm) - y0.max(-hm) <= 0.0 {
            continue;
        }
        let int_h = g(hi) - g(lo);
        let upper = if y1 < hm { y1 * (hi - lo) } else { int_h };
        let lower = if y0 > -hm { y0 * (hi - lo) } else { -int_h };
        area += upper - lower;
    }
    area
}
