//! Plane-sweep cost volume over a focal stack.
//!
//! For every hypothesized depth `d`, each stack image `I_i` is deblurred with
//! the disk PSF it would exhibit if the scene were at `d`. Under the correct
//! hypothesis all deblurred images agree with the latent sharp image; under a
//! wrong one they disagree (and ringing appears), so the spread of the
//! deblurred samples scores the hypothesis. The raw score is the sum over
//! color channels of a Gaussian-weighted pooled standard deviation, which is
//! then squashed by `tanh(a·x)` and optionally min-max normalized per pixel.

use rustfft::num_complex::Complex64;

use crate::deconvolve::{default_margin, WienerHunt, DEFAULT_REG_WEIGHT};
use crate::error::{Error, Result};
use crate::psf::{make_disk_psf, Psf};
use crate::render::FocalStack;

/// Swept plane depths, strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthHypotheses {
    depths_m: Vec<f64>,
}

pub const DEFAULT_DEPTH_MIN_M: f64 = 0.1;
pub const DEFAULT_DEPTH_MAX_M: f64 = 3.0;
pub const DEFAULT_DEPTH_SAMPLES: usize = 64;

impl DepthHypotheses {
    pub fn new(depths_m: Vec<f64>) -> Result<Self> {
        if depths_m.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 depth hypotheses, got {}",
                depths_m.len()
            )));
        }
        if depths_m.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(Error::InvalidParameter("depth hypotheses must be positive and finite".into()));
        }
        if depths_m.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("depth hypotheses must be strictly increasing".into()));
        }
        Ok(DepthHypotheses { depths_m })
    }

    /// `count` evenly spaced depths from `min_m` to `max_m` inclusive.
    pub fn uniform(min_m: f64, max_m: f64, count: usize) -> Result<Self> {
        if count < 2 || !(min_m < max_m) {
            return Err(Error::InvalidParameter(format!(
                "invalid hypothesis range {min_m}..{max_m} with {count} samples"
            )));
        }
        let step = (max_m - min_m) / (count - 1) as f64;
        let mut depths: Vec<f64> = (0..count).map(|k| min_m + step * k as f64).collect();
        depths[count - 1] = max_m;
        Self::new(depths)
    }

    pub fn depths(&self) -> &[f64] {
        &self.depths_m
    }

    pub fn len(&self) -> usize {
        self.depths_m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths_m.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.depths_m[0]
    }

    pub fn last(&self) -> f64 {
        self.depths_m[self.depths_m.len() - 1]
    }

    /// Mean spacing between consecutive hypotheses.
    pub fn bin_width(&self) -> f64 {
        (self.last() - self.first()) / (self.len() - 1) as f64
    }

    /// Index of the hypothesis nearest to `depth_m` (the smaller on ties).
    pub fn nearest_index(&self, depth_m: f64) -> usize {
        let mut best = 0;
        for (k, &d) in self.depths_m.iter().enumerate() {
            if (d - depth_m).abs() < (self.depths_m[best] - depth_m).abs() {
                best = k;
            }
        }
        best
    }

    pub fn scaled(&self, sigma: f64) -> Result<Self> {
        Self::new(self.depths_m.iter().map(|d| d * sigma).collect())
    }
}

impl Default for DepthHypotheses {
    fn default() -> Self {
        Self::uniform(DEFAULT_DEPTH_MIN_M, DEFAULT_DEPTH_MAX_M, DEFAULT_DEPTH_SAMPLES).expect("valid defaults")
    }
}

/// How squashed profiles are rescaled per pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `(c - min) / (max - min)`.
    #[default]
    MinMax,
    /// `c / Σ c`.
    Sum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    pub window_radius: usize,
    pub gaussian_sigma: f64,
    pub c_max: f64,
    pub f1: f64,
    pub reg_weight: f64,
    pub squash: bool,
    pub normalize: bool,
    pub normalization: Normalization,
}

impl Default for CostParams {
    fn default() -> Self {
        CostParams {
            window_radius: 2,
            gaussian_sigma: 1.0,
            c_max: 0.3,
            f1: 0.999,
            reg_weight: DEFAULT_REG_WEIGHT,
            squash: true,
            normalize: true,
            normalization: Normalization::MinMax,
        }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gaussian_sigma.is_finite() && self.gaussian_sigma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gaussian sigma must be positive, got {}",
                self.gaussian_sigma
            )));
        }
        squash_slope(self.c_max, self.f1)?;
        if !(self.reg_weight.is_finite() && self.reg_weight > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "regularization weight must be positive, got {}",
                self.reg_weight
            )));
        }
        Ok(())
    }
}

/// Slope `a` of the squashing function: `tanh(a·c_max) = f1`.
pub fn squash_slope(c_max: f64, f1: f64) -> Result<f64> {
    if !(f1 > 0.0 && f1 < 1.0) {
        return Err(Error::InvalidParameter(format!("f1 must lie in (0, 1), got {f1}")));
    }
    if !(c_max.is_finite() && c_max > 0.0) {
        return Err(Error::InvalidParameter(format!("c_max must be positive, got {c_max}")));
    }
    Ok(((1.0 + f1) / (1.0 - f1)).ln() / (2.0 * c_max))
}

/// Bounds a nonnegative cost to `[0, 1)`; reaches `f1` at `c_max`.
pub fn squash_outliers(cost: f64, c_max: f64, f1: f64) -> Result<f64> {
    let a = squash_slope(c_max, f1)?;
    if !(cost >= 0.0) {
        return Err(Error::Domain(format!("cost must be nonnegative, got {cost}")));
    }
    Ok((a * cost).tanh())
}

/// `width × height × D` costs stored as `D` contiguous row-major slices.
#[derive(Debug, Clone, PartialEq)]
pub struct CostVolume {
    width: usize,
    height: usize,
    hypotheses: DepthHypotheses,
    costs: Vec<f64>,
    squashed: bool,
    normalized: bool,
    c_max: f64,
    f1: f64,
}

/// Normalized value written for pixels whose profile carries no information.
pub const FLAT_PROFILE_SENTINEL: f64 = 0.5;

const FLAT_PROFILE_EPS: f64 = 1e-12;

impl CostVolume {
    /// Raw (unsquashed, unnormalized) volume from per-hypothesis slices.
    pub fn from_slices(width: usize, height: usize, hypotheses: DepthHypotheses, slices: Vec<Vec<f64>>) -> Result<Self> {
        if slices.len() != hypotheses.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} slices for {} hypotheses",
                slices.len(),
                hypotheses.len()
            )));
        }
        if slices.iter().any(|s| s.len() != width * height) {
            return Err(Error::DimensionMismatch(format!("slices must hold {width}x{height} costs")));
        }
        Ok(CostVolume {
            width,
            height,
            hypotheses,
            costs: slices.concat(),
            squashed: false,
            normalized: false,
            c_max: CostParams::default().c_max,
            f1: CostParams::default().f1,
        })
    }

    pub(crate) fn from_parts(
        width: usize,
        height: usize,
        hypotheses: DepthHypotheses,
        costs: Vec<f64>,
        squashed: bool,
        normalized: bool,
        c_max: f64,
        f1: f64,
    ) -> Result<Self> {
        if width == 0 || height == 0 || costs.len() != width * height * hypotheses.len() {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height}x{} volume cannot hold {} costs",
                hypotheses.len(),
                costs.len()
            )));
        }
        Ok(CostVolume {
            width,
            height,
            hypotheses,
            costs,
            squashed,
            normalized,
            c_max,
            f1,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn depth_count(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn hypotheses(&self) -> &DepthHypotheses {
        &self.hypotheses
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn is_squashed(&self) -> bool {
        self.squashed
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn c_max(&self) -> f64 {
        self.c_max
    }

    pub fn f1(&self) -> f64 {
        self.f1
    }

    pub fn slice(&self, k: usize) -> &[f64] {
        let n = self.width * self.height;
        &self.costs[k * n..(k + 1) * n]
    }

    pub fn get(&self, x: usize, y: usize, k: usize) -> f64 {
        self.costs[k * self.width * self.height + y * self.width + x]
    }

    /// Costs of pixel `(x, y)` across all hypotheses.
    pub fn profile(&self, x: usize, y: usize) -> Vec<f64> {
        self.profile_at(y * self.width + x)
    }

    pub(crate) fn profile_at(&self, pixel: usize) -> Vec<f64> {
        let n = self.width * self.height;
        (0..self.depth_count()).map(|k| self.costs[k * n + pixel]).collect()
    }

    /// Applies the squashing function to every cost.
    pub fn squashed(mut self, c_max: f64, f1: f64) -> Result<Self> {
        let a = squash_slope(c_max, f1)?;
        for c in &mut self.costs {
            *c = (a * c.max(0.0)).tanh();
        }
        self.squashed = true;
        self.c_max = c_max;
        self.f1 = f1;
        Ok(self)
    }

    pub(crate) fn map_slices(mut self, f: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        let n = self.width * self.height;
        let mut out = Vec::with_capacity(self.costs.len());
        for s in self.costs.chunks_exact(n) {
            out.extend(f(s));
        }
        self.costs = out;
        self
    }
}

/// Per-pixel rescaling of each profile into `[0, 1]` with [`Normalization::MinMax`].
pub fn normalize_per_pixel(volume: CostVolume) -> CostVolume {
    normalize_per_pixel_with(volume, Normalization::MinMax)
}

pub fn normalize_per_pixel_with(mut volume: CostVolume, mode: Normalization) -> CostVolume {
    let n = volume.width * volume.height;
    let depth = volume.depth_count();
    for p in 0..n {
        let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for k in 0..depth {
            let c = volume.costs[k * n + p];
            lo = lo.min(c);
            hi = hi.max(c);
            sum += c;
        }
        let flat = hi - lo < FLAT_PROFILE_EPS;
        for k in 0..depth {
            let c = &mut volume.costs[k * n + p];
            *c = match (flat, mode) {
                (true, _) => FLAT_PROFILE_SENTINEL,
                (false, Normalization::MinMax) => (*c - lo) / (hi - lo),
                (false, Normalization::Sum) => *c / sum,
            };
        }
    }
    volume.normalized = true;
    volume
}

/// Precomputed state shared by all slices of one sweep: stack spectra and
/// the deconvolution plan. Read-only once built.
pub struct SweepContext<'a> {
    stack: &'a FocalStack,
    params: CostParams,
    plan: WienerHunt,
    /// `[image][channel]`
    spectra: Vec<Vec<Vec<Complex64>>>,
    window: Vec<f64>,
}

impl<'a> SweepContext<'a> {
    /// Sizes the deconvolution padding for the largest kernel any of
    /// `hypotheses` requires.
    pub fn new(stack: &'a FocalStack, hypotheses: &[f64], params: &CostParams) -> Result<Self> {
        params.validate()?;
        let mut max_half = 0;
        for &d in hypotheses {
            for i in 0..stack.len() {
                max_half = max_half.max(make_disk_psf(stack.settings_for(i).coc_diameter_px(d)?).half());
            }
        }
        let (w, h) = stack.dims();
        let plan = WienerHunt::new(w, h, default_margin(max_half), params.reg_weight)?;
        let spectra = stack
            .images()
            .iter()
            .map(|img| img.planes().map(|p| plan.plane_spectrum(p)).collect())
            .collect();
        Ok(SweepContext {
            stack,
            params: *params,
            plan,
            spectra,
            window: gaussian_weights_1d(params.window_radius, params.gaussian_sigma),
        })
    }

    pub fn stack(&self) -> &FocalStack {
        self.stack
    }

    /// Deblurred planes `[image][channel]` under hypothesis `depth_m`.
    pub fn deblurred(&self, depth_m: f64) -> Result<Vec<Vec<Vec<f64>>>> {
        let mut out = Vec::with_capacity(self.stack.len());
        for (i, img) in self.stack.images().iter().enumerate() {
            let psf = make_disk_psf(self.stack.settings_for(i).coc_diameter_px(depth_m)?);
            out.push(self.deblur_image(i, img.planes(), &psf));
        }
        Ok(out)
    }

    fn deblur_image<'p>(&self, i: usize, planes: impl Iterator<Item = &'p [f64]>, psf: &Psf) -> Vec<Vec<f64>> {
        if psf.is_identity() {
            return planes.map(<[f64]>::to_vec).collect();
        }
        let kspec = self.plan.kernel_spectrum(psf);
        self.spectra[i].iter().map(|y| self.plan.restore(y, &kspec)).collect()
    }

    /// Raw cost slice for hypothesis `depth_m`.
    pub fn slice(&self, depth_m: f64) -> Result<Vec<f64>> {
        let deblurred = self.deblurred(depth_m)?;
        let (w, h) = self.stack.dims();
        let f = deblurred.len() as f64;
        let mut cost = vec![0.0; w * h];
        for ch in 0..self.stack.channels() {
            // per-pixel variance across the stack, shifted by the
            // first capture so identical captures give exactly zero
            let base = &deblurred[0][ch];
            let mut shift_sum = vec![0.0; w * h];
            let mut shift_sq = vec![0.0; w * h];
            for img in &deblurred[1..] {
                for (p, v) in img[ch].iter().enumerate() {
                    let d = v - base[p];
                    shift_sum[p] += d;
                    shift_sq[p] += d * d;
                }
            }
            let var: Vec<f64> = shift_sum
                .iter()
                .zip(&shift_sq)
                .map(|(s, q)| {
                    let m = s / f;
                    (q / f - m * m).max(0.0)
                })
                .collect();
            // Gaussian-weighted pooling of the across-stack spread over
            // the window; the spatial variation of the scene itself is
            // left out
            let pooled = if self.params.window_radius == 0 {
                var
            } else {
                separable_smooth(&var, w, h, &self.window)
            };
            for (c, v) in cost.iter_mut().zip(pooled) {
                *c += v.max(0.0).sqrt();
            }
        }
        Ok(cost)
    }
}

/// Normalized 1D Gaussian taps; the 2D window is their outer product.
pub(crate) fn gaussian_weights_1d(radius: usize, sigma: f64) -> Vec<f64> {
    let taps: Vec<f64> = (-(radius as isize)..=radius as isize)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.into_iter().map(|t| t / sum).collect()
}

fn reflect(i: isize, n: usize) -> usize {
    crate::convolve::Boundary::Reflect.index(i, n).unwrap()
}

pub(crate) fn separable_smooth(src: &[f64], w: usize, h: usize, taps: &[f64]) -> Vec<f64> {
    let r = (taps.len() / 2) as isize;
    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for x in 0..w as isize {
            tmp[y * w + x as usize] = taps
                .iter()
                .enumerate()
                .map(|(i, t)| t * row[reflect(x + i as isize - r, w)])
                .sum();
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h as isize {
        for x in 0..w {
            out[y as usize * w + x] = taps
                .iter()
                .enumerate()
                .map(|(j, t)| t * tmp[reflect(y + j as isize - r, h) * w + x])
                .sum();
        }
    }
    out
}

/// Raw cost of one hypothesis, sized for that hypothesis alone.
pub fn raw_cost_slice(stack: &FocalStack, hypothesis_depth_m: f64, params: &CostParams) -> Result<Vec<f64>> {
    SweepContext::new(stack, &[hypothesis_depth_m], params)?.slice(hypothesis_depth_m)
}

/// Builds the full volume on the ambient thread pool.
pub fn build_cost_volume(stack: &FocalStack, hypotheses: &DepthHypotheses, params: &CostParams) -> Result<CostVolume> {
    let ctx = SweepContext::new(stack, hypotheses.depths(), params)?;
    let slices = compute_slices(&ctx, hypotheses.depths())?;
    finish_volume(stack, hypotheses, params, slices)
}

/// Builds the full volume on a dedicated pool of `threads` workers. The
/// result does not depend on the thread count.
pub fn build_cost_volume_with_threads(
    stack: &FocalStack,
    hypotheses: &DepthHypotheses,
    params: &CostParams,
    threads: usize,
) -> Result<CostVolume> {
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot build thread pool: {e}")))?;
        pool.install(|| build_cost_volume(stack, hypotheses, params))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        build_cost_volume(stack, hypotheses, params)
    }
}

/// Squashes and normalizes raw slices according to `params`.
pub fn finish_volume(
    stack: &FocalStack,
    hypotheses: &DepthHypotheses,
    params: &CostParams,
    slices: Vec<Vec<f64>>,
) -> Result<CostVolume> {
    let (w, h) = stack.dims();
    let mut volume = CostVolume::from_slices(w, h, hypotheses.clone(), slices)?;
    if params.squash {
        volume = volume.squashed(params.c_max, params.f1)?;
    }
    if params.normalize {
        volume = normalize_per_pixel_with(volume, params.normalization);
    }
    Ok(volume)
}

#[cfg(feature = "parallel")]
fn compute_slices(ctx: &SweepContext<'_>, depths: &[f64]) -> Result<Vec<Vec<f64>>> {
    use rayon::prelude::*;
    depths.par_iter().map(|&d| ctx.slice(d)).collect()
}

#[cfg(not(feature = "parallel"))]
fn compute_slices(ctx: &SweepContext<'_>, depths: &[f64]) -> Result<Vec<Vec<f64>>> {
    depths.iter().map(|&d| ctx.slice(d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::camera::presets::{defocusnet, DEFOCUSNET_FOCUS_DISTANCES};
    use crate::image::Image;
    use crate::render::render_focal_stack;
    use crate::scene::{plane_depth, textured_image};

    #[test]
    fn default_hypotheses() {
        let h = DepthHypotheses::default();
        assert_eq!(h.len(), 64);
        assert_eq!(h.first(), 0.1);
        assert_eq!(h.last(), 3.0);
        assert!((h.bin_width() - 2.9 / 63.0).abs() < 1e-15);
        assert!((h.depths()[1] - h.depths()[0] - 2.9 / 63.0).abs() < 1e-12);
        assert_eq!(h.nearest_index(0.6), 11);
        assert!(DepthHypotheses::new(vec![1.0]).is_err());
        assert!(DepthHypotheses::new(vec![1.0, 1.0]).is_err());
        assert!(DepthHypotheses::uniform(2.0, 1.0, 4).is_err());
    }

    #[test]
    fn squash_values() {
        let a = squash_slope(0.3, 0.999).unwrap();
        assert!((a - 12.667_337_224_167_333).abs() < 1e-9);
        assert_eq!(squash_outliers(0.0, 0.3, 0.999).unwrap(), 0.0);
        assert!((squash_outliers(0.3, 0.3, 0.999).unwrap() - 0.999).abs() < 1e-12);
        assert!(squash_outliers(1.0, 0.3, 1.0).is_err());
        assert!(squash_outliers(1.0, 0.3, 0.0).is_err());
        assert!(squash_outliers(-0.1, 0.3, 0.5).is_err());
    }

    fn volume_of(profiles: &[&[f64]]) -> CostVolume {
        let d = profiles[0].len();
        let slices = (0..d).map(|k| profiles.iter().map(|p| p[k]).collect()).collect();
        let hyps = DepthHypotheses::uniform(1.0, d as f64, d).unwrap();
        CostVolume::from_slices(profiles.len(), 1, hyps, slices).unwrap()
    }

    #[test]
    fn min_max_normalization() {
        let v = normalize_per_pixel(volume_of(&[&[0.2, 0.4, 0.6], &[0.3, 0.3, 0.3]]));
        let p = v.profile(0, 0);
        for (a, b) in p.iter().zip([0.0, 0.5, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(v.profile(1, 0), vec![0.5; 3]);
        assert!(v.is_normalized());
    }

    #[test]
    fn sum_normalization() {
        let v = normalize_per_pixel_with(volume_of(&[&[1.0, 1.0, 2.0]]), Normalization::Sum);
        assert_eq!(v.profile(0, 0), vec![0.25, 0.25, 0.5]);
    }

    #[test]
    fn identical_images_give_zero_cost() {
        let img = textured_image(16, 16, 3, 4);
        let s = defocusnet(0.3);
        let stack = FocalStack::new(vec![img.clone(), img.clone(), img], vec![0.5, 0.6, 0.7], s).unwrap();
        // sub-pixel CoC for every capture at this depth
        let params = CostParams {
            window_radius: 0,
            ..CostParams::default()
        };
        let slice = raw_cost_slice(&stack, 0.6, &params).unwrap();
        assert!(slice.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn zero_radius_is_pixelwise_std() {
        let a = Image::new(2, 1, 1, vec![0.2, 0.5]).unwrap();
        let b = Image::new(2, 1, 1, vec![0.4, 0.5]).unwrap();
        let stack = FocalStack::new(vec![a, b], vec![0.55, 0.65], defocusnet(0.3)).unwrap();
        let params = CostParams {
            window_radius: 0,
            ..CostParams::default()
        };
        let slice = raw_cost_slice(&stack, 0.6, &params).unwrap();
        assert!((slice[0] - 0.1).abs() < 1e-15);
        assert_eq!(slice[1], 0.0);
    }

    #[test]
    fn window_weights_are_normalized() {
        let t = gaussian_weights_1d(2, 1.0);
        assert_eq!(t.len(), 5);
        assert!((t.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(gaussian_weights_1d(0, 1.0), vec![1.0]);
    }

    #[test]
    fn two_slice_volume_is_composition() {
        let img = textured_image(20, 20, 3, 8);
        let s = defocusnet(0.3);
        let stack = render_focal_stack(&img, &plane_depth(20, 20, 0.5), &s, &DEFOCUSNET_FOCUS_DISTANCES).unwrap();
        let hyps = DepthHypotheses::new(vec![0.4, 0.5]).unwrap();
        let params = CostParams::default();
        let volume = build_cost_volume(&stack, &hyps, &params).unwrap();
        let ctx = SweepContext::new(&stack, hyps.depths(), &params).unwrap();
        let manual = normalize_per_pixel(
            CostVolume::from_slices(20, 20, hyps.clone(), vec![ctx.slice(0.4).unwrap(), ctx.slice(0.5).unwrap()])
                .unwrap()
                .squashed(0.3, 0.999)
                .unwrap(),
        );
        assert_eq!(volume.costs(), manual.costs());
        // standalone slices differ only through the padding size
        let alone = raw_cost_slice(&stack, 0.4, &params).unwrap();
        for (a, b) in alone.iter().zip(ctx.slice(0.4).unwrap()) {
            assert!((a - b).abs() < 1e-3);
        }
    }

    #[test]
    fn rejects_bad_hypothesis() {
        let img = textured_image(8, 8, 1, 1);
        let stack = FocalStack::new(vec![img.clone(), img], vec![0.1, 0.3], defocusnet(0.3)).unwrap();
        assert!(raw_cost_slice(&stack, 0.001, &CostParams::default()).is_err());
        let bad = CostParams {
            f1: 1.5,
            ..CostParams::default()
        };
        assert!(raw_cost_slice(&stack, 0.5, &bad).is_err());
    }
}
