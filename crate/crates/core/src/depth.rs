//! Depth readout from a cost volume.

use crate::cost_volume::{gaussian_weights_1d, separable_smooth, CostVolume};
use crate::error::{Error, Result};
use crate::image::DepthMap;

pub const DEFAULT_TEMPERATURE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Readout {
    HardArgmin,
    SoftArgmin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepthEstimate {
    pub depth: DepthMap,
    /// `1 - min/mean` of each cost profile, clamped to `[0, 1]`; zero for
    /// flat profiles. A heuristic for masking, not a probability.
    pub confidence: Vec<f64>,
    pub method: Readout,
}

struct PixelReadout {
    depth: f64,
    confidence: f64,
}

fn check_volume(volume: &CostVolume) -> Result<()> {
    if volume.depth_count() == 0 || volume.costs().is_empty() {
        return Err(Error::DimensionMismatch("empty cost volume".into()));
    }
    Ok(())
}

fn confidence(profile: &[f64]) -> f64 {
    let (lo, hi) = profile
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| (lo.min(c), hi.max(c)));
    if hi - lo < 1e-12 {
        return 0.0;
    }
    let mean = profile.iter().sum::<f64>() / profile.len() as f64;
    if mean <= 0.0 {
        return 0.0;
    }
    (1.0 - lo / mean).clamp(0.0, 1.0)
}

/// Index of the smallest cost; the first one wins ties.
pub fn argmin_index(profile: &[f64]) -> usize {
    let mut best = 0;
    for (k, &c) in profile.iter().enumerate() {
        if c < profile[best] {
            best = k;
        }
    }
    best
}

fn read_all(volume: &CostVolume, method: Readout, f: impl Fn(&[f64]) -> PixelReadout + Sync) -> Result<DepthEstimate> {
    check_volume(volume)?;
    let n = volume.width() * volume.height();
    #[cfg(feature = "parallel")]
    let per_pixel: Vec<PixelReadout> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(|p| f(&volume.profile_at(p))).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let per_pixel: Vec<PixelReadout> = (0..n).map(|p| f(&volume.profile_at(p))).collect();
    let (depths, confidence): (Vec<f64>, Vec<f64>) = per_pixel.into_iter().map(|r| (r.depth, r.confidence)).unzip();
    Ok(DepthEstimate {
        depth: DepthMap::new(volume.width(), volume.height(), depths)?,
        confidence,
        method,
    })
}

/// Per pixel, the hypothesis with the lowest cost.
pub fn hard_argmin_depth(volume: &CostVolume) -> Result<DepthEstimate> {
    let hyps = volume.hypotheses().depths();
    read_all(volume, Readout::HardArgmin, |profile| PixelReadout {
        depth: hyps[argmin_index(profile)],
        confidence: confidence(profile),
    })
}

/// Per pixel, the softmax(-cost / temperature) weighted mean of hypotheses.
pub fn soft_argmin_depth(volume: &CostVolume, temperature: f64) -> Result<DepthEstimate> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    let hyps = volume.hypotheses().depths();
    let (first, last) = (hyps[0], hyps[hyps.len() - 1]);
    read_all(volume, Readout::SoftArgmin, |profile| {
        let lo = profile.iter().cloned().fold(f64::INFINITY, f64::min);
        let (mut num, mut den) = (0.0, 0.0);
        for (&c, &d) in profile.iter().zip(hyps) {
            let w = (-(c - lo) / temperature).exp();
            num += w * d;
            den += w;
        }
        PixelReadout {
            depth: (num / den).clamp(first, last),
            confidence: confidence(profile),
        }
    })
}

pub fn readout(volume: &CostVolume, method: Readout, temperature: f64) -> Result<DepthEstimate> {
    match method {
        Readout::HardArgmin => hard_argmin_depth(volume),
        Readout::SoftArgmin => soft_argmin_depth(volume, temperature),
    }
}

/// Fixed Gaussian spatial smoothing of every depth slice.
pub fn aggregate_fixed(volume: &CostVolume, radius: usize, sigma: f64) -> Result<CostVolume> {
    if radius == 0 {
        return Ok(volume.clone());
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    let taps = gaussian_weights_1d(radius, sigma);
    let (w, h) = (volume.width(), volume.height());
    Ok(volume.clone().map_slices(|s| separable_smooth(s, w, h, &taps)))
}
