//! Forward focal-stack rendering by depth layering.

use std::collections::BTreeMap;

use crate::camera::CameraSettings;
use crate::convolve::{convolve, Boundary};
use crate::error::{Error, Result};
use crate::image::{DepthMap, Image};
use crate::psf::make_disk_psf;
use crate::scene::add_gaussian_noise;

/// Images of one scene captured at different focus distances.
#[derive(Debug, Clone, PartialEq)]
pub struct FocalStack {
    images: Vec<Image>,
    focus_distances_m: Vec<f64>,
    settings: CameraSettings,
}

impl FocalStack {
    /// `settings` carries the lens parameters; its own focus distance is
    /// ignored in favour of `focus_distances_m`.
    pub fn new(images: Vec<Image>, focus_distances_m: Vec<f64>, settings: CameraSettings) -> Result<Self> {
        settings.validate()?;
        if images.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "a focal stack needs at least 2 images, got {}",
                images.len()
            )));
        }
        if images.len() != focus_distances_m.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} images but {} focus distances",
                images.len(),
                focus_distances_m.len()
            )));
        }
        if let Some(img) = images.iter().find(|img| !img.same_shape(&images[0])) {
            return Err(Error::DimensionMismatch(format!(
                "stack image {}x{}x{} differs from {}x{}x{}",
                img.width(),
                img.height(),
                img.channels(),
                images[0].width(),
                images[0].height(),
                images[0].channels()
            )));
        }
        for &d in &focus_distances_m {
            settings.with_focus_distance(d)?;
        }
        if focus_distances_m.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "focus distances must be strictly increasing".into(),
            ));
        }
        Ok(FocalStack {
            images,
            focus_distances_m,
            settings,
        })
    }

    pub fn images(&self) -> &[Image] {
        &self.images
    }

    pub fn focus_distances(&self) -> &[f64] {
        &self.focus_distances_m
    }

    pub fn settings(&self) -> &CameraSettings {
        &self.settings
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.images[0].dims()
    }

    pub fn channels(&self) -> usize {
        self.images[0].channels()
    }

    /// Settings of the `i`-th capture.
    pub fn settings_for(&self, i: usize) -> CameraSettings {
        CameraSettings {
            focus_distance_m: self.focus_distances_m[i],
            ..self.settings
        }
    }

    /// Same pixels, re-described with different settings and focus distances.
    pub fn with_settings(&self, settings: CameraSettings, focus_distances_m: Vec<f64>) -> Result<Self> {
        Self::new(self.images.clone(), focus_distances_m, settings)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// Layer boundaries sit halfway between `origin + k·step`.
    pub layer_origin_m: f64,
    pub layer_step_m: f64,
    /// Standard deviation of additive Gaussian noise; `None` renders clean.
    pub noise_sigma: Option<f64>,
    pub noise_seed: u64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            layer_origin_m: 0.1,
            layer_step_m: 2.9 / 63.0,
            noise_sigma: None,
            noise_seed: 0,
        }
    }
}

pub fn render_focal_stack(
    all_in_focus: &Image,
    depth: &DepthMap,
    settings: &CameraSettings,
    focus_distances_m: &[f64],
) -> Result<FocalStack> {
    render_focal_stack_with(all_in_focus, depth, settings, focus_distances_m, &RenderOptions::default())
}

/// Splits the scene into depth layers, blurs each layer with the disk PSF of
/// its mean depth and composites far-to-near with normalized alpha. Invalid
/// depth pixels are not allowed.
pub fn render_focal_stack_with(
    all_in_focus: &Image,
    depth: &DepthMap,
    settings: &CameraSettings,
    focus_distances_m: &[f64],
    options: &RenderOptions,
) -> Result<FocalStack> {
    if all_in_focus.dims() != depth.dims() {
        return Err(Error::DimensionMismatch(format!(
            "image is {}x{}, depth map is {}x{}",
            all_in_focus.width(),
            all_in_focus.height(),
            depth.width(),
            depth.height()
        )));
    }
    if !(options.layer_step_m.is_finite() && options.layer_step_m > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "layer step must be positive, got {}",
            options.layer_step_m
        )));
    }
    settings.validate()?;
    for (i, (&d, &valid)) in depth.depths().iter().zip(depth.mask()).enumerate() {
        if !valid || d <= settings.focal_length_m {
            return Err(Error::Domain(format!(
                "pixel {i} has unusable depth {d} (focal length {})",
                settings.focal_length_m
            )));
        }
    }

    let layers = build_layers(depth, options);
    let (w, h) = all_in_focus.dims();
    let channels = all_in_focus.channels();

    let mut images = Vec::with_capacity(focus_distances_m.len());
    for (i, &df) in focus_distances_m.iter().enumerate() {
        let s = settings.with_focus_distance(df)?;
        let mut color = vec![0.0; w * h * channels];
        let mut alpha = vec![0.0; w * h];
        for layer in &layers {
            let psf = make_disk_psf(s.coc_diameter_px(layer.depth_m)?);
            let masked = Image::new(
                w,
                h,
                channels,
                all_in_focus
                    .data()
                    .iter()
                    .enumerate()
                    .map(|(k, v)| if layer.mask[k % (w * h)] { *v } else { 0.0 })
                    .collect(),
            )?;
            let mask = Image::new(w, h, 1, layer.mask.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect())?;
            let layer_color = convolve(&masked, &psf, Boundary::Replicate)?;
            let layer_alpha = convolve(&mask, &psf, Boundary::Replicate)?;
            let la = layer_alpha.data();
            for (k, c) in color.iter_mut().enumerate() {
                *c = layer_color.data()[k] + *c * (1.0 - la[k % (w * h)]);
            }
            for (a, &l) in alpha.iter_mut().zip(la) {
                *a = l + *a * (1.0 - l);
            }
        }
        for (k, c) in color.iter_mut().enumerate() {
            let a = alpha[k % (w * h)];
            *c = if a > 1e-12 { *c / a } else { 0.0 };
        }
        let mut img = Image::new(w, h, channels, color)?;
        if let Some(sigma) = options.noise_sigma {
            img = add_gaussian_noise(&img, sigma, options.noise_seed.wrapping_add(i as u64));
        }
        images.push(img);
    }
    FocalStack::new(images, focus_distances_m.to_vec(), *settings)
}

struct Layer {
    depth_m: f64,
    mask: Vec<bool>,
}

/// Layers ordered far to near.
fn build_layers(depth: &DepthMap, options: &RenderOptions) -> Vec<Layer> {
    let mut bins: BTreeMap<i64, (f64, usize)> = BTreeMap::new();
    let bin_of = |d: f64| ((d - options.layer_origin_m) / options.layer_step_m).round() as i64;
    for &d in depth.depths() {
        let e = bins.entry(bin_of(d)).or_insert((0.0, 0));
        e.0 += d;
        e.1 += 1;
    }
    bins.iter()
        .rev()
        .map(|(&bin, &(sum, count))| Layer {
            depth_m: sum / count as f64,
            mask: depth.depths().iter().map(|&d| bin_of(d) == bin).collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::camera::presets::{defocusnet, DEFOCUSNET_FOCUS_DISTANCES};
    use crate::scene::{plane_depth, textured_image, two_plane_depth};

    #[test]
    fn in_focus_plane_is_unchanged() {
        let img = textured_image(24, 24, 3, 1);
        let s = defocusnet(0.3);
        let stack = render_focal_stack(&img, &plane_depth(24, 24, 0.3), &s, &DEFOCUSNET_FOCUS_DISTANCES).unwrap();
        for (a, b) in stack.images()[2].data().iter().zip(img.data()) {
            assert!((a - b).abs() <= 1e-6);
        }
    }

    #[test]
    fn single_plane_reduces_to_convolution() {
        let img = textured_image(24, 20, 3, 2);
        let s = defocusnet(0.3);
        let d = 0.83;
        let stack = render_focal_stack(&img, &plane_depth(24, 20, d), &s, &DEFOCUSNET_FOCUS_DISTANCES).unwrap();
        for (i, &df) in DEFOCUSNET_FOCUS_DISTANCES.iter().enumerate() {
            let c = s.with_focus_distance(df).unwrap().coc_diameter_px(d).unwrap();
            let expect = convolve(&img, &make_disk_psf(c), Boundary::Replicate).unwrap();
            for (a, b) in stack.images()[i].data().iter().zip(expect.data()) {
                assert!((a - b).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn far_plane_away_from_boundary_matches_single_plane() {
        let (w, h) = (48, 24);
        let img = textured_image(w, h, 1, 3);
        let s = defocusnet(0.3);
        let fd = [0.1, 0.3];
        let two = render_focal_stack(&img, &two_plane_depth(w, h, 0.2, 1.2), &s, &fd).unwrap();
        let far = render_focal_stack(&img, &plane_depth(w, h, 1.2), &s, &fd).unwrap();
        for i in 0..2 {
            for y in 0..h {
                for x in w / 2 + 8..w {
                    let a = two.images()[i].get(x, y, 0);
                    let b = far.images()[i].get(x, y, 0);
                    assert!((a - b).abs() <= 1e-6, "({x},{y}) {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn validation() {
        let img = textured_image(8, 8, 1, 1);
        let s = defocusnet(0.3);
        assert!(render_focal_stack(&img, &plane_depth(8, 7, 0.5), &s, &[0.1, 0.3]).is_err());
        assert!(render_focal_stack(&img, &plane_depth(8, 8, 0.001), &s, &[0.1, 0.3]).is_err());
        assert!(render_focal_stack(&img, &plane_depth(8, 8, 0.5), &s, &[0.3]).is_err());
        assert!(render_focal_stack(&img, &plane_depth(8, 8, 0.5), &s, &[0.3, 0.1]).is_err());
        let holes = DepthMap::new(8, 8, vec![0.0; 64]).unwrap();
        assert!(render_focal_stack(&img, &holes, &s, &[0.1, 0.3]).is_err());
    }
}
