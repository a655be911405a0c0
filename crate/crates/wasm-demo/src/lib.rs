//! Browser bindings: CoC curves, render-and-estimate of a procedural scene,
//! and per-pixel cost profiles. The `Scene*` logic is plain Rust so it can
//! be tested natively; the `#[wasm_bindgen]` items only marshal arrays.

use dff_core::camera::presets::{defocusnet, nyu, DEFOCUSNET_FOCUS_DISTANCES, NYU_FOCUS_DISTANCES};
use dff_core::scene::{plane_depth, ramp_depth, textured_image};
use dff_core::{
    build_cost_volume, hard_argmin_depth, render_focal_stack_with, CameraSettings, CostParams, CostVolume,
    DepthHypotheses, DepthMap, FocalStack, RenderOptions,
};
use wasm_bindgen::prelude::*;

fn camera(preset: &str) -> Result<(CameraSettings, Vec<f64>), String> {
    match preset {
        "defocusnet" => Ok((defocusnet(DEFOCUSNET_FOCUS_DISTANCES[0]), DEFOCUSNET_FOCUS_DISTANCES.to_vec())),
        "nyu" => Ok((nyu(NYU_FOCUS_DISTANCES[0]), NYU_FOCUS_DISTANCES.to_vec())),
        other => Err(format!("unknown camera preset {other:?}")),
    }
}

/// Focus distances of a preset.
#[wasm_bindgen]
pub fn focus_distances(preset: &str) -> Result<Vec<f64>, JsError> {
    Ok(camera(preset).map_err(|e| JsError::new(&e))?.1)
}

/// Row-major `[focus][sample]` CoC diameters in pixels for `samples`
/// depths evenly spaced over `[depth_min, depth_max]`.
pub fn coc_table(preset: &str, depth_min: f64, depth_max: f64, samples: usize) -> Result<Vec<f64>, String> {
    let (settings, distances) = camera(preset)?;
    if samples < 2 || !(depth_min > settings.focal_length_m && depth_min < depth_max) {
        return Err(format!("bad depth range {depth_min}..{depth_max} with {samples} samples"));
    }
    let mut out = Vec::with_capacity(distances.len() * samples);
    for df in distances {
        let s = settings.with_focus_distance(df).map_err(|e| e.to_string())?;
        for k in 0..samples {
            let d = depth_min + (depth_max - depth_min) * k as f64 / (samples - 1) as f64;
            out.push(s.coc_diameter_px(d).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn coc_curves(preset: &str, depth_min: f64, depth_max: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    coc_table(preset, depth_min, depth_max, samples).map_err(|e| JsError::new(&e))
}

/// Scene description accepted by [`Scene::render`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneConfig {
    pub size: usize,
    /// Left edge depth; equal to `far_m` for a single plane.
    pub near_m: f64,
    pub far_m: f64,
    pub noise_sigma: f64,
    pub window_radius: usize,
    pub depth_samples: usize,
}

/// A rendered stack with its cost volume and hard-argmin estimate.
pub struct Scene {
    truth: DepthMap,
    stack: FocalStack,
    volume: CostVolume,
    estimate: DepthMap,
}

impl Scene {
    pub fn render(preset: &str, config: SceneConfig) -> Result<Self, String> {
        if !(8..=256).contains(&config.size) {
            return Err(format!("size must be within 8..=256, got {}", config.size));
        }
        let (settings, distances) = camera(preset)?;
        let n = config.size;
        let sharp = textured_image(n, n, 3, 7);
        let truth = if config.near_m == config.far_m {
            plane_depth(n, n, config.near_m)
        } else {
            ramp_depth(n, n, config.near_m, config.far_m)
        };
        let options = RenderOptions {
            noise_sigma: (config.noise_sigma > 0.0).then_some(config.noise_sigma),
            noise_seed: 1,
            ..RenderOptions::default()
        };
        let stack =
            render_focal_stack_with(&sharp, &truth, &settings, &distances, &options).map_err(|e| e.to_string())?;
        let hyps = DepthHypotheses::uniform(0.1, 3.0, config.depth_samples).map_err(|e| e.to_string())?;
        let params = CostParams {
            window_radius: config.window_radius,
            ..CostParams::default()
        };
        let volume = build_cost_volume(&stack, &hyps, &params).map_err(|e| e.to_string())?;
        let estimate = hard_argmin_depth(&volume).map_err(|e| e.to_string())?.depth;
        Ok(Scene {
            truth,
            stack,
            volume,
            estimate,
        })
    }

    pub fn size(&self) -> usize {
        self.truth.width()
    }

    pub fn truth(&self) -> &DepthMap {
        &self.truth
    }

    pub fn estimate(&self) -> &DepthMap {
        &self.estimate
    }

    pub fn profile(&self, x: usize, y: usize) -> Option<Vec<f64>> {
        (x < self.volume.width() && y < self.volume.height()).then(|| self.volume.profile(x, y))
    }

    pub fn hypotheses(&self) -> &[f64] {
        self.volume.hypotheses().depths()
    }

    /// Fraction of pixels whose estimate lies in the truth's hypothesis bin.
    pub fn in_bin_rate(&self) -> f64 {
        let hyps = self.volume.hypotheses();
        let hits = self
            .estimate
            .depths()
            .iter()
            .zip(self.truth.depths())
            .filter(|(e, t)| hyps.nearest_index(**e) == hyps.nearest_index(**t))
            .count();
        hits as f64 / self.truth.depths().len() as f64
    }

    /// RGBA bytes of stack image `i`.
    pub fn stack_rgba(&self, i: usize) -> Option<Vec<u8>> {
        let img = self.stack.images().get(i)?;
        let n = img.width() * img.height();
        let mut out = Vec::with_capacity(4 * n);
        for p in 0..n {
            for c in 0..3 {
                let v = img.data()[(c % img.channels()) * n + p];
                out.push((v.clamp(0.0, 1.0).powf(1.0 / 2.2) * 255.0).round() as u8);
            }
            out.push(255);
        }
        Some(out)
    }
}

/// Grayscale RGBA with near = bright over `[lo, hi]`.
pub fn depth_rgba(depth: &DepthMap, lo: f64, hi: f64) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 * depth.depths().len());
    for &d in depth.depths() {
        let t = (1.0 - (d - lo) / (hi - lo)).clamp(0.0, 1.0);
        let v = (t * 255.0).round() as u8;
        out.extend_from_slice(&[v, v, v, 255]);
    }
    out
}

#[wasm_bindgen]
pub struct Demo {
    scene: Scene,
}

#[wasm_bindgen]
impl Demo {
    /// Renders a texture over a depth ramp (or a plane when `near == far`)
    /// and estimates its depth.
    #[wasm_bindgen(constructor)]
    pub fn new(
        preset: &str,
        size: usize,
        near: f64,
        far: f64,
        noise_sigma: f64,
        window_radius: usize,
        depth_samples: usize,
    ) -> Result<Demo, JsError> {
        let config = SceneConfig {
            size,
            near_m: near,
            far_m: far,
            noise_sigma,
            window_radius,
            depth_samples,
        };
        Scene::render(preset, config)
            .map(|scene| Demo { scene })
            .map_err(|e| JsError::new(&e))
    }

    pub fn size(&self) -> usize {
        self.scene.size()
    }

    pub fn stack_len(&self) -> usize {
        self.scene.stack.len()
    }

    pub fn stack_rgba(&self, i: usize) -> Vec<u8> {
        self.scene.stack_rgba(i).unwrap_or_default()
    }

    pub fn truth_rgba(&self) -> Vec<u8> {
        depth_rgba(self.scene.truth(), 0.1, 3.0)
    }

    pub fn estimate_rgba(&self) -> Vec<u8> {
        depth_rgba(self.scene.estimate(), 0.1, 3.0)
    }

    pub fn in_bin_rate(&self) -> f64 {
        self.scene.in_bin_rate()
    }

    pub fn hypotheses(&self) -> Vec<f64> {
        self.scene.hypotheses().to_vec()
    }

    /// Finished cost profile at `(x, y)`; empty outside the image.
    pub fn profile(&self, x: usize, y: usize) -> Vec<f64> {
        self.scene.profile(x, y).unwrap_or_default()
    }

    pub fn truth_at(&self, x: usize, y: usize) -> f64 {
        self.scene.truth().get(x, y).unwrap_or(f64::NAN)
    }

    pub fn estimate_at(&self, x: usize, y: usize) -> f64 {
        self.scene.estimate().get(x, y).unwrap_or(f64::NAN)
    }
}
