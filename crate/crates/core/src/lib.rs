//! Depth from a focal stack using an explicit thin-lens defocus model.
//!
//! The pipeline renders or loads a focal stack, sweeps fronto-parallel depth
//! hypotheses, deblurs every capture with the disk PSF each hypothesis
//! predicts, scores agreement between the deblurred captures and reads depth
//! out of the resulting cost volume.
//!
//! ```no_run
//! use dff_core::camera::presets::{defocusnet, DEFOCUSNET_FOCUS_DISTANCES};
//! use dff_core::{build_cost_volume, hard_argmin_depth, render_focal_stack, scene, CostParams, DepthHypotheses};
//!
//! let sharp = scene::textured_image(64, 64, 3, 1);
//! let truth = scene::plane_depth(64, 64, 0.6);
//! let stack = render_focal_stack(&sharp, &truth, &defocusnet(0.3), &DEFOCUSNET_FOCUS_DISTANCES)?;
//! let volume = build_cost_volume(&stack, &DepthHypotheses::default(), &CostParams::default())?;
//! let estimate = hard_argmin_depth(&volume)?;
//! # Ok::<(), dff_core::Error>(())
//! ```

pub mod camera;
pub mod convolve;
pub mod cost_volume;
pub mod deconvolve;
pub mod depth;
mod error;
pub mod fft;
pub mod image;
pub mod io;
pub mod metrics;
pub mod psf;
pub mod render;
pub mod scene;

pub use crate::camera::{scale_sample, AffineCoefficients, CameraSettings, ScaledSample};
pub use crate::convolve::{convolve, convolve_with, Boundary, ConvMethod};
pub use crate::cost_volume::{
    build_cost_volume, build_cost_volume_with_threads, normalize_per_pixel, normalize_per_pixel_with, raw_cost_slice,
    squash_outliers, squash_slope, CostParams, CostVolume, DepthHypotheses, Normalization, SweepContext,
};
pub use crate::deconvolve::{wiener_hunt_deconvolve, wiener_hunt_deconvolve_raw, WienerHunt};
pub use crate::depth::{aggregate_fixed, hard_argmin_depth, readout, soft_argmin_depth, DepthEstimate, Readout};
pub use crate::error::{Error, Result};
pub use crate::image::{DepthMap, Image};
pub use crate::metrics::{evaluate, MetricReport};
pub use crate::psf::{make_disk_psf, Psf};
pub use crate::render::{render_focal_stack, render_focal_stack_with, FocalStack, RenderOptions};
