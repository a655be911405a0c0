//! Resolution of sweep parameters, camera settings and stacks from flags,
//! config files and manifests.

use std::path::{Path, PathBuf};

use dff_core::camera::presets::{defocusnet, nyu, DEFOCUSNET_FOCUS_DISTANCES, NYU_FOCUS_DISTANCES};
use dff_core::depth::DEFAULT_TEMPERATURE;
use dff_core::io::{read_png, KeyValues, SettingsFile};
use dff_core::scene::{plane_depth, standard_scene, textured_image, STANDARD_SEED};
use dff_core::{CameraSettings, CostParams, DepthHypotheses, DepthMap, FocalStack, Image, Readout};

use crate::args::{CameraArgs, Preset, ReadoutArg, SceneArgs, SweepArgs, THREADS_ENV};
use crate::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub hypotheses: DepthHypotheses,
    pub params: CostParams,
    pub readout: Readout,
    pub temperature: f64,
    pub threads: usize,
}

fn pick<T: std::str::FromStr>(flag: Option<T>, kv: &KeyValues, key: &str, default: T) -> CliResult<T> {
    match flag {
        Some(v) => Ok(v),
        None => Ok(kv.get(key)?.unwrap_or(default)),
    }
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn env_threads() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| CliError::config(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
    }
}

pub fn resolve_sweep(args: &SweepArgs) -> CliResult<SweepConfig> {
    let kv = match &args.config {
        Some(path) => KeyValues::load(path)?,
        None => KeyValues::default(),
    };
    let defaults = DepthHypotheses::default();
    let min = pick(args.depth_min, &kv, "depth_min", defaults.first())?;
    let max = pick(args.depth_max, &kv, "depth_max", defaults.last())?;
    let samples = pick(args.depth_samples, &kv, "depth_samples", defaults.len())?;
    if samples < 2 {
        return Err(CliError::config(format!("depth samples must be at least 2, got {samples}")));
    }
    if !(min < max) {
        return Err(CliError::config(format!("depth range [{min}, {max}] is empty")));
    }
    let hypotheses = DepthHypotheses::uniform(min, max, samples)?;

    let base = CostParams::default();
    let normalize = if args.no_normalize {
        false
    } else {
        kv.get_bool("normalize")?.unwrap_or(base.normalize)
    };
    let params = CostParams {
        window_radius: pick(args.window_radius, &kv, "window_radius", base.window_radius)?,
        gaussian_sigma: pick(args.gaussian_sigma, &kv, "gaussian_sigma", base.gaussian_sigma)?,
        c_max: pick(args.c_max, &kv, "c_max", base.c_max)?,
        f1: pick(args.f1, &kv, "f1", base.f1)?,
        reg_weight: pick(args.reg_weight, &kv, "reg_weight", base.reg_weight)?,
        normalize,
        ..base
    };
    params.validate()?;

    let readout = match args.readout {
        Some(ReadoutArg::Hard) => Readout::HardArgmin,
        Some(ReadoutArg::Soft) => Readout::SoftArgmin,
        None => match kv.get_str("readout") {
            None | Some("hard") => Readout::HardArgmin,
            Some("soft") => Readout::SoftArgmin,
            Some(other) => return Err(CliError::config(format!("unknown readout {other:?}"))),
        },
    };
    let temperature = pick(args.temperature, &kv, "temperature", DEFAULT_TEMPERATURE)?;
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(CliError::config(format!("temperature must be positive, got {temperature}")));
    }
    let threads = match args.threads {
        Some(t) => t,
        None => match kv.get::<usize>("threads")? {
            Some(t) => t,
            None => env_threads()?.unwrap_or_else(default_threads),
        },
    };
    if threads == 0 {
        return Err(CliError::config("thread budget must be at least 1"));
    }
    Ok(SweepConfig {
        hypotheses,
        params,
        readout,
        temperature,
        threads,
    })
}

/// Camera settings plus the focus distances they come with.
#[derive(Debug, Clone)]
pub struct Camera {
    pub settings: CameraSettings,
    pub focus_distances: Vec<f64>,
}

/// Flags beat the settings file, which beats `fallback` (manifest contents),
/// which beats the preset. DefocusNet is the final default.
pub fn resolve_camera(args: &CameraArgs, fallback: Option<&SettingsFile>) -> CliResult<Camera> {
    let file = match &args.settings {
        Some(path) => {
            if !path.exists() {
                return Err(CliError::config(format!("settings file {} does not exist", path.display())));
            }
            Some(SettingsFile::load(path)?)
        }
        None => fallback.cloned(),
    };
    let (settings, listed) = match (file, args.preset) {
        (Some(f), _) => (f.camera()?, f.focus_distances_m.clone()),
        (None, Some(Preset::Nyu)) => (nyu(NYU_FOCUS_DISTANCES[0]), NYU_FOCUS_DISTANCES.to_vec()),
        (None, _) => (defocusnet(DEFOCUSNET_FOCUS_DISTANCES[0]), DEFOCUSNET_FOCUS_DISTANCES.to_vec()),
    };
    let focus_distances = args.focus_distances.clone().unwrap_or(listed);
    if focus_distances.len() < 2 {
        return Err(CliError::config(format!(
            "a focal stack needs at least 2 focus distances, got {}",
            focus_distances.len()
        )));
    }
    let settings = settings.with_focus_distance(focus_distances[0])?;
    Ok(Camera {
        settings,
        focus_distances,
    })
}

pub fn procedural_scene(args: &SceneArgs) -> CliResult<(Image, DepthMap)> {
    if args.size < 8 {
        return Err(CliError::config(format!("scene size must be at least 8, got {}", args.size)));
    }
    if args.scene == "standard" {
        return Ok(standard_scene(args.size, args.size));
    }
    if let Some(d) = args.scene.strip_prefix("plane:") {
        let depth: f64 = d
            .parse()
            .ok()
            .filter(|v: &f64| *v > 0.0)
            .ok_or_else(|| CliError::config(format!("bad plane depth {d:?}")))?;
        return Ok((
            textured_image(args.size, args.size, 3, STANDARD_SEED),
            plane_depth(args.size, args.size, depth),
        ));
    }
    Err(CliError::config(format!(
        "unknown scene {:?} (expected `standard` or `plane:<depth_m>`)",
        args.scene
    )))
}

pub const MANIFEST_NAME: &str = "manifest.txt";

/// Images of a stack plus whatever camera description accompanied them.
pub struct LoadedStack {
    pub images: Vec<Image>,
    pub focus_distances: Option<Vec<f64>>,
    pub settings: Option<SettingsFile>,
}

/// Loads a manifest (`images`, `focus_distances`, camera keys,
/// `gamma_encoded`) or a comma-separated PNG list.
pub fn load_stack(spec: &str, gamma_encoded: bool) -> CliResult<LoadedStack> {
    let path = Path::new(spec);
    let is_png = |p: &Path| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("png"));
    if !spec.contains(',') && !is_png(path) {
        if !path.exists() {
            return Err(CliError::config(format!("stack manifest {} does not exist", path.display())));
        }
        let kv = KeyValues::load(path)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let names: Vec<String> = kv
            .get_list("images")?
            .ok_or_else(|| CliError::config(format!("{} lists no `images`", path.display())))?;
        let encoded = kv.get_bool("gamma_encoded")?.unwrap_or(false) || gamma_encoded;
        let images = names
            .iter()
            .map(|n| read_png(dir.join(n), encoded))
            .collect::<dff_core::Result<Vec<_>>>()?;
        let settings = if kv.contains("focal_length") {
            Some(SettingsFile::from_key_values(&kv)?)
        } else {
            None
        };
        return Ok(LoadedStack {
            images,
            focus_distances: kv.get_list("focus_distances")?,
            settings,
        });
    }
    let paths: Vec<PathBuf> = spec.split(',').map(|s| PathBuf::from(s.trim())).collect();
    for p in &paths {
        if !p.exists() {
            return Err(CliError::config(format!("stack image {} does not exist", p.display())));
        }
    }
    let images = paths
        .iter()
        .map(|p| read_png(p, gamma_encoded))
        .collect::<dff_core::Result<Vec<_>>>()?;
    Ok(LoadedStack {
        images,
        focus_distances: None,
        settings: None,
    })
}

/// Pairs loaded images with a camera. Focus distances come from the flag,
/// then the manifest, then the settings file.
pub fn assemble_stack(loaded: LoadedStack, camera: &CameraArgs) -> CliResult<FocalStack> {
    let mut args = camera.clone();
    if args.focus_distances.is_none() {
        args.focus_distances = loaded.focus_distances.clone();
    }
    let cam = resolve_camera(&args, loaded.settings.as_ref())?;
    if cam.focus_distances.len() != loaded.images.len() {
        return Err(CliError::config(format!(
            "{} stack images but {} focus distances",
            loaded.images.len(),
            cam.focus_distances.len()
        )));
    }
    Ok(FocalStack::new(loaded.images, cam.focus_distances, cam.settings)?)
}
