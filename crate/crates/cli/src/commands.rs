use std::fs;
use std::path::Path;
use std::time::Instant;

use dff_core::depth::argmin_index;
use dff_core::io::{
    read_pfm, read_png, save_cost_volume, write_depth_png16, write_gray8, write_pfm, write_png, PngDepth, SettingsFile,
};
use dff_core::scene::laplacian_variance;
use dff_core::{
    aggregate_fixed, build_cost_volume_with_threads, evaluate, readout, render_focal_stack_with, scale_sample,
    CostVolume, FocalStack, MetricReport, RenderOptions,
};

use crate::args::{BenchArgs, EstimateArgs, EvalArgs, RenderArgs, VerifyArgs};
use crate::config::{
    assemble_stack, default_threads, load_stack, procedural_scene, resolve_camera, resolve_sweep, MANIFEST_NAME,
};
use crate::{CliError, CliResult};

/// Reference timings for a 256x256, F=5, D=64 job: cost volume, readout.
const REFERENCE_SECONDS: (f64, f64) = (4.278, 0.0252);

fn create_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::config(format!("cannot create {}: {e}", dir.display())))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))
}

fn require_file(path: &Path, what: &str) -> CliResult<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::config(format!("{what} {} does not exist", path.display())))
    }
}

pub fn render(a: RenderArgs) -> CliResult<()> {
    let (image, depth) = match (&a.image, &a.depth) {
        (Some(img), Some(depth)) => {
            require_file(img, "image")?;
            require_file(depth, "depth map")?;
            (read_png(img, a.gamma_encoded)?, read_pfm(depth)?)
        }
        _ => procedural_scene(&a.scene)?,
    };
    let cam = resolve_camera(&a.camera, None)?;
    if !(a.scale.is_finite() && a.scale > 0.0) {
        return Err(CliError::config(format!("scale must be positive, got {}", a.scale)));
    }
    let scaled = scale_sample(&cam.settings, a.scale)?;
    let focus_distances = scaled.scale_focus_distances(&cam.focus_distances);
    let depth = depth.scaled(a.scale)?;
    let base = RenderOptions::default();
    let options = RenderOptions {
        layer_origin_m: base.layer_origin_m * a.scale,
        layer_step_m: base.layer_step_m * a.scale,
        noise_sigma: a.noise_sigma,
        noise_seed: a.noise_seed,
    };
    let stack = render_focal_stack_with(&image, &depth, &scaled.settings, &focus_distances, &options)?;

    create_dir(&a.out_dir)?;
    let mut names = Vec::with_capacity(stack.len());
    for (i, (img, df)) in stack.images().iter().zip(stack.focus_distances()).enumerate() {
        let name = format!("stack_{i:02}_{df}m.png");
        write_png(a.out_dir.join(&name), img, PngDepth::Sixteen, a.gamma_encoded)?;
        println!("{name}: focus {df} m, laplacian variance {:.6e}", laplacian_variance(img));
        names.push(name);
    }
    write_pfm(a.out_dir.join("truth.pfm"), &depth)?;
    let settings = SettingsFile::from_camera(&scaled.settings, &focus_distances);
    write_text(&a.out_dir.join("settings.txt"), &settings.to_key_values().to_text())?;
    let mut manifest = settings.to_key_values();
    manifest.insert("images", names.join(", "));
    manifest.insert("gamma_encoded", a.gamma_encoded.to_string());
    manifest.insert("truth", "truth.pfm");
    write_text(&a.out_dir.join(MANIFEST_NAME), &manifest.to_text())?;
    println!("wrote {} images to {}", names.len(), a.out_dir.display());
    Ok(())
}

pub fn estimate(a: EstimateArgs) -> CliResult<()> {
    let sweep = resolve_sweep(&a.sweep)?;
    let stack = assemble_stack(load_stack(&a.stack, a.gamma_encoded)?, &a.camera)?;
    if let Some(t) = &a.truth {
        require_file(t, "truth depth map")?;
    }
    let volume = build_cost_volume_with_threads(&stack, &sweep.hypotheses, &sweep.params, sweep.threads)?;
    create_dir(&a.out_dir)?;
    if let Some(path) = &a.save_cost_volume {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            create_dir(parent)?;
        }
        save_cost_volume(path, &volume)?;
    }
    let volume = aggregate_fixed(&volume, a.aggregate_radius, a.aggregate_sigma)?;
    let estimate = readout(&volume, sweep.readout, sweep.temperature)?;

    let (w, h) = stack.dims();
    write_pfm(a.out_dir.join("depth.pfm"), &estimate.depth)?;
    write_depth_png16(a.out_dir.join("depth.png"), &estimate.depth)?;
    write_gray8(a.out_dir.join("confidence.png"), w, h, &estimate.confidence)?;
    println!(
        "estimated {w}x{h} depth from {} images over {} hypotheses ({:?})",
        stack.len(),
        sweep.hypotheses.len(),
        sweep.readout
    );
    if let Some(t) = &a.truth {
        let report = evaluate(&estimate.depth, &read_pfm(t)?, a.rescale)?;
        let text = metrics_text(&report);
        write_text(&a.out_dir.join("metrics.txt"), &text)?;
        print!("{text}");
    }
    Ok(())
}

fn metrics_text(report: &MetricReport) -> String {
    format!(
        "{}# record fields: {}\nrecord = {}\n",
        report.to_key_value(),
        MetricReport::RECORD_FIELDS.join(","),
        report.to_record()
    )
}

fn argmins(v: &CostVolume) -> Vec<usize> {
    (0..v.height())
        .flat_map(|y| (0..v.width()).map(move |x| (x, y)))
        .map(|(x, y)| argmin_index(&v.profile(x, y)))
        .collect()
}

pub fn verify_invariance(a: VerifyArgs) -> CliResult<()> {
    if !(a.sigma.is_finite() && a.sigma > 0.0) {
        return Err(CliError::config(format!("sigma must be positive, got {}", a.sigma)));
    }
    let sweep = resolve_sweep(&a.sweep)?;
    let cam = resolve_camera(&a.camera, None)?;
    let (image, depth) = procedural_scene(&a.scene)?;
    let stack = render_focal_stack_with(&image, &depth, &cam.settings, &cam.focus_distances, &RenderOptions::default())?;
    let base = build_cost_volume_with_threads(&stack, &sweep.hypotheses, &sweep.params, sweep.threads)?;

    let mut scaled = scale_sample(&cam.settings, a.sigma)?.settings;
    if a.corrupt_focal_length {
        scaled.focal_length_m = cam.settings.focal_length_m;
    }
    let moved = stack.with_settings(
        scaled,
        cam.focus_distances.iter().map(|d| d * a.sigma).collect(),
    )?;
    let moved_hyps = sweep.hypotheses.scaled(a.sigma)?;
    let other = build_cost_volume_with_threads(&moved, &moved_hyps, &sweep.params, sweep.threads)?;

    let (ka, kb) = (argmins(&base), argmins(&other));
    let mismatched = ka.iter().zip(&kb).filter(|(x, y)| x != y).count();
    let max_depth_dev = ka
        .iter()
        .zip(&kb)
        .map(|(&x, &y)| (moved_hyps.depths()[y] - a.sigma * sweep.hypotheses.depths()[x]).abs())
        .fold(0.0, f64::max);
    let max_cost_diff = base
        .costs()
        .iter()
        .zip(other.costs())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let scale_ok = mismatched == 0;
    println!(
        "scale-invariance (sigma {}): {} - argmin mismatch {mismatched}/{} px, max depth deviation {max_depth_dev:.3e} m, max cost difference {max_cost_diff:.3e}",
        a.sigma,
        if scale_ok { "PASS" } else { "FAIL" },
        ka.len()
    );

    let mut max_affine: f64 = 0.0;
    for (st, hyps) in [(&stack, &sweep.hypotheses), (&moved, &moved_hyps)] {
        for i in 0..st.len() {
            let s = st.settings_for(i);
            let coeffs = s.affine_decompose()?;
            for &d in hyps.depths() {
                max_affine = max_affine.max(((coeffs.a_const + coeffs.b_const / d).abs() - s.coc_diameter_px(d)?).abs());
            }
        }
    }
    let affine_ok = max_affine <= 1e-9;
    println!(
        "affine-decomposition: {} - max deviation {max_affine:.3e} px",
        if affine_ok { "PASS" } else { "FAIL" }
    );
    if scale_ok && affine_ok {
        Ok(())
    } else {
        Err(CliError::pipeline("invariance check failed"))
    }
}

fn bench_stack(a: &BenchArgs) -> CliResult<FocalStack> {
    if let Some(spec) = &a.stack {
        return assemble_stack(load_stack(spec, a.gamma_encoded)?, &a.camera);
    }
    let cam = resolve_camera(&a.camera, None)?;
    let scene = crate::args::SceneArgs {
        scene: "standard".into(),
        size: a.size,
    };
    let (image, depth) = procedural_scene(&scene)?;
    Ok(render_focal_stack_with(
        &image,
        &depth,
        &cam.settings,
        &cam.focus_distances,
        &RenderOptions::default(),
    )?)
}

pub fn bench(a: BenchArgs) -> CliResult<()> {
    let sweep = resolve_sweep(&a.sweep)?;
    let stack = bench_stack(&a)?;
    let mut budgets: Vec<usize> = a.budgets.iter().copied().filter(|&t| t > 0).collect();
    budgets.push(default_threads());
    budgets.sort_unstable();
    budgets.dedup();

    let (w, h) = stack.dims();
    let (f, d) = (stack.len(), sweep.hypotheses.len());
    println!("job: {w}x{h}, F={f}, D={d}; host cores {}", default_threads());
    println!("threads  cost_volume_s  readout_s  speedup  identical");
    let mut reference: Option<(Vec<u64>, f64)> = None;
    let mut records = Vec::new();
    let mut all_identical = true;
    for &t in &budgets {
        let start = Instant::now();
        let volume = build_cost_volume_with_threads(&stack, &sweep.hypotheses, &sweep.params, t)?;
        let cost_s = start.elapsed().as_secs_f64();
        let start = Instant::now();
        readout(&volume, sweep.readout, sweep.temperature)?;
        let readout_s = start.elapsed().as_secs_f64();
        let bits: Vec<u64> = volume.costs().iter().map(|c| c.to_bits()).collect();
        let (identical, speedup) = match &reference {
            None => {
                let r = (bits, cost_s);
                reference = Some(r);
                (true, 1.0)
            }
            Some((r, base_s)) => (*r == bits, base_s / cost_s),
        };
        all_identical &= identical;
        println!("{t:>7}  {cost_s:>13.4}  {readout_s:>9.4}  {speedup:>7.2}  {identical}");
        records.push(format!("{t},{w},{h},{f},{d},{cost_s:.6},{readout_s:.6},{identical}"));
    }
    println!(
        "reference (single thread): cost volume {} s, depth estimation {} s",
        REFERENCE_SECONDS.0, REFERENCE_SECONDS.1
    );
    println!("# record fields: threads,width,height,stack_size,depth_samples,cost_volume_s,readout_s,bitwise_identical");
    for r in records {
        println!("record = {r}");
    }
    if all_identical {
        Ok(())
    } else {
        Err(CliError::pipeline("cost volumes differ across thread budgets"))
    }
}

pub fn eval(a: EvalArgs) -> CliResult<()> {
    require_file(&a.pred, "prediction")?;
    require_file(&a.truth, "truth depth map")?;
    let pred = read_pfm(&a.pred)?;
    let truth = read_pfm(&a.truth)?;
    let report = evaluate(&pred, &truth, a.rescale)?;
    print!("{}", metrics_text(&report));
    if let Some(path) = &a.diff_png {
        let scale = report.rescale_factor.unwrap_or(1.0);
        let diff: Vec<f64> = pred
            .depths()
            .iter()
            .zip(truth.depths())
            .zip(pred.mask().iter().zip(truth.mask()))
            .map(|((p, t), (vp, vt))| if *vp && *vt { (p * scale - t).abs() } else { 0.0 })
            .collect();
        let max = diff.iter().copied().fold(0.0, f64::max);
        let norm: Vec<f64> = diff.iter().map(|v| if max > 0.0 { v / max } else { 0.0 }).collect();
        write_gray8(path, pred.width(), pred.height(), &norm)?;
    }
    Ok(())
}
