//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; the process fails if any criterion does.

// oracle values keep every digit the oracle printed
#![allow(clippy::excessive_precision)]

use std::time::{Duration, Instant};

use dff_core::camera::presets::{defocusnet, nyu, DEFOCUSNET_FOCUS_DISTANCES};
use dff_core::depth::argmin_index;
use dff_core::scene::{high_contrast_mask, plane_depth, psnr, standard_scene, textured_image};
use dff_core::{
    build_cost_volume, build_cost_volume_with_threads, convolve, evaluate, make_disk_psf, render_focal_stack,
    render_focal_stack_with, scale_sample, soft_argmin_depth, squash_outliers, squash_slope,
    wiener_hunt_deconvolve, Boundary, CameraSettings, CostParams, CostVolume, DepthHypotheses, DepthMap,
    RenderOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Single-threaded cost volume time quoted for the reference implementation.
const REFERENCE_SECONDS: f64 = 4.278;

enum Outcome {
    Pass(String),
    Fail(String),
    /// Could not be measured on this host; not counted as a pass.
    NotEvaluated(String),
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn random_settings(rng: &mut ChaCha8Rng) -> CameraSettings {
    let f = rng.gen_range(1e-3..0.05);
    let df = f * rng.gen_range(1.5..200.0);
    CameraSettings::from_pixel_pitch(df, f, rng.gen_range(1.0..16.0), rng.gen_range(1e-6..2e-5)).unwrap()
}

fn random_depth(rng: &mut ChaCha8Rng, s: &CameraSettings) -> f64 {
    s.focal_length_m * rng.gen_range(1.05..500.0)
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn argmins(v: &CostVolume) -> Vec<usize> {
    (0..v.height())
        .flat_map(|y| (0..v.width()).map(move |x| (x, y)))
        .map(|(x, y)| argmin_index(&v.profile(x, y)))
        .collect()
}

fn standard_stack(size: usize, noise_sigma: Option<f64>) -> (dff_core::FocalStack, DepthMap) {
    let (sharp, truth) = standard_scene(size, size);
    let options = RenderOptions {
        noise_sigma,
        noise_seed: 3,
        ..RenderOptions::default()
    };
    let stack =
        render_focal_stack_with(&sharp, &truth, &defocusnet(0.1), &DEFOCUSNET_FOCUS_DISTANCES, &options).unwrap();
    (stack, truth)
}

fn coc_oracle() -> Outcome {
    // 40-digit reference values for the two tabulated cameras
    let depths = [0.05, 0.1, 0.2, 0.45, 0.6, 1.0, 1.7, 2.5, 3.0, 7.5];
    let defocus = [
        11.794569729608437114,
        4.7178278918433748457,
        1.1794569729608437114,
        0.78630464864056247429,
        1.1794569729608437114,
        1.651239762145181196,
        1.9426350142884484659,
        2.0758442724110849321,
        2.1230225513295186806,
        2.264557388084819926,
    ];
    let nyu_ref = [
        281.92952243869840127,
        137.35028016244281088,
        65.060659024315015679,
        24.899758392021796124,
        16.867578265563152213,
        7.2289621138127795199,
        1.2756991965551963859,
        1.445792422762555904,
        2.4096540379375931733,
        5.3012388834627049812,
    ];
    let mut worst: f64 = 0.0;
    for (cam, refs) in [(defocusnet(0.3), defocus), (nyu(2.0), nyu_ref)] {
        for (d, r) in depths.iter().zip(refs) {
            worst = worst.max(rel_err(cam.coc_diameter_px(*d).unwrap(), r));
        }
    }
    verdict(worst <= 1e-12, format!("20 reference values, worst relative error {worst:.2e} (limit 1e-12)"))
}

fn scale_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let s = random_settings(&mut rng);
        let sigma = rng.gen_range(1.0..9.0);
        let d = random_depth(&mut rng, &s);
        let scaled = scale_sample(&s, sigma).unwrap();
        let c = s.coc_diameter_px(d).unwrap();
        let cs = scaled.settings.coc_diameter_px(scaled.scale_depth(d)).unwrap();
        worst = worst.max(rel_err(cs, c));
    }

    let (stack, _) = standard_stack(64, None);
    let hyps = DepthHypotheses::default();
    let params = CostParams::default();
    let base = argmins(&build_cost_volume(&stack, &hyps, &params).unwrap());
    let mut matched = usize::MAX;
    for sigma in [2.0, 3.7, 9.0] {
        let scaled = scale_sample(stack.settings(), sigma).unwrap();
        let moved = stack
            .with_settings(scaled.settings, scaled.scale_focus_distances(stack.focus_distances()))
            .unwrap();
        let v = build_cost_volume(&moved, &hyps.scaled(sigma).unwrap(), &params).unwrap();
        matched = matched.min(argmins(&v).iter().zip(&base).filter(|(a, b)| a == b).count());
    }
    let total = base.len();
    verdict(
        worst <= 1e-9 && matched == total,
        format!(
            "CoC worst relative error {worst:.2e} (limit 1e-9); argmin agreement {matched}/{total} for sigma in {{2, 3.7, 9}}"
        ),
    )
}

fn affine_decomposition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let s = random_settings(&mut rng);
        let a = s.affine_decompose().unwrap();
        for _ in 0..100 {
            let d = random_depth(&mut rng, &s);
            worst = worst.max(((a.a_const + a.b_const / d).abs() - s.coc_diameter_px(d).unwrap()).abs());
        }
    }
    verdict(worst <= 1e-9, format!("10000 samples, worst |A + B/d| - c = {worst:.2e} px (limit 1e-9)"))
}

fn deconvolution_round_trip() -> Outcome {
    let sharp = textured_image(64, 64, 3, 42);
    let psf = make_disk_psf(2.0);
    let blurred = convolve(&sharp, &psf, Boundary::Replicate).unwrap();
    let restored = wiener_hunt_deconvolve(&blurred, &psf, 1e-3).unwrap();
    let p = psnr(&restored, &sharp);
    verdict(
        p >= 35.0,
        format!("2 px disk, reg 1e-3: PSNR {p:.2} dB (blurred {:.2} dB, limit 35)", psnr(&blurred, &sharp)),
    )
}

fn render_then_sweep() -> Outcome {
    let size = 64;
    let sharp = textured_image(size, size, 3, 7);
    let mask = high_contrast_mask(&sharp, 2, 0.05);
    let hyps = DepthHypotheses::default();
    let bin = hyps.bin_width();
    let (mut hits, mut count, mut abs_sum) = (0usize, 0usize, 0.0);
    let mut per_depth = Vec::new();
    for k in 0..5 {
        let d = 0.2 + 2.3 * k as f64 / 4.0;
        let stack = render_focal_stack(&sharp, &plane_depth(size, size, d), &defocusnet(0.1), &DEFOCUSNET_FOCUS_DISTANCES)
            .unwrap();
        let v = build_cost_volume(&stack, &hyps, &CostParams::default()).unwrap();
        let soft = soft_argmin_depth(&v, dff_core::depth::DEFAULT_TEMPERATURE).unwrap();
        let gt = hyps.nearest_index(d);
        let hard = argmins(&v);
        let (mut h, mut n) = (0, 0);
        for i in (0..size * size).filter(|&i| mask[i]) {
            n += 1;
            h += usize::from(hard[i] == gt);
            abs_sum += (soft.depth.depths()[i] - d).abs();
        }
        hits += h;
        count += n;
        per_depth.push(format!("{d:.3}m:{:.1}%", 100.0 * h as f64 / n as f64));
    }
    let rate = hits as f64 / count as f64;
    let mae = abs_sum / count as f64;
    verdict(
        rate >= 0.95 && mae <= bin,
        format!(
            "in-bin {:.1}% (limit 95%) [{}], soft MAE {mae:.4} m (limit {bin:.4})",
            100.0 * rate,
            per_depth.join(" ")
        ),
    )
}

fn outlier_squash() -> Outcome {
    let a = squash_slope(0.3, 0.999).unwrap();
    let f0 = squash_outliers(0.0, 0.3, 0.999).unwrap();
    let f3 = squash_outliers(0.3, 0.3, 0.999).unwrap();
    verdict(
        f0 == 0.0 && (f3 - 0.999).abs() <= 1e-3 && (a - 12.667).abs() <= 1e-3,
        format!("f(0) = {f0}, f(0.3) = {f3:.6}, a = {a:.6}"),
    )
}

fn noise_robustness() -> Outcome {
    let (stack, truth) = standard_stack(64, Some(0.01));
    let hyps = DepthHypotheses::default();
    let gt: Vec<usize> = truth.depths().iter().map(|&d| hyps.nearest_index(d)).collect();
    let error_rate = |radius: usize| {
        let params = CostParams {
            window_radius: radius,
            ..CostParams::default()
        };
        let hard = argmins(&build_cost_volume(&stack, &hyps, &params).unwrap());
        hard.iter().zip(&gt).filter(|(a, b)| a != b).count() as f64 / gt.len() as f64
    };
    let (pixelwise, windowed) = (error_rate(0), error_rate(2));
    verdict(
        windowed < pixelwise,
        format!("error rate 5x5 {:.1}% vs 1x1 {:.1}%", 100.0 * windowed, 100.0 * pixelwise),
    )
}

fn determinism_and_speed() -> Outcome {
    let (stack, _) = standard_stack(256, None);
    let hyps = DepthHypotheses::default();
    let params = CostParams::default();
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut budgets = vec![1, 2, 4, cores];
    budgets.sort_unstable();
    budgets.dedup();
    let mut times: Vec<(usize, Duration)> = Vec::new();
    let mut reference: Option<Vec<u64>> = None;
    let mut identical = true;
    for &t in &budgets {
        let start = Instant::now();
        let v = build_cost_volume_with_threads(&stack, &hyps, &params, t).unwrap();
        times.push((t, start.elapsed()));
        let bits: Vec<u64> = v.costs().iter().map(|c| c.to_bits()).collect();
        match &reference {
            None => reference = Some(bits),
            Some(r) => identical &= *r == bits,
        }
    }
    let secs = |t: usize| times.iter().find(|(b, _)| *b == t).unwrap().1.as_secs_f64();
    let single = secs(1);
    let detail = format!(
        "bitwise identical across {budgets:?} threads: {identical}; 1 thread {single:.3} s (reference {REFERENCE_SECONDS} s)"
    );
    if !identical {
        return Outcome::Fail(detail);
    }
    if cores < 4 {
        return Outcome::NotEvaluated(format!(
            "{detail}; speedup needs >= 4 cores, host has {cores}"
        ));
    }
    let speedup = single / secs(4);
    verdict(speedup >= 2.0, format!("{detail}; speedup at 4 threads {speedup:.2}x (limit 2x)"))
}

fn metric_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut rmse_ok = true;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = 16 * 16;
        let truth: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
        let pred: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
        let t = DepthMap::new(16, 16, truth).unwrap();
        let p = DepthMap::new(16, 16, pred).unwrap();
        let plain = evaluate(&p, &t, false).unwrap();
        rmse_ok &= plain.rmse >= plain.mae;
        let base = evaluate(&p, &t, true).unwrap();
        let k = rng.gen_range(0.01..100.0);
        let scaled = evaluate(&p.scaled(k).unwrap(), &t, true).unwrap();
        for (a, b) in [(base.mae, scaled.mae), (base.rmse, scaled.rmse), (base.abs_rel, scaled.abs_rel)] {
            worst = worst.max(rel_err(b, a));
        }
    }
    verdict(
        rmse_ok && worst <= 1e-12,
        format!("RMSE >= MAE on all 100 pairs: {rmse_ok}; rescaled metric drift under scaling {worst:.2e} (limit 1e-12)"),
    )
}

/// Value at the ground-truth bin of the inverted profile (`max - cost`)
/// relative to its mean.
fn peak_to_mean(profile: &[f64], gt: usize) -> f64 {
    let max = profile.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let inverted: Vec<f64> = profile.iter().map(|c| max - c).collect();
    inverted[gt] / (inverted.iter().sum::<f64>() / inverted.len() as f64)
}

fn profile_sharpening() -> Outcome {
    let (stack, truth) = standard_stack(64, None);
    let hyps = DepthHypotheses::default();
    let raw_params = CostParams {
        squash: false,
        normalize: false,
        ..CostParams::default()
    };
    let raw = build_cost_volume(&stack, &hyps, &raw_params).unwrap();
    let finished = build_cost_volume(&stack, &hyps, &CostParams::default()).unwrap();
    let (x, y) = (32, 32);
    let gt = hyps.nearest_index(truth.get(x, y).unwrap());
    let before = peak_to_mean(&raw.profile(x, y), gt);
    let after = peak_to_mean(&finished.profile(x, y), gt);
    verdict(
        after > before,
        format!("pixel ({x}, {y}): peak-to-mean raw {before:.3}, squashed+normalized {after:.3}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("circle-of-confusion oracle", coc_oracle),
        ("scale invariance", scale_invariance),
        ("affine decomposition", affine_decomposition),
        ("deconvolution round trip", deconvolution_round_trip),
        ("render-then-sweep", render_then_sweep),
        ("outlier squash", outlier_squash),
        ("noise robustness", noise_robustness),
        ("determinism and parallel speedup", determinism_and_speed),
        ("metric identities", metric_identities),
        ("cost profile sharpening", profile_sharpening),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Outcome::NotEvaluated(d) => ("NOT EVALUATED", d),
        };
        println!("criterion {:>2} {tag}: {name} - {detail} ({elapsed:.2} s)", i + 1);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
