//! Depth error metrics with optional median-ratio rescaling.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::image::DepthMap;

/// Ground-truth depths below this are left out of the relative error.
pub const ABS_REL_MIN_TRUTH_M: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub mae: f64,
    pub rmse: f64,
    pub abs_rel: f64,
    pub pixel_count: usize,
    pub rescale_factor: Option<f64>,
    /// Pixels excluded from `abs_rel` because the truth was below
    /// [`ABS_REL_MIN_TRUTH_M`].
    pub abs_rel_skipped: usize,
}

impl MetricReport {
    /// Field order of [`MetricReport::to_record`].
    pub const RECORD_FIELDS: [&'static str; 6] = ["mae", "rmse", "abs_rel", "pixel_count", "rescale_factor", "abs_rel_skipped"];

    /// `key = value` lines.
    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "mae = {:.6}", self.mae);
        let _ = writeln!(s, "rmse = {:.6}", self.rmse);
        let _ = writeln!(s, "abs_rel = {:.6}", self.abs_rel);
        let _ = writeln!(s, "pixel_count = {}", self.pixel_count);
        match self.rescale_factor {
            Some(f) => {
                let _ = writeln!(s, "rescale_factor = {f:.6}");
            }
            None => s.push_str("rescale_factor = none\n"),
        }
        let _ = writeln!(s, "abs_rel_skipped = {}", self.abs_rel_skipped);
        s
    }

    /// Comma-separated values in [`MetricReport::RECORD_FIELDS`] order; a
    /// missing rescale factor is written as `nan`.
    pub fn to_record(&self) -> String {
        format!(
            "{:.9},{:.9},{:.9},{},{},{}",
            self.mae,
            self.rmse,
            self.abs_rel,
            self.pixel_count,
            self.rescale_factor.map_or("nan".to_string(), |f| format!("{f:.9}")),
            self.abs_rel_skipped
        )
    }
}

/// MAE, RMSE and AbsRel over pixels valid in both maps. With `rescale`, the
/// prediction is first multiplied by the (lower) median of `truth / pred`.
pub fn evaluate(pred: &DepthMap, truth: &DepthMap, rescale: bool) -> Result<MetricReport> {
    if pred.dims() != truth.dims() {
        return Err(Error::DimensionMismatch(format!(
            "prediction is {}x{}, truth is {}x{}",
            pred.width(),
            pred.height(),
            truth.width(),
            truth.height()
        )));
    }
    let pairs: Vec<(f64, f64)> = pred
        .depths()
        .iter()
        .zip(truth.depths())
        .zip(pred.mask().iter().zip(truth.mask()))
        .filter(|(_, (a, b))| **a && **b)
        .map(|((&p, &t), _)| (p, t))
        .collect();
    if pairs.is_empty() {
        return Err(Error::Domain("prediction and truth share no valid pixel".into()));
    }

    let rescale_factor = rescale.then(|| {
        let mut ratios: Vec<f64> = pairs.iter().map(|(p, t)| t / p).collect();
        ratios.sort_by(f64::total_cmp);
        ratios[(ratios.len() - 1) / 2]
    });
    let scale = rescale_factor.unwrap_or(1.0);

    let n = pairs.len() as f64;
    let (mut abs_sum, mut sq_sum, mut rel_sum, mut rel_n) = (0.0, 0.0, 0.0, 0usize);
    for &(p, t) in &pairs {
        let e = (p * scale - t).abs();
        abs_sum += e;
        sq_sum += e * e;
        if t >= ABS_REL_MIN_TRUTH_M {
            rel_sum += e / t;
            rel_n += 1;
        }
    }
    if rel_n == 0 {
        return Err(Error::Domain("no truth value large enough for the relative error".into()));
    }
    Ok(MetricReport {
        mae: abs_sum / n,
        rmse: (sq_sum / n).sqrt(),
        abs_rel: rel_sum / rel_n as f64,
        pixel_count: pairs.len(),
        rescale_factor,
        abs_rel_skipped: pairs.len() - rel_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(v: Vec<f64>) -> DepthMap {
        DepthMap::new(v.len(), 1, v).unwrap()
    }

    #[test]
    fn perfect_prediction() {
        let t = map(vec![0.5, 1.0, 2.0]);
        let r = evaluate(&t, &t, true).unwrap();
        assert_eq!((r.mae, r.rmse, r.abs_rel), (0.0, 0.0, 0.0));
        assert_eq!(r.rescale_factor, Some(1.0));
        assert_eq!(r.pixel_count, 3);
    }

    #[test]
    fn doubled_prediction_is_compensated() {
        let t = map(vec![0.5, 1.0, 2.0, 2.7]);
        let p = t.scaled(2.0).unwrap();
        let r = evaluate(&p, &t, true).unwrap();
        assert_eq!((r.mae, r.rmse, r.abs_rel), (0.0, 0.0, 0.0));
        assert_eq!(r.rescale_factor, Some(0.5));
    }

    #[test]
    fn constant_offset() {
        let t = map(vec![1.0; 10]);
        let p = map(vec![1.1; 10]);
        let r = evaluate(&p, &t, false).unwrap();
        for v in [r.mae, r.rmse, r.abs_rel] {
            assert!((v - 0.1).abs() < 1e-12);
        }
        assert_eq!(r.rescale_factor, None);
    }

    #[test]
    fn lower_median_on_even_counts() {
        let t = map(vec![1.0, 1.0, 1.0, 1.0]);
        let p = map(vec![1.0, 0.5, 0.25, 2.0]);
        // ratios 1, 2, 4, 0.5 -> sorted 0.5, 1, 2, 4 -> lower median 1
        assert_eq!(evaluate(&p, &t, true).unwrap().rescale_factor, Some(1.0));
    }

    #[test]
    fn masks_and_errors() {
        let t = DepthMap::new(3, 1, vec![1.0, 0.0, 2.0]).unwrap();
        let p = DepthMap::new(3, 1, vec![1.5, 1.0, f64::NAN]).unwrap();
        let r = evaluate(&p, &t, false).unwrap();
        assert_eq!(r.pixel_count, 1);
        assert!((r.mae - 0.5).abs() < 1e-15);
        let none = DepthMap::new(3, 1, vec![0.0, 1.0, 0.0]).unwrap();
        assert!(evaluate(&none, &t, false).is_err());
        assert!(evaluate(&map(vec![1.0]), &t, false).is_err());
        let tiny = map(vec![1e-9]);
        assert!(evaluate(&tiny, &tiny, false).is_err());
    }

    #[test]
    fn skipped_truth_is_counted() {
        let t = map(vec![1e-9, 1.0]);
        let p = map(vec![1e-9, 1.2]);
        let r = evaluate(&p, &t, false).unwrap();
        assert_eq!(r.abs_rel_skipped, 1);
        assert!((r.abs_rel - 0.2).abs() < 1e-12);
    }

    #[test]
    fn record_layout() {
        let t = map(vec![1.0; 2]);
        let r = evaluate(&t, &t, false).unwrap();
        assert_eq!(r.to_record(), "0.000000000,0.000000000,0.000000000,2,nan,0");
        assert!(r.to_key_value().contains("rescale_factor = none"));
    }
}
