//! Thin-lens defocus model.
//!
//! The circle of confusion (CoC) of a scene point at depth `d` seen by a lens
//! focused at `d_f` is
//!
//! ```text
//! c = b * |d - d_f| / d * f^2 / (N * (d_f - f))
//! ```
//!
//! in pixels, where `f` is the focal length, `N` the f-number and `b` the
//! sensor resolution in px/m. Two ambiguities follow directly from the
//! formula and are exposed here so that tests and tools can exercise them:
//!
//! * scaling `d`, `d_f`, `f` by `σ` and `b` by `1/σ` leaves `c` unchanged;
//! * `c = |A + B/d|` with constants `A`, `B` depending only on the settings,
//!   so different settings can explain the same blur with affinely related
//!   inverse depths.

use crate::error::{Error, Result};

/// Camera parameters entering the defocus model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraSettings {
    pub focus_distance_m: f64,
    pub focal_length_m: f64,
    pub f_number: f64,
    /// Pixels per meter on the sensor (reciprocal of the pixel pitch).
    pub px_per_m: f64,
}

impl CameraSettings {
    pub fn new(focus_distance_m: f64, focal_length_m: f64, f_number: f64, px_per_m: f64) -> Result<Self> {
        let settings = CameraSettings {
            focus_distance_m,
            focal_length_m,
            f_number,
            px_per_m,
        };
        settings.validate()?;
        Ok(settings)
    }

    /// Builds settings from a pixel pitch given in m/px.
    pub fn from_pixel_pitch(focus_distance_m: f64, focal_length_m: f64, f_number: f64, pixel_pitch_m: f64) -> Result<Self> {
        if !(pixel_pitch_m.is_finite() && pixel_pitch_m > 0.0) {
            return Err(Error::InvalidSettings(format!(
                "pixel pitch must be positive and finite, got {pixel_pitch_m}"
            )));
        }
        Self::new(focus_distance_m, focal_length_m, f_number, 1.0 / pixel_pitch_m)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("focus distance", self.focus_distance_m),
            ("focal length", self.focal_length_m),
            ("f-number", self.f_number),
            ("px per m", self.px_per_m),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidSettings(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if self.focus_distance_m <= self.focal_length_m {
            return Err(Error::InvalidSettings(format!(
                "focus distance {} must exceed focal length {}",
                self.focus_distance_m, self.focal_length_m
            )));
        }
        Ok(())
    }

    /// Same lens, refocused at `focus_distance_m`.
    pub fn with_focus_distance(&self, focus_distance_m: f64) -> Result<Self> {
        let s = CameraSettings {
            focus_distance_m,
            ..*self
        };
        s.validate()?;
        Ok(s)
    }

    fn check_depth(&self, depth_m: f64) -> Result<()> {
        if !(depth_m.is_finite() && depth_m > 0.0) {
            return Err(Error::Domain(format!("depth must be positive and finite, got {depth_m}")));
        }
        if depth_m <= self.focal_length_m {
            return Err(Error::Domain(format!(
                "depth {depth_m} m does not exceed the focal length {} m",
                self.focal_length_m
            )));
        }
        Ok(())
    }

    /// CoC diameter in pixels for a point at `depth_m`. Exactly zero on the
    /// focal plane.
    pub fn coc_diameter_px(&self, depth_m: f64) -> Result<f64> {
        self.validate()?;
        self.check_depth(depth_m)?;
        let (d, df, f) = (depth_m, self.focus_distance_m, self.focal_length_m);
        Ok(self.px_per_m * ((d - df).abs() / d) * (f * f) / (self.f_number * (df - f)))
    }

    /// Signed CoC `A + B/d`: positive behind the focal plane, negative in
    /// front of it.
    pub fn signed_coc_px(&self, depth_m: f64) -> Result<f64> {
        let coeffs = self.affine_decompose()?;
        self.check_depth(depth_m)?;
        Ok(coeffs.signed_coc(depth_m))
    }

    pub fn affine_decompose(&self) -> Result<AffineCoefficients> {
        self.validate()?;
        let f = self.focal_length_m;
        let a_const = self.px_per_m * f * f / (self.f_number * (self.focus_distance_m - f));
        Ok(AffineCoefficients {
            a_const,
            b_const: -a_const * self.focus_distance_m,
        })
    }
}

/// Constants of the affine form `c = |A + B/d|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineCoefficients {
    /// Pixels.
    pub a_const: f64,
    /// Pixel-meters.
    pub b_const: f64,
}

impl AffineCoefficients {
    pub fn signed_coc(&self, depth_m: f64) -> f64 {
        self.a_const + self.b_const / depth_m
    }

    pub fn coc(&self, depth_m: f64) -> f64 {
        self.signed_coc(depth_m).abs()
    }

    /// Depth of the zero crossing, i.e. the focus distance.
    pub fn zero_crossing_m(&self) -> f64 {
        -self.b_const / self.a_const
    }
}

/// Settings rescaled by `σ`; every depth used with them must be scaled by the
/// same factor (see [`ScaledSample::scale_depth`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledSample {
    pub scale: f64,
    pub settings: CameraSettings,
    pub depth_scale_applied: bool,
}

impl ScaledSample {
    pub fn scale_depth(&self, depth_m: f64) -> f64 {
        depth_m * self.scale
    }

    pub fn scale_focus_distances(&self, focus_distances_m: &[f64]) -> Vec<f64> {
        focus_distances_m.iter().map(|&d| d * self.scale).collect()
    }
}

/// `{σ·d_f, σ·f, N, b/σ}`; the CoC of `σ·d` under the result equals the CoC
/// of `d` under `settings`.
pub fn scale_sample(settings: &CameraSettings, sigma: f64) -> Result<ScaledSample> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::Domain(format!("scale factor must be positive and finite, got {sigma}")));
    }
    settings.validate()?;
    let scaled = CameraSettings::new(
        settings.focus_distance_m * sigma,
        settings.focal_length_m * sigma,
        settings.f_number,
        settings.px_per_m / sigma,
    )?;
    Ok(ScaledSample {
        scale: sigma,
        settings: scaled,
        depth_scale_applied: true,
    })
}

/// Camera rows used throughout the tests and tools.
pub mod presets {
    use super::CameraSettings;

    pub const DEFOCUSNET_FOCUS_DISTANCES: [f64; 5] = [0.1, 0.15, 0.3, 0.7, 1.5];
    pub const NYU_FOCUS_DISTANCES: [f64; 3] = [2.0, 4.0, 8.0];

    /// f = 2.9 mm, N = 1, 1.2e-5 m/px.
    pub fn defocusnet(focus_distance_m: f64) -> CameraSettings {
        CameraSettings {
            focus_distance_m,
            focal_length_m: 2.9e-3,
            f_number: 1.0,
            px_per_m: 1.0 / 1.2e-5,
        }
    }

    /// f = 15 mm, N = 2.8, 5.6e-6 m/px.
    pub fn nyu(focus_distance_m: f64) -> CameraSettings {
        CameraSettings {
            focus_distance_m,
            focal_length_m: 15e-3,
            f_number: 2.8,
            px_per_m: 1.0 / 5.6e-6,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::presets::{defocusnet, nyu};
    use super::*;

    #[test]
    fn in_focus_plane_has_zero_coc() {
        assert_eq!(defocusnet(0.3).coc_diameter_px(0.3).unwrap(), 0.0);
    }

    #[test]
    fn coc_matches_hand_evaluation() {
        // high-precision evaluations of the closed form
        let c = defocusnet(0.3).coc_diameter_px(0.6).unwrap();
        assert!((c - 1.179_456_972_960_843_7).abs() < 1e-12 * c);
        let c = nyu(2.0).coc_diameter_px(4.0).unwrap();
        assert!((c - 3.614_481_056_906_389_8).abs() < 1e-12 * c);
    }

    #[test]
    fn affine_coefficients() {
        let ab = defocusnet(0.3).affine_decompose().unwrap();
        assert!((ab.a_const - 2.358_913_945_921_687_4).abs() < 1e-12);
        assert!((ab.b_const + 0.707_674_183_776_506_2).abs() < 1e-12);
        assert_eq!(ab.signed_coc(0.3), 0.0);
        assert!((ab.zero_crossing_m() - 0.3).abs() < 1e-15);
        assert!(defocusnet(0.3).signed_coc_px(0.2).unwrap() < 0.0);
        assert!(defocusnet(0.3).signed_coc_px(0.6).unwrap() > 0.0);
    }

    #[test]
    fn rejects_bad_depths_and_settings() {
        let s = defocusnet(0.3);
        assert!(matches!(s.coc_diameter_px(0.0), Err(Error::Domain(_))));
        assert!(matches!(s.coc_diameter_px(-1.0), Err(Error::Domain(_))));
        assert!(matches!(s.coc_diameter_px(2.9e-3), Err(Error::Domain(_))));
        assert!(matches!(s.coc_diameter_px(f64::NAN), Err(Error::Domain(_))));
        assert!(CameraSettings::new(2e-3, 2.9e-3, 1.0, 1.0).is_err());
        assert!(CameraSettings::new(0.3, 2.9e-3, 0.0, 1.0).is_err());
        assert!(CameraSettings::new(0.3, 2.9e-3, 1.0, f64::INFINITY).is_err());
        assert!(CameraSettings::from_pixel_pitch(0.3, 2.9e-3, 1.0, -1.0).is_err());
    }

    #[test]
    fn pixel_pitch_is_inverted() {
        let s = CameraSettings::from_pixel_pitch(0.3, 2.9e-3, 1.0, 1.2e-5).unwrap();
        assert_eq!(s.px_per_m, 1.0 / 1.2e-5);
    }

    #[test]
    fn scaled_sample_preserves_coc() {
        let s = defocusnet(0.3);
        let scaled = scale_sample(&s, 2.0).unwrap();
        let a = s.coc_diameter_px(0.6).unwrap();
        let b = scaled.settings.coc_diameter_px(scaled.scale_depth(0.6)).unwrap();
        assert!((a - b).abs() <= 1e-12 * a);
        assert!((b - 1.179_456_972_960_843_7).abs() < 1e-9);
        assert_eq!(scale_sample(&s, 1.0).unwrap().settings, s);
        assert!(scale_sample(&s, 0.0).is_err());
        assert!(scale_sample(&s, -2.0).is_err());
    }

    #[test]
    fn largest_augmentation_factor() {
        let s = defocusnet(0.3);
        let scaled = scale_sample(&s, 9.0).unwrap();
        assert!((scaled.settings.focus_distance_m - 2.7).abs() < 1e-12);
        assert!((scaled.settings.focal_length_m - 0.0261).abs() < 1e-15);
        assert_eq!(scaled.settings.f_number, 1.0);
        for d in [0.05, 0.2, 0.6, 2.5] {
            let a = s.coc_diameter_px(d).unwrap();
            let b = scaled.settings.coc_diameter_px(9.0 * d).unwrap();
            assert!((a - b).abs() <= 1e-12 * a + 1e-15);
        }
    }
}
