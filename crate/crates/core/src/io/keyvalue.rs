//! Flat `key = value` documents with comma-separated lists.
//!
//! ```text
//! # DefocusNet-style camera
//! focus_distances = 0.1, 0.15, 0.3, 0.7, 1.5
//! focal_length = 2.9e-3
//! f_number = 1
//! pixel_pitch_m = 1.2e-5
//! ```
//!
//! `#` starts a comment, blank lines are ignored and `:` is accepted in
//! place of `=`. Later keys override earlier ones.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::camera::CameraSettings;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues {
    source: Option<PathBuf>,
    entries: BTreeMap<String, String>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_from(text, None)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_from(&text, Some(path.to_path_buf()))
    }

    fn parse_from(text: &str, source: Option<PathBuf>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some(split) = line.find(['=', ':']) else {
                return Err(Error::format(
                    source.clone().unwrap_or_default(),
                    format!("line {}: expected `key = value`", n + 1),
                ));
            };
            let key = line[..split].trim();
            if key.is_empty() {
                return Err(Error::format(
                    source.clone().unwrap_or_default(),
                    format!("line {}: empty key", n + 1),
                ));
            }
            entries.insert(key.to_string(), line[split + 1..].trim().to_string());
        }
        Ok(KeyValues { source, entries })
    }

    pub fn insert(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.insert(key.into(), value.into());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn err(&self, message: String) -> Error {
        Error::format(self.source.clone().unwrap_or_default(), message)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| self.err(format!("cannot parse `{key}` value {v:?}"))),
        }
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?.ok_or_else(|| self.err(format!("missing key `{key}`")))
    }

    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        let Some(v) = self.entries.get(key) else {
            return Ok(None);
        };
        v.trim_matches(|c| c == '[' || c == ']')
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| self.err(format!("cannot parse `{key}` item {s:?}"))))
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>> {
        match self.entries.get(key).map(|v| v.to_ascii_lowercase()) {
            None => Ok(None),
            Some(v) if matches!(v.as_str(), "true" | "yes" | "1" | "on") => Ok(Some(true)),
            Some(v) if matches!(v.as_str(), "false" | "no" | "0" | "off") => Ok(Some(false)),
            Some(v) => Err(self.err(format!("cannot parse `{key}` value {v:?} as a flag"))),
        }
    }

    pub fn to_text(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

/// Contents of a camera settings file.
#[derive(Debug, Clone, PartialEq)]
pub struct SettingsFile {
    pub focus_distances_m: Vec<f64>,
    pub focal_length_m: f64,
    pub f_number: f64,
    /// Meters per pixel, as cameras and datasets usually quote it.
    pub pixel_pitch_m: f64,
}

impl SettingsFile {
    pub fn from_key_values(kv: &KeyValues) -> Result<Self> {
        let file = SettingsFile {
            focus_distances_m: kv.get_list("focus_distances")?.unwrap_or_default(),
            focal_length_m: kv.require("focal_length")?,
            f_number: kv.require("f_number")?,
            pixel_pitch_m: kv.require("pixel_pitch_m")?,
        };
        file.camera()?;
        Ok(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_key_values(&KeyValues::load(path)?)
    }

    /// Lens settings; the focus distance is the first listed one (or a
    /// placeholder beyond the focal length when none are listed).
    pub fn camera(&self) -> Result<CameraSettings> {
        let focus = self
            .focus_distances_m
            .first()
            .copied()
            .unwrap_or(2.0 * self.focal_length_m);
        CameraSettings::from_pixel_pitch(focus, self.focal_length_m, self.f_number, self.pixel_pitch_m)
    }

    pub fn to_key_values(&self) -> KeyValues {
        let mut kv = KeyValues::default();
        kv.insert("focus_distances", join_list(&self.focus_distances_m));
        kv.insert("focal_length", format!("{:e}", self.focal_length_m));
        kv.insert("f_number", format!("{}", self.f_number));
        kv.insert("pixel_pitch_m", format!("{:e}", self.pixel_pitch_m));
        kv
    }

    pub fn from_camera(settings: &CameraSettings, focus_distances_m: &[f64]) -> Self {
        SettingsFile {
            focus_distances_m: focus_distances_m.to_vec(),
            focal_length_m: settings.focal_length_m,
            f_number: settings.f_number,
            pixel_pitch_m: 1.0 / settings.px_per_m,
        }
    }
}

pub fn join_list(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEFOCUSNET: &str = "# camera\nfocus_distances = 0.1, 0.15, 0.3, 0.7, 1.5\nfocal_length = 2.9e-3\nf_number: 1\npixel_pitch_m = 1.2e-5 # m/px\n\n";

    #[test]
    fn parses_settings() {
        let s = SettingsFile::from_key_values(&KeyValues::parse(DEFOCUSNET).unwrap()).unwrap();
        assert_eq!(s.focus_distances_m, vec![0.1, 0.15, 0.3, 0.7, 1.5]);
        let cam = s.camera().unwrap();
        assert_eq!(cam.px_per_m, 1.0 / 1.2e-5);
        assert_eq!(cam.focus_distance_m, 0.1);
    }

    #[test]
    fn text_round_trip() {
        let s = SettingsFile::from_key_values(&KeyValues::parse(DEFOCUSNET).unwrap()).unwrap();
        let again = SettingsFile::from_key_values(&KeyValues::parse(&s.to_key_values().to_text()).unwrap()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn errors() {
        assert!(KeyValues::parse("no separator").is_err());
        assert!(KeyValues::parse("= 3").is_err());
        let kv = KeyValues::parse("focal_length = abc\nf_number = 1\npixel_pitch_m = 1e-5").unwrap();
        assert!(SettingsFile::from_key_values(&kv).is_err());
        let kv = KeyValues::parse("focal_length = 1e-3\npixel_pitch_m = 1e-5").unwrap();
        assert!(SettingsFile::from_key_values(&kv).is_err());
        let kv = KeyValues::parse("x = yes\ny = maybe").unwrap();
        assert_eq!(kv.get_bool("x").unwrap(), Some(true));
        assert!(kv.get_bool("y").is_err());
    }

    #[test]
    fn bracketed_lists() {
        let kv = KeyValues::parse("l = [1, 2,3]").unwrap();
        assert_eq!(kv.get_list::<f64>("l").unwrap(), Some(vec![1.0, 2.0, 3.0]));
    }
}
