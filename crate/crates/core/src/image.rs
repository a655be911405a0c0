use crate::error::{Error, Result};

/// Planar floating-point image: one row-major plane per channel.
///
/// Intensities are nominally in `[0, 1]`; intermediate results (unclamped
/// deconvolution output) may leave that range, so only finiteness is checked.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::DimensionMismatch(format!("empty image {width}x{height}")));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::DimensionMismatch(format!("unsupported channel count {channels}")));
        }
        if data.len() != width * height * channels {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height}x{channels} image needs {} samples, got {}",
                width * height * channels,
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite sample at index {i}")));
        }
        Ok(Image {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Result<Self> {
        Self::new(width, height, channels, vec![value; width * height * channels])
    }

    /// Assembles an image from equally sized planes.
    pub fn from_planes(width: usize, height: usize, planes: Vec<Vec<f64>>) -> Result<Self> {
        let channels = planes.len();
        let data = planes.into_iter().flatten().collect();
        Self::new(width, height, channels, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn plane(&self, channel: usize) -> &[f64] {
        let n = self.width * self.height;
        &self.data[channel * n..(channel + 1) * n]
    }

    pub fn plane_mut(&mut self, channel: usize) -> &mut [f64] {
        let n = self.width * self.height;
        &mut self.data[channel * n..(channel + 1) * n]
    }

    pub fn planes(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.width * self.height)
    }

    pub fn get(&self, x: usize, y: usize, channel: usize) -> f64 {
        self.data[(channel * self.height + y) * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, channel: usize, value: f64) {
        self.data[(channel * self.height + y) * self.width + x] = value;
    }

    /// Rec. 601 luma for 3-channel images, the plane itself otherwise.
    pub fn luminance(&self) -> Vec<f64> {
        if self.channels == 1 {
            return self.data.clone();
        }
        let (r, g, b) = (self.plane(0), self.plane(1), self.plane(2));
        r.iter()
            .zip(g)
            .zip(b)
            .map(|((r, g), b)| 0.299 * r + 0.587 * g + 0.114 * b)
            .collect()
    }

    pub fn clamp01(mut self) -> Self {
        for v in &mut self.data {
            *v = v.clamp(0.0, 1.0);
        }
        self
    }

    pub fn map(mut self, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        for v in &mut self.data {
            *v = f(*v);
        }
        Self::new(self.width, self.height, self.channels, self.data)
    }

    pub fn same_shape(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }
}

/// Metric depth with a per-pixel validity mask.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthMap {
    width: usize,
    height: usize,
    depth_m: Vec<f64>,
    valid: Vec<bool>,
}

impl DepthMap {
    /// Pixels with non-finite or nonpositive depth are marked invalid.
    pub fn new(width: usize, height: usize, depth_m: Vec<f64>) -> Result<Self> {
        let valid = depth_m.iter().map(|d| d.is_finite() && *d > 0.0).collect();
        Self::with_mask(width, height, depth_m, valid)
    }

    pub fn with_mask(width: usize, height: usize, depth_m: Vec<f64>, valid: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::DimensionMismatch(format!("empty depth map {width}x{height}")));
        }
        if depth_m.len() != width * height || valid.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height} depth map needs {} samples, got {} depths and {} mask entries",
                width * height,
                depth_m.len(),
                valid.len()
            )));
        }
        for (i, (&d, &v)) in depth_m.iter().zip(&valid).enumerate() {
            if v && !(d.is_finite() && d > 0.0) {
                return Err(Error::Domain(format!("valid pixel {i} has depth {d}")));
            }
        }
        Ok(DepthMap {
            width,
            height,
            depth_m,
            valid,
        })
    }

    pub fn constant(width: usize, height: usize, depth_m: f64) -> Result<Self> {
        Self::new(width, height, vec![depth_m; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn depths(&self) -> &[f64] {
        &self.depth_m
    }

    pub fn mask(&self) -> &[bool] {
        &self.valid
    }

    pub fn get(&self, x: usize, y: usize) -> Option<f64> {
        let i = y * self.width + x;
        self.valid[i].then_some(self.depth_m[i])
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::with_mask(
            self.width,
            self.height,
            self.depth_m.iter().map(|d| d * factor).collect(),
            self.valid.clone(),
        )
    }
}
