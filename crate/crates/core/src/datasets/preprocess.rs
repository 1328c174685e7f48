//! Grayscale conversion, bilinear resizing, channel replication, mean
//! shifting and labeled+stimulus mixing.

use super::Dataset;
use crate::arch::Shape3;
use crate::error::{KdError, Result};
use crate::losses::uniform_target;

const LUMA: [f32; 3] = [0.299, 0.587, 0.114];

/// Luminance of a planar RGB image (`3×plane` values) as one plane.
pub fn grayscale_plane(rgb: &[f32], plane: usize) -> Vec<f32> {
    debug_assert_eq!(rgb.len(), 3 * plane);
    (0..plane)
        .map(|p| LUMA[0] * rgb[p] + LUMA[1] * rgb[plane + p] + LUMA[2] * rgb[2 * plane + p])
        .collect()
}

fn bilinear_axis(out_len: usize, in_len: usize) -> Vec<(usize, usize, f32)> {
    // half-pixel centres, clamped at the borders
    let scale = in_len as f64 / out_len as f64;
    (0..out_len)
        .map(|o| {
            let src = ((o as f64 + 0.5) * scale - 0.5).clamp(0.0, (in_len - 1) as f64);
            let lo = src.floor() as usize;
            let hi = (lo + 1).min(in_len - 1);
            (lo, hi, (src - lo as f64) as f32)
        })
        .collect()
}

/// Bilinear resize of every channel of a planar image to `h×w`.
pub fn resize_bilinear(data: &[f32], shape: Shape3, h: usize, w: usize) -> Result<Vec<f32>> {
    if h == 0 || w == 0 {
        return Err(KdError::Argument(format!("cannot resize to {h}x{w}")));
    }
    if data.len() != shape.len() {
        return Err(KdError::Shape(format!("{} values for a {shape} image", data.len())));
    }
    if (h, w) == (shape.h, shape.w) {
        return Ok(data.to_vec());
    }
    let ys = bilinear_axis(h, shape.h);
    let xs = bilinear_axis(w, shape.w);
    let mut out = Vec::with_capacity(shape.c * h * w);
    for src in data.chunks_exact(shape.plane()) {
        for &(y0, y1, fy) in &ys {
            let (r0, r1) = (&src[y0 * shape.w..][..shape.w], &src[y1 * shape.w..][..shape.w]);
            for &(x0, x1, fx) in &xs {
                let top = r0[x0] + (r0[x1] - r0[x0]) * fx;
                let bot = r1[x0] + (r1[x1] - r1[x0]) * fx;
                out.push(top + (bot - top) * fy);
            }
        }
    }
    Ok(out)
}

/// Value(s) subtracted from every pixel before a network sees it.
#[derive(Debug, Clone, PartialEq)]
pub enum MeanShift {
    Global(f32),
    PerChannel(Vec<f32>),
}

impl MeanShift {
    pub fn none() -> Self {
        MeanShift::Global(0.0)
    }

    /// Grand mean over every pixel of `ds`.
    pub fn global_of(ds: &Dataset) -> Self {
        let n = ds.pixels().len().max(1);
        MeanShift::Global((ds.pixels().iter().map(|&v| f64::from(v)).sum::<f64>() / n as f64) as f32)
    }

    pub fn per_channel_of(ds: &Dataset) -> Self {
        MeanShift::PerChannel(channel_means(ds))
    }

    /// The stored values (one for a global shift).
    pub fn values(&self) -> Vec<f32> {
        match self {
            MeanShift::Global(m) => vec![*m],
            MeanShift::PerChannel(v) => v.clone(),
        }
    }

    /// Inverse of [`values`](Self::values): one value is global.
    pub fn from_values(v: &[f32]) -> Result<Self> {
        match v {
            [] => Err(KdError::Argument("empty mean shift".into())),
            [m] => Ok(MeanShift::Global(*m)),
            _ => Ok(MeanShift::PerChannel(v.to_vec())),
        }
    }

    fn for_channel(&self, c: usize) -> f32 {
        match self {
            MeanShift::Global(m) => *m,
            MeanShift::PerChannel(v) => v[c],
        }
    }

    fn check(&self, channels: usize) -> Result<()> {
        match self {
            MeanShift::PerChannel(v) if v.len() != channels => Err(KdError::Argument(format!(
                "{} channel means for {channels}-channel images",
                v.len()
            ))),
            _ => Ok(()),
        }
    }

    fn apply(&self, shape: Shape3, pixels: &mut [f32]) {
        if *self == MeanShift::Global(0.0) {
            return;
        }
        let plane = shape.plane();
        for img in pixels.chunks_exact_mut(shape.len()) {
            for (c, p) in img.chunks_exact_mut(plane).enumerate() {
                let m = self.for_channel(c);
                p.iter_mut().for_each(|v| *v -= m);
            }
        }
    }
}

/// Mean of each channel over all samples and positions.
pub fn channel_means(ds: &Dataset) -> Vec<f32> {
    let shape = ds.shape();
    let mut sums = vec![0f64; shape.c];
    for img in ds.pixels().chunks_exact(shape.len()) {
        for (c, p) in img.chunks_exact(shape.plane()).enumerate() {
            sums[c] += p.iter().map(|&v| f64::from(v)).sum::<f64>();
        }
    }
    let n = (ds.len() * shape.plane()).max(1) as f64;
    sums.into_iter().map(|s| (s / n) as f32).collect()
}

/// Preprocessing pipeline: grayscale, resize, replicate channels, shift.
#[derive(Debug, Clone, PartialEq)]
pub struct Preprocess {
    pub grayscale: bool,
    pub resize_to: Option<(usize, usize)>,
    /// Replicate a single channel this many times.
    pub replicate_to: Option<usize>,
    pub mean_shift: MeanShift,
}

impl Default for Preprocess {
    fn default() -> Self {
        Self { grayscale: false, resize_to: None, replicate_to: None, mean_shift: MeanShift::none() }
    }
}

pub fn preprocess(ds: &Dataset, p: &Preprocess) -> Result<Dataset> {
    if ds.is_empty() {
        return Err(KdError::Argument(format!("dataset '{}' is empty", ds.name())));
    }
    let mut shape = ds.shape();
    let mut pixels = ds.pixels().to_vec();
    if p.grayscale && shape.c == 3 {
        pixels = pixels.chunks_exact(shape.len()).flat_map(|img| grayscale_plane(img, shape.plane())).collect();
        shape = Shape3::new(1, shape.h, shape.w);
    } else if p.grayscale && shape.c != 1 {
        return Err(KdError::Argument(format!("cannot grayscale {}-channel images", shape.c)));
    }
    if let Some((h, w)) = p.resize_to {
        let mut out = Vec::with_capacity(ds.len() * shape.c * h * w);
        for img in pixels.chunks_exact(shape.len()) {
            out.extend(resize_bilinear(img, shape, h, w)?);
        }
        pixels = out;
        shape = Shape3::new(shape.c, h, w);
    }
    if let Some(c) = p.replicate_to.filter(|&c| c != shape.c) {
        if shape.c != 1 || c == 0 {
            return Err(KdError::Argument(format!("cannot replicate {} channels to {c}", shape.c)));
        }
        let mut out = Vec::with_capacity(pixels.len() * c);
        for img in pixels.chunks_exact(shape.len()) {
            (0..c).for_each(|_| out.extend_from_slice(img));
        }
        pixels = out;
        shape = Shape3::new(c, shape.h, shape.w);
    }
    p.mean_shift.check(shape.c)?;
    p.mean_shift.apply(shape, &mut pixels);
    Ok(ds.clone().map_pixels(shape, pixels))
}

/// Brings `ds` to `target`: luminance for 3→1 channels, replication for
/// 1→3, bilinear resize, then the mean shift.
pub fn adapt_to_input(ds: &Dataset, target: Shape3, shift: &MeanShift) -> Result<Dataset> {
    let src = ds.shape();
    let grayscale = src.c == 3 && target.c == 1;
    let replicate_to = match (src.c, target.c) {
        (a, b) if a == b => None,
        (3, 1) => None,
        (1, b) => Some(b),
        (a, b) => {
            return Err(KdError::Shape(format!("cannot adapt {a}-channel images to {b} channels")))
        }
    };
    preprocess(
        ds,
        &Preprocess {
            grayscale,
            resize_to: Some((target.h, target.w)),
            replicate_to,
            mean_shift: shift.clone(),
        },
    )
}

/// Concatenates a labeled set with unlabeled stimulus. Stimulus samples get
/// the uniform target and are left unflagged in `labeled_mask`.
pub fn mix_augment(labeled: &Dataset, stimulus: &Dataset) -> Result<Dataset> {
    let k = labeled
        .num_classes()
        .filter(|_| labeled.has_labels())
        .ok_or_else(|| KdError::Argument(format!("'{}' carries no labels", labeled.name())))?;
    if stimulus.has_labels() {
        return Err(KdError::Argument(format!("stimulus '{}' must be unlabeled", stimulus.name())));
    }
    if stimulus.is_empty() {
        return Ok(labeled.clone());
    }
    if labeled.shape() != stimulus.shape() {
        return Err(KdError::Argument(format!(
            "labeled images are {} but stimulus images are {}",
            labeled.shape(),
            stimulus.shape()
        )));
    }
    let (labels, mask) = labeled.parts();
    let mut labels = labels.cloned().unwrap_or_default();
    let mut mask = mask.to_vec();
    let uniform: Vec<f32> = uniform_target(k)?.values().iter().map(|&v| v as f32).collect();
    for _ in 0..stimulus.len() {
        labels.extend_from_slice(&uniform);
        mask.push(false);
    }
    let mut pixels = labeled.pixels().to_vec();
    pixels.extend_from_slice(stimulus.pixels());
    let name = if labeled.is_empty() {
        stimulus.name().to_string()
    } else {
        format!("{}+{}", labeled.name(), stimulus.name())
    };
    Ok(Dataset::from_parts(name, labeled.shape(), pixels, Some(labels), mask, Some(k)))
}
