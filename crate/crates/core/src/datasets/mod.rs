//! Datasets: in-memory image batches with optional (soft) labels, loaders
//! for IDX, CIFAR-10 binary and netpbm directories, synthetic stimulus
//! generators and preprocessing.

mod cifar;
mod idx;
pub mod netpbm;
mod preprocess;
mod synth;

pub use cifar::{load_cifar10_bin, load_cifar10_file, load_cifar10_test, CIFAR_RECORD_LEN};
pub use idx::{encode_idx_images, encode_idx_labels, load_mnist_dir, load_mnist_idx, MnistSplit};
pub use netpbm::load_image_dir;
pub use preprocess::{
    adapt_to_input, channel_means, grayscale_plane, mix_augment, preprocess, resize_bilinear,
    MeanShift, Preprocess,
};
pub use synth::{gen_gaussian_noise, gen_shapes, gen_shapes_with_kinds, gen_uniform_noise, ShapeKind};

use crate::arch::Shape3;
use crate::error::{KdError, Result};
use crate::losses::validate_distribution;
use crate::tensor::Tensor;

/// Images `N×C×H×W` with optional per-sample label distributions.
///
/// A sample flagged in `labeled_mask` always has a label row. Unflagged
/// samples may still carry a row (the uniform stand-in target used for
/// stimulus in augmented distillation).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    shape: Shape3,
    pixels: Vec<f32>,
    labels: Option<Vec<f32>>,
    labeled_mask: Vec<bool>,
    num_classes: Option<usize>,
}

impl Dataset {
    /// Unlabeled images.
    pub fn unlabeled(name: impl Into<String>, shape: Shape3, pixels: Vec<f32>) -> Result<Self> {
        let n = Self::count(shape, &pixels)?;
        Ok(Self {
            name: name.into(),
            shape,
            pixels,
            labels: None,
            labeled_mask: vec![false; n],
            num_classes: None,
        })
    }

    /// Images with hard class labels, stored as one-hot rows.
    pub fn with_classes(
        name: impl Into<String>,
        shape: Shape3,
        pixels: Vec<f32>,
        classes: &[usize],
        num_classes: usize,
    ) -> Result<Self> {
        let n = Self::count(shape, &pixels)?;
        if classes.len() != n {
            return Err(KdError::Argument(format!(
                "{} labels for {n} images",
                classes.len()
            )));
        }
        let mut labels = vec![0.0; n * num_classes];
        for (i, &c) in classes.iter().enumerate() {
            if c >= num_classes {
                return Err(KdError::Argument(format!(
                    "label {c} out of range for {num_classes} classes"
                )));
            }
            labels[i * num_classes + c] = 1.0;
        }
        Ok(Self {
            name: name.into(),
            shape,
            pixels,
            labels: Some(labels),
            labeled_mask: vec![true; n],
            num_classes: Some(num_classes),
        })
    }

    /// Images with explicit label rows and a per-sample labeled flag.
    pub fn with_soft_labels(
        name: impl Into<String>,
        shape: Shape3,
        pixels: Vec<f32>,
        labels: Vec<f32>,
        labeled_mask: Vec<bool>,
        num_classes: usize,
    ) -> Result<Self> {
        let n = Self::count(shape, &pixels)?;
        if num_classes == 0 || labels.len() != n * num_classes || labeled_mask.len() != n {
            return Err(KdError::Argument(format!(
                "label matrix {} / mask {} inconsistent with {n} samples of {num_classes} classes",
                labels.len(),
                labeled_mask.len()
            )));
        }
        for row in labels.chunks_exact(num_classes) {
            validate_distribution(row)?;
        }
        Ok(Self {
            name: name.into(),
            shape,
            pixels,
            labels: Some(labels),
            labeled_mask,
            num_classes: Some(num_classes),
        })
    }

    /// A labeled dataset with no samples.
    pub fn empty_labeled(name: impl Into<String>, shape: Shape3, num_classes: usize) -> Self {
        Self {
            name: name.into(),
            shape,
            pixels: Vec::new(),
            labels: Some(Vec::new()),
            labeled_mask: Vec::new(),
            num_classes: Some(num_classes),
        }
    }

    fn count(shape: Shape3, pixels: &[f32]) -> Result<usize> {
        if shape.is_empty() || pixels.len() % shape.len() != 0 {
            return Err(KdError::Shape(format!(
                "{} values do not form whole {shape} images",
                pixels.len()
            )));
        }
        Ok(pixels.len() / shape.len())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn shape(&self) -> Shape3 {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.labeled_mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labeled_mask.is_empty()
    }

    pub fn pixels(&self) -> &[f32] {
        &self.pixels
    }

    pub fn image(&self, i: usize) -> &[f32] {
        let len = self.shape.len();
        &self.pixels[i * len..(i + 1) * len]
    }

    pub fn num_classes(&self) -> Option<usize> {
        self.num_classes
    }

    pub fn has_labels(&self) -> bool {
        self.labels.is_some()
    }

    pub fn labels(&self) -> Option<&[f32]> {
        self.labels.as_deref()
    }

    pub fn labeled_mask(&self) -> &[bool] {
        &self.labeled_mask
    }

    pub fn labeled_count(&self) -> usize {
        self.labeled_mask.iter().filter(|&&m| m).count()
    }

    pub fn is_fully_labeled(&self) -> bool {
        self.labels.is_some() && self.labeled_mask.iter().all(|&m| m)
    }

    pub fn label_row(&self, i: usize) -> Option<&[f32]> {
        let k = self.num_classes?;
        self.labels.as_ref().map(|l| &l[i * k..(i + 1) * k])
    }

    /// Index of the largest label entry (lowest index on ties).
    pub fn class_of(&self, i: usize) -> Option<usize> {
        self.label_row(i).map(argmax)
    }

    /// Same images with labels removed.
    pub fn without_labels(&self) -> Self {
        Self {
            name: self.name.clone(),
            shape: self.shape,
            pixels: self.pixels.clone(),
            labels: None,
            labeled_mask: vec![false; self.len()],
            num_classes: None,
        }
    }

    /// Samples at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let len = self.shape.len();
        let mut pixels = Vec::with_capacity(indices.len() * len);
        let mut labels = self.labels.as_ref().map(|_| Vec::new());
        let mut mask = Vec::with_capacity(indices.len());
        for &i in indices {
            pixels.extend_from_slice(self.image(i));
            if let (Some(l), Some(row)) = (labels.as_mut(), self.label_row(i)) {
                l.extend_from_slice(row);
            }
            mask.push(self.labeled_mask[i]);
        }
        Self {
            name: self.name.clone(),
            shape: self.shape,
            pixels,
            labels,
            labeled_mask: mask,
            num_classes: self.num_classes,
        }
    }

    /// The first `n` samples (or all, if fewer).
    pub fn take(&self, n: usize) -> Self {
        let idx: Vec<usize> = (0..n.min(self.len())).collect();
        self.select(&idx)
    }

    /// Samples `start..start+n` (clipped to the dataset).
    pub fn slice(&self, start: usize, n: usize) -> Self {
        let end = (start + n).min(self.len());
        let idx: Vec<usize> = (start.min(end)..end).collect();
        self.select(&idx)
    }

    /// Images at `indices` as an `n×C×H×W` batch.
    pub fn batch(&self, indices: &[usize]) -> Result<Tensor<f32>> {
        let len = self.shape.len();
        let mut data = Vec::with_capacity(indices.len() * len);
        for &i in indices {
            data.extend_from_slice(self.image(i));
        }
        Tensor::from_vec(vec![indices.len(), self.shape.c, self.shape.h, self.shape.w], data)
    }

    /// All images as one batch tensor.
    pub fn images(&self) -> Result<Tensor<f32>> {
        Tensor::from_vec(
            vec![self.len(), self.shape.c, self.shape.h, self.shape.w],
            self.pixels.clone(),
        )
    }

    pub(crate) fn map_pixels(mut self, shape: Shape3, pixels: Vec<f32>) -> Self {
        debug_assert_eq!(pixels.len(), self.len() * shape.len());
        self.shape = shape;
        self.pixels = pixels;
        self
    }

    pub(crate) fn parts(&self) -> (Option<&Vec<f32>>, &[bool]) {
        (self.labels.as_ref(), &self.labeled_mask)
    }

    pub(crate) fn from_parts(
        name: String,
        shape: Shape3,
        pixels: Vec<f32>,
        labels: Option<Vec<f32>>,
        labeled_mask: Vec<bool>,
        num_classes: Option<usize>,
    ) -> Self {
        Self {
            name,
            shape,
            pixels,
            labels,
            labeled_mask,
            num_classes,
        }
    }
}

/// Index of the largest value; ties resolve to the lowest index.
pub fn argmax(row: &[f32]) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate() {
        if v > row[best] {
            best = i;
        }
    }
    best
}
