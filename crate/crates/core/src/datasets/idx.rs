//! MNIST IDX files: big-endian headers, unsigned-byte payloads.

use std::path::{Path, PathBuf};

use super::Dataset;
use crate::arch::Shape3;
use crate::error::{KdError, Result};

const IMAGE_MAGIC: u32 = 0x0000_0803;
const LABEL_MAGIC: u32 = 0x0000_0801;
const MNIST_CLASSES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MnistSplit {
    Train,
    Test,
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| KdError::io(path, e))
}

fn be_u32(bytes: &[u8], offset: usize, name: &str) -> Result<u32> {
    bytes
        .get(offset..offset + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| KdError::format(name, offset as u64, "truncated header"))
}

fn payload<'a>(bytes: &'a [u8], offset: usize, len: usize, name: &str) -> Result<&'a [u8]> {
    bytes.get(offset..offset + len).ok_or_else(|| {
        KdError::format(
            name,
            bytes.len() as u64,
            format!("payload truncated: need {len} bytes from offset {offset}"),
        )
    })
}

fn parse_images(bytes: &[u8], name: &str) -> Result<(usize, usize, usize, Vec<f32>)> {
    let magic = be_u32(bytes, 0, name)?;
    if magic != IMAGE_MAGIC {
        return Err(KdError::format(
            name,
            0,
            format!("bad magic {magic:#010x}, expected {IMAGE_MAGIC:#010x}"),
        ));
    }
    let n = be_u32(bytes, 4, name)? as usize;
    let h = be_u32(bytes, 8, name)? as usize;
    let w = be_u32(bytes, 12, name)? as usize;
    if h == 0 || w == 0 {
        return Err(KdError::format(name, 8, "zero image dimension"));
    }
    let raw = payload(bytes, 16, n * h * w, name)?;
    Ok((n, h, w, raw.iter().map(|&b| f32::from(b) / 255.0).collect()))
}

fn parse_labels(bytes: &[u8], name: &str) -> Result<Vec<usize>> {
    let magic = be_u32(bytes, 0, name)?;
    if magic != LABEL_MAGIC {
        return Err(KdError::format(
            name,
            0,
            format!("bad magic {magic:#010x}, expected {LABEL_MAGIC:#010x}"),
        ));
    }
    let n = be_u32(bytes, 4, name)? as usize;
    let raw = payload(bytes, 8, n, name)?;
    raw.iter()
        .enumerate()
        .map(|(i, &b)| {
            if usize::from(b) < MNIST_CLASSES {
                Ok(usize::from(b))
            } else {
                Err(KdError::format(name, 8 + i as u64, format!("label {b} out of range")))
            }
        })
        .collect()
}

/// Reads an IDX image/label pair into a labeled `N×1×H×W` dataset in `[0,1]`.
pub fn load_mnist_idx(images_path: &Path, labels_path: &Path) -> Result<Dataset> {
    let img_name = images_path.display().to_string();
    let lbl_name = labels_path.display().to_string();
    let (n, h, w, pixels) = parse_images(&read_file(images_path)?, &img_name)?;
    let labels = parse_labels(&read_file(labels_path)?, &lbl_name)?;
    if labels.len() != n {
        return Err(KdError::format(
            lbl_name,
            4,
            format!("{} labels for {n} images", labels.len()),
        ));
    }
    Dataset::with_classes("mnist", Shape3::new(1, h, w), pixels, &labels, MNIST_CLASSES)
}

fn find(dir: &Path, candidates: &[&str]) -> Result<PathBuf> {
    candidates
        .iter()
        .map(|c| dir.join(c))
        .find(|p| p.is_file())
        .ok_or_else(|| {
            KdError::io(
                dir.join(candidates[0]),
                std::io::Error::new(std::io::ErrorKind::NotFound, "IDX file not found"),
            )
        })
}

/// Loads the standard file pair for `split` from `dir`.
pub fn load_mnist_dir(dir: &Path, split: MnistSplit) -> Result<Dataset> {
    let prefix = match split {
        MnistSplit::Train => "train",
        MnistSplit::Test => "t10k",
    };
    let images = find(
        dir,
        &[&format!("{prefix}-images-idx3-ubyte"), &format!("{prefix}-images.idx3-ubyte")],
    )?;
    let labels = find(
        dir,
        &[&format!("{prefix}-labels-idx1-ubyte"), &format!("{prefix}-labels.idx1-ubyte")],
    )?;
    Ok(load_mnist_idx(&images, &labels)?.renamed(format!("mnist-{prefix}")))
}

/// IDX image file bytes for `n` images of `h×w` unsigned bytes.
pub fn encode_idx_images(h: usize, w: usize, pixels: &[u8]) -> Vec<u8> {
    let n = pixels.len() / (h * w);
    let mut out = Vec::with_capacity(16 + pixels.len());
    for v in [IMAGE_MAGIC, n as u32, h as u32, w as u32] {
        out.extend_from_slice(&v.to_be_bytes());
    }
    out.extend_from_slice(pixels);
    out
}

pub fn encode_idx_labels(labels: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&LABEL_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    out
}
