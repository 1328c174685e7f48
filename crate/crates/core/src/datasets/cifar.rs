//! CIFAR-10 binary batches: records of one label byte followed by 3072
//! pixel bytes (red plane, green plane, blue plane; each 32×32 row-major).

use std::path::{Path, PathBuf};

use super::Dataset;
use crate::arch::Shape3;
use crate::error::{KdError, Result};

pub const CIFAR_RECORD_LEN: usize = 3073;
const CIFAR_CLASSES: usize = 10;
const CIFAR_SHAPE: Shape3 = Shape3::new(3, 32, 32);

fn append_records(path: &Path, pixels: &mut Vec<f32>, labels: &mut Vec<usize>) -> Result<()> {
    let name = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|e| KdError::io(path, e))?;
    if bytes.is_empty() || bytes.len() % CIFAR_RECORD_LEN != 0 {
        let whole = bytes.len() - bytes.len() % CIFAR_RECORD_LEN;
        return Err(KdError::format(
            name,
            whole as u64,
            format!(
                "{} bytes is not a positive multiple of the {CIFAR_RECORD_LEN}-byte record",
                bytes.len()
            ),
        ));
    }
    for (r, rec) in bytes.chunks_exact(CIFAR_RECORD_LEN).enumerate() {
        let label = usize::from(rec[0]);
        if label >= CIFAR_CLASSES {
            return Err(KdError::format(
                name,
                (r * CIFAR_RECORD_LEN) as u64,
                format!("label {label} out of range"),
            ));
        }
        labels.push(label);
        pixels.extend(rec[1..].iter().map(|&b| f32::from(b) / 255.0));
    }
    Ok(())
}

fn load_files(name: &str, files: &[PathBuf]) -> Result<Dataset> {
    let mut pixels = Vec::new();
    let mut labels = Vec::new();
    for f in files {
        append_records(f, &mut pixels, &mut labels)?;
    }
    Dataset::with_classes(name, CIFAR_SHAPE, pixels, &labels, CIFAR_CLASSES)
}

/// A single batch file.
pub fn load_cifar10_file(path: &Path) -> Result<Dataset> {
    load_files("cifar10", &[path.to_path_buf()])
}

/// Every `data_batch_*.bin` in `dir`, in lexicographic order.
pub fn load_cifar10_bin(dir: &Path) -> Result<Dataset> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| KdError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| n.starts_with("data_batch_") && n.ends_with(".bin"))
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(KdError::format(
            dir.display().to_string(),
            0,
            "no data_batch_*.bin files",
        ));
    }
    load_files("cifar10-train", &files)
}

/// `test_batch.bin` in `dir`.
pub fn load_cifar10_test(dir: &Path) -> Result<Dataset> {
    load_files("cifar10-test", &[dir.join("test_batch.bin")])
}
