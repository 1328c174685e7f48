//! Netpbm decoding (P2, P5, P6) and encoding (P5, P6).

use std::path::Path;

use super::preprocess::{grayscale_plane, resize_bilinear};
use super::Dataset;
use crate::arch::Shape3;
use crate::error::{KdError, Result};

/// A decoded image: planar channels, values in `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub shape: Shape3,
    pub data: Vec<f32>,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    name: &'a str,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(KdError::format(self.name, start as u64, format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| KdError::format(self.name, start as u64, format!("{what} out of range")))
    }
}

/// Decodes a netpbm image held in memory; `name` labels errors.
pub fn decode(bytes: &[u8], name: &str) -> Result<Image> {
    let (channels, binary) = match bytes.get(..2) {
        Some(b"P2") => (1, false),
        Some(b"P5") => (1, true),
        Some(b"P6") => (3, true),
        _ => return Err(KdError::format(name, 0, "not a P2/P5/P6 netpbm file")),
    };
    let mut cur = Cursor { bytes, pos: 2, name };
    let w = cur.number("width")?;
    let h = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if w == 0 || h == 0 {
        return Err(KdError::format(name, 2, "zero image dimension"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(KdError::format(name, cur.pos as u64, format!("maxval {maxval} outside 1..=65535")));
    }
    let n = w * h * channels;
    let scale = 1.0 / maxval as f32;
    let mut interleaved = Vec::with_capacity(n);
    if binary {
        // exactly one whitespace byte separates the header from the raster
        if !bytes.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
            return Err(KdError::format(name, cur.pos as u64, "missing raster separator"));
        }
        cur.pos += 1;
        let width = if maxval > 255 { 2 } else { 1 };
        let raster = bytes.get(cur.pos..cur.pos + n * width).ok_or_else(|| {
            KdError::format(name, bytes.len() as u64, format!("raster truncated: need {} bytes", n * width))
        })?;
        if width == 1 {
            interleaved.extend(raster.iter().map(|&b| f32::from(b)));
        } else {
            interleaved.extend(raster.chunks_exact(2).map(|p| f32::from(u16::from_be_bytes([p[0], p[1]]))));
        }
    } else {
        for _ in 0..n {
            let at = cur.pos;
            let v = cur.number("sample")?;
            if v > maxval {
                return Err(KdError::format(name, at as u64, format!("sample {v} exceeds maxval")));
            }
            interleaved.push(v as f32);
        }
    }
    if interleaved.iter().any(|&v| v > maxval as f32) {
        return Err(KdError::format(name, cur.pos as u64, "sample exceeds maxval"));
    }
    // interleaved RGB -> planar
    let plane = w * h;
    let mut data = vec![0.0; n];
    for (i, v) in interleaved.into_iter().enumerate() {
        data[(i % channels) * plane + i / channels] = (v * scale).min(1.0);
    }
    Ok(Image { shape: Shape3::new(channels, h, w), data })
}

pub fn read_image(path: &Path) -> Result<Image> {
    let bytes = std::fs::read(path).map_err(|e| KdError::io(path, e))?;
    decode(&bytes, &path.display().to_string())
}

/// Encodes planar `[0,1]` data as binary P5 (1 channel) or P6 (3 channels),
/// maxval 255, values rounded to nearest and clamped.
pub fn encode(shape: Shape3, data: &[f32]) -> Result<Vec<u8>> {
    let magic = match shape.c {
        1 => "P5",
        3 => "P6",
        c => return Err(KdError::Argument(format!("cannot encode {c}-channel image as netpbm"))),
    };
    if data.len() != shape.len() {
        return Err(KdError::Shape(format!("{} values for a {shape} image", data.len())));
    }
    let mut out = format!("{magic}\n{} {}\n255\n", shape.w, shape.h).into_bytes();
    let plane = shape.plane();
    for p in 0..plane {
        for c in 0..shape.c {
            out.push((data[c * plane + p].clamp(0.0, 1.0) * 255.0).round() as u8);
        }
    }
    Ok(out)
}

/// Loads every file in `dir` (lexicographic order) as an unlabeled dataset.
///
/// With `grayscale`, colour images are reduced by luminance. Images are then
/// resized to the target height/width; a 1-channel image feeding a 3-channel
/// target is replicated across channels.
pub fn load_image_dir(dir: &Path, target: Shape3, grayscale: bool) -> Result<Dataset> {
    if target.len() == 0 {
        return Err(KdError::Argument(format!("target shape {target} has a zero dimension")));
    }
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| KdError::io(dir, e))?
        .map(|e| e.map(|e| e.path()).map_err(|e| KdError::io(dir, e)))
        .collect::<Result<_>>()?;
    files.retain(|p| p.is_file());
    files.sort();
    let mut pixels = Vec::with_capacity(files.len() * target.len());
    for f in &files {
        let mut img = read_image(f)?;
        if grayscale && img.shape.c == 3 {
            img = Image { shape: Shape3::new(1, img.shape.h, img.shape.w), data: grayscale_plane(&img.data, img.shape.plane()) };
        }
        let resized = resize_bilinear(&img.data, img.shape, target.h, target.w)?;
        match (img.shape.c, target.c) {
            (a, b) if a == b => pixels.extend_from_slice(&resized),
            (1, c) => (0..c).for_each(|_| pixels.extend_from_slice(&resized)),
            (3, 1) => pixels.extend(grayscale_plane(&resized, target.plane())),
            (a, b) => {
                return Err(KdError::format(
                    f.display().to_string(),
                    0,
                    format!("{a}-channel image cannot feed a {b}-channel target"),
                ))
            }
        }
    }
    let name = dir.file_name().map_or_else(|| "images".to_string(), |n| n.to_string_lossy().into_owned());
    Dataset::unlabeled(name, target, pixels)
}
