//! Synthetic stimulus: uniform and Gaussian noise, simple filled shapes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::Dataset;
use crate::arch::Shape3;
use crate::error::{KdError, Result};

const MIN_CONTRAST: f64 = 0.2;
const MIN_EXTENT: f64 = 0.2;
const MAX_EXTENT: f64 = 0.8;
const MIN_CANVAS: usize = 8;

fn check_count(n: usize, shape: Shape3) -> Result<()> {
    if n == 0 {
        return Err(KdError::Argument("stimulus count must be at least 1".into()));
    }
    if shape.is_empty() {
        return Err(KdError::Argument(format!("stimulus shape {shape} has a zero dimension")));
    }
    Ok(())
}

/// i.i.d. values in `[lo, hi)`.
pub fn gen_uniform_noise(n: usize, shape: Shape3, lo: f32, hi: f32, seed: u64) -> Result<Dataset> {
    check_count(n, shape)?;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(KdError::Argument(format!("noise bounds need lo < hi, got [{lo}, {hi})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo64, span) = (f64::from(lo), f64::from(hi) - f64::from(lo));
    let pixels = (0..n * shape.len())
        .map(|_| {
            let v = (lo64 + span * rng.random::<f64>()) as f32;
            // rounding to f32 may land on hi itself
            if v >= hi { hi.next_down().max(lo) } else { v }
        })
        .collect();
    Dataset::unlabeled("uniform-noise", shape, pixels)
}

/// i.i.d. normal values.
pub fn gen_gaussian_noise(n: usize, shape: Shape3, mean: f32, std: f32, seed: u64) -> Result<Dataset> {
    check_count(n, shape)?;
    if !(std > 0.0) || !std.is_finite() || !mean.is_finite() {
        return Err(KdError::Argument(format!("gaussian noise needs finite mean and std > 0, got std {std}")));
    }
    let normal = Normal::new(f64::from(mean), f64::from(std))
        .map_err(|e| KdError::Argument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pixels = (0..n * shape.len()).map(|_| normal.sample(&mut rng) as f32).collect();
    Dataset::unlabeled("gaussian-noise", shape, pixels)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    Rectangle,
    Ellipse,
    Triangle,
}

const KINDS: [ShapeKind; 3] = [ShapeKind::Rectangle, ShapeKind::Ellipse, ShapeKind::Triangle];

fn extent(rng: &mut ChaCha8Rng, canvas: usize) -> (f64, f64) {
    // size then offset, both in pixel units
    let size = canvas as f64 * rng.random_range(MIN_EXTENT..=MAX_EXTENT);
    let start = rng.random_range(0.0..=canvas as f64 - size);
    (start, size)
}

fn edge(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> f64 {
    (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0)
}

fn draw(rng: &mut ChaCha8Rng, h: usize, w: usize, out: &mut Vec<f32>) -> ShapeKind {
    let kind = KINDS[rng.random_range(0..KINDS.len())];
    let b: f64 = rng.random();
    let below = (b - MIN_CONTRAST).max(0.0);
    let above = (1.0 - MIN_CONTRAST - b).max(0.0);
    let u = rng.random_range(0.0..below + above);
    let f = if u < below { u } else { b + MIN_CONTRAST + (u - below) };
    let (x0, bw) = extent(rng, w);
    let (y0, bh) = extent(rng, h);
    let apex = x0 + bw * rng.random::<f64>();
    let flip = rng.random::<bool>();
    let (top, bottom) = if flip { (y0 + bh, y0) } else { (y0, y0 + bh) };
    let tri = [(apex, top), (x0, bottom), (x0 + bw, bottom)];
    for y in 0..h {
        for x in 0..w {
            let p = (x as f64 + 0.5, y as f64 + 0.5);
            let inside = match kind {
                ShapeKind::Rectangle => p.0 >= x0 && p.0 < x0 + bw && p.1 >= y0 && p.1 < y0 + bh,
                ShapeKind::Ellipse => {
                    let dx = (p.0 - (x0 + bw / 2.0)) / (bw / 2.0);
                    let dy = (p.1 - (y0 + bh / 2.0)) / (bh / 2.0);
                    dx * dx + dy * dy <= 1.0
                }
                ShapeKind::Triangle => {
                    let d = [edge(tri[0], tri[1], p), edge(tri[1], tri[2], p), edge(tri[2], tri[0], p)];
                    d.iter().all(|&v| v >= 0.0) || d.iter().all(|&v| v <= 0.0)
                }
            };
            out.push(if inside { f } else { b } as f32);
        }
    }
    kind
}

/// `n` grayscale `h×w` images, each a flat background with one filled
/// rectangle, ellipse or triangle; also returns the kind drawn per image.
pub fn gen_shapes_with_kinds(n: usize, h: usize, w: usize, seed: u64) -> Result<(Dataset, Vec<ShapeKind>)> {
    if h < MIN_CANVAS || w < MIN_CANVAS {
        return Err(KdError::Argument(format!("shape canvas {h}x{w} is smaller than {MIN_CANVAS}x{MIN_CANVAS}")));
    }
    let shape = Shape3::new(1, h, w);
    check_count(n, shape)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pixels = Vec::with_capacity(n * h * w);
    let kinds = (0..n).map(|_| draw(&mut rng, h, w, &mut pixels)).collect();
    Ok((Dataset::unlabeled("shapes", shape, pixels)?, kinds))
}

pub fn gen_shapes(n: usize, h: usize, w: usize, seed: u64) -> Result<Dataset> {
    gen_shapes_with_kinds(n, h, w, seed).map(|(ds, _)| ds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn moments(v: &[f32]) -> (f64, f64) {
        let n = v.len() as f64;
        let mean = v.iter().map(|&x| f64::from(x)).sum::<f64>() / n;
        let var = v.iter().map(|&x| (f64::from(x) - mean).powi(2)).sum::<f64>() / n;
        (mean, var.sqrt())
    }

    #[test]
    fn uniform_defaults_bounds_and_mean() {
        let ds = gen_uniform_noise(10, Shape3::new(1, 10, 100), -0.3, 0.7, 3).unwrap();
        assert!(ds.pixels().iter().all(|&v| (-0.3..0.7).contains(&v)));
        let (mean, _) = moments(ds.pixels());
        assert!((mean - 0.2).abs() < 0.01, "{mean}");
        assert_eq!(ds, gen_uniform_noise(10, Shape3::new(1, 10, 100), -0.3, 0.7, 3).unwrap());
    }

    #[test]
    fn uniform_argument_errors() {
        let s = Shape3::new(1, 2, 2);
        assert!(matches!(gen_uniform_noise(0, s, 0.0, 1.0, 0), Err(KdError::Argument(_))));
        assert!(matches!(gen_uniform_noise(1, s, 1.0, 1.0, 0), Err(KdError::Argument(_))));
    }

    #[test]
    fn gaussian_moments_and_degenerate_spread() {
        let s = Shape3::new(1, 100, 100);
        let ds = gen_gaussian_noise(1, s, 0.0, 1.0, 5).unwrap();
        let (_, std) = moments(ds.pixels());
        assert!((std - 1.0).abs() < 0.05);
        let tight = gen_gaussian_noise(1, s, 0.25, 1e-9, 5).unwrap();
        assert!(tight.pixels().iter().all(|&v| (v - 0.25).abs() < 1e-6));
        assert_eq!(ds, gen_gaussian_noise(1, s, 0.0, 1.0, 5).unwrap());
        assert!(matches!(gen_gaussian_noise(1, s, 0.0, 0.0, 5), Err(KdError::Argument(_))));
    }

    #[test]
    fn shape_kinds_are_balanced() {
        let (_, kinds) = gen_shapes_with_kinds(9_999, 8, 8, 11).unwrap();
        for k in KINDS {
            let freq = kinds.iter().filter(|&&x| x == k).count() as f64 / 9_999.0;
            assert!((freq - 1.0 / 3.0).abs() < 0.02, "{k:?}: {freq}");
        }
    }

    #[test]
    fn tiny_canvas_is_rejected() {
        assert!(matches!(gen_shapes(1, 7, 28, 0), Err(KdError::Argument(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn shapes_are_two_level_images(seed in any::<u64>(), h in 8usize..40, w in 8usize..40) {
            let ds = gen_shapes(4, h, w, seed).unwrap();
            prop_assert_eq!(&ds, &gen_shapes(4, h, w, seed).unwrap());
            for img in ds.pixels().chunks(h * w) {
                prop_assert!(img.iter().all(|&v| (0.0..=1.0).contains(&v)));
                let mut levels: Vec<f32> = img.to_vec();
                levels.sort_by(f32::total_cmp);
                levels.dedup();
                // no anti-aliasing: background plus at most one foreground level
                prop_assert!(levels.len() <= 2);
                if levels.len() == 2 {
                    prop_assert!(levels[1] - levels[0] >= 0.2 - 1e-6);
                }
            }
        }

        #[test]
        fn uniform_noise_stays_in_bounds(seed in any::<u64>(), lo in -2.0f32..1.0, span in 1e-3f32..3.0) {
            let hi = lo + span;
            let ds = gen_uniform_noise(2, Shape3::new(1, 8, 8), lo, hi, seed).unwrap();
            prop_assert!(ds.pixels().iter().all(|&v| v >= lo && v < hi));
        }
    }
}
