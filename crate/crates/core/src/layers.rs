//! Per-layer forward and backward kernels on raw row-major buffers.
//!
//! Convolutions are same-padded with stride 1 and lowered to gemm through
//! im2col, one sample at a time.

use crate::arch::Shape3;
use crate::error::{KdError, Result};
use crate::tensor::{gemm, Op, Real, Tensor};

fn same_pad(k: usize) -> usize {
    (k - 1) / 2
}

/// Unfolds one `C×H×W` sample into a `(C·kh·kw) × (H·W)` column matrix.
pub fn im2col<F: Real>(x: &[F], shape: Shape3, kh: usize, kw: usize, col: &mut [F]) {
    let Shape3 { c, h, w } = shape;
    let (ph, pw) = (same_pad(kh), same_pad(kw));
    let hw = h * w;
    debug_assert_eq!(col.len(), c * kh * kw * hw);
    let mut row = 0;
    for ch in 0..c {
        let plane = &x[ch * hw..(ch + 1) * hw];
        for ky in 0..kh {
            for kx in 0..kw {
                let dst = &mut col[row * hw..(row + 1) * hw];
                for y in 0..h {
                    let sy = y as isize + ky as isize - ph as isize;
                    let out = &mut dst[y * w..(y + 1) * w];
                    if sy < 0 || sy >= h as isize {
                        out.iter_mut().for_each(|v| *v = F::zero());
                        continue;
                    }
                    let src = &plane[sy as usize * w..(sy as usize + 1) * w];
                    for (x_, o) in out.iter_mut().enumerate() {
                        let sx = x_ as isize + kx as isize - pw as isize;
                        *o = if sx < 0 || sx >= w as isize {
                            F::zero()
                        } else {
                            src[sx as usize]
                        };
                    }
                }
                row += 1;
            }
        }
    }
}

/// Adjoint of [`im2col`]: accumulates columns back into a sample gradient.
pub fn col2im<F: Real>(col: &[F], shape: Shape3, kh: usize, kw: usize, dx: &mut [F]) {
    let Shape3 { c, h, w } = shape;
    let (ph, pw) = (same_pad(kh), same_pad(kw));
    let hw = h * w;
    let mut row = 0;
    for ch in 0..c {
        let plane = &mut dx[ch * hw..(ch + 1) * hw];
        for ky in 0..kh {
            for kx in 0..kw {
                let src = &col[row * hw..(row + 1) * hw];
                for y in 0..h {
                    let sy = y as isize + ky as isize - ph as isize;
                    if sy < 0 || sy >= h as isize {
                        continue;
                    }
                    let dst = &mut plane[sy as usize * w..(sy as usize + 1) * w];
                    for x_ in 0..w {
                        let sx = x_ as isize + kx as isize - pw as isize;
                        if sx >= 0 && sx < w as isize {
                            dst[sx as usize] += src[y * w + x_];
                        }
                    }
                }
                row += 1;
            }
        }
    }
}

/// Same-padded stride-1 convolution of a batch.
///
/// `weight` is `out_c × in_c × kh × kw`; returns the pre-activation output
/// `N × out_c × H × W`.
pub fn conv2d_forward<F: Real>(
    x: &[F],
    n: usize,
    shape: Shape3,
    weight: &[F],
    bias: &[F],
    kh: usize,
    kw: usize,
) -> Vec<F> {
    let out_c = bias.len();
    let ckk = shape.c * kh * kw;
    let hw = shape.plane();
    debug_assert_eq!(weight.len(), out_c * ckk);
    let mut col = vec![F::zero(); ckk * hw];
    let mut out = vec![F::zero(); n * out_c * hw];
    for s in 0..n {
        im2col(&x[s * shape.len()..(s + 1) * shape.len()], shape, kh, kw, &mut col);
        let dst = &mut out[s * out_c * hw..(s + 1) * out_c * hw];
        for (plane, &b) in dst.chunks_exact_mut(hw).zip(bias) {
            plane.iter_mut().for_each(|v| *v = b);
        }
        gemm(out_c, ckk, hw, weight, Op::N, &col, Op::N, F::one(), dst);
    }
    out
}

/// Accumulates weight/bias gradients and optionally returns the input gradient.
#[allow(clippy::too_many_arguments)]
pub fn conv2d_backward<F: Real>(
    x: &[F],
    n: usize,
    shape: Shape3,
    weight: &[F],
    kh: usize,
    kw: usize,
    dout: &[F],
    dweight: &mut [F],
    dbias: &mut [F],
    need_dx: bool,
) -> Option<Vec<F>> {
    let out_c = dbias.len();
    let ckk = shape.c * kh * kw;
    let hw = shape.plane();
    let mut col = vec![F::zero(); ckk * hw];
    let mut dcol = vec![F::zero(); if need_dx { ckk * hw } else { 0 }];
    let mut dx = need_dx.then(|| vec![F::zero(); n * shape.len()]);
    for s in 0..n {
        let g = &dout[s * out_c * hw..(s + 1) * out_c * hw];
        im2col(&x[s * shape.len()..(s + 1) * shape.len()], shape, kh, kw, &mut col);
        gemm(out_c, hw, ckk, g, Op::N, &col, Op::T, F::one(), dweight);
        for (db, plane) in dbias.iter_mut().zip(g.chunks_exact(hw)) {
            *db += plane.iter().copied().sum::<F>();
        }
        if let Some(dx) = dx.as_mut() {
            gemm(ckk, out_c, hw, weight, Op::T, g, Op::N, F::zero(), &mut dcol);
            col2im(&dcol, shape, kh, kw, &mut dx[s * shape.len()..(s + 1) * shape.len()]);
        }
    }
    dx
}

/// Non-overlapping `k×k` max pooling; ties go to the first element in scan order.
///
/// Returns the pooled batch and, per output element, the flat input index
/// of the selected maximum.
pub fn maxpool_forward<F: Real>(x: &[F], n: usize, shape: Shape3, k: usize) -> (Vec<F>, Vec<u32>) {
    let (oh, ow) = (shape.h / k, shape.w / k);
    let mut out = Vec::with_capacity(n * shape.c * oh * ow);
    let mut arg = Vec::with_capacity(out.capacity());
    for plane_idx in 0..n * shape.c {
        let base = plane_idx * shape.plane();
        for oy in 0..oh {
            for ox in 0..ow {
                let mut best = base + oy * k * shape.w + ox * k;
                for dy in 0..k {
                    let row = base + (oy * k + dy) * shape.w + ox * k;
                    for idx in row..row + k {
                        if x[idx] > x[best] {
                            best = idx;
                        }
                    }
                }
                out.push(x[best]);
                arg.push(best as u32);
            }
        }
    }
    (out, arg)
}

pub fn maxpool_backward<F: Real>(dout: &[F], argmax: &[u32], input_len: usize) -> Vec<F> {
    let mut dx = vec![F::zero(); input_len];
    for (&g, &i) in dout.iter().zip(argmax) {
        dx[i as usize] += g;
    }
    dx
}

/// `y = x · Wᵀ + b` for `x: N×in`, `W: out×in`.
pub fn dense_forward<F: Real>(x: &[F], n: usize, weight: &[F], bias: &[F]) -> Vec<F> {
    let out_dim = bias.len();
    let in_dim = weight.len() / out_dim;
    let mut y = Vec::with_capacity(n * out_dim);
    for _ in 0..n {
        y.extend_from_slice(bias);
    }
    gemm(n, in_dim, out_dim, x, Op::N, weight, Op::T, F::one(), &mut y);
    y
}

#[allow(clippy::too_many_arguments)]
pub fn dense_backward<F: Real>(
    x: &[F],
    n: usize,
    weight: &[F],
    dout: &[F],
    dweight: &mut [F],
    dbias: &mut [F],
    need_dx: bool,
) -> Option<Vec<F>> {
    let out_dim = dbias.len();
    let in_dim = weight.len() / out_dim;
    gemm(out_dim, n, in_dim, dout, Op::T, x, Op::N, F::one(), dweight);
    for row in dout.chunks_exact(out_dim) {
        for (db, &g) in dbias.iter_mut().zip(row) {
            *db += g;
        }
    }
    need_dx.then(|| {
        let mut dx = vec![F::zero(); n * in_dim];
        gemm(n, out_dim, in_dim, dout, Op::N, weight, Op::N, F::zero(), &mut dx);
        dx
    })
}

pub fn relu_inplace<F: Real>(x: &mut [F]) {
    for v in x.iter_mut() {
        if *v < F::zero() {
            *v = F::zero();
        }
    }
}

/// Zeroes gradient entries whose ReLU output was not positive.
pub fn relu_backward_inplace<F: Real>(activated: &[F], grad: &mut [F]) {
    for (g, &a) in grad.iter_mut().zip(activated) {
        if a <= F::zero() {
            *g = F::zero();
        }
    }
}

/// Row-wise `exp(z/T) / Σ exp(z/T)` with max subtraction.
pub fn softmax_rows<F: Real>(logits: &[F], k: usize, temperature: F, out: &mut [F]) {
    for (z, p) in logits.chunks_exact(k).zip(out.chunks_exact_mut(k)) {
        let max = z.iter().copied().fold(F::neg_infinity(), F::max);
        let mut sum = F::zero();
        for (pi, &zi) in p.iter_mut().zip(z) {
            *pi = ((zi - max) / temperature).exp();
            sum += *pi;
        }
        for pi in p.iter_mut() {
            *pi = *pi / sum;
        }
    }
}

/// Tempered softmax over the last axis of an `N×k` tensor.
pub fn softmax_with_temperature<F: Real>(logits: &Tensor<F>, temperature: F) -> Result<Tensor<F>> {
    if !(temperature > F::zero()) || !temperature.is_finite() {
        return Err(KdError::Argument(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    if logits.shape().len() != 2 {
        return Err(KdError::Shape(format!(
            "softmax expects N×k logits, got {:?}",
            logits.shape()
        )));
    }
    let k = logits.dim(1);
    let mut out = vec![F::zero(); logits.len()];
    softmax_rows(logits.data(), k, temperature, &mut out);
    Tensor::from_vec(logits.shape().to_vec(), out)
}

/// Pulls a gradient w.r.t. tempered-softmax outputs back to the logits:
/// `dz_j = p_j (g_j − Σ_i g_i p_i) / T`.
pub fn softmax_backward<F: Real>(probs: &[F], grad: &[F], k: usize, temperature: F) -> Vec<F> {
    let mut dz = vec![F::zero(); probs.len()];
    for ((p, g), d) in probs
        .chunks_exact(k)
        .zip(grad.chunks_exact(k))
        .zip(dz.chunks_exact_mut(k))
    {
        let dot: F = p.iter().zip(g).map(|(&a, &b)| a * b).sum();
        for j in 0..k {
            d[j] = p[j] * (g[j] - dot) / temperature;
        }
    }
    dz
}
