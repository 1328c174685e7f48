//! Cross-entropy primitives and the distillation objective
//! `H(P_T, P_S) + β · H(y, P_S)`.

use crate::error::{KdError, Result};
use crate::tensor::Real;

/// Lower clamp applied to predicted probabilities inside the log.
pub const LOG_EPS: f64 = 1e-12;

/// Tolerance on the sum of a probability vector.
pub const SUM_TOL: f64 = 1e-6;

/// A discrete distribution over `k` classes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        validate_distribution(&values)?;
        Ok(Self(values))
    }

    pub fn one_hot(k: usize, class: usize) -> Result<Self> {
        if class >= k {
            return Err(KdError::Argument(format!("class {class} out of range for k={k}")));
        }
        let mut v = vec![0.0; k];
        v[class] = 1.0;
        Ok(Self(v))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entropy(&self) -> f64 {
        cross_entropy(self, self).expect("same length")
    }
}

/// Checks that `values` are in `[0,1]` and sum to 1 within [`SUM_TOL`].
pub fn validate_distribution<F: Real>(values: &[F]) -> Result<()> {
    if values.is_empty() {
        return Err(KdError::Invariant("empty probability vector".into()));
    }
    let mut sum = 0.0;
    for &v in values {
        let v = v.as_f64();
        if !(0.0..=1.0).contains(&v) {
            return Err(KdError::Invariant(format!("probability {v} outside [0,1]")));
        }
        sum += v;
    }
    if (sum - 1.0).abs() > SUM_TOL {
        return Err(KdError::Invariant(format!("probabilities sum to {sum}")));
    }
    Ok(())
}

/// `−Σ_i t_i · ln(max(p_i, ε))` for one pair of rows.
pub fn cross_entropy_row<F: Real>(target: &[F], pred: &[F]) -> f64 {
    target
        .iter()
        .zip(pred)
        .map(|(&t, &p)| {
            let t = t.as_f64();
            if t == 0.0 {
                0.0
            } else {
                -t * p.as_f64().max(LOG_EPS).ln()
            }
        })
        .sum()
}

pub fn cross_entropy(target: &ProbVector, pred: &ProbVector) -> Result<f64> {
    if target.len() != pred.len() {
        return Err(KdError::Argument(format!(
            "length mismatch: target {} vs prediction {}",
            target.len(),
            pred.len()
        )));
    }
    Ok(cross_entropy_row(target.values(), pred.values()))
}

/// Batch-mean cross-entropy over row-major `N×k` matrices.
pub fn batch_cross_entropy<F: Real>(targets: &[F], preds: &[F], k: usize) -> Result<f64> {
    if targets.len() != preds.len() || k == 0 || targets.len() % k != 0 || targets.is_empty() {
        return Err(KdError::Argument(format!(
            "cannot pair {} targets with {} predictions over k={k}",
            targets.len(),
            preds.len()
        )));
    }
    let n = targets.len() / k;
    let total: f64 = targets
        .chunks_exact(k)
        .zip(preds.chunks_exact(k))
        .map(|(t, p)| cross_entropy_row(t, p))
        .sum();
    Ok(total / n as f64)
}

/// `H(P_T, P_S) + β·H(y_true, P_S)`, or the first term alone without labels.
pub fn kd_objective(
    teacher: &ProbVector,
    student: &ProbVector,
    y_true: Option<&ProbVector>,
    beta: f64,
) -> Result<f64> {
    if !(beta >= 0.0) {
        return Err(KdError::Argument(format!("beta must be ≥ 0, got {beta}")));
    }
    let distill = cross_entropy(teacher, student)?;
    match y_true {
        None => Ok(distill),
        Some(y) => {
            validate_distribution(y.values())?;
            Ok(distill + beta * cross_entropy(y, student)?)
        }
    }
}

/// Uniform distribution over `k` classes.
pub fn uniform_target(k: usize) -> Result<ProbVector> {
    if k == 0 {
        return Err(KdError::Argument("uniform target needs k ≥ 1".into()));
    }
    Ok(ProbVector(vec![1.0 / k as f64; k]))
}

/// Gradient of the batch-mean objective w.r.t. the student's raw logits,
/// where `student = softmax(z / T)`.
///
/// Per sample the objective is `−Σ_j (t_j + β y_j) ln p_j`; its logit
/// gradient is `(s·p_j − t_j − β y_j) / T` with `s = Σ_j (t_j + β y_j)`.
pub fn kd_logit_gradient<F: Real>(
    teacher: &[F],
    student: &[F],
    labels: Option<(&[F], F)>,
    k: usize,
    temperature: F,
) -> Vec<F> {
    let n = student.len() / k;
    let scale = F::one() / (temperature * F::lit(n as f64));
    let mut grad = vec![F::zero(); student.len()];
    for i in 0..n {
        let r = i * k..(i + 1) * k;
        let t = &teacher[r.clone()];
        let p = &student[r.clone()];
        let g = &mut grad[r.clone()];
        match labels {
            None => {
                let s: F = t.iter().copied().sum();
                for j in 0..k {
                    g[j] = (s * p[j] - t[j]) * scale;
                }
            }
            Some((y, beta)) => {
                let y = &y[r];
                let s: F = t.iter().copied().sum::<F>() + beta * y.iter().copied().sum::<F>();
                for j in 0..k {
                    g[j] = (s * p[j] - t[j] - beta * y[j]) * scale;
                }
            }
        }
    }
    grad
}
