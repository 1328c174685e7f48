//! Training loops: supervised teacher training, data-free distillation on
//! cached teacher posteriors, augmented distillation on a labeled set mixed
//! with unlabeled stimulus, evaluation, and the loss-plateau stopping rule.
//!
//! All three loops share one mini-batch SGD driver. Per sample the loss is
//! `H(t, P_S) + β·H(y, P_S)`, where `t` is the primary target (hard labels
//! for teacher training, teacher posteriors when distilling) and the second
//! term is present only in augmented mode.

use std::time::Instant;

use log::info;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::datasets::{argmax, mix_augment, Dataset};
use crate::error::{KdError, Result};
use crate::losses::{cross_entropy_row, kd_logit_gradient};
use crate::network::Network;
use crate::tensor::Tensor;

/// Samples per teacher/evaluation pass.
const PASS_CHUNK: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub lr: f32,
    pub momentum: f32,
    pub batch_size: usize,
    pub max_epochs: usize,
    /// Weight of the supervised term in augmented mode.
    pub beta: f32,
    pub temperature: f32,
    pub stop_tol: f64,
    pub stop_patience: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            lr: 0.01,
            momentum: 0.9,
            batch_size: 64,
            max_epochs: 100,
            beta: 0.5,
            temperature: 1.0,
            stop_tol: 1e-4,
            stop_patience: 5,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(KdError::Argument(what.to_string()));
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return bad(&format!("lr must be positive, got {}", self.lr));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return bad(&format!("momentum must be in [0,1), got {}", self.momentum));
        }
        if self.batch_size == 0 {
            return bad("batch size must be positive");
        }
        if self.max_epochs == 0 {
            return bad("max epochs must be positive");
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad(&format!("beta must be ≥ 0, got {}", self.beta));
        }
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return bad(&format!("temperature must be positive, got {}", self.temperature));
        }
        if !(self.stop_tol > 0.0) {
            return bad(&format!("stop tolerance must be positive, got {}", self.stop_tol));
        }
        if self.stop_patience == 0 {
            return bad("stop patience must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub test_acc: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunMetrics {
    pub epochs: Vec<EpochRecord>,
    /// Whether the plateau rule (rather than `max_epochs`) ended the run.
    pub stopped_early: bool,
}

impl RunMetrics {
    pub fn losses(&self) -> Vec<f64> {
        self.epochs.iter().map(|e| e.train_loss).collect()
    }

    pub fn final_accuracy(&self) -> Option<f64> {
        self.epochs.last().map(|e| e.test_acc)
    }

    pub fn best_accuracy(&self) -> Option<f64> {
        self.epochs.iter().map(|e| e.test_acc).reduce(f64::max)
    }

    /// Equal losses and accuracies epoch by epoch; wall time is ignored.
    pub fn same_trajectory(&self, other: &Self) -> bool {
        self.stopped_early == other.stopped_early
            && self.epochs.len() == other.epochs.len()
            && self.epochs.iter().zip(&other.epochs).all(|(a, b)| {
                a.epoch == b.epoch
                    && a.train_loss.to_bits() == b.train_loss.to_bits()
                    && a.test_acc.to_bits() == b.test_acc.to_bits()
            })
    }
}

/// True iff each of the last `patience` epoch-to-epoch relative loss changes
/// is below `tol`.
pub fn should_stop(history: &[f64], tol: f64, patience: usize) -> bool {
    if patience == 0 || history.len() < patience + 1 {
        return false;
    }
    history[history.len() - patience - 1..]
        .windows(2)
        .all(|w| (w[1] - w[0]).abs() / w[0].max(1e-12) < tol)
}

fn check_input(net: &Network, ds: &Dataset, role: &str) -> Result<()> {
    if ds.shape() != net.input_shape() {
        return Err(KdError::Shape(format!(
            "{role} '{}' has {} images but the network expects {}",
            ds.name(),
            ds.shape(),
            net.input_shape()
        )));
    }
    Ok(())
}

fn chunked_probs(net: &Network, ds: &Dataset, temperature: f32) -> Result<Vec<f32>> {
    let mut out = Vec::with_capacity(ds.len() * net.num_classes());
    let idx: Vec<usize> = (0..ds.len()).collect();
    for chunk in idx.chunks(PASS_CHUNK) {
        out.extend(net.infer(&ds.batch(chunk)?, temperature)?.into_data());
    }
    Ok(out)
}

/// Teacher posteriors for every stimulus sample, row-major `N×k`.
pub fn cache_soft_labels(teacher: &Network, stimulus: &Dataset, temperature: f32) -> Result<Vec<f32>> {
    check_input(teacher, stimulus, "stimulus")?;
    chunked_probs(teacher, stimulus, temperature)
}

/// Argmax accuracy and error count over a fully labeled set.
pub fn evaluate(model: &Network, test: &Dataset) -> Result<(f64, usize)> {
    if test.is_empty() {
        return Err(KdError::Argument("cannot evaluate on an empty test set".into()));
    }
    if !test.is_fully_labeled() {
        return Err(KdError::Argument(format!("test set '{}' is not fully labeled", test.name())));
    }
    check_input(model, test, "test set")?;
    let k = model.num_classes();
    let probs = chunked_probs(model, test, 1.0)?;
    let correct = probs
        .chunks_exact(k)
        .enumerate()
        .filter(|&(i, row)| test.class_of(i) == Some(argmax(row)))
        .count();
    Ok((correct as f64 / test.len() as f64, test.len() - correct))
}

/// The shared SGD driver. `targets` holds the primary target rows; `aux`
/// the supervised rows of the second term and its weight.
fn fit(
    net: &mut Network,
    train: &Dataset,
    targets: &[f32],
    aux: Option<(&[f32], f32)>,
    test: &Dataset,
    cfg: &TrainConfig,
    label: &str,
) -> Result<RunMetrics> {
    cfg.validate()?;
    let n = train.len();
    let k = net.num_classes();
    debug_assert_eq!(targets.len(), n * k);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut metrics = RunMetrics::default();
    net.reset_state();
    let rows = |m: &[f32], idx: &[usize]| -> Vec<f32> {
        idx.iter().flat_map(|&i| m[i * k..(i + 1) * k].iter().copied()).collect()
    };
    for epoch in 1..=cfg.max_epochs {
        let start = Instant::now();
        order.shuffle(&mut rng);
        let mut total = 0.0f64;
        for idx in order.chunks(cfg.batch_size) {
            let x: Tensor<f32> = train.batch(idx)?;
            let probs = net.forward(&x, cfg.temperature)?;
            if !probs.is_finite() {
                return Err(KdError::Diverged(format!("{label}: non-finite outputs in epoch {epoch}")));
            }
            let t = rows(targets, idx);
            let y = aux.map(|(m, beta)| (rows(m, idx), beta));
            for (i, p) in probs.data().chunks_exact(k).enumerate() {
                let r = i * k..(i + 1) * k;
                total += cross_entropy_row(&t[r.clone()], p);
                if let Some((y, beta)) = &y {
                    total += f64::from(*beta) * cross_entropy_row(&y[r], p);
                }
            }
            let grad = kd_logit_gradient(
                &t,
                probs.data(),
                y.as_ref().map(|(y, beta)| (y.as_slice(), *beta)),
                k,
                cfg.temperature,
            );
            net.backward_logits(&grad)?;
            net.sgd_step(cfg.lr, cfg.momentum)?;
        }
        let train_loss = total / n as f64;
        if !train_loss.is_finite() {
            return Err(KdError::Diverged(format!("{label}: training loss became {train_loss} in epoch {epoch}")));
        }
        let (test_acc, errors) = evaluate(net, test)?;
        let seconds = start.elapsed().as_secs_f64();
        info!("{label} epoch {epoch}: loss {train_loss:.6} test_acc {test_acc:.4} ({errors} errors) {seconds:.1}s");
        metrics.epochs.push(EpochRecord { epoch, train_loss, test_acc, seconds });
        if should_stop(&metrics.losses(), cfg.stop_tol, cfg.stop_patience) {
            metrics.stopped_early = epoch < cfg.max_epochs;
            break;
        }
    }
    net.reset_state();
    Ok(metrics)
}

/// Supervised training on hard labels.
pub fn train_teacher(
    mut net: Network,
    train: &Dataset,
    test: &Dataset,
    cfg: &TrainConfig,
) -> Result<(Network, RunMetrics)> {
    if train.is_empty() || !train.is_fully_labeled() {
        return Err(KdError::Argument(format!(
            "teacher training needs a non-empty, fully labeled set; '{}' has {} of {} labeled",
            train.name(),
            train.labeled_count(),
            train.len()
        )));
    }
    if train.num_classes() != Some(net.num_classes()) {
        return Err(KdError::Argument(format!(
            "dataset has {:?} classes but the network outputs {}",
            train.num_classes(),
            net.num_classes()
        )));
    }
    check_input(&net, train, "training set")?;
    let labels = train.labels().expect("fully labeled").to_vec();
    let metrics = fit(&mut net, train, &labels, None, test, cfg, "teacher")?;
    Ok((net, metrics))
}

fn check_pair(teacher: &Network, student: &Network) -> Result<()> {
    if teacher.num_classes() != student.num_classes() {
        return Err(KdError::Argument(format!(
            "teacher has {} classes, student {}",
            teacher.num_classes(),
            student.num_classes()
        )));
    }
    if teacher.input_shape() != student.input_shape() {
        return Err(KdError::Shape(format!(
            "teacher input {} differs from student input {}",
            teacher.input_shape(),
            student.input_shape()
        )));
    }
    Ok(())
}

/// Trains `student` to match the teacher's posteriors on `stimulus` (first
/// term only); stimulus labels, if any, are ignored.
pub fn distill_data_free(
    teacher: &Network,
    mut student: Network,
    stimulus: &Dataset,
    test: &Dataset,
    cfg: &TrainConfig,
) -> Result<(Network, RunMetrics)> {
    if stimulus.is_empty() {
        return Err(KdError::Argument("stimulus is empty".into()));
    }
    check_pair(teacher, &student)?;
    cfg.validate()?;
    let soft = cache_soft_labels(teacher, stimulus, cfg.temperature)?;
    let metrics = fit(&mut student, stimulus, &soft, None, test, cfg, "distill")?;
    Ok((student, metrics))
}

/// Distillation over `labeled ∪ stimulus` with the full objective; stimulus
/// samples take the uniform distribution as their supervised target.
pub fn distill_augmented(
    teacher: &Network,
    mut student: Network,
    labeled: &Dataset,
    stimulus: &Dataset,
    test: &Dataset,
    cfg: &TrainConfig,
) -> Result<(Network, RunMetrics)> {
    if !labeled.is_fully_labeled() {
        return Err(KdError::Argument(format!("'{}' must be fully labeled", labeled.name())));
    }
    check_pair(teacher, &student)?;
    if labeled.num_classes() != Some(teacher.num_classes()) {
        return Err(KdError::Argument(format!(
            "labeled set has {:?} classes but the teacher outputs {}",
            labeled.num_classes(),
            teacher.num_classes()
        )));
    }
    cfg.validate()?;
    let mix = mix_augment(labeled, stimulus)?;
    if mix.is_empty() {
        return Err(KdError::Argument("labeled set and stimulus are both empty".into()));
    }
    let soft = cache_soft_labels(teacher, &mix, cfg.temperature)?;
    let supervised = mix.labels().expect("mixed set carries labels").to_vec();
    let metrics = fit(&mut student, &mix, &soft, Some((&supervised, cfg.beta)), test, cfg, "augment")?;
    Ok((student, metrics))
}
