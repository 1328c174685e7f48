//! Stimulus complexity from first-layer activation statistics.
//!
//! For post-ReLU first-conv activations `A[s][c][y][x]` the profile holds
//! the grand mean of `A` and the mean over channels of each channel's
//! population standard deviation (pooled over samples and positions).
//!
//! Both statistics are independent of sample order bit for bit: every
//! sample contributes one f64 partial sum per channel, and the partials of
//! a channel are sorted before compensated summation.

use std::fmt::Write as _;

use crate::datasets::Dataset;
use crate::error::{KdError, Result};
use crate::network::Network;

const CHUNK: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityProfile {
    pub dataset_name: String,
    pub mean_activation: f64,
    pub avg_map_std: f64,
    pub sample_count: usize,
}

/// Kahan summation of `values` after sorting them.
fn sorted_sum(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &v in values.iter() {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `term(channel, plane)` for every channel plane of every sample, collected
/// as one column of partials per channel.
fn per_sample_partials(
    teacher: &Network,
    ds: &Dataset,
    mut term: impl FnMut(usize, &[f32]) -> f64,
) -> Result<Vec<Vec<f64>>> {
    let fs = teacher.first_layer_shape();
    let mut partials = vec![Vec::with_capacity(ds.len()); fs.c];
    let idx: Vec<usize> = (0..ds.len()).collect();
    for chunk in idx.chunks(CHUNK) {
        let acts = teacher.first_layer_activations(&ds.batch(chunk)?)?;
        for sample in acts.chunks_exact(fs.len()) {
            for (c, plane) in sample.chunks_exact(fs.plane()).enumerate() {
                partials[c].push(term(c, plane));
            }
        }
    }
    Ok(partials)
}

pub fn complexity_profile(teacher: &Network, ds: &Dataset) -> Result<ComplexityProfile> {
    if !teacher.first_is_conv() {
        return Err(KdError::Argument(format!(
            "complexity needs a convolutional first layer; '{}' starts otherwise",
            teacher.arch()
        )));
    }
    if ds.shape() != teacher.input_shape() {
        return Err(KdError::Shape(format!(
            "dataset '{}' has {} images but the teacher expects {}",
            ds.name(),
            ds.shape(),
            teacher.input_shape()
        )));
    }
    if ds.is_empty() {
        return Err(KdError::Argument(format!("dataset '{}' is empty", ds.name())));
    }
    let fs = teacher.first_layer_shape();
    let per_channel = (ds.len() * fs.plane()) as f64;

    let mut sums = per_sample_partials(teacher, ds, |_, plane| plane.iter().map(|&a| f64::from(a)).sum())?;
    let mut channel_sums: Vec<f64> = sums.iter_mut().map(|col| sorted_sum(col)).collect();
    let means: Vec<f64> = channel_sums.iter().map(|s| s / per_channel).collect();
    let mean_activation = sorted_sum(&mut channel_sums) / (per_channel * fs.c as f64);

    let mut sq = per_sample_partials(teacher, ds, |c, plane| {
        plane.iter().map(|&a| (f64::from(a) - means[c]).powi(2)).sum()
    })?;
    let mut stds: Vec<f64> = sq.iter_mut().map(|col| (sorted_sum(col) / per_channel).sqrt()).collect();
    let avg_map_std = sorted_sum(&mut stds) / fs.c as f64;

    Ok(ComplexityProfile {
        dataset_name: ds.name().to_string(),
        mean_activation,
        avg_map_std,
        sample_count: ds.len(),
    })
}

/// Profiles ordered ascending by each statistic (ties keep input order).
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileReport {
    pub by_mean: Vec<ComplexityProfile>,
    pub by_std: Vec<ComplexityProfile>,
}

pub const REPORT_HEADER: &str = "name,mean_activation,avg_map_std,samples";

fn render(rows: &[ComplexityProfile]) -> String {
    let mut out = format!("{REPORT_HEADER}\n");
    for p in rows {
        let _ = writeln!(out, "{},{:.6},{:.6},{}", p.dataset_name, p.mean_activation, p.avg_map_std, p.sample_count);
    }
    out
}

impl ProfileReport {
    pub fn by_mean_csv(&self) -> String {
        render(&self.by_mean)
    }

    pub fn by_std_csv(&self) -> String {
        render(&self.by_std)
    }
}

pub fn profile_report(profiles: &[ComplexityProfile]) -> Result<ProfileReport> {
    if profiles.is_empty() {
        return Err(KdError::Argument("no profiles to report".into()));
    }
    if let Some(p) = profiles.iter().find(|p| p.dataset_name.contains([',', '\n', '"'])) {
        return Err(KdError::Argument(format!("dataset name {:?} cannot appear in the CSV", p.dataset_name)));
    }
    let sorted = |key: fn(&ComplexityProfile) -> f64| {
        let mut v = profiles.to_vec();
        v.sort_by(|a, b| key(a).total_cmp(&key(b)));
        v
    };
    Ok(ProfileReport {
        by_mean: sorted(|p| p.mean_activation),
        by_std: sorted(|p| p.avg_map_std),
    })
}
