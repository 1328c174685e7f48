//! Analytic gradients against central finite differences on small random
//! networks, in double precision. Shared by the gradient tests and the
//! acceptance run.
#![allow(dead_code)]

use kdwb::losses::kd_logit_gradient;
use kdwb::{parse_arch, Network, Shape3, Tensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TRIALS: usize = 100;
pub const REL_TOL: f64 = 1e-4;
/// Step for the per-tensor comparison.
pub const STEP: f64 = 1e-3;
/// Smaller step for the element-wise comparison, where O(h²) truncation
/// error would otherwise dominate tiny components.
pub const FINE_STEP: f64 = 1e-5;
/// Element gradients smaller than this are compared absolutely.
pub const FLOOR: f64 = 1e-4;
pub const MAX_PARAMS: usize = 1000;

/// A random architecture over a random small input with at most 1000
/// parameters, rendered as text so failures are easy to reproduce.
pub fn random_arch(rng: &mut ChaCha8Rng) -> (String, Shape3) {
    loop {
        let shape = Shape3::new(rng.random_range(1..=3), rng.random_range(3..=8), rng.random_range(3..=8));
        let (mut h, mut w) = (shape.h, shape.w);
        let mut parts = Vec::new();
        for _ in 0..rng.random_range(0..=2) {
            parts.push(format!(
                "Conv({},{},{})",
                rng.random_range(1..=4),
                rng.random_range(1..=4),
                rng.random_range(1..=4)
            ));
            if rng.random_bool(0.5) && h >= 2 && w >= 2 {
                let k = if h >= 3 && w >= 3 && rng.random_bool(0.3) { 3 } else { 2 };
                parts.push(format!("MaxPool({k})"));
                h /= k;
                w /= k;
            }
        }
        for _ in 0..rng.random_range(0..=2) {
            parts.push(format!("FC({})", rng.random_range(2..=8)));
        }
        parts.push(format!("Softmax({})", rng.random_range(2..=5)));
        let text = parts.join("-");
        let arch = parse_arch(&text).unwrap();
        if kdwb::count_params(&arch, shape).is_ok_and(|n| n <= MAX_PARAMS) {
            return (text, shape);
        }
    }
}

struct Problem {
    batch: Tensor<f64>,
    targets: Vec<f64>,
    labels: Option<(Vec<f64>, f64)>,
    temperature: f64,
    k: usize,
}

impl Problem {
    fn loss(&self, net: &Network<f64>) -> f64 {
        let p = net.infer(&self.batch, self.temperature).unwrap();
        let n = self.batch.dim(0) as f64;
        let mut total = 0.0;
        for (i, row) in p.data().chunks(self.k).enumerate() {
            for (j, &pj) in row.iter().enumerate() {
                let mut w = self.targets[i * self.k + j];
                if let Some((y, beta)) = &self.labels {
                    w += beta * y[i * self.k + j];
                }
                total -= w * pj.ln();
            }
        }
        total / n
    }
}

pub fn random_distribution(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 0.05).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

#[derive(Debug, Default)]
pub struct Report {
    pub trials: usize,
    pub checked: usize,
    pub skipped: usize,
    pub worst_element: f64,
    pub worst_tensor: f64,
    pub failures: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0 && self.skipped * 20 < self.checked
    }

    pub fn summary(&self) -> String {
        format!(
            "{} trials, {} parameters checked, {} skipped at kinks; worst element error {:.2e}, worst tensor error {:.2e}, {} failures",
            self.trials,
            self.checked,
            self.skipped,
            self.worst_element,
            self.worst_tensor,
            self.failures.len()
        )
    }
}

/// Runs `trials` random problems. Even trials go through the fused
/// softmax/cross-entropy path with a label term, odd ones through the
/// generic softmax Jacobian.
pub fn run(trials: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report { trials, ..Report::default() };
    for trial in 0..trials {
        let (text, shape) = random_arch(&mut rng);
        let arch = parse_arch(&text).unwrap();
        let mut net = Network::<f64>::init(&arch, shape, trial as u64).unwrap();
        // nonzero biases and a jittered weight scale
        let params: Vec<f64> = net.param_vector().iter().map(|&v| v + rng.random_range(-0.1..0.1)).collect();
        net.set_param_vector(&params).unwrap();

        let n = rng.random_range(1..=3);
        let k = net.num_classes();
        let x: Vec<f64> = (0..n * shape.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let batch = Tensor::from_vec(vec![n, shape.c, shape.h, shape.w], x).unwrap();
        let targets: Vec<f64> = (0..n).flat_map(|_| random_distribution(&mut rng, k)).collect();
        let fused = trial % 2 == 0;
        let labels = fused.then(|| {
            let y: Vec<f64> = (0..n).flat_map(|_| random_distribution(&mut rng, k)).collect();
            (y, rng.random_range(0.0..1.0))
        });
        let problem = Problem { batch, targets, labels, temperature: rng.random_range(0.5..2.0), k };

        let probs = net.forward(&problem.batch, problem.temperature).unwrap();
        if fused {
            let (y, beta) = problem.labels.as_ref().unwrap();
            let g = kd_logit_gradient(&problem.targets, probs.data(), Some((y, *beta)), k, problem.temperature);
            net.backward_logits(&g).unwrap();
        } else {
            // dL/dp for L = -(1/N) Σ t ln p, through the softmax Jacobian
            let dp: Vec<f64> = problem
                .targets
                .iter()
                .zip(probs.data())
                .map(|(t, p)| -t / (p * n as f64))
                .collect();
            net.backward(&Tensor::from_vec(vec![n, k], dp).unwrap()).unwrap();
        }
        let analytic = net.grad_vector();
        let tensor_lens: Vec<usize> = net.param_tensors().iter().map(|t| t.len()).collect();
        let pattern = net.activation_pattern(&problem.batch).unwrap();

        let mut probe = net.clone();
        let mut central = |i: usize, h: f64| -> Option<f64> {
            let mut shifted = params.clone();
            shifted[i] = params[i] + h;
            probe.set_param_vector(&shifted).unwrap();
            let (up, pat_up) = (problem.loss(&probe), probe.activation_pattern(&problem.batch).unwrap());
            shifted[i] = params[i] - h;
            probe.set_param_vector(&shifted).unwrap();
            let (down, pat_down) = (problem.loss(&probe), probe.activation_pattern(&problem.batch).unwrap());
            // a step across a ReLU or pooling kink is not a derivative
            (pat_up == pattern && pat_down == pattern).then(|| (up - down) / (2.0 * h))
        };
        let mut start = 0;
        for (layer, len) in tensor_lens.iter().enumerate() {
            let (mut diff, mut norm_a, mut norm_n) = (0.0f64, 0.0f64, 0.0f64);
            let mut kinked = false;
            for i in start..start + len {
                let a = analytic[i];
                let Some(coarse) = central(i, STEP) else {
                    kinked = true;
                    report.skipped += 1;
                    continue;
                };
                diff += (a - coarse).powi(2);
                norm_a += a * a;
                norm_n += coarse * coarse;
                if let Some(fine) = central(i, FINE_STEP) {
                    let rel = (a - fine).abs() / a.abs().max(fine.abs()).max(FLOOR);
                    if rel >= REL_TOL {
                        report.failures.push(format!(
                            "trial {trial} ({text} on {shape}): param {i} analytic {a:e} numeric {fine:e} rel {rel:e}"
                        ));
                    }
                    report.worst_element = report.worst_element.max(rel);
                }
                report.checked += 1;
            }
            let denom = norm_a.sqrt().max(norm_n.sqrt());
            if !kinked && denom > 0.0 {
                let rel = diff.sqrt() / denom;
                if rel >= REL_TOL {
                    report
                        .failures
                        .push(format!("trial {trial} ({text} on {shape}): tensor {layer} relative error {rel:e}"));
                }
                report.worst_tensor = report.worst_tensor.max(rel);
            }
            start += len;
        }
    }
    report
}
