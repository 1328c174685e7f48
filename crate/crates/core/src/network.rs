//! Feed-forward networks built from an [`ArchSpec`]: initialization,
//! forward pass with a recorded trace, exact reverse-mode gradients and
//! momentum SGD.
//!
//! Every `Conv` and hidden `Dense` layer is followed by a ReLU. The
//! terminal `Softmax(k)` is a dense layer to `k` logits followed by a
//! tempered softmax.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arch::{count_params, ArchSpec, LayerSpec, Shape3};
use crate::error::{KdError, Result};
use crate::layers;
use crate::tensor::{Real, Tensor};

/// Samples per chunk for inference-only passes.
const INFER_CHUNK: usize = 256;

#[derive(Debug, Clone)]
struct Param<F> {
    value: Tensor<F>,
    velocity: Option<Vec<F>>,
}

impl<F: Real> Param<F> {
    fn new(value: Tensor<F>) -> Self {
        Self {
            value,
            velocity: None,
        }
    }
}

#[derive(Debug, Clone)]
enum Layer<F> {
    Conv {
        kh: usize,
        kw: usize,
        weight: Param<F>,
        bias: Param<F>,
    },
    Pool(usize),
    Dense {
        weight: Param<F>,
        bias: Param<F>,
        output: bool,
    },
}

/// Activations recorded by a gradient-mode forward pass.
#[derive(Debug, Clone)]
struct Trace<F> {
    n: usize,
    temperature: F,
    /// `acts[0]` is the input batch, `acts[i + 1]` the output of layer `i`
    /// (post-ReLU for hidden layers, probabilities for the last).
    acts: Vec<Vec<F>>,
    argmax: Vec<Option<Vec<u32>>>,
}

#[derive(Debug, Clone)]
pub struct Network<F = f32> {
    arch: ArchSpec,
    input_shape: Shape3,
    shapes: Vec<Shape3>,
    layers: Vec<Layer<F>>,
    param_count: usize,
    trace: Option<Trace<F>>,
}

impl<F: Real> Network<F> {
    /// Fan-in scaled uniform weights (bound `sqrt(6 / fan_in)`), zero biases.
    pub fn init(arch: &ArchSpec, input_shape: Shape3, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::build(arch, input_shape, |dims| {
            let fan_in: usize = dims[1..].iter().product();
            let bound = (6.0 / fan_in as f64).sqrt();
            let len = dims.iter().product();
            (0..len)
                .map(|_| F::lit(rng.random_range(-bound..bound)))
                .collect()
        })
    }

    /// All weights and biases zero.
    pub fn zeros(arch: &ArchSpec, input_shape: Shape3) -> Result<Self> {
        Self::build(arch, input_shape, |dims| vec![F::zero(); dims.iter().product()])
    }

    fn build(
        arch: &ArchSpec,
        input_shape: Shape3,
        mut weights: impl FnMut(&[usize]) -> Vec<F>,
    ) -> Result<Self> {
        let param_count = count_params(arch, input_shape)?;
        let shapes = arch.layer_shapes(input_shape)?;
        let param_shapes = arch.param_shapes(input_shape)?;
        let last = arch.layers.len() - 1;
        let mut layers = Vec::with_capacity(arch.layers.len());
        for (i, (spec, ps)) in arch.layers.iter().zip(param_shapes).enumerate() {
            let params = ps.map(|(wdims, b)| {
                let w = Tensor::from_vec(wdims.clone(), weights(&wdims)).expect("weight shape");
                (Param::new(w), Param::new(Tensor::zeros(vec![b])))
            });
            layers.push(match (*spec, params) {
                (LayerSpec::Conv { kh, kw, .. }, Some((weight, bias))) => Layer::Conv {
                    kh,
                    kw,
                    weight,
                    bias,
                },
                (LayerSpec::MaxPool(k), None) => Layer::Pool(k),
                (LayerSpec::Dense(_) | LayerSpec::Softmax(_), Some((weight, bias))) => Layer::Dense {
                    weight,
                    bias,
                    output: i == last,
                },
                _ => unreachable!("param shapes follow layer kinds"),
            });
        }
        let net = Self {
            arch: arch.clone(),
            input_shape,
            shapes,
            layers,
            param_count,
            trace: None,
        };
        debug_assert_eq!(net.param_vector().len(), param_count);
        Ok(net)
    }

    pub fn arch(&self) -> &ArchSpec {
        &self.arch
    }

    pub fn input_shape(&self) -> Shape3 {
        self.input_shape
    }

    pub fn num_classes(&self) -> usize {
        self.arch.num_classes()
    }

    pub fn param_count(&self) -> usize {
        self.param_count
    }

    /// Whether the first layer is a convolution.
    pub fn first_is_conv(&self) -> bool {
        matches!(self.layers.first(), Some(Layer::Conv { .. }))
    }

    fn params(&self) -> impl Iterator<Item = &Param<F>> {
        self.layers.iter().flat_map(|l| match l {
            Layer::Conv { weight, bias, .. } | Layer::Dense { weight, bias, .. } => {
                vec![weight, bias]
            }
            Layer::Pool(_) => vec![],
        })
    }

    fn params_mut(&mut self) -> impl Iterator<Item = &mut Param<F>> {
        self.layers.iter_mut().flat_map(|l| match l {
            Layer::Conv { weight, bias, .. } | Layer::Dense { weight, bias, .. } => {
                vec![weight, bias]
            }
            Layer::Pool(_) => vec![],
        })
    }

    /// Parameter tensors in layer order, weight before bias.
    pub fn param_tensors(&self) -> Vec<&Tensor<F>> {
        self.params().map(|p| &p.value).collect()
    }

    pub fn param_tensors_mut(&mut self) -> Vec<&mut Tensor<F>> {
        self.params_mut().map(|p| &mut p.value).collect()
    }

    /// All parameters flattened in checkpoint order.
    pub fn param_vector(&self) -> Vec<F> {
        self.params()
            .flat_map(|p| p.value.data().iter().copied())
            .collect()
    }

    pub fn set_param_vector(&mut self, values: &[F]) -> Result<()> {
        if values.len() != self.param_count {
            return Err(KdError::Shape(format!(
                "expected {} parameters, got {}",
                self.param_count,
                values.len()
            )));
        }
        let mut offset = 0;
        for p in self.params_mut() {
            let len = p.value.len();
            p.value.data_mut().copy_from_slice(&values[offset..offset + len]);
            offset += len;
        }
        Ok(())
    }

    /// Flattened gradients in the order of [`Network::param_vector`]; absent
    /// buffers read as zero.
    pub fn grad_vector(&self) -> Vec<F> {
        self.params()
            .flat_map(|p| match p.value.grad() {
                Some(g) => g.to_vec(),
                None => vec![F::zero(); p.value.len()],
            })
            .collect()
    }

    /// Converts every parameter to another scalar type.
    pub fn cast<G: Real>(&self) -> Network<G> {
        let mut net = Network::<G>::zeros(&self.arch, self.input_shape).expect("validated arch");
        let values: Vec<G> = self.param_vector().iter().map(|v| G::lit(v.as_f64())).collect();
        net.set_param_vector(&values).expect("same arch");
        net
    }

    fn check_batch(&self, batch: &Tensor<F>) -> Result<usize> {
        let s = batch.shape();
        let ok = match s.len() {
            4 => s[1] == self.input_shape.c && s[2] == self.input_shape.h && s[3] == self.input_shape.w,
            2 => s[1] == self.input_shape.len(),
            _ => false,
        };
        if !ok {
            return Err(KdError::Shape(format!(
                "batch {:?} does not match network input {}",
                s, self.input_shape
            )));
        }
        Ok(s[0])
    }

    fn check_temperature(t: F) -> Result<()> {
        if t > F::zero() && t.is_finite() {
            Ok(())
        } else {
            Err(KdError::Argument(format!("temperature must be positive, got {t}")))
        }
    }

    /// Runs the layers over `n` samples; returns the logits and optionally
    /// records hidden activations.
    fn run(&self, x: &[F], n: usize, mut trace: Option<&mut Trace<F>>) -> Vec<F> {
        let mut cur = x.to_vec();
        let mut shape = self.input_shape;
        for (layer, &out_shape) in self.layers.iter().zip(&self.shapes) {
            let (mut next, argmax) = match layer {
                Layer::Conv { kh, kw, weight, bias } => {
                    let y = layers::conv2d_forward(
                        &cur,
                        n,
                        shape,
                        weight.value.data(),
                        bias.value.data(),
                        *kh,
                        *kw,
                    );
                    (y, None)
                }
                Layer::Pool(k) => {
                    let (y, arg) = layers::maxpool_forward(&cur, n, shape, *k);
                    (y, Some(arg))
                }
                Layer::Dense { weight, bias, .. } => {
                    (layers::dense_forward(&cur, n, weight.value.data(), bias.value.data()), None)
                }
            };
            let hidden = matches!(layer, Layer::Conv { .. } | Layer::Dense { output: false, .. });
            if hidden {
                layers::relu_inplace(&mut next);
            }
            if let Some(t) = trace.as_deref_mut() {
                t.acts.push(std::mem::replace(&mut cur, Vec::new()));
                t.argmax.push(argmax);
            }
            cur = next;
            shape = out_shape;
        }
        cur
    }

    /// Gradient-mode forward pass: returns `N×k` class probabilities and
    /// records the activations needed by [`Network::backward`].
    pub fn forward(&mut self, batch: &Tensor<F>, temperature: F) -> Result<Tensor<F>> {
        Self::check_temperature(temperature)?;
        let n = self.check_batch(batch)?;
        let mut trace = Trace {
            n,
            temperature,
            acts: Vec::with_capacity(self.layers.len() + 1),
            argmax: Vec::with_capacity(self.layers.len()),
        };
        let logits = self.run(batch.data(), n, Some(&mut trace));
        let k = self.num_classes();
        let mut probs = vec![F::zero(); logits.len()];
        layers::softmax_rows(&logits, k, temperature, &mut probs);
        trace.acts.push(probs.clone());
        self.trace = Some(trace);
        Tensor::from_vec(vec![n, k], probs)
    }

    /// Inference-only forward pass; leaves no trace and does not mutate.
    pub fn infer(&self, batch: &Tensor<F>, temperature: F) -> Result<Tensor<F>> {
        Self::check_temperature(temperature)?;
        let n = self.check_batch(batch)?;
        let k = self.num_classes();
        let per = self.input_shape.len();
        let mut probs = vec![F::zero(); n * k];
        for start in (0..n).step_by(INFER_CHUNK) {
            let end = (start + INFER_CHUNK).min(n);
            let logits = self.run(&batch.data()[start * per..end * per], end - start, None);
            layers::softmax_rows(&logits, k, temperature, &mut probs[start * k..end * k]);
        }
        Tensor::from_vec(vec![n, k], probs)
    }

    /// Post-ReLU activations of the first layer, `N × C' × H × W`.
    pub fn first_layer_activations(&self, batch: &Tensor<F>) -> Result<Vec<F>> {
        let n = self.check_batch(batch)?;
        match &self.layers[0] {
            Layer::Conv { kh, kw, weight, bias } => {
                let mut y = layers::conv2d_forward(
                    batch.data(),
                    n,
                    self.input_shape,
                    weight.value.data(),
                    bias.value.data(),
                    *kh,
                    *kw,
                );
                layers::relu_inplace(&mut y);
                Ok(y)
            }
            _ => Err(KdError::Argument("first layer is not convolutional".into())),
        }
    }

    pub fn first_layer_shape(&self) -> Shape3 {
        self.shapes[0]
    }

    /// Backpropagates `output_grad` (w.r.t. the probabilities returned by the
    /// last [`Network::forward`]) and accumulates parameter gradients.
    pub fn backward(&mut self, output_grad: &Tensor<F>) -> Result<()> {
        let (probs, k, t) = {
            let trace = self.trace_ref()?;
            (trace.acts.last().expect("probabilities recorded"), self.num_classes(), trace.temperature)
        };
        if output_grad.len() != probs.len() {
            return Err(KdError::Shape(format!(
                "output gradient {:?} does not match the recorded {}×{k} output",
                output_grad.shape(),
                probs.len() / k
            )));
        }
        let dz = layers::softmax_backward(probs, output_grad.data(), k, t);
        self.backward_logits(&dz)
    }

    /// Backpropagates a gradient w.r.t. the raw (untempered) logits.
    pub fn backward_logits(&mut self, logit_grad: &[F]) -> Result<()> {
        let trace = self.trace.take().ok_or_else(no_trace)?;
        let result = self.backprop(&trace, logit_grad);
        self.trace = Some(trace);
        result
    }

    fn trace_ref(&self) -> Result<&Trace<F>> {
        self.trace.as_ref().ok_or_else(no_trace)
    }

    fn backprop(&mut self, trace: &Trace<F>, logit_grad: &[F]) -> Result<()> {
        let n = trace.n;
        if logit_grad.len() != n * self.num_classes() {
            return Err(KdError::Shape(format!(
                "logit gradient has {} values, expected {}",
                logit_grad.len(),
                n * self.num_classes()
            )));
        }
        let mut delta = logit_grad.to_vec();
        for i in (0..self.layers.len()).rev() {
            let input = &trace.acts[i];
            let in_shape = if i == 0 { self.input_shape } else { self.shapes[i - 1] };
            let need_dx = i > 0;
            let hidden = matches!(
                self.layers[i],
                Layer::Conv { .. } | Layer::Dense { output: false, .. }
            );
            if hidden {
                layers::relu_backward_inplace(&trace.acts[i + 1], &mut delta);
            }
            let dx = match &mut self.layers[i] {
                Layer::Conv { kh, kw, weight, bias } => {
                    let mut dw = vec![F::zero(); weight.value.len()];
                    let mut db = vec![F::zero(); bias.value.len()];
                    let dx = layers::conv2d_backward(
                        input,
                        n,
                        in_shape,
                        weight.value.data(),
                        *kh,
                        *kw,
                        &delta,
                        &mut dw,
                        &mut db,
                        need_dx,
                    );
                    accumulate(weight.value.grad_mut(), &dw);
                    accumulate(bias.value.grad_mut(), &db);
                    dx
                }
                Layer::Pool(_) => {
                    let arg = trace.argmax[i].as_ref().expect("pool argmax recorded");
                    Some(layers::maxpool_backward(&delta, arg, n * in_shape.len()))
                }
                Layer::Dense { weight, bias, .. } => {
                    let mut dw = vec![F::zero(); weight.value.len()];
                    let mut db = vec![F::zero(); bias.value.len()];
                    let dx = layers::dense_backward(
                        input,
                        n,
                        weight.value.data(),
                        &delta,
                        &mut dw,
                        &mut db,
                        need_dx,
                    );
                    accumulate(weight.value.grad_mut(), &dw);
                    accumulate(bias.value.grad_mut(), &db);
                    dx
                }
            };
            match dx {
                Some(dx) => delta = dx,
                None => break,
            }
        }
        Ok(())
    }

    /// `v ← momentum·v + grad; θ ← θ − lr·v`, then zeroes the gradients.
    pub fn sgd_step(&mut self, lr: F, momentum: F) -> Result<()> {
        if !(lr >= F::zero()) {
            return Err(KdError::Argument(format!("learning rate must be ≥ 0, got {lr}")));
        }
        if !(momentum >= F::zero() && momentum < F::one()) {
            return Err(KdError::Argument(format!("momentum must be in [0,1), got {momentum}")));
        }
        if self.params().any(|p| p.value.grad().is_none()) {
            return Err(KdError::State("sgd_step called before any backward pass".into()));
        }
        for p in self.params_mut() {
            let len = p.value.len();
            let v = p.velocity.get_or_insert_with(|| vec![F::zero(); len]);
            let (theta, grad) = p.value.data_and_grad_mut();
            for ((t, g), vel) in theta.iter_mut().zip(grad.iter_mut()).zip(v.iter_mut()) {
                *vel = momentum * *vel + *g;
                *t -= lr * *vel;
                *g = F::zero();
            }
        }
        Ok(())
    }

    pub fn zero_grad(&mut self) {
        for p in self.params_mut() {
            p.value.zero_grad();
        }
    }

    /// Drops gradients, momentum buffers and the recorded trace.
    pub fn reset_state(&mut self) {
        self.trace = None;
        for p in self.params_mut() {
            p.value.clear_grad();
            p.velocity = None;
        }
    }

    /// Per-unit on/off pattern of every ReLU plus every pooling argmax for
    /// `batch`. Two parameter settings with equal patterns lie in the same
    /// smooth piece of the network function.
    #[doc(hidden)]
    pub fn activation_pattern(&self, batch: &Tensor<F>) -> Result<Vec<u32>> {
        let n = self.check_batch(batch)?;
        let mut trace = Trace {
            n,
            temperature: F::one(),
            acts: Vec::new(),
            argmax: Vec::new(),
        };
        let logits = self.run(batch.data(), n, Some(&mut trace));
        trace.acts.push(logits);
        let mut pattern = Vec::new();
        for (i, layer) in self.layers.iter().enumerate() {
            match layer {
                Layer::Pool(_) => pattern.extend_from_slice(trace.argmax[i].as_ref().unwrap()),
                Layer::Dense { output: true, .. } => {}
                _ => pattern.extend(trace.acts[i + 1].iter().map(|&a| u32::from(a > F::zero()))),
            }
        }
        Ok(pattern)
    }
}

// One call's gradient is formed in isolation before being added, so
// repeated backward calls on the same trace sum exactly.
fn accumulate<F: Real>(grad: &mut [F], delta: &[F]) {
    for (g, &d) in grad.iter_mut().zip(delta) {
        *g += d;
    }
}

fn no_trace() -> KdError {
    KdError::State("backward requires a preceding gradient-mode forward pass".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arch::parse_arch;

    fn tiny() -> (ArchSpec, Shape3) {
        (
            parse_arch("Conv(2,3,3)-MaxPool(2)-FC(4)-Softmax(3)").unwrap(),
            Shape3::new(1, 4, 4),
        )
    }

    fn batch(n: usize, shape: Shape3, seed: u64) -> Tensor<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..n * shape.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        Tensor::from_vec(vec![n, shape.c, shape.h, shape.w], data).unwrap()
    }

    #[test]
    fn init_is_deterministic() {
        let (arch, shape) = tiny();
        let a = Network::<f32>::init(&arch, shape, 7).unwrap();
        let b = Network::<f32>::init(&arch, shape, 7).unwrap();
        let c = Network::<f32>::init(&arch, shape, 8).unwrap();
        assert_eq!(a.param_vector(), b.param_vector());
        assert_ne!(a.param_vector(), c.param_vector());
        assert_eq!(a.param_count(), a.param_vector().len());
    }

    #[test]
    fn biases_start_at_zero_and_weights_are_bounded() {
        let (arch, shape) = tiny();
        let net = Network::<f64>::init(&arch, shape, 1).unwrap();
        let tensors = net.param_tensors();
        for pair in tensors.chunks(2) {
            let fan_in: usize = pair[0].shape()[1..].iter().product();
            let bound = (6.0 / fan_in as f64).sqrt();
            assert!(pair[0].data().iter().all(|w| w.abs() <= bound));
            assert!(pair[1].data().iter().all(|&b| b == 0.0));
        }
    }

    #[test]
    fn zero_network_is_uniform() {
        let (arch, shape) = tiny();
        let mut net = Network::<f64>::zeros(&arch, shape).unwrap();
        let p = net.forward(&batch(5, shape, 3), 1.0).unwrap();
        assert!(p.data().iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn rows_are_stochastic() {
        let (arch, shape) = tiny();
        let net = Network::<f32>::init(&arch, shape, 11).unwrap();
        let p = net.infer(&batch(9, shape, 4).cast(), 1.0).unwrap();
        for row in p.data().chunks(3) {
            assert!((row.iter().sum::<f32>() - 1.0).abs() < 1e-6);
            assert!(row.iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
    }

    #[test]
    fn forward_and_infer_agree() {
        let (arch, shape) = tiny();
        let mut net = Network::<f64>::init(&arch, shape, 2).unwrap();
        let x = batch(300, shape, 5);
        let a = net.infer(&x, 2.0).unwrap();
        let b = net.forward(&x, 2.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let (arch, shape) = tiny();
        let net = Network::<f64>::init(&arch, shape, 2).unwrap();
        assert!(matches!(net.infer(&batch(1, Shape3::new(1, 5, 4), 0), 1.0), Err(KdError::Shape(_))));
    }

    #[test]
    fn backward_without_forward_fails() {
        let (arch, shape) = tiny();
        let mut net = Network::<f64>::init(&arch, shape, 2).unwrap();
        let g = Tensor::zeros(vec![1, 3]);
        assert!(matches!(net.backward(&g), Err(KdError::State(_))));
        assert!(matches!(net.sgd_step(0.1, 0.0), Err(KdError::State(_))));
    }

    #[test]
    fn zero_output_grad_gives_zero_gradients() {
        let (arch, shape) = tiny();
        let mut net = Network::<f64>::init(&arch, shape, 2).unwrap();
        net.forward(&batch(3, shape, 1), 1.0).unwrap();
        net.backward(&Tensor::zeros(vec![3, 3])).unwrap();
        assert!(net.grad_vector().iter().all(|&g| g == 0.0));
    }

    #[test]
    fn consecutive_backward_calls_accumulate() {
        let (arch, shape) = tiny();
        let mut net = Network::<f64>::init(&arch, shape, 2).unwrap();
        net.forward(&batch(3, shape, 1), 1.0).unwrap();
        let g = Tensor::from_vec(vec![3, 3], vec![0.3, -0.1, 0.2, 1.0, 0.0, -2.0, 0.5, 0.5, 0.1]).unwrap();
        net.backward(&g).unwrap();
        let once = net.grad_vector();
        net.backward(&g).unwrap();
        let twice = net.grad_vector();
        assert!(once.iter().any(|&v| v != 0.0));
        for (a, b) in once.iter().zip(&twice) {
            assert_eq!(2.0 * a, *b);
        }
    }

    fn with_constant_grad(net: &mut Network<f64>, g: f64) {
        for t in net.param_tensors_mut() {
            t.grad_mut().iter_mut().for_each(|v| *v = g);
        }
    }

    #[test]
    fn sgd_null_and_vanilla_steps() {
        let (arch, shape) = tiny();
        let mut net = Network::<f64>::init(&arch, shape, 2).unwrap();
        let before = net.param_vector();
        with_constant_grad(&mut net, 0.5);
        net.sgd_step(0.0, 0.0).unwrap();
        assert_eq!(net.param_vector(), before);
        assert!(net.grad_vector().iter().all(|&g| g == 0.0));

        let mut net = Network::<f64>::init(&arch, shape, 2).unwrap();
        with_constant_grad(&mut net, 0.5);
        net.sgd_step(0.1, 0.0).unwrap();
        for (a, b) in net.param_vector().iter().zip(&before) {
            assert_eq!(*a, b - 0.1 * 0.5);
        }
    }

    #[test]
    fn momentum_recursion() {
        // v1 = g, v2 = 0.9 g + g = 1.9 g
        let (arch, shape) = tiny();
        let mut net = Network::<f64>::init(&arch, shape, 2).unwrap();
        let p0 = net.param_vector();
        let (lr, g) = (0.25, 0.5);
        with_constant_grad(&mut net, g);
        net.sgd_step(lr, 0.9).unwrap();
        let p1 = net.param_vector();
        with_constant_grad(&mut net, g);
        net.sgd_step(lr, 0.9).unwrap();
        let p2 = net.param_vector();
        for i in 0..p0.len() {
            assert!((p1[i] - p0[i] + lr * g).abs() < 1e-12);
            assert!((p2[i] - p1[i] + lr * 1.9 * g).abs() < 1e-12);
        }
    }

    #[test]
    fn sgd_rejects_bad_hyperparameters() {
        let (arch, shape) = tiny();
        let mut net = Network::<f64>::init(&arch, shape, 2).unwrap();
        with_constant_grad(&mut net, 0.5);
        assert!(net.sgd_step(-0.1, 0.0).is_err());
        assert!(net.sgd_step(0.1, 1.0).is_err());
    }

    #[test]
    fn cast_round_trips_f32_values() {
        let (arch, shape) = tiny();
        let a = Network::<f32>::init(&arch, shape, 9).unwrap();
        let b: Network<f32> = a.cast::<f64>().cast();
        assert_eq!(a.param_vector(), b.param_vector());
    }
}
