//! Architecture strings such as
//! `Conv1(32,5,5)-MaxPool(2)-Conv2(64,5,5)-MaxPool(2)-FC(128)-Softmax(10)`.
//!
//! Layers are separated by `-`. Digits directly after a layer name are a
//! layer index and are ignored. A leading bare integer (`784-FC(500)-...`)
//! declares the flattened input width and is checked against the input
//! shape. `Softmax(k)` is a dense layer with `k` outputs followed by the
//! softmax and must be the last descriptor.

use std::fmt;
use std::str::FromStr;

use crate::error::{KdError, Result};

/// Channels × height × width of one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape3 {
    pub c: usize,
    pub h: usize,
    pub w: usize,
}

impl Shape3 {
    pub const fn new(c: usize, h: usize, w: usize) -> Self {
        Self { c, h, w }
    }

    pub fn len(&self) -> usize {
        self.c * self.h * self.w
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn plane(&self) -> usize {
        self.h * self.w
    }
}

impl fmt::Display for Shape3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.c, self.h, self.w)
    }
}

impl FromStr for Shape3 {
    type Err = KdError;

    fn from_str(s: &str) -> Result<Self> {
        let dims: Vec<usize> = s
            .split(['x', 'X', '×'])
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| KdError::Argument(format!("bad shape `{s}` (want CxHxW)")))?;
        match dims[..] {
            [c, h, w] if c > 0 && h > 0 && w > 0 => Ok(Shape3::new(c, h, w)),
            _ => Err(KdError::Argument(format!("bad shape `{s}` (want CxHxW)"))),
        }
    }
}

/// One layer descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayerSpec {
    Conv { out_channels: usize, kh: usize, kw: usize },
    MaxPool(usize),
    Dense(usize),
    Softmax(usize),
}

impl LayerSpec {
    fn has_params(&self) -> bool {
        !matches!(self, LayerSpec::MaxPool(_))
    }
}

impl fmt::Display for LayerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LayerSpec::Conv { out_channels, kh, kw } => write!(f, "Conv({out_channels},{kh},{kw})"),
            LayerSpec::MaxPool(k) => write!(f, "MaxPool({k})"),
            LayerSpec::Dense(n) => write!(f, "FC({n})"),
            LayerSpec::Softmax(k) => write!(f, "Softmax({k})"),
        }
    }
}

/// A parsed layer pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArchSpec {
    /// Declared flattened input width, if the string started with one.
    pub input_width: Option<usize>,
    pub layers: Vec<LayerSpec>,
}

impl ArchSpec {
    pub fn num_classes(&self) -> usize {
        match self.layers.last() {
            Some(LayerSpec::Softmax(k)) => *k,
            _ => unreachable!("validated at construction"),
        }
    }

    /// Output shape after every layer, starting from `input`.
    pub fn layer_shapes(&self, input: Shape3) -> Result<Vec<Shape3>> {
        if input.is_empty() {
            return Err(KdError::Shape(format!("empty input shape {input}")));
        }
        if let Some(width) = self.input_width {
            if width != input.len() {
                return Err(KdError::Shape(format!(
                    "architecture declares input width {width} but input {input} has {}",
                    input.len()
                )));
            }
        }
        let mut shapes = Vec::with_capacity(self.layers.len());
        let mut cur = input;
        for (i, layer) in self.layers.iter().enumerate() {
            cur = match *layer {
                // same padding, stride 1
                LayerSpec::Conv { out_channels, .. } => Shape3::new(out_channels, cur.h, cur.w),
                LayerSpec::MaxPool(k) => {
                    let (h, w) = (cur.h / k, cur.w / k);
                    if h == 0 || w == 0 {
                        return Err(KdError::Shape(format!(
                            "layer {} ({layer}) shrinks {}x{} below 1x1",
                            i + 1,
                            cur.h,
                            cur.w
                        )));
                    }
                    Shape3::new(cur.c, h, w)
                }
                LayerSpec::Dense(n) | LayerSpec::Softmax(n) => Shape3::new(n, 1, 1),
            };
            shapes.push(cur);
        }
        Ok(shapes)
    }

    /// Weight and bias element counts per layer (zero for pooling).
    pub fn param_shapes(&self, input: Shape3) -> Result<Vec<Option<(Vec<usize>, usize)>>> {
        let shapes = self.layer_shapes(input)?;
        let mut prev = input;
        let mut out = Vec::with_capacity(self.layers.len());
        for (layer, &shape) in self.layers.iter().zip(&shapes) {
            out.push(match *layer {
                LayerSpec::Conv { out_channels, kh, kw } => {
                    Some((vec![out_channels, prev.c, kh, kw], out_channels))
                }
                LayerSpec::MaxPool(_) => None,
                LayerSpec::Dense(n) | LayerSpec::Softmax(n) => Some((vec![n, prev.len()], n)),
            });
            debug_assert_eq!(layer.has_params(), out.last().unwrap().is_some());
            prev = shape;
        }
        Ok(out)
    }
}

impl fmt::Display for ArchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if let Some(width) = self.input_width {
            write!(f, "{width}")?;
            first = false;
        }
        for layer in &self.layers {
            if !first {
                f.write_str("-")?;
            }
            write!(f, "{layer}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for ArchSpec {
    type Err = KdError;

    fn from_str(s: &str) -> Result<Self> {
        parse_arch(s)
    }
}

fn parse_err(token: &str, reason: impl Into<String>) -> KdError {
    KdError::Parse {
        token: token.to_string(),
        reason: reason.into(),
    }
}

fn parse_layer(token: &str) -> Result<LayerSpec> {
    let open = token
        .find('(')
        .ok_or_else(|| parse_err(token, "expected `Name(args)`"))?;
    if !token.ends_with(')') {
        return Err(parse_err(token, "missing closing `)`"));
    }
    let name = token[..open].trim_end_matches(|c: char| c.is_ascii_digit()).trim();
    let args = token[open + 1..token.len() - 1]
        .split(',')
        .map(|a| {
            let a = a.trim();
            match a.parse::<usize>() {
                Ok(0) => Err(parse_err(token, "arguments must be positive")),
                Ok(v) => Ok(v),
                Err(_) => Err(parse_err(token, format!("`{a}` is not a positive integer"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let arity = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(parse_err(
                token,
                format!("{name} takes {n} argument(s), got {}", args.len()),
            ))
        }
    };
    match name {
        "Conv" => {
            arity(3)?;
            Ok(LayerSpec::Conv {
                out_channels: args[0],
                kh: args[1],
                kw: args[2],
            })
        }
        "MaxPool" => {
            arity(1)?;
            Ok(LayerSpec::MaxPool(args[0]))
        }
        "FC" | "Dense" => {
            arity(1)?;
            Ok(LayerSpec::Dense(args[0]))
        }
        "Softmax" => {
            arity(1)?;
            if args[0] < 2 {
                return Err(parse_err(token, "Softmax needs at least 2 classes"));
            }
            Ok(LayerSpec::Softmax(args[0]))
        }
        _ => Err(parse_err(token, format!("unknown layer `{name}`"))),
    }
}

/// Parses a dash-delimited architecture string.
pub fn parse_arch(spec: &str) -> Result<ArchSpec> {
    let spec = spec.trim();
    let spec = spec
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .unwrap_or(spec);
    if spec.trim().is_empty() {
        return Err(parse_err(spec, "empty architecture"));
    }
    let mut input_width = None;
    let mut layers = Vec::new();
    for (i, raw) in spec.split('-').enumerate() {
        let token = raw.trim();
        if token.is_empty() {
            return Err(parse_err(raw, "empty layer token"));
        }
        if i == 0 && token.bytes().all(|b| b.is_ascii_digit()) {
            match token.parse::<usize>() {
                Ok(w) if w > 0 => input_width = Some(w),
                _ => return Err(parse_err(token, "input width must be a positive integer")),
            }
            continue;
        }
        if let Some(LayerSpec::Softmax(_)) = layers.last() {
            return Err(parse_err(token, "layers after the Softmax terminal"));
        }
        layers.push(parse_layer(token)?);
    }
    match layers.last() {
        Some(LayerSpec::Softmax(_)) => Ok(ArchSpec { input_width, layers }),
        Some(last) => Err(parse_err(&last.to_string(), "missing Softmax terminal")),
        None => Err(parse_err(spec, "missing Softmax terminal")),
    }
}

/// Closed-form parameter count under same-padding, stride-1 convolutions.
pub fn count_params(arch: &ArchSpec, input: Shape3) -> Result<usize> {
    Ok(arch
        .param_shapes(input)?
        .into_iter()
        .flatten()
        .map(|(w, b)| w.iter().product::<usize>() + b)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MNIST_TEACHER: &str = "Conv1(32,5,5)-MaxPool(2)-Conv2(64,5,5)-MaxPool(2)-FC(128)-Softmax(10)";
    const CIFAR_TEACHER: &str = "Conv1(32,3,3)-Conv2(32,3,3)-MaxPool(2)-Conv3(64,3,3)-Conv4(64,3,3)-\
        MaxPool(2)-Conv5(128,3,3)-Conv6(128,3,3)-MaxPool(2)-FC(1024)-FC(512)-Softmax(10)";

    #[test]
    fn parses_mnist_teacher() {
        let arch = parse_arch(MNIST_TEACHER).unwrap();
        assert_eq!(
            arch.layers,
            vec![
                LayerSpec::Conv { out_channels: 32, kh: 5, kw: 5 },
                LayerSpec::MaxPool(2),
                LayerSpec::Conv { out_channels: 64, kh: 5, kw: 5 },
                LayerSpec::MaxPool(2),
                LayerSpec::Dense(128),
                LayerSpec::Softmax(10),
            ]
        );
        assert_eq!(arch.num_classes(), 10);
    }

    #[test]
    fn minimal_and_malformed() {
        let arch = parse_arch("Softmax(10)").unwrap();
        assert_eq!(arch.layers, vec![LayerSpec::Softmax(10)]);
        assert!(matches!(parse_arch("Conv1(32,5)"), Err(KdError::Parse { token, .. }) if token == "Conv1(32,5)"));
        assert!(parse_arch("").is_err());
        assert!(parse_arch("Conv(3,3,3)").is_err());
        assert!(parse_arch("FC(x)-Softmax(2)").is_err());
        assert!(parse_arch("Pool(2)-Softmax(2)").is_err());
        assert!(parse_arch("Softmax(1)").is_err());
        assert!(parse_arch("Softmax(3)-FC(2)").is_err());
        assert!(parse_arch("FC(0)-Softmax(2)").is_err());
        assert!(parse_arch("FC(2)--Softmax(2)").is_err());
    }

    #[test]
    fn whitespace_and_input_width() {
        let arch = parse_arch("784 - Dense(500) - Dense(300) - Softmax(10)").unwrap();
        assert_eq!(arch.input_width, Some(784));
        assert_eq!(arch.to_string(), "784-FC(500)-FC(300)-Softmax(10)");
        assert!(arch.layer_shapes(Shape3::new(1, 28, 28)).is_ok());
        assert!(arch.layer_shapes(Shape3::new(3, 28, 28)).is_err());
    }

    #[test]
    fn closed_form_counts() {
        let cifar = parse_arch(CIFAR_TEACHER).unwrap();
        assert_eq!(count_params(&cifar, Shape3::new(3, 32, 32)).unwrap(), 2_915_114);
        let dnn = parse_arch("784 - Dense(500) - Dense(300) - Softmax(10)").unwrap();
        assert_eq!(count_params(&dnn, Shape3::new(1, 28, 28)).unwrap(), 545_810);
        let mnist = parse_arch(MNIST_TEACHER).unwrap();
        assert_eq!(count_params(&mnist, Shape3::new(1, 28, 28)).unwrap(), 454_922);
        let linear = parse_arch("Softmax(10)").unwrap();
        assert_eq!(count_params(&linear, Shape3::new(1, 1, 10)).unwrap(), 110);
    }

    #[test]
    fn pooling_underflow_is_shape_error() {
        let arch = parse_arch("MaxPool(2)-MaxPool(2)-Softmax(2)").unwrap();
        assert!(matches!(
            count_params(&arch, Shape3::new(1, 3, 3)),
            Err(KdError::Shape(_))
        ));
    }

    #[test]
    fn shape_chain() {
        let arch = parse_arch(MNIST_TEACHER).unwrap();
        let shapes = arch.layer_shapes(Shape3::new(1, 28, 28)).unwrap();
        assert_eq!(shapes[0], Shape3::new(32, 28, 28));
        assert_eq!(shapes[1], Shape3::new(32, 14, 14));
        assert_eq!(shapes[3], Shape3::new(64, 7, 7));
        assert_eq!(shapes[5], Shape3::new(10, 1, 1));
        let odd = parse_arch("MaxPool(2)-Softmax(2)").unwrap();
        assert_eq!(odd.layer_shapes(Shape3::new(1, 7, 5)).unwrap()[0], Shape3::new(1, 3, 2));
    }

    #[test]
    fn shape3_parsing() {
        assert_eq!("1x28x28".parse::<Shape3>().unwrap(), Shape3::new(1, 28, 28));
        assert!("28x28".parse::<Shape3>().is_err());
        assert!("0x1x1".parse::<Shape3>().is_err());
    }
}
