//! Command-line front end: subcommands, dataset locators, checkpoints and
//! metrics CSV export.
//!
//! Exit codes: 0 success, 2 bad invocation / configuration / file problem,
//! 3 a training-time invariant violation (divergence, broken distribution).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::arch::{parse_arch, Shape3};
use crate::complexity::{complexity_profile, profile_report};
use crate::datasets::{
    adapt_to_input, gen_gaussian_noise, gen_shapes, gen_uniform_noise, load_cifar10_bin, load_cifar10_test,
    load_image_dir, load_mnist_dir, netpbm, Dataset, MeanShift, MnistSplit,
};
use crate::distill::{distill_augmented, distill_data_free, evaluate, train_teacher, RunMetrics, TrainConfig};
use crate::error::{KdError, Result};
use crate::network::Network;

const MAGIC: &[u8; 4] = b"KDWB";
const VERSION: u32 = 1;

// ---------------------------------------------------------------- checkpoints

/// Serializes a network and its input mean shift.
pub fn encode_checkpoint(net: &Network, shift: &MeanShift) -> Vec<u8> {
    let arch = net.arch().to_string();
    let shape = net.input_shape();
    let means = shift.values();
    let mut out = Vec::with_capacity(32 + arch.len() + 4 * (means.len() + net.param_count()));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(arch.len() as u32).to_le_bytes());
    out.extend_from_slice(arch.as_bytes());
    out.extend_from_slice(&3u32.to_le_bytes());
    for d in [shape.c, shape.h, shape.w] {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    out.extend_from_slice(&(means.len() as u32).to_le_bytes());
    for m in means {
        out.extend_from_slice(&m.to_le_bytes());
    }
    for p in net.param_vector() {
        out.extend_from_slice(&p.to_le_bytes());
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    name: &'a str,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        let s = self
            .bytes
            .get(self.pos..self.pos.saturating_add(n))
            .ok_or_else(|| KdError::format(self.name, self.pos as u64, format!("truncated while reading {what}")))?;
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        let b = self.take(4, what)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn f32s(&mut self, n: usize, what: &str) -> Result<Vec<f32>> {
        let b = self.take(n.checked_mul(4).unwrap_or(usize::MAX), what)?;
        Ok(b.chunks_exact(4).map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect())
    }
}

pub fn decode_checkpoint(bytes: &[u8], name: &str) -> Result<(Network, MeanShift)> {
    let mut r = Reader { bytes, pos: 0, name };
    if r.take(4, "magic")? != MAGIC {
        return Err(KdError::format(name, 0, "bad magic, expected KDWB"));
    }
    let version = r.u32("version")?;
    if version != VERSION {
        return Err(KdError::format(name, 4, format!("unsupported version {version}")));
    }
    let len = r.u32("architecture length")? as usize;
    let at = r.pos as u64;
    let text = std::str::from_utf8(r.take(len, "architecture")?)
        .map_err(|_| KdError::format(name, at, "architecture is not UTF-8"))?;
    let arch = parse_arch(text).map_err(|e| KdError::format(name, at, format!("architecture: {e}")))?;
    let at = r.pos as u64;
    if r.u32("shape length")? != 3 {
        return Err(KdError::format(name, at, "input shape must have 3 dimensions"));
    }
    let (c, h, w) = (r.u32("shape")? as usize, r.u32("shape")? as usize, r.u32("shape")? as usize);
    let at = r.pos as u64;
    let n_means = r.u32("mean count")? as usize;
    let shift = MeanShift::from_values(&r.f32s(n_means, "means")?)
        .map_err(|e| KdError::format(name, at, e.to_string()))?;
    let mut net = Network::zeros(&arch, Shape3::new(c, h, w))
        .map_err(|e| KdError::format(name, at, format!("architecture does not fit {c}x{h}x{w}: {e}")))?;
    let at = r.pos;
    let remaining = bytes.len() - at;
    if remaining != 4 * net.param_count() {
        return Err(KdError::format(
            name,
            at as u64,
            format!(
                "parameter block holds {remaining} bytes but '{arch}' needs {} parameters ({} bytes)",
                net.param_count(),
                4 * net.param_count()
            ),
        ));
    }
    net.set_param_vector(&r.f32s(net.param_count(), "parameters")?)?;
    Ok((net, shift))
}

pub fn save_checkpoint(net: &Network, shift: &MeanShift, path: &Path) -> Result<()> {
    write_file(path, &encode_checkpoint(net, shift))
}

pub fn load_checkpoint(path: &Path) -> Result<(Network, MeanShift)> {
    let bytes = std::fs::read(path).map_err(|e| KdError::io(path, e))?;
    decode_checkpoint(&bytes, &path.display().to_string())
}

// ---------------------------------------------------------------- metrics CSV

pub const METRICS_HEADER: &str = "epoch,train_loss,test_acc,seconds";

/// Per-epoch CSV. Wall time is written as zero unless `record_time`, so that
/// identical runs give identical files.
pub fn metrics_csv(metrics: &RunMetrics, record_time: bool) -> Result<String> {
    if metrics.epochs.is_empty() {
        return Err(KdError::Argument("no epochs to write".into()));
    }
    let mut out = format!("{METRICS_HEADER}\n");
    for e in &metrics.epochs {
        let secs = if record_time { e.seconds } else { 0.0 };
        let _ = writeln!(out, "{},{:.6},{:.6},{:.6}", e.epoch, e.train_loss, e.test_acc, secs);
    }
    Ok(out)
}

pub fn write_metrics_csv(metrics: &RunMetrics, path: &Path, record_time: bool) -> Result<()> {
    write_file(path, metrics_csv(metrics, record_time)?.as_bytes())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| KdError::io(parent, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| KdError::io(path, e))
}

// ---------------------------------------------------------------- locators

/// Which part of a dataset a locator is asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Train,
    Test,
    Stimulus,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Mnist(PathBuf),
    Cifar10(PathBuf),
    Dir(PathBuf),
    Noise { lo: f32, hi: f32 },
    Gauss { mean: f32, std: f32 },
    Shapes,
}

/// A parsed dataset locator such as `mnist:./data,n=500` or
/// `noise:n=5000,lo=-0.3,hi=0.7`.
///
/// File-backed sources accept `n=` (sample cap), `offset=` and `split=`
/// (`train`/`test`, otherwise chosen by role). Generators require `n=` and
/// accept `seed=` (default: the run seed).
#[derive(Debug, Clone, PartialEq)]
pub struct Locator {
    pub source: Source,
    pub n: Option<usize>,
    pub offset: usize,
    pub split: Option<Role>,
    pub seed: Option<u64>,
}

fn loc_err(text: &str, reason: impl std::fmt::Display) -> KdError {
    KdError::Parse { token: text.to_string(), reason: reason.to_string() }
}

impl std::str::FromStr for Locator {
    type Err = KdError;

    fn from_str(text: &str) -> Result<Self> {
        let (kind, rest) = text.split_once(':').ok_or_else(|| loc_err(text, "expected <kind>:<spec>"))?;
        let file_backed = matches!(kind, "mnist" | "cifar10" | "dir");
        let mut parts = rest.split(',');
        let path = if file_backed {
            let p = parts.next().unwrap_or("");
            if p.is_empty() {
                return Err(loc_err(text, "missing path"));
            }
            Some(PathBuf::from(p))
        } else {
            None
        };
        let mut kv = std::collections::BTreeMap::new();
        for part in parts.filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| loc_err(text, format!("expected key=value, got '{part}'")))?;
            if kv.insert(k.to_string(), v.to_string()).is_some() {
                return Err(loc_err(text, format!("duplicate key '{k}'")));
            }
        }
        let mut take = |key: &str| kv.remove(key);
        fn num<T: std::str::FromStr>(text: &str, key: &str, v: Option<String>) -> Result<Option<T>> {
            v.map(|v| v.parse().map_err(|_| loc_err(text, format!("invalid {key}='{v}'")))).transpose()
        }
        let n: Option<usize> = num(text, "n", take("n"))?;
        let offset = num(text, "offset", take("offset"))?.unwrap_or(0);
        let seed = num(text, "seed", take("seed"))?;
        let split = match take("split").as_deref() {
            None => None,
            Some("train") => Some(Role::Train),
            Some("test") => Some(Role::Test),
            Some(s) => return Err(loc_err(text, format!("split must be train or test, got '{s}'"))),
        };
        let source = match kind {
            "mnist" => Source::Mnist(path.expect("file-backed")),
            "cifar10" => Source::Cifar10(path.expect("file-backed")),
            "dir" => Source::Dir(path.expect("file-backed")),
            "noise" => Source::Noise {
                lo: num(text, "lo", take("lo"))?.unwrap_or(-0.3),
                hi: num(text, "hi", take("hi"))?.unwrap_or(0.7),
            },
            "gauss" => Source::Gauss {
                mean: num(text, "mean", take("mean"))?.unwrap_or(0.0),
                std: num(text, "std", take("std"))?.unwrap_or(1.0),
            },
            "shapes" => Source::Shapes,
            other => return Err(loc_err(text, format!("unknown dataset kind '{other}'"))),
        };
        if let Some(k) = kv.keys().next() {
            return Err(loc_err(text, format!("unknown key '{k}'")));
        }
        if !file_backed && (offset != 0 || split.is_some()) {
            return Err(loc_err(text, "offset/split apply only to file-backed datasets"));
        }
        if !file_backed && n.is_none() {
            return Err(loc_err(text, "generators need n=<count>"));
        }
        if n == Some(0) {
            return Err(loc_err(text, "n must be at least 1"));
        }
        Ok(Locator { source, n, offset, split, seed })
    }
}

impl Locator {
    /// Loads the dataset in its native value range `[0,1]` (generators
    /// excepted). `target` fixes the shape of directory and generated
    /// images; stimulus-role datasets lose their labels.
    pub fn load(&self, role: Role, target: Option<Shape3>, run_seed: u64) -> Result<Dataset> {
        let need_target = || {
            target.ok_or_else(|| KdError::Argument("this dataset kind needs a known target shape".into()))
        };
        let seed = self.seed.unwrap_or(run_seed);
        let test_split = self.split.unwrap_or(role) == Role::Test;
        let ds = match &self.source {
            Source::Mnist(dir) => {
                load_mnist_dir(dir, if test_split { MnistSplit::Test } else { MnistSplit::Train })?
            }
            Source::Cifar10(dir) if test_split => load_cifar10_test(dir)?,
            Source::Cifar10(dir) => load_cifar10_bin(dir)?,
            Source::Dir(dir) => {
                let t = need_target()?;
                load_image_dir(dir, t, t.c == 1)?
            }
            Source::Noise { lo, hi } => gen_uniform_noise(self.n.unwrap_or(1), need_target()?, *lo, *hi, seed)?,
            Source::Gauss { mean, std } => gen_gaussian_noise(self.n.unwrap_or(1), need_target()?, *mean, *std, seed)?,
            Source::Shapes => {
                let t = need_target()?;
                gen_shapes(self.n.unwrap_or(1), t.h, t.w, seed)?
            }
        };
        let ds = if self.offset > 0 || self.n.is_some_and(|n| n < ds.len()) {
            if self.offset >= ds.len() {
                return Err(KdError::Argument(format!("offset {} beyond the {} samples of '{}'", self.offset, ds.len(), ds.name())));
            }
            ds.slice(self.offset, self.n.unwrap_or(ds.len()))
        } else {
            ds
        };
        Ok(if role == Role::Stimulus { ds.without_labels() } else { ds })
    }
}

fn load_for(text: &str, role: Role, shape: Shape3, shift: &MeanShift, seed: u64) -> Result<Dataset> {
    let loc: Locator = text.parse()?;
    let ds = loc.load(role, Some(shape), seed)?;
    if ds.is_empty() {
        return Err(KdError::Argument(format!("'{text}' holds no samples")));
    }
    adapt_to_input(&ds, shape, shift)
}

// ---------------------------------------------------------------- commands

#[derive(Debug, Parser)]
#[command(name = "kdwb", about = "Knowledge-distillation workbench", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct TrainArgs {
    #[arg(long, default_value_t = 0.01)]
    pub lr: f32,
    #[arg(long, default_value_t = 0.9)]
    pub momentum: f32,
    #[arg(long, default_value_t = 64)]
    pub batch_size: usize,
    #[arg(long, visible_alias = "epochs", default_value_t = 100)]
    pub max_epochs: usize,
    #[arg(long, default_value_t = 1.0)]
    pub temperature: f32,
    #[arg(long, default_value_t = 1e-4)]
    pub stop_tol: f64,
    #[arg(long, default_value_t = 5)]
    pub stop_patience: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write real wall-clock seconds into the metrics CSV (otherwise 0).
    #[arg(long)]
    pub record_time: bool,
}

impl TrainArgs {
    fn config(&self, beta: f32) -> TrainConfig {
        TrainConfig {
            lr: self.lr,
            momentum: self.momentum,
            batch_size: self.batch_size,
            max_epochs: self.max_epochs,
            beta,
            temperature: self.temperature,
            stop_tol: self.stop_tol,
            stop_patience: self.stop_patience,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a network on labeled data and save it as a checkpoint.
    TrainTeacher {
        #[arg(long)]
        arch: String,
        #[arg(long)]
        train: String,
        #[arg(long)]
        test: String,
        /// Checkpoint output.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        metrics: Option<PathBuf>,
        #[command(flatten)]
        train_args: TrainArgs,
    },
    /// Data-free distillation of a teacher into a new student.
    Distill {
        #[arg(long)]
        teacher: PathBuf,
        #[arg(long)]
        student_arch: String,
        #[arg(long)]
        stimulus: String,
        #[arg(long)]
        test: String,
        /// Metrics CSV output.
        #[arg(long)]
        out: PathBuf,
        /// Optional student checkpoint output.
        #[arg(long)]
        model_out: Option<PathBuf>,
        /// Seed for the student's initial weights (default: --seed).
        #[arg(long)]
        init_seed: Option<u64>,
        #[command(flatten)]
        train_args: TrainArgs,
    },
    /// Distillation on labeled samples mixed with unlabeled stimulus.
    Augment {
        #[arg(long)]
        teacher: PathBuf,
        #[arg(long)]
        student_arch: String,
        #[arg(long)]
        labeled: String,
        #[arg(long)]
        stimulus: Option<String>,
        #[arg(long)]
        test: String,
        #[arg(long, default_value_t = 0.5)]
        beta: f32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        model_out: Option<PathBuf>,
        #[arg(long)]
        init_seed: Option<u64>,
        #[command(flatten)]
        train_args: TrainArgs,
    },
    /// Test accuracy of a checkpoint.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        test: String,
    },
    /// First-layer activation statistics of datasets under a teacher.
    Complexity {
        #[arg(long)]
        teacher: PathBuf,
        /// Dataset locator; repeat for several datasets.
        #[arg(long = "data", required = true)]
        data: Vec<String>,
        /// Report ordered by average per-map std.
        #[arg(long)]
        by_std: Option<PathBuf>,
        /// Report ordered by mean activation.
        #[arg(long)]
        by_mean: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write synthetic stimulus as PGM/PPM files (values clamped to [0,1]).
    GenStimulus {
        #[arg(long, value_parser = ["shapes", "noise", "gauss"])]
        kind: String,
        #[arg(long)]
        n: usize,
        /// Image size as HxW.
        #[arg(long, default_value = "28x28")]
        hw: String,
        #[arg(long, default_value_t = 1)]
        channels: usize,
        #[arg(long, default_value_t = -0.3, allow_hyphen_values = true)]
        lo: f32,
        #[arg(long, default_value_t = 0.7, allow_hyphen_values = true)]
        hi: f32,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        mean: f32,
        #[arg(long, default_value_t = 1.0)]
        std: f32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_hw(text: &str) -> Result<(usize, usize)> {
    let err = || KdError::Parse { token: text.to_string(), reason: "expected HxW".into() };
    let (h, w) = text.split_once(['x', 'X']).ok_or_else(err)?;
    let (h, w) = (h.parse().map_err(|_| err())?, w.parse().map_err(|_| err())?);
    if h == 0 || w == 0 {
        return Err(err());
    }
    Ok((h, w))
}

fn finish_run(student: &Network, shift: &MeanShift, metrics: &RunMetrics, args: &TrainArgs, out: &Path, model_out: Option<&Path>) -> Result<()> {
    write_metrics_csv(metrics, out, args.record_time)?;
    if let Some(p) = model_out {
        save_checkpoint(student, shift, p)?;
    }
    Ok(())
}

fn student_for(arch: &str, teacher: &Network, seed: u64) -> Result<Network> {
    Network::init(&parse_arch(arch)?, teacher.input_shape(), seed)
}

/// Runs one parsed command; stdout receives command output (if any).
pub fn execute(cli: Cli, stdout: &mut impl std::io::Write) -> Result<()> {
    match cli.command {
        Command::TrainTeacher { arch, train, test, out, metrics, train_args } => {
            let cfg = train_args.config(0.0);
            cfg.validate()?;
            let arch = parse_arch(&arch)?;
            let raw: Dataset = train.parse::<Locator>()?.load(Role::Train, None, cfg.seed)?;
            let shape = raw.shape();
            let shift = MeanShift::global_of(&raw);
            let train_ds = adapt_to_input(&raw, shape, &shift)?;
            drop(raw);
            let test_ds = load_for(&test, Role::Test, shape, &shift, cfg.seed)?;
            let net = Network::init(&arch, shape, cfg.seed)?;
            let (net, m) = train_teacher(net, &train_ds, &test_ds, &cfg)?;
            save_checkpoint(&net, &shift, &out)?;
            if let Some(p) = metrics {
                write_metrics_csv(&m, &p, train_args.record_time)?;
            }
        }
        Command::Distill { teacher, student_arch, stimulus, test, out, model_out, init_seed, train_args } => {
            let cfg = train_args.config(0.0);
            cfg.validate()?;
            let (teacher, shift) = load_checkpoint(&teacher)?;
            let shape = teacher.input_shape();
            let student = student_for(&student_arch, &teacher, init_seed.unwrap_or(cfg.seed))?;
            let stim = load_for(&stimulus, Role::Stimulus, shape, &shift, cfg.seed)?;
            let test_ds = load_for(&test, Role::Test, shape, &shift, cfg.seed)?;
            let (student, m) = distill_data_free(&teacher, student, &stim, &test_ds, &cfg)?;
            finish_run(&student, &shift, &m, &train_args, &out, model_out.as_deref())?;
        }
        Command::Augment { teacher, student_arch, labeled, stimulus, test, beta, out, model_out, init_seed, train_args } => {
            let cfg = train_args.config(beta);
            cfg.validate()?;
            let (teacher, shift) = load_checkpoint(&teacher)?;
            let shape = teacher.input_shape();
            let student = student_for(&student_arch, &teacher, init_seed.unwrap_or(cfg.seed))?;
            let lab = load_for(&labeled, Role::Train, shape, &shift, cfg.seed)?;
            if !lab.is_fully_labeled() {
                return Err(KdError::Argument(format!("'{labeled}' is not a labeled dataset")));
            }
            let stim = match &stimulus {
                Some(s) => load_for(s, Role::Stimulus, shape, &shift, cfg.seed)?,
                None => Dataset::unlabeled("none", shape, Vec::new())?,
            };
            let test_ds = load_for(&test, Role::Test, shape, &shift, cfg.seed)?;
            let (student, m) = distill_augmented(&teacher, student, &lab, &stim, &test_ds, &cfg)?;
            finish_run(&student, &shift, &m, &train_args, &out, model_out.as_deref())?;
        }
        Command::Eval { model, test } => {
            let (net, shift) = load_checkpoint(&model)?;
            let test_ds = load_for(&test, Role::Test, net.input_shape(), &shift, 0)?;
            let (acc, errors) = evaluate(&net, &test_ds)?;
            writeln!(stdout, "accuracy={acc:.6} errors={errors} n={}", test_ds.len())
                .map_err(|e| KdError::io("<stdout>", e))?;
        }
        Command::Complexity { teacher, data, by_std, by_mean, seed } => {
            let (net, shift) = load_checkpoint(&teacher)?;
            let profiles = data
                .iter()
                .map(|d| complexity_profile(&net, &load_for(d, Role::Stimulus, net.input_shape(), &shift, seed)?))
                .collect::<Result<Vec<_>>>()?;
            let report = profile_report(&profiles)?;
            if let Some(p) = &by_std {
                write_file(p, report.by_std_csv().as_bytes())?;
            }
            if let Some(p) = &by_mean {
                write_file(p, report.by_mean_csv().as_bytes())?;
            }
            if by_std.is_none() && by_mean.is_none() {
                write!(stdout, "{}\n{}", report.by_std_csv(), report.by_mean_csv())
                    .map_err(|e| KdError::io("<stdout>", e))?;
            }
        }
        Command::GenStimulus { kind, n, hw, channels, lo, hi, mean, std, seed, out } => {
            let (h, w) = parse_hw(&hw)?;
            if channels != 1 && channels != 3 {
                return Err(KdError::Argument(format!("channels must be 1 or 3, got {channels}")));
            }
            let shape = Shape3::new(channels, h, w);
            let ds = match kind.as_str() {
                "shapes" => adapt_to_input(&gen_shapes(n, h, w, seed)?, shape, &MeanShift::none())?,
                "noise" => gen_uniform_noise(n, shape, lo, hi, seed)?,
                _ => gen_gaussian_noise(n, shape, mean, std, seed)?,
            };
            std::fs::create_dir_all(&out).map_err(|e| KdError::io(&out, e))?;
            let ext = if channels == 1 { "pgm" } else { "ppm" };
            let digits = (n.max(2) - 1).to_string().len().max(5);
            for i in 0..ds.len() {
                let bytes = netpbm::encode(shape, ds.image(i))?;
                write_file(&out.join(format!("{i:0digits$}.{ext}")), &bytes)?;
            }
        }
    }
    Ok(())
}

fn exit_code(e: &KdError) -> i32 {
    match e {
        KdError::Diverged(_) | KdError::Invariant(_) | KdError::State(_) => 3,
        _ => 2,
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr as a single line.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments"));
            return 2;
        }
    };
    match execute(cli, &mut std::io::stdout().lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            exit_code(&e)
        }
    }
}
