//! Learning the exponent and a Gaussian-mixture contour that separate two
//! labelled classes of barcodes.
//!
//! The distance between samples is the interleaving distance between their
//! stable ranks with `q = 1`. The loss is
//! `Σ_{A×A} d² / Σ_{A×I} d² + Σ_{B×B} d² / Σ_{B×I} d²` over ordered pairs,
//! including `i = j`, and is minimized by projected gradient descent with
//! heavy-ball momentum on central finite differences.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize};

use crate::barcode::Barcode;
use crate::contour::{Component, Contour, DEFAULT_FLOOR};
use crate::distance::MetricChoice;
use crate::error::{Error, Result};
use crate::norms::Exponent;
use crate::par;
use crate::stable_rank::{interleaving_from_prefix, PrefixNorms};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::A => "A",
            Label::B => "B",
        })
    }
}

impl std::str::FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Label::A),
            "B" | "b" => Ok(Label::B),
            other => Err(Error::Invalid(format!("unknown label {other:?} (expected A or B)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub id: String,
    pub barcode: Barcode,
    pub label: Label,
}

/// Barcodes labelled `A` or `B`, with both labels present.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset {
    samples: Vec<Sample>,
}

impl LabeledDataset {
    pub fn new(samples: Vec<Sample>) -> Result<Self> {
        for label in [Label::A, Label::B] {
            if !samples.iter().any(|s| s.label == label) {
                return Err(Error::Degenerate(format!("no sample labelled {label}")));
            }
        }
        Ok(LabeledDataset { samples })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.samples.iter().map(|s| s.label).collect()
    }

    pub fn barcodes(&self) -> Vec<&Barcode> {
        self.samples.iter().map(|s| &s.barcode).collect()
    }

    /// Largest finite endpoint over all bars, or 1 if there is none.
    pub fn filtration_range(&self) -> f64 {
        let r = self
            .samples
            .iter()
            .flat_map(|s| s.barcode.iter())
            .flat_map(|b| [b.birth(), b.death()])
            .filter(|v| v.is_finite())
            .fold(0.0f64, f64::max);
        if r > 0.0 {
            r
        } else {
            1.0
        }
    }
}

/// `θ = (μ_1..μ_k, σ_1..σ_k, λ_2..λ_k, p)`; `λ_1` is fixed to 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricParams {
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
    /// Weights of components `2..=k`.
    pub lambda: Vec<f64>,
    pub p: f64,
}

/// Lower bounds of the feasible set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub sigma_min: f64,
    pub lambda_min: f64,
}

impl Bounds {
    /// `σ_min = 10⁻³ · range`, `λ_min = 10⁻⁴`.
    pub fn for_range(range: f64) -> Self {
        Bounds { sigma_min: 1e-3 * range, lambda_min: 1e-4 }
    }
}

impl MetricParams {
    pub fn new(mu: Vec<f64>, sigma: Vec<f64>, lambda: Vec<f64>, p: f64) -> Result<Self> {
        let k = mu.len();
        if k == 0 || sigma.len() != k || lambda.len() + 1 != k {
            return Err(Error::Invalid(format!(
                "inconsistent mixture sizes: {} means, {} deviations, {} weights",
                mu.len(),
                sigma.len(),
                lambda.len()
            )));
        }
        let theta = MetricParams { mu, sigma, lambda, p };
        if theta.to_vec().iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("parameters must be finite".into()));
        }
        Ok(theta)
    }

    pub fn k(&self) -> usize {
        self.mu.len()
    }

    /// Number of coordinates, `3k`.
    pub fn dim(&self) -> usize {
        3 * self.k()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.dim());
        v.extend_from_slice(&self.mu);
        v.extend_from_slice(&self.sigma);
        v.extend_from_slice(&self.lambda);
        v.push(self.p);
        v
    }

    pub fn from_vec(k: usize, v: &[f64]) -> Result<Self> {
        if v.len() != 3 * k || k == 0 {
            return Err(Error::Invalid(format!("expected {} coordinates, got {}", 3 * k, v.len())));
        }
        MetricParams::new(v[..k].to_vec(), v[k..2 * k].to_vec(), v[2 * k..3 * k - 1].to_vec(), v[3 * k - 1])
    }

    /// Names of the coordinates in [`to_vec`](Self::to_vec) order.
    pub fn coordinate_names(k: usize) -> Vec<String> {
        let mut names = Vec::with_capacity(3 * k);
        names.extend((1..=k).map(|i| format!("mu{i}")));
        names.extend((1..=k).map(|i| format!("sigma{i}")));
        names.extend((2..=k).map(|i| format!("lambda{i}")));
        names.push("p".into());
        names
    }

    pub fn is_feasible(&self, b: &Bounds) -> bool {
        self.p >= 1.0
            && self.sigma.iter().all(|&s| s >= b.sigma_min && s > 0.0)
            && self.lambda.iter().all(|&l| l >= b.lambda_min && l > 0.0)
    }

    /// `p ← max(p, 1)`, `σ_i ← max(σ_i, σ_min)`, `λ_i ← max(λ_i, λ_min)`.
    pub fn project(&self, b: &Bounds) -> Self {
        MetricParams {
            mu: self.mu.clone(),
            sigma: self.sigma.iter().map(|&s| s.max(b.sigma_min)).collect(),
            lambda: self.lambda.iter().map(|&l| l.max(b.lambda_min)).collect(),
            p: self.p.max(1.0),
        }
    }

    pub fn contour(&self, floor: f64) -> Result<Contour> {
        let comps = (0..self.k())
            .map(|i| Component {
                mu: self.mu[i],
                sigma: self.sigma[i],
                lambda: if i == 0 { 1.0 } else { self.lambda[i - 1] },
            })
            .collect();
        Contour::gaussian_mixture(floor, comps)
    }

    /// The metric with this contour and exponent, and `q = 1`.
    pub fn metric(&self, floor: f64) -> Result<MetricChoice> {
        MetricChoice::new(Exponent::new(self.p)?, Exponent::ONE, self.contour(floor)?)
    }

    /// A random feasible start for a filtration range `R`: `μ ~ U[0, R]`,
    /// `σ ~ U[0.05R, 0.5R]`, `λ ~ U[0.5, 2]`, `p ~ U[1, 4]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, k: usize, range: f64) -> Self {
        MetricParams {
            mu: (0..k).map(|_| rng.random_range(0.0..range)).collect(),
            sigma: (0..k).map(|_| rng.random_range(0.05 * range..0.5 * range)).collect(),
            lambda: (1..k).map(|_| rng.random_range(0.5..2.0)).collect(),
            p: rng.random_range(1.0..4.0),
        }
    }
}

/// Symmetric matrix of interleaving distances between stable ranks.
pub fn pairwise_distances(barcodes: &[&Barcode], m: &MetricChoice) -> Vec<Vec<f64>> {
    let kappa = m.kappa();
    let prefix: Vec<PrefixNorms> = par::map_range(barcodes.len(), |i| PrefixNorms::new(barcodes[i], m));
    symmetric_from(&prefix, kappa)
}

fn symmetric_from(prefix: &[PrefixNorms], kappa: f64) -> Vec<Vec<f64>> {
    let n = prefix.len();
    let upper: Vec<Vec<f64>> = par::map_range(n, |i| {
        (i + 1..n).map(|j| interleaving_from_prefix(&prefix[i], &prefix[j], kappa)).collect()
    });
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for (off, &v) in upper[i].iter().enumerate() {
            let j = i + 1 + off;
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    d
}

/// Distance matrix of a dataset under `θ` (with `q = 1`).
pub fn distance_matrix(data: &LabeledDataset, theta: &MetricParams, floor: f64) -> Result<Vec<Vec<f64>>> {
    let m = theta.metric(floor)?;
    let p = m.p;
    let prefix: Vec<PrefixNorms> = par::map_range(data.len(), |i| {
        let mut l = m.contour.lifetimes(&data.samples[i].barcode);
        l.sort_by(f64::total_cmp);
        PrefixNorms::from_sorted_lifetimes(&l, p)
    });
    Ok(symmetric_from(&prefix, m.kappa()))
}

/// The loss on a precomputed distance matrix.
pub fn loss_from_matrix(d: &[Vec<f64>], labels: &[Label]) -> Result<f64> {
    let mut total = 0.0;
    for class in [Label::A, Label::B] {
        let (mut intra, mut all) = (0.0f64, 0.0f64);
        for (i, row) in d.iter().enumerate() {
            if labels[i] != class {
                continue;
            }
            for (j, &v) in row.iter().enumerate() {
                let sq = v * v;
                all += sq;
                if labels[j] == class {
                    intra += sq;
                }
            }
        }
        if !all.is_finite() {
            return Err(Error::NonFinite(format!("class {class} has infinite distances")));
        }
        if all == 0.0 {
            return Err(Error::Degenerate(format!("all distances from class {class} are zero")));
        }
        total += intra / all;
    }
    Ok(total)
}

pub fn loss(data: &LabeledDataset, theta: &MetricParams, floor: f64) -> Result<f64> {
    let d = distance_matrix(data, theta, floor)?;
    loss_from_matrix(&d, &data.labels())
}

fn evaluable(theta: &[f64], k: usize) -> bool {
    let p_ok = theta[3 * k - 1] >= 1.0;
    let sigma_ok = theta[k..2 * k].iter().all(|&s| s > 0.0);
    let lambda_ok = theta[2 * k..3 * k - 1].iter().all(|&l| l > 0.0);
    p_ok && sigma_ok && lambda_ok
}

/// Central finite differences with steps `h_i = 10⁻⁵ · max(1, |θ_i|)`.
///
/// A coordinate whose backward probe would leave the domain where the loss is
/// defined (`p < 1`, `σ ≤ 0` or `λ ≤ 0`) uses a forward difference instead.
pub fn grad_fd(data: &LabeledDataset, theta: &MetricParams, floor: f64) -> Result<Vec<f64>> {
    let k = theta.k();
    let base = theta.to_vec();
    let eval = |v: &[f64]| -> Result<f64> {
        let l = loss(data, &MetricParams::from_vec(k, v)?, floor)?;
        if l.is_finite() {
            Ok(l)
        } else {
            Err(Error::NonFinite(format!("{v:?}")))
        }
    };
    let mut center: Option<f64> = None;
    let mut grad = Vec::with_capacity(base.len());
    for i in 0..base.len() {
        let h = 1e-5 * base[i].abs().max(1.0);
        let mut plus = base.clone();
        plus[i] += h;
        let mut minus = base.clone();
        minus[i] -= h;
        let fp = eval(&plus)?;
        if evaluable(&minus, k) {
            grad.push((fp - eval(&minus)?) / (2.0 * h));
        } else {
            let f0 = match center {
                Some(v) => v,
                None => *center.insert(eval(&base)?),
            };
            grad.push((fp - f0) / h);
        }
    }
    Ok(grad)
}

/// Optimizer settings.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainOptions {
    pub iters: usize,
    pub step: f64,
    pub momentum: f64,
    pub bounds: Bounds,
    pub floor: f64,
    /// Filtration range; means and deviations are updated in units of it.
    pub range: f64,
}

impl TrainOptions {
    /// Defaults for a dataset: 2000 iterations, step `10⁻²`, momentum 0.9.
    pub fn for_dataset(data: &LabeledDataset) -> Self {
        let range = data.filtration_range();
        TrainOptions {
            iters: 2000,
            step: 1e-2,
            momentum: 0.9,
            bounds: Bounds::for_range(range),
            floor: DEFAULT_FLOOR,
            range,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub iter: usize,
    pub loss: f64,
    pub best_loss: f64,
    pub theta: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct TrainResult {
    pub best: MetricParams,
    pub best_loss: f64,
    pub trace: Vec<TraceRow>,
}

/// A run stopped by an error, with the trace recorded up to that point.
#[derive(Clone, Debug)]
pub struct TrainFailure {
    pub error: Error,
    pub trace: Vec<TraceRow>,
}

impl fmt::Display for TrainFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "training stopped after {} evaluations: {}", self.trace.len(), self.error)
    }
}

impl std::error::Error for TrainFailure {}

/// Projected gradient descent with heavy-ball momentum.
///
/// Each iteration evaluates the loss and its finite-difference gradient at
/// `θ`, sets `v ← momentum·v − step·s²∘g` with `s` the filtration range for
/// means and deviations and 1 otherwise, then `θ ← project(θ + v)`. The trace
/// has one row per evaluated point, the final point included; the returned
/// parameters are the best seen.
pub fn train(
    data: &LabeledDataset,
    theta0: &MetricParams,
    opts: &TrainOptions,
) -> std::result::Result<TrainResult, TrainFailure> {
    let k = theta0.k();
    let mut trace = Vec::with_capacity(opts.iters + 1);
    if !theta0.is_feasible(&opts.bounds) {
        return Err(TrainFailure { error: Error::Invalid("initial parameters are not feasible".into()), trace });
    }
    let scale: Vec<f64> = (0..3 * k).map(|i| if i < 2 * k { opts.range } else { 1.0 }).collect();
    let mut theta = theta0.clone();
    let mut velocity = vec![0.0; 3 * k];
    let mut best = theta0.clone();
    let mut best_loss = f64::INFINITY;

    for iter in 0..=opts.iters {
        let current = match loss(data, &theta, opts.floor) {
            Ok(l) if l.is_finite() => l,
            Ok(l) => return Err(TrainFailure { error: Error::NonFinite(format!("loss {l} at iteration {iter}")), trace }),
            Err(error) => return Err(TrainFailure { error, trace }),
        };
        if current < best_loss {
            best_loss = current;
            best = theta.clone();
        }
        trace.push(TraceRow { iter, loss: current, best_loss, theta: theta.to_vec() });
        if iter == opts.iters {
            break;
        }
        let grad = match grad_fd(data, &theta, opts.floor) {
            Ok(g) => g,
            Err(error) => return Err(TrainFailure { error, trace }),
        };
        let mut v = theta.to_vec();
        for i in 0..v.len() {
            velocity[i] = opts.momentum * velocity[i] - opts.step * scale[i] * scale[i] * grad[i];
            v[i] += velocity[i];
        }
        theta = match MetricParams::from_vec(k, &v) {
            Ok(t) => t.project(&opts.bounds),
            Err(error) => return Err(TrainFailure { error, trace }),
        };
    }
    Ok(TrainResult { best, best_loss, trace })
}

/// Starting point in a training configuration: explicit or `"random"`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Theta0 {
    Random,
    Explicit(MetricParams),
}

impl<'de> Deserialize<'de> for Theta0 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Keyword(String),
            Params(MetricParams),
        }
        match Raw::deserialize(d)? {
            Raw::Keyword(s) if s == "random" => Ok(Theta0::Random),
            Raw::Keyword(s) => Err(serde::de::Error::custom(format!("unknown theta0 {s:?}"))),
            Raw::Params(p) => Ok(Theta0::Explicit(p)),
        }
    }
}

impl Serialize for Theta0Keyword {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str("random")
    }
}

struct Theta0Keyword;

/// Training configuration file.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingConfig {
    #[serde(default = "default_iters")]
    pub iters: usize,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_momentum")]
    pub momentum: f64,
    #[serde(default)]
    pub seed: u64,
    /// Defaults to `10⁻³` times the filtration range.
    #[serde(default)]
    pub sigma_min: Option<f64>,
    #[serde(default = "default_lambda_min")]
    pub lambda_min: f64,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_theta0")]
    pub theta0: Theta0,
    #[serde(default = "default_floor")]
    pub floor: f64,
}

fn default_iters() -> usize {
    2000
}
fn default_step() -> f64 {
    1e-2
}
fn default_momentum() -> f64 {
    0.9
}
fn default_lambda_min() -> f64 {
    1e-4
}
fn default_k() -> usize {
    2
}
fn default_theta0() -> Theta0 {
    Theta0::Random
}
fn default_floor() -> f64 {
    DEFAULT_FLOOR
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            iters: default_iters(),
            step: default_step(),
            momentum: default_momentum(),
            seed: 0,
            sigma_min: None,
            lambda_min: default_lambda_min(),
            k: default_k(),
            theta0: Theta0::Random,
            floor: default_floor(),
        }
    }
}

impl Serialize for TrainingConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("TrainingConfig", 9)?;
        st.serialize_field("iters", &self.iters)?;
        st.serialize_field("step", &self.step)?;
        st.serialize_field("momentum", &self.momentum)?;
        st.serialize_field("seed", &self.seed)?;
        st.serialize_field("sigma_min", &self.sigma_min)?;
        st.serialize_field("lambda_min", &self.lambda_min)?;
        st.serialize_field("k", &self.k)?;
        match &self.theta0 {
            Theta0::Random => st.serialize_field("theta0", &Theta0Keyword)?,
            Theta0::Explicit(p) => st.serialize_field("theta0", p)?,
        }
        st.serialize_field("floor", &self.floor)?;
        st.end()
    }
}

impl TrainingConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let c: TrainingConfig = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::Invalid(format!("step must be > 0 (got {})", self.step)));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::Invalid(format!("momentum must lie in [0, 1) (got {})", self.momentum)));
        }
        if self.k == 0 {
            return Err(Error::Invalid("k must be at least 1".into()));
        }
        if !(self.lambda_min > 0.0) {
            return Err(Error::Invalid("lambda_min must be > 0".into()));
        }
        if let Some(s) = self.sigma_min {
            if !(s > 0.0) {
                return Err(Error::Invalid("sigma_min must be > 0".into()));
            }
        }
        if let Theta0::Explicit(t) = &self.theta0 {
            if t.k() != self.k {
                return Err(Error::Invalid(format!("theta0 has {} components, k = {}", t.k(), self.k)));
            }
        }
        if !(self.floor.is_finite() && self.floor > 0.0) {
            return Err(Error::Invalid("floor must be > 0".into()));
        }
        Ok(())
    }

    /// Optimizer options and the starting point for a dataset.
    pub fn resolve<R: Rng + ?Sized>(&self, data: &LabeledDataset, rng: &mut R) -> Result<(TrainOptions, MetricParams)> {
        self.validate()?;
        let range = data.filtration_range();
        let bounds = Bounds { sigma_min: self.sigma_min.unwrap_or(1e-3 * range), lambda_min: self.lambda_min };
        let theta0 = match &self.theta0 {
            Theta0::Random => MetricParams::random(rng, self.k, range).project(&bounds),
            Theta0::Explicit(t) => {
                let t = MetricParams::new(t.mu.clone(), t.sigma.clone(), t.lambda.clone(), t.p)?;
                if !t.is_feasible(&bounds) {
                    return Err(Error::Invalid("theta0 is outside the feasible set".into()));
                }
                t
            }
        };
        let opts = TrainOptions {
            iters: self.iters,
            step: self.step,
            momentum: self.momentum,
            bounds,
            floor: self.floor,
            range,
        };
        Ok((opts, theta0))
    }
}
