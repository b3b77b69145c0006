//! Small fully owned networks mapping an encoded board to one
//! win/loss/draw distribution per joint action.

mod input;
mod layers;
mod optim;

use alloc::vec::Vec;

use libm::{exp, log, sqrt};
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use input::InputEncoder;
pub use layers::{Conv2d, Dense};
pub use optim::Sgd;

use crate::agents::OutcomeDistribution;
use crate::error::{Error, Result};
use crate::rng::rng_from;

/// Win, loss, draw.
pub const OUTCOMES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkKind {
    Conv,
    Dense,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NetworkSpec {
    pub kind: NetworkKind,
    /// `[channels, rows, cols]` for conv nets, `[len]` for dense nets.
    pub input_shape: Vec<usize>,
    /// Filter counts of the 3×3 conv layers (conv nets only).
    #[serde(default)]
    pub conv_channels: Vec<usize>,
    /// Widths of the hidden dense layers.
    pub hidden: Vec<usize>,
    pub output_actions: usize,
}

impl NetworkSpec {
    pub fn conv(input_shape: [usize; 3], actions: usize) -> Self {
        NetworkSpec {
            kind: NetworkKind::Conv,
            input_shape: input_shape.to_vec(),
            conv_channels: alloc::vec![16, 32],
            hidden: alloc::vec![128],
            output_actions: actions,
        }
    }

    pub fn dense(input_len: usize, actions: usize) -> Self {
        NetworkSpec {
            kind: NetworkKind::Dense,
            input_shape: alloc::vec![input_len],
            conv_channels: Vec::new(),
            hidden: alloc::vec![128, 128],
            output_actions: actions,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Err(Error::InvalidArgument(alloc::format!("network spec: {reason}")));
        match self.kind {
            NetworkKind::Conv if self.input_shape.len() != 3 => return bad("conv nets need a [channels, rows, cols] input"),
            NetworkKind::Dense if self.input_shape.len() != 1 => return bad("dense nets need a flat input"),
            NetworkKind::Dense if !self.conv_channels.is_empty() => return bad("dense nets have no conv layers"),
            _ => {}
        }
        if self.input_shape.contains(&0) || self.conv_channels.contains(&0) || self.hidden.contains(&0) {
            return bad("zero-sized layer");
        }
        if self.output_actions == 0 {
            return bad("no output actions");
        }
        Ok(())
    }

    pub fn input_len(&self) -> usize {
        self.input_shape.iter().product()
    }

    pub fn output_len(&self) -> usize {
        self.output_actions * OUTCOMES
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Layer {
    Conv(Conv2d),
    Dense(Dense),
}

impl Layer {
    fn forward(&self, x: &[f64], y: &mut Vec<f64>) {
        match self {
            Layer::Conv(l) => l.forward(x, y),
            Layer::Dense(l) => l.forward(x, y),
        }
    }

    fn backward(&self, x: &[f64], dy: &[f64], g: &mut LayerGrad, dx: Option<&mut Vec<f64>>) {
        match self {
            Layer::Conv(l) => l.backward(x, dy, &mut g.weight, &mut g.bias, dx),
            Layer::Dense(l) => l.backward(x, dy, &mut g.weight, &mut g.bias, dx),
        }
    }

    fn params(&self) -> [&Vec<f64>; 2] {
        match self {
            Layer::Conv(l) => [&l.weight, &l.bias],
            Layer::Dense(l) => [&l.weight, &l.bias],
        }
    }

    fn params_mut(&mut self) -> [&mut Vec<f64>; 2] {
        match self {
            Layer::Conv(l) => [&mut l.weight, &mut l.bias],
            Layer::Dense(l) => [&mut l.weight, &mut l.bias],
        }
    }

    fn fan_in(&self) -> usize {
        match self {
            Layer::Conv(l) => l.fan_in(),
            Layer::Dense(l) => l.nin,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerGrad {
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
}

/// Parameter gradients, laid out like the network's parameter blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<LayerGrad>,
}

impl Gradients {
    pub fn blocks(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.layers.iter().flat_map(|l| [&l.weight, &l.bias])
    }

    fn scale(&mut self, k: f64) {
        for l in &mut self.layers {
            l.weight.iter_mut().chain(l.bias.iter_mut()).for_each(|v| *v *= k);
        }
    }
}

/// Row-stochastic `A × 3` matrix of (win, loss, draw) probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeMatrix {
    pub actions: usize,
    pub probs: Vec<f64>,
}

impl OutcomeMatrix {
    pub fn uniform(actions: usize) -> Self {
        OutcomeMatrix { actions, probs: alloc::vec![1.0 / 3.0; actions * OUTCOMES] }
    }

    pub fn from_rows(rows: &[[f64; 3]]) -> Self {
        OutcomeMatrix { actions: rows.len(), probs: rows.iter().flatten().copied().collect() }
    }

    pub fn row(&self, a: usize) -> [f64; 3] {
        let r = &self.probs[a * OUTCOMES..(a + 1) * OUTCOMES];
        [r[0], r[1], r[2]]
    }

    pub fn distribution(&self, a: usize) -> OutcomeDistribution {
        let [p_win, p_loss, p_draw] = self.row(a);
        OutcomeDistribution { p_win, p_loss, p_draw }
    }

    /// Every row non-negative and summing to one within `tol`.
    pub fn check_rows(&self, tol: f64) -> Result<()> {
        if self.probs.len() != self.actions * OUTCOMES {
            return Err(Error::ShapeMismatch { expected: self.actions * OUTCOMES, actual: self.probs.len() });
        }
        for (a, r) in self.probs.chunks_exact(OUTCOMES).enumerate() {
            let sum: f64 = r.iter().sum();
            if r.iter().any(|p| p.is_nan() || *p < 0.0) || (sum - 1.0).abs() > tol {
                return Err(Error::InvalidArgument(alloc::format!("row {a} is not a distribution")));
            }
        }
        Ok(())
    }
}

/// Softmax of each consecutive triple of logits.
pub fn softmax_rows(logits: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(logits.len());
    for r in logits.chunks_exact(OUTCOMES) {
        let m = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let e = [exp(r[0] - m), exp(r[1] - m), exp(r[2] - m)];
        let s = e[0] + e[1] + e[2];
        out.extend(e.iter().map(|v| v / s));
    }
    out
}

/// Mean over actions of the cross-entropy `-Σ t log p`. It reaches its
/// minimum, the mean entropy of `target`, exactly when `predicted == target`.
pub fn cross_entropy(predicted: &OutcomeMatrix, target: &OutcomeMatrix) -> Result<f64> {
    if predicted.probs.len() != target.probs.len() {
        return Err(Error::ShapeMismatch { expected: target.probs.len(), actual: predicted.probs.len() });
    }
    target.check_rows(1e-6)?;
    let mut total = 0.0;
    for (p, t) in predicted.probs.iter().zip(&target.probs) {
        if *t > 0.0 {
            total -= t * log(*p);
        }
    }
    Ok(total / target.actions as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub spec: NetworkSpec,
    pub layers: Vec<Layer>,
}

impl Network {
    /// All parameters zero, so every output row is uniform.
    pub fn zeros(spec: NetworkSpec) -> Result<Self> {
        spec.validate()?;
        let mut layers = Vec::new();
        let mut width = spec.input_len();
        if spec.kind == NetworkKind::Conv {
            let (mut cin, rows, cols) = (spec.input_shape[0], spec.input_shape[1], spec.input_shape[2]);
            for &c in &spec.conv_channels {
                layers.push(Layer::Conv(Conv2d::new(cin, c, rows, cols)));
                cin = c;
            }
            width = cin * rows * cols;
        }
        for &h in spec.hidden.iter().chain(core::iter::once(&spec.output_len())) {
            layers.push(Layer::Dense(Dense::new(width, h)));
            width = h;
        }
        Ok(Network { spec, layers })
    }

    /// He-uniform weights for hidden layers; the output layer starts small
    /// so the first predictions are close to uniform. Biases start at zero.
    pub fn new(spec: NetworkSpec, seed: u64) -> Result<Self> {
        let mut net = Self::zeros(spec)?;
        let mut rng = rng_from(seed);
        let last = net.layers.len() - 1;
        for (i, layer) in net.layers.iter_mut().enumerate() {
            let fan_in = layer.fan_in() as f64;
            let bound = if i == last { 0.1 * sqrt(1.0 / fan_in) } else { sqrt(6.0 / fan_in) };
            for w in layer.params_mut()[0].iter_mut() {
                *w = rng.gen_range(-bound..bound);
            }
        }
        Ok(net)
    }

    /// Parameter blocks in declaration order: weight then bias per layer.
    pub fn param_blocks(&self) -> Vec<&Vec<f64>> {
        self.layers.iter().flat_map(|l| l.params()).collect()
    }

    pub fn param_blocks_mut(&mut self) -> Vec<&mut Vec<f64>> {
        self.layers.iter_mut().flat_map(|l| l.params_mut()).collect()
    }

    pub fn num_params(&self) -> usize {
        self.param_blocks().iter().map(|b| b.len()).sum()
    }

    fn check_input(&self, input: &[f64]) -> Result<()> {
        if input.len() != self.spec.input_len() {
            return Err(Error::ShapeMismatch { expected: self.spec.input_len(), actual: input.len() });
        }
        Ok(())
    }

    /// Activations after every layer; ReLU everywhere but the output.
    fn trace(&self, input: &[f64]) -> Vec<Vec<f64>> {
        let mut acts = Vec::with_capacity(self.layers.len() + 1);
        acts.push(input.to_vec());
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            let mut y = Vec::new();
            layer.forward(&acts[i], &mut y);
            if i != last {
                y.iter_mut().for_each(|v| *v = v.max(0.0));
            }
            acts.push(y);
        }
        acts
    }

    pub fn logits(&self, input: &[f64]) -> Result<Vec<f64>> {
        self.check_input(input)?;
        Ok(self.trace(input).pop().expect("at least one layer"))
    }

    pub fn forward(&self, input: &[f64]) -> Result<OutcomeMatrix> {
        let logits = self.logits(input)?;
        Ok(OutcomeMatrix { actions: self.spec.output_actions, probs: softmax_rows(&logits) })
    }

    pub fn loss(&self, input: &[f64], target: &OutcomeMatrix) -> Result<f64> {
        cross_entropy(&self.forward(input)?, target)
    }

    fn zero_grads(&self) -> Gradients {
        Gradients {
            layers: self
                .layers
                .iter()
                .map(|l| {
                    let [w, b] = l.params();
                    LayerGrad { weight: alloc::vec![0.0; w.len()], bias: alloc::vec![0.0; b.len()] }
                })
                .collect(),
        }
    }

    fn accumulate(&self, input: &[f64], target: &OutcomeMatrix, grads: &mut Gradients) -> Result<f64> {
        self.check_input(input)?;
        if target.actions != self.spec.output_actions {
            return Err(Error::ShapeMismatch { expected: self.spec.output_actions, actual: target.actions });
        }
        let acts = self.trace(input);
        let probs = softmax_rows(acts.last().expect("output"));
        let loss = cross_entropy(&OutcomeMatrix { actions: target.actions, probs: probs.clone() }, target)?;
        let inv_a = 1.0 / target.actions as f64;
        let mut g: Vec<f64> = probs.iter().zip(&target.probs).map(|(p, t)| (p - t) * inv_a).collect();
        let mut dx = Vec::new();
        for i in (0..self.layers.len()).rev() {
            if i + 1 != self.layers.len() {
                for (gv, a) in g.iter_mut().zip(&acts[i + 1]) {
                    if *a <= 0.0 {
                        *gv = 0.0;
                    }
                }
            }
            let want_dx = if i > 0 { Some(&mut dx) } else { None };
            self.layers[i].backward(&acts[i], &g, &mut grads.layers[i], want_dx);
            core::mem::swap(&mut g, &mut dx);
        }
        Ok(loss)
    }

    /// Mean loss over a batch and its gradient.
    pub fn loss_and_gradients(&self, batch: &[(&[f64], &OutcomeMatrix)]) -> Result<(f64, Gradients)> {
        if batch.is_empty() {
            return Err(Error::InvalidArgument("empty batch".into()));
        }
        let mut grads = self.zero_grads();
        let mut loss = 0.0;
        for (x, t) in batch {
            loss += self.accumulate(x, t, &mut grads)?;
        }
        let k = 1.0 / batch.len() as f64;
        grads.scale(k);
        Ok((loss * k, grads))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_conv() -> Network {
        let spec = NetworkSpec {
            kind: NetworkKind::Conv,
            input_shape: alloc::vec![2, 3, 3],
            conv_channels: alloc::vec![3],
            hidden: alloc::vec![5],
            output_actions: 2,
        };
        Network::new(spec, 4).unwrap()
    }

    #[test]
    fn zero_net_is_uniform() {
        let net = Network::zeros(NetworkSpec::dense(7, 4)).unwrap();
        let out = net.forward(&[1.0; 7]).unwrap();
        assert!(out.probs.iter().all(|p| (p - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn rows_normalised_and_deterministic() {
        let net = toy_conv();
        let x: Vec<f64> = (0..18).map(|i| (i as f64 * 0.37).sin()).collect();
        let a = net.forward(&x).unwrap();
        a.check_rows(1e-12).unwrap();
        assert_eq!(a, toy_conv().forward(&x).unwrap());
    }

    #[test]
    fn shape_errors() {
        let net = toy_conv();
        assert_eq!(net.forward(&[0.0; 5]).unwrap_err(), Error::ShapeMismatch { expected: 18, actual: 5 });
        let bad = NetworkSpec { kind: NetworkKind::Conv, ..NetworkSpec::dense(4, 2) };
        assert!(Network::zeros(bad).is_err());
    }

    #[test]
    fn cross_entropy_values() {
        let one_hot = OutcomeMatrix::from_rows(&[[1.0, 0.0, 0.0]]);
        let ce = cross_entropy(&OutcomeMatrix::uniform(1), &one_hot).unwrap();
        assert!((ce - log(3.0)).abs() < 1e-12);
        let t = OutcomeMatrix::from_rows(&[[0.5, 0.25, 0.25]]);
        let h = -(0.5 * log(0.5) + 0.5 * log(0.25));
        assert!((cross_entropy(&t, &t).unwrap() - h).abs() < 1e-12);
        let bad = OutcomeMatrix::from_rows(&[[0.5, 0.5, 0.5]]);
        assert!(cross_entropy(&t, &bad).is_err());
    }

    #[test]
    fn parameter_layout() {
        let net = toy_conv();
        let sizes: Vec<usize> = net.param_blocks().iter().map(|b| b.len()).collect();
        assert_eq!(sizes, [3 * 2 * 9, 3, 5 * 27, 5, 6 * 5, 6]);
    }
}
