//! Multilayer perceptron: three ReLU hidden layers of ten units, a sigmoid
//! output unit, binary cross-entropy with an L2 penalty on the weights,
//! trained with Adam on shuffled mini-batches.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{invalid, Standardizer};
use crate::error::{Error, Result};
use crate::features::EncodedDataset;
use crate::scalar::{sigmoid, softplus, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    Sigmoid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpSpec {
    pub hidden_units: Vec<usize>,
    pub hidden_activation: Activation,
    pub output_units: usize,
    pub output_activation: Activation,
    pub learning_rate: f64,
    pub lambda: f64,
    pub epochs: usize,
    pub batch_size: usize,
    /// Epochs without a training-loss improvement before stopping.
    pub patience: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for MlpSpec {
    fn default() -> Self {
        MlpSpec {
            hidden_units: vec![10, 10, 10],
            hidden_activation: Activation::Relu,
            output_units: 1,
            output_activation: Activation::Sigmoid,
            learning_rate: 0.001,
            lambda: 1e-4,
            epochs: 300,
            batch_size: 32,
            patience: 20,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

impl MlpSpec {
    pub fn validate(&self) -> Result<()> {
        if self.hidden_units != [10, 10, 10] {
            return Err(invalid("mlp.hidden_units must be [10, 10, 10]"));
        }
        if self.hidden_activation != Activation::Relu
            || self.output_units != 1
            || self.output_activation != Activation::Sigmoid
        {
            return Err(invalid("mlp uses ReLU hidden layers and a single sigmoid output"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(invalid("mlp.learning_rate must be > 0"));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(invalid("mlp.lambda must be >= 0"));
        }
        if self.epochs == 0 || self.batch_size == 0 || self.patience == 0 {
            return Err(invalid("mlp.epochs, batch_size and patience must be >= 1"));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) || !(self.epsilon > 0.0) {
            return Err(invalid("mlp Adam constants out of range"));
        }
        Ok(())
    }
}

/// One dense layer; `weights` is `outputs × inputs`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Layer<T> {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<T>,
    pub biases: Vec<T>,
}

impl<T: Scalar> Layer<T> {
    fn zeros(inputs: usize, outputs: usize) -> Self {
        Layer { inputs, outputs, weights: vec![T::zero(); inputs * outputs], biases: vec![T::zero(); outputs] }
    }

    fn forward(&self, x: &[T]) -> Vec<T> {
        (0..self.outputs)
            .map(|o| {
                let w = &self.weights[o * self.inputs..(o + 1) * self.inputs];
                w.iter().zip(x).map(|(&a, &b)| a * b).sum::<T>() + self.biases[o]
            })
            .collect()
    }
}

/// Network parameters; also the shape of a gradient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct MlpParams<T> {
    pub layers: Vec<Layer<T>>,
}

impl<T: Scalar> MlpParams<T> {
    pub fn zeros(input: usize, hidden: &[usize]) -> Self {
        let mut sizes = vec![input];
        sizes.extend_from_slice(hidden);
        sizes.push(1);
        MlpParams { layers: sizes.windows(2).map(|w| Layer::zeros(w[0], w[1])).collect() }
    }

    /// He-scaled normal weights, zero biases.
    pub fn he_init(input: usize, hidden: &[usize], rng: &mut ChaCha8Rng) -> Self {
        let mut p = Self::zeros(input, hidden);
        for layer in &mut p.layers {
            let sd = (2.0 / layer.inputs.max(1) as f64).sqrt();
            let normal = Normal::new(0.0, sd).expect("finite sd");
            for w in &mut layer.weights {
                *w = T::lit(normal.sample(rng));
            }
        }
        p
    }

    pub fn len(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.biases.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flattened as, per layer, weights then biases.
    pub fn to_flat(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.len());
        for l in &self.layers {
            out.extend_from_slice(&l.weights);
            out.extend_from_slice(&l.biases);
        }
        out
    }

    pub fn set_flat(&mut self, flat: &[T]) {
        assert_eq!(flat.len(), self.len());
        let mut at = 0;
        for l in &mut self.layers {
            let nw = l.weights.len();
            l.weights.copy_from_slice(&flat[at..at + nw]);
            at += nw;
            let nb = l.biases.len();
            l.biases.copy_from_slice(&flat[at..at + nb]);
            at += nb;
        }
    }

    /// Output logit and every layer's pre-activation.
    fn forward_trace(&self, x: &[T]) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
        let mut acts = vec![x.to_vec()];
        let mut pre = Vec::with_capacity(self.layers.len());
        for (i, layer) in self.layers.iter().enumerate() {
            let z = layer.forward(acts.last().expect("non-empty"));
            let last = i + 1 == self.layers.len();
            let a = if last { z.clone() } else { z.iter().map(|&v| v.max(T::zero())).collect() };
            pre.push(z);
            acts.push(a);
        }
        (acts, pre)
    }

    pub fn logit(&self, x: &[T]) -> T {
        let mut a = x.to_vec();
        for (i, layer) in self.layers.iter().enumerate() {
            let z = layer.forward(&a);
            a = if i + 1 == self.layers.len() { z } else { z.into_iter().map(|v| v.max(T::zero())).collect() };
        }
        a[0]
    }
}

/// Mean binary cross-entropy plus (λ/2)·Σ w² over weights (biases excluded),
/// with its exact gradient.
pub fn mlp_loss_and_gradient<T: Scalar>(
    params: &MlpParams<T>,
    batch_x: &[Vec<T>],
    batch_y: &[u8],
    lambda: T,
) -> (T, MlpParams<T>) {
    assert!(!batch_x.is_empty() && batch_x.len() == batch_y.len());
    let n = T::from_count(batch_x.len());
    let mut grad = MlpParams { layers: params.layers.iter().map(|l| Layer::zeros(l.inputs, l.outputs)).collect() };
    let mut loss = T::zero();
    for (x, &y) in batch_x.iter().zip(batch_y) {
        let (acts, pre) = params.forward_trace(x);
        let logit = pre.last().expect("output layer")[0];
        let t = T::from_count(y as usize);
        loss += softplus(logit) - t * logit;
        let mut delta = vec![(sigmoid(logit) - t) / n];
        for li in (0..params.layers.len()).rev() {
            let layer = &params.layers[li];
            let input = &acts[li];
            let g = &mut grad.layers[li];
            for o in 0..layer.outputs {
                g.biases[o] += delta[o];
                let row = &mut g.weights[o * layer.inputs..(o + 1) * layer.inputs];
                for (gw, &a) in row.iter_mut().zip(input) {
                    *gw += delta[o] * a;
                }
            }
            if li > 0 {
                let below = &pre[li - 1];
                delta = (0..layer.inputs)
                    .map(|i| {
                        if below[i] > T::zero() {
                            (0..layer.outputs).map(|o| layer.weights[o * layer.inputs + i] * delta[o]).sum()
                        } else {
                            T::zero()
                        }
                    })
                    .collect();
            }
        }
    }
    loss /= n;
    let mut penalty = T::zero();
    for (l, g) in params.layers.iter().zip(&mut grad.layers) {
        for (&w, gw) in l.weights.iter().zip(&mut g.weights) {
            penalty += w * w;
            *gw += lambda * w;
        }
    }
    (loss + T::half() * lambda * penalty, grad)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct MlpModel<T> {
    pub standardizer: Standardizer<T>,
    pub network: MlpParams<T>,
}

impl<T: Scalar> MlpModel<T> {
    /// All weights and biases zero; predicts 0.5 everywhere.
    pub fn zeros(input: usize) -> Self {
        MlpModel {
            standardizer: Standardizer::identity(input),
            network: MlpParams::zeros(input, &MlpSpec::default().hidden_units),
        }
    }

    pub fn predict_proba(&self, row: &[T]) -> T {
        sigmoid(self.network.logit(&self.standardizer.apply(row)))
    }
}

struct Adam<T> {
    m: Vec<T>,
    v: Vec<T>,
    t: i32,
    lr: T,
    beta1: T,
    beta2: T,
    eps: T,
}

impl<T: Scalar> Adam<T> {
    fn step(&mut self, theta: &mut [T], grad: &[T]) {
        self.t += 1;
        let bc1 = T::one() - self.beta1.powi(self.t);
        let bc2 = T::one() - self.beta2.powi(self.t);
        for i in 0..theta.len() {
            self.m[i] = self.beta1 * self.m[i] + (T::one() - self.beta1) * grad[i];
            self.v[i] = self.beta2 * self.v[i] + (T::one() - self.beta2) * grad[i] * grad[i];
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            theta[i] -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
        }
    }
}

pub fn fit<T: Scalar>(spec: &MlpSpec, data: &EncodedDataset<T>, seed: u64) -> Result<MlpModel<T>> {
    let standardizer = Standardizer::fit(data.rows());
    let x = standardizer.apply_all(data.rows());
    let y = data.labels();
    let lambda = T::lit(spec.lambda);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut network = MlpParams::he_init(data.width(), &spec.hidden_units, &mut rng);
    let mut theta = network.to_flat();
    let mut adam = Adam {
        m: vec![T::zero(); theta.len()],
        v: vec![T::zero(); theta.len()],
        t: 0,
        lr: T::lit(spec.learning_rate),
        beta1: T::lit(spec.beta1),
        beta2: T::lit(spec.beta2),
        eps: T::lit(spec.epsilon),
    };

    let mut order: Vec<usize> = (0..x.len()).collect();
    let mut best = T::infinity();
    let mut stale = 0usize;
    let mut trajectory = Vec::new();
    for _ in 0..spec.epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(spec.batch_size) {
            let bx: Vec<Vec<T>> = chunk.iter().map(|&i| x[i].clone()).collect();
            let by: Vec<u8> = chunk.iter().map(|&i| y[i]).collect();
            let (_, grad) = mlp_loss_and_gradient(&network, &bx, &by, lambda);
            adam.step(&mut theta, &grad.to_flat());
            network.set_flat(&theta);
        }
        let (loss, _) = mlp_loss_and_gradient(&network, &x, y, lambda);
        trajectory.push(loss.as_f64());
        if !loss.is_finite() {
            let tail = trajectory.split_off(trajectory.len().saturating_sub(10));
            return Err(Error::NonConvergence { trajectory: tail });
        }
        if loss < best {
            best = loss;
            stale = 0;
        } else {
            stale += 1;
            if stale >= spec.patience {
                break;
            }
        }
    }
    Ok(MlpModel { standardizer, network })
}
