//! L2-regularised logistic regression trained by full-batch gradient descent.

use serde::{Deserialize, Serialize};

use super::{invalid, Standardizer};
use crate::error::{Error, Result};
use crate::features::EncodedDataset;
use crate::scalar::{sigmoid, softplus, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticRegressionParams {
    pub lambda: f64,
    pub learning_rate: f64,
    pub max_iterations: usize,
    /// Stop when the relative loss change falls below this.
    pub tolerance: f64,
}

impl Default for LogisticRegressionParams {
    fn default() -> Self {
        LogisticRegressionParams { lambda: 1e-4, learning_rate: 0.1, max_iterations: 2000, tolerance: 1e-8 }
    }
}

impl LogisticRegressionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(invalid("logistic_regression.lambda must be >= 0"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(invalid("logistic_regression.learning_rate must be > 0"));
        }
        if self.max_iterations == 0 {
            return Err(invalid("logistic_regression.max_iterations must be >= 1"));
        }
        if !(self.tolerance >= 0.0) {
            return Err(invalid("logistic_regression.tolerance must be >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LogisticModel<T> {
    pub standardizer: Standardizer<T>,
    pub weights: Vec<T>,
    pub bias: T,
}

impl<T: Scalar> LogisticModel<T> {
    pub fn predict_proba(&self, row: &[T]) -> T {
        sigmoid(self.logit(&self.standardizer.apply(row)))
    }

    fn logit(&self, z: &[T]) -> T {
        z.iter().zip(&self.weights).map(|(&a, &w)| a * w).sum::<T>() + self.bias
    }

    /// Euclidean norm of the weights (bias excluded), in standardized units.
    pub fn weight_norm(&self) -> T {
        self.weights.iter().map(|&w| w * w).sum::<T>().sqrt()
    }
}

/// Mean log-loss + (λ/2)‖w‖².
fn objective<T: Scalar>(x: &[Vec<T>], y: &[T], w: &[T], b: T, lambda: T) -> T {
    let n = T::from_count(x.len());
    let loss: T = x
        .iter()
        .zip(y)
        .map(|(r, &t)| {
            let z = r.iter().zip(w).map(|(&a, &c)| a * c).sum::<T>() + b;
            softplus(z) - t * z
        })
        .sum::<T>()
        / n;
    loss + T::half() * lambda * w.iter().map(|&v| v * v).sum::<T>()
}

pub fn fit<T: Scalar>(params: &LogisticRegressionParams, data: &EncodedDataset<T>) -> Result<LogisticModel<T>> {
    let standardizer = Standardizer::fit(data.rows());
    let x = standardizer.apply_all(data.rows());
    let y: Vec<T> = data.labels().iter().map(|&l| T::from_count(l as usize)).collect();
    let d = data.width();
    let n = T::from_count(x.len());
    let lambda = T::lit(params.lambda);
    let tol = T::lit(params.tolerance);

    let mut w = vec![T::zero(); d];
    let mut b = T::zero();
    let mut lr = T::lit(params.learning_rate);
    let mut loss = objective(&x, &y, &w, b, lambda);
    let mut trajectory = vec![loss.as_f64()];

    for _ in 0..params.max_iterations {
        let mut gw = vec![T::zero(); d];
        let mut gb = T::zero();
        for (r, &t) in x.iter().zip(&y) {
            let z = r.iter().zip(&w).map(|(&a, &c)| a * c).sum::<T>() + b;
            let e = sigmoid(z) - t;
            for (g, &a) in gw.iter_mut().zip(r) {
                *g += e * a;
            }
            gb += e;
        }
        for (g, &wj) in gw.iter_mut().zip(&w) {
            *g = *g / n + lambda * wj;
        }
        gb /= n;

        // halve the step until the loss does not increase
        let mut accepted = None;
        for _ in 0..60 {
            let cw: Vec<T> = w.iter().zip(&gw).map(|(&a, &g)| a - lr * g).collect();
            let cb = b - lr * gb;
            let cl = objective(&x, &y, &cw, cb, lambda);
            if cl.is_finite() && cl <= loss {
                accepted = Some((cw, cb, cl));
                break;
            }
            lr *= T::half();
        }
        let Some((cw, cb, cl)) = accepted else { break };
        let rel = (loss - cl).abs() / loss.abs().max(T::min_positive_value());
        w = cw;
        b = cb;
        loss = cl;
        trajectory.push(loss.as_f64());
        if rel < tol {
            break;
        }
    }
    if !loss.is_finite() {
        let tail = trajectory.split_off(trajectory.len().saturating_sub(10));
        return Err(Error::NonConvergence { trajectory: tail });
    }
    Ok(LogisticModel { standardizer, weights: w, bias: b })
}
