//! Linear SVM: hinge loss + L2, stochastic subgradient descent, with a
//! Platt sigmoid fitted on the training decision values for probabilities.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{invalid, Standardizer};
use crate::error::{Error, Result};
use crate::features::EncodedDataset;
use crate::scalar::{sigmoid, softplus, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvmParams {
    pub lambda: f64,
    pub epochs: usize,
}

impl Default for LinearSvmParams {
    fn default() -> Self {
        LinearSvmParams { lambda: 1e-4, epochs: 200 }
    }
}

impl LinearSvmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(invalid("linear_svm.lambda must be > 0"));
        }
        if self.epochs == 0 {
            return Err(invalid("linear_svm.epochs must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SvmModel<T> {
    pub standardizer: Standardizer<T>,
    pub weights: Vec<T>,
    pub bias: T,
    /// p = sigmoid(platt_a · score + platt_b)
    pub platt_a: T,
    pub platt_b: T,
}

impl<T: Scalar> SvmModel<T> {
    pub fn decision(&self, row: &[T]) -> T {
        let z = self.standardizer.apply(row);
        z.iter().zip(&self.weights).map(|(&a, &w)| a * w).sum::<T>() + self.bias
    }

    pub fn predict_proba(&self, row: &[T]) -> T {
        sigmoid(self.platt_a * self.decision(row) + self.platt_b)
    }
}

pub fn fit<T: Scalar>(params: &LinearSvmParams, data: &EncodedDataset<T>, seed: u64) -> Result<SvmModel<T>> {
    let standardizer = Standardizer::fit(data.rows());
    let x = standardizer.apply_all(data.rows());
    let y: Vec<T> = data.labels().iter().map(|&l| if l == 1 { T::one() } else { -T::one() }).collect();
    let lambda = T::lit(params.lambda);
    let mut w = vec![T::zero(); data.width()];
    let mut b = T::zero();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..x.len()).collect();
    let mut t = 0usize;
    for _ in 0..params.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            // η_t = 1 / (λ t + 1)
            let eta = T::one() / (lambda * T::from_count(t) + T::one());
            let margin = y[i] * (x[i].iter().zip(&w).map(|(&a, &c)| a * c).sum::<T>() + b);
            let shrink = T::one() - eta * lambda;
            for wj in w.iter_mut() {
                *wj *= shrink;
            }
            if margin < T::one() {
                for (wj, &a) in w.iter_mut().zip(&x[i]) {
                    *wj += eta * y[i] * a;
                }
                b += eta * y[i];
            }
        }
    }
    if w.iter().any(|v| !v.is_finite()) || !b.is_finite() {
        return Err(Error::NonConvergence { trajectory: vec![] });
    }
    let scores: Vec<T> = x.iter().map(|r| r.iter().zip(&w).map(|(&a, &c)| a * c).sum::<T>() + b).collect();
    let (platt_a, platt_b) = fit_platt(&scores, data.labels());
    Ok(SvmModel { standardizer, weights: w, bias: b, platt_a, platt_b })
}

/// Platt scaling with smoothed targets, by damped Newton on the two parameters.
pub(crate) fn fit_platt<T: Scalar>(scores: &[T], labels: &[u8]) -> (T, T) {
    let n_pos = labels.iter().filter(|&&l| l == 1).count();
    let n_neg = labels.len() - n_pos;
    let hi = T::from_count(n_pos + 1) / T::from_count(n_pos + 2);
    let lo = T::one() / T::from_count(n_neg + 2);
    let targets: Vec<T> = labels.iter().map(|&l| if l == 1 { hi } else { lo }).collect();
    let objective = |a: T, b: T| -> T {
        scores
            .iter()
            .zip(&targets)
            .map(|(&s, &t)| {
                let z = a * s + b;
                softplus(z) - t * z
            })
            .sum()
    };
    let (mut a, mut b) = (T::one(), ((T::from_count(n_pos) + T::one()) / (T::from_count(n_neg) + T::one())).ln());
    let mut f = objective(a, b);
    let ridge = T::lit(1e-12);
    for _ in 0..100 {
        let (mut g1, mut g2, mut h11, mut h12, mut h22) = (T::zero(), T::zero(), ridge, T::zero(), ridge);
        for (&s, &t) in scores.iter().zip(&targets) {
            let p = sigmoid(a * s + b);
            let d = p - t;
            let w = p * (T::one() - p);
            g1 += d * s;
            g2 += d;
            h11 += w * s * s;
            h12 += w * s;
            h22 += w;
        }
        if g1.abs() < T::lit(1e-10) && g2.abs() < T::lit(1e-10) {
            break;
        }
        let det = h11 * h22 - h12 * h12;
        if !(det > T::zero()) {
            break;
        }
        let da = (h22 * g1 - h12 * g2) / det;
        let db = (h11 * g2 - h12 * g1) / det;
        let mut step = T::one();
        let mut moved = false;
        while step > T::lit(1e-10) {
            let (na, nb) = (a - step * da, b - step * db);
            let nf = objective(na, nb);
            if nf < f {
                a = na;
                b = nb;
                f = nf;
                moved = true;
                break;
            }
            step *= T::half();
        }
        if !moved {
            break;
        }
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn platt_orders_scores_monotonically() {
        let scores = [-2.0f64, -1.0, -0.5, 0.5, 1.0, 2.0];
        let labels = [0u8, 0, 1, 0, 1, 1];
        let (a, _) = fit_platt(&scores, &labels);
        assert!(a > 0.0);
    }
}
