//! Gradient-boosted regression trees on the logistic loss.

use serde::{Deserialize, Serialize};

use super::invalid;
use super::tree::{grow, GrowParams, Tree};
use crate::error::{Error, Result};
use crate::features::EncodedDataset;
use crate::scalar::{sigmoid, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientBoostingParams {
    pub rounds: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    pub min_samples_leaf: usize,
}

impl Default for GradientBoostingParams {
    fn default() -> Self {
        GradientBoostingParams { rounds: 100, learning_rate: 0.1, max_depth: 3, min_samples_leaf: 1 }
    }
}

impl GradientBoostingParams {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(invalid("gradient_boosting.rounds must be >= 1"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return Err(invalid("gradient_boosting.learning_rate must be in (0, 1]"));
        }
        if self.min_samples_leaf == 0 {
            return Err(invalid("gradient_boosting.min_samples_leaf must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BoostingModel<T> {
    /// Initial log-odds.
    pub base_score: T,
    pub learning_rate: T,
    pub trees: Vec<Tree<T>>,
}

impl<T: Scalar> BoostingModel<T> {
    pub fn raw_score(&self, row: &[T]) -> T {
        self.base_score + self.learning_rate * self.trees.iter().map(|t| t.predict(row)).sum::<T>()
    }

    pub fn predict_proba(&self, row: &[T]) -> T {
        sigmoid(self.raw_score(row))
    }
}

pub fn fit<T: Scalar>(params: &GradientBoostingParams, data: &EncodedDataset<T>) -> Result<BoostingModel<T>> {
    let y: Vec<T> = data.labels().iter().map(|&l| T::from_count(l as usize)).collect();
    let n = data.len();
    let mean = y.iter().copied().sum::<T>() / T::from_count(n);
    let base_score = (mean / (T::one() - mean)).ln();
    let learning_rate = T::lit(params.learning_rate);
    let grow_params =
        GrowParams { max_depth: Some(params.max_depth), min_samples_leaf: params.min_samples_leaf, max_features: None };
    let mut raw = vec![base_score; n];
    let mut trees = Vec::with_capacity(params.rounds);
    for _ in 0..params.rounds {
        let p: Vec<T> = raw.iter().map(|&f| sigmoid(f)).collect();
        let residual: Vec<T> = y.iter().zip(&p).map(|(&t, &q)| t - q).collect();
        let hess: Vec<T> = p.iter().map(|&q| q * (T::one() - q)).collect();
        // Newton leaf value: Σ residual / Σ p(1 − p)
        let leaf = |idx: &[usize]| {
            let g: T = idx.iter().map(|&i| residual[i]).sum();
            let h: T = idx.iter().map(|&i| hess[i]).sum();
            if h > T::lit(1e-12) {
                g / h
            } else {
                T::zero()
            }
        };
        let tree = grow(data.rows(), &residual, (0..n).collect(), grow_params, None, leaf);
        for (f, row) in raw.iter_mut().zip(data.rows()) {
            *f += learning_rate * tree.predict(row);
        }
        trees.push(tree);
    }
    if raw.iter().any(|f| !f.is_finite()) {
        return Err(Error::NonConvergence { trajectory: vec![] });
    }
    Ok(BoostingModel { base_score, learning_rate, trees })
}
