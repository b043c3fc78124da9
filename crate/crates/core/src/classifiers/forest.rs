//! Random forest: bootstrap-sampled, fully grown CART trees with a random
//! feature subset at each split; probability is the mean leaf class-1 share.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::invalid;
use super::tree::{grow, GrowParams, Tree};
use crate::error::Result;
use crate::features::EncodedDataset;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForestParams {
    pub n_trees: usize,
    /// `None` grows until leaves are pure.
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// Features tried per split; `None` means ⌈√d⌉.
    pub max_features: Option<usize>,
    pub bootstrap: bool,
}

impl Default for RandomForestParams {
    fn default() -> Self {
        RandomForestParams { n_trees: 100, max_depth: None, min_samples_leaf: 1, max_features: None, bootstrap: true }
    }
}

impl RandomForestParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 {
            return Err(invalid("random_forest.n_trees must be >= 1"));
        }
        if self.min_samples_leaf == 0 {
            return Err(invalid("random_forest.min_samples_leaf must be >= 1"));
        }
        if self.max_features == Some(0) {
            return Err(invalid("random_forest.max_features must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ForestModel<T> {
    pub trees: Vec<Tree<T>>,
}

impl<T: Scalar> ForestModel<T> {
    pub fn predict_proba(&self, row: &[T]) -> T {
        self.trees.iter().map(|t| t.predict(row)).sum::<T>() / T::from_count(self.trees.len())
    }
}

pub fn fit<T: Scalar>(params: &RandomForestParams, data: &EncodedDataset<T>, seed: u64) -> Result<ForestModel<T>> {
    let d = data.width();
    let max_features = params.max_features.unwrap_or_else(|| (d as f64).sqrt().ceil() as usize).max(1);
    let grow_params = GrowParams {
        max_depth: params.max_depth,
        min_samples_leaf: params.min_samples_leaf,
        max_features: Some(max_features),
    };
    let target: Vec<T> = data.labels().iter().map(|&l| T::from_count(l as usize)).collect();
    let n = data.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trees = Vec::with_capacity(params.n_trees);
    for _ in 0..params.n_trees {
        let indices: Vec<usize> =
            if params.bootstrap { (0..n).map(|_| rng.random_range(0..n)).collect() } else { (0..n).collect() };
        let leaf = |idx: &[usize]| idx.iter().map(|&i| target[i]).sum::<T>() / T::from_count(idx.len());
        trees.push(grow(data.rows(), &target, indices, grow_params, Some(&mut rng), leaf));
    }
    Ok(ForestModel { trees })
}
