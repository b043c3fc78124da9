//! CART regression trees on squared error, shared by the forest (where the
//! target is the 0/1 label, making variance reduction equivalent to Gini)
//! and by boosting (where the target is the logistic-loss residual).

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar", tag = "node", rename_all = "snake_case")]
pub enum Node<T> {
    Leaf { value: T },
    Split { feature: usize, threshold: T, left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Tree<T> {
    pub nodes: Vec<Node<T>>,
}

impl<T: Scalar> Tree<T> {
    pub fn predict(&self, row: &[T]) -> T {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { value } => return *value,
                Node::Split { feature, threshold, left, right } => {
                    at = if row[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk<T>(nodes: &[Node<T>], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GrowParams {
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// Features examined per split; at least this many are tried, more only
    /// until a valid split turns up.
    pub max_features: Option<usize>,
}

struct Grower<'a, T, F> {
    x: &'a [Vec<T>],
    target: &'a [T],
    params: GrowParams,
    rng: Option<&'a mut ChaCha8Rng>,
    leaf_value: F,
    nodes: Vec<Node<T>>,
    width: usize,
}

/// Grows a tree on `indices` (repeats allowed, as in bootstrap samples).
pub fn grow<T: Scalar, F: Fn(&[usize]) -> T>(
    x: &[Vec<T>],
    target: &[T],
    indices: Vec<usize>,
    params: GrowParams,
    rng: Option<&mut ChaCha8Rng>,
    leaf_value: F,
) -> Tree<T> {
    let width = x.first().map_or(0, Vec::len);
    let mut g = Grower { x, target, params, rng, leaf_value, nodes: Vec::new(), width };
    g.build(indices, 0);
    Tree { nodes: g.nodes }
}

struct BestSplit<T> {
    feature: usize,
    threshold: T,
    gain: T,
}

impl<T: Scalar, F: Fn(&[usize]) -> T> Grower<'_, T, F> {
    fn build(&mut self, indices: Vec<usize>, depth: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { value: T::zero() });
        let can_split =
            self.params.max_depth.is_none_or(|d| depth < d) && indices.len() >= 2 * self.params.min_samples_leaf.max(1);
        let split = if can_split { self.best_split(&indices) } else { None };
        match split {
            None => {
                self.nodes[id] = Node::Leaf { value: (self.leaf_value)(&indices) };
            }
            Some(s) => {
                let (l, r): (Vec<usize>, Vec<usize>) =
                    indices.iter().partition(|&&i| self.x[i][s.feature] <= s.threshold);
                let left = self.build(l, depth + 1);
                let right = self.build(r, depth + 1);
                self.nodes[id] = Node::Split { feature: s.feature, threshold: s.threshold, left, right };
            }
        }
        id
    }

    fn best_split(&mut self, indices: &[usize]) -> Option<BestSplit<T>> {
        let n = T::from_count(indices.len());
        let sum: T = indices.iter().map(|&i| self.target[i]).sum();
        let sse: T = indices.iter().map(|&i| self.target[i] * self.target[i]).sum::<T>() - sum * sum / n;
        let tolerance = T::epsilon() * T::lit(64.0) * (sse.abs() + T::one());
        if sse <= tolerance {
            return None;
        }
        let mut order: Vec<usize> = (0..self.width).collect();
        let budget = match (self.params.max_features, self.rng.as_deref_mut()) {
            (Some(k), Some(rng)) => {
                order.shuffle(rng);
                k.max(1)
            }
            _ => self.width,
        };
        let min_leaf = self.params.min_samples_leaf.max(1);
        let mut best: Option<BestSplit<T>> = None;
        let mut sorted = indices.to_vec();
        for (tried, &f) in order.iter().enumerate() {
            if tried >= budget && best.is_some() {
                break;
            }
            sorted.sort_by(|&a, &b| self.x[a][f].partial_cmp(&self.x[b][f]).unwrap_or(std::cmp::Ordering::Equal));
            let mut left_sum = T::zero();
            for pos in 0..sorted.len() - 1 {
                left_sum += self.target[sorted[pos]];
                let n_left = pos + 1;
                let n_right = sorted.len() - n_left;
                let (a, b) = (self.x[sorted[pos]][f], self.x[sorted[pos + 1]][f]);
                if n_left < min_leaf || n_right < min_leaf || !(a < b) {
                    continue;
                }
                let right_sum = sum - left_sum;
                let gain = left_sum * left_sum / T::from_count(n_left) + right_sum * right_sum / T::from_count(n_right)
                    - sum * sum / n;
                if gain > tolerance && best.as_ref().is_none_or(|s| gain > s.gain) {
                    let mid = (a + b) / T::two();
                    let threshold = if mid < b { mid } else { a };
                    best = Some(BestSplit { feature: f, threshold, gain });
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_a_step_function() {
        let x: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let y: Vec<f64> = (0..10).map(|i| if i < 4 { 0.0 } else { 1.0 }).collect();
        let params = GrowParams { max_depth: None, min_samples_leaf: 1, max_features: None };
        let t = grow(&x, &y, (0..10).collect(), params, None, |idx| {
            idx.iter().map(|&i| y[i]).sum::<f64>() / idx.len() as f64
        });
        assert_eq!(t.depth(), 1);
        assert_eq!(t.predict(&[3.0]), 0.0);
        assert_eq!(t.predict(&[3.6]), 1.0);
    }

    #[test]
    fn depth_zero_is_a_single_leaf() {
        let x: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64]).collect();
        let y = vec![0.0, 1.0, 1.0, 0.0, 1.0];
        let params = GrowParams { max_depth: Some(0), min_samples_leaf: 1, max_features: None };
        let t = grow(&x, &y, (0..5).collect(), params, None, |idx| {
            idx.iter().map(|&i| y[i]).sum::<f64>() / idx.len() as f64
        });
        assert_eq!(t.nodes.len(), 1);
        assert!((t.predict(&[100.0]) - 0.6).abs() < 1e-15);
    }
}
