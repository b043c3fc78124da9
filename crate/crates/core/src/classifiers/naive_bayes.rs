//! Mixed naive Bayes: Bernoulli likelihoods for dummy columns, Gaussian for
//! numeric columns, Laplace-smoothed, with class priors from training frequencies.

use serde::{Deserialize, Serialize};

use super::invalid;
use crate::error::Result;
use crate::features::EncodedDataset;
use crate::scalar::{sigmoid, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesParams {
    /// Laplace smoothing for the Bernoulli columns.
    pub alpha: f64,
    /// Added to every Gaussian variance, as a fraction of the largest one.
    pub var_smoothing: f64,
}

impl Default for NaiveBayesParams {
    fn default() -> Self {
        NaiveBayesParams { alpha: 1.0, var_smoothing: 1e-9 }
    }
}

impl NaiveBayesParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(invalid("naive_bayes.alpha must be > 0"));
        }
        if !(self.var_smoothing >= 0.0 && self.var_smoothing.is_finite()) {
            return Err(invalid("naive_bayes.var_smoothing must be >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub enum ColumnLikelihood<T> {
    /// ln P(x=1 | class) and ln P(x=0 | class), per class.
    Bernoulli {
        log_on: [T; 2],
        log_off: [T; 2],
    },
    Gaussian {
        mean: [T; 2],
        var: [T; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct NaiveBayesModel<T> {
    pub log_prior: [T; 2],
    pub columns: Vec<ColumnLikelihood<T>>,
}

impl<T: Scalar> NaiveBayesModel<T> {
    pub fn predict_proba(&self, row: &[T]) -> T {
        let mut joint = self.log_prior;
        let half_ln_2pi = T::lit(0.5 * (2.0 * std::f64::consts::PI).ln());
        for (col, &x) in self.columns.iter().zip(row) {
            for (c, j) in joint.iter_mut().enumerate() {
                *j += match col {
                    ColumnLikelihood::Bernoulli { log_on, log_off } => {
                        if x > T::half() {
                            log_on[c]
                        } else {
                            log_off[c]
                        }
                    }
                    ColumnLikelihood::Gaussian { mean, var } => {
                        let d = x - mean[c];
                        -half_ln_2pi - T::half() * var[c].ln() - d * d / (T::two() * var[c])
                    }
                };
            }
        }
        sigmoid(joint[1] - joint[0])
    }
}

pub fn fit<T: Scalar>(params: &NaiveBayesParams, data: &EncodedDataset<T>) -> Result<NaiveBayesModel<T>> {
    let counts = data.class_counts();
    let n = T::from_count(data.len());
    let log_prior = [0, 1].map(|c| (T::from_count(counts[c]) / n).ln());
    let alpha = T::lit(params.alpha);
    let dummy = data.schema().dummy_mask();

    let mut columns = Vec::with_capacity(dummy.len());
    let mut gaussian_at = Vec::new();
    for (j, &is_dummy) in dummy.iter().enumerate() {
        if is_dummy {
            let mut on = [0usize; 2];
            for (r, &l) in data.rows().iter().zip(data.labels()) {
                if r[j] > T::half() {
                    on[l as usize] += 1;
                }
            }
            let p = [0, 1].map(|c| (T::from_count(on[c]) + alpha) / (T::from_count(counts[c]) + T::two() * alpha));
            columns.push(ColumnLikelihood::Bernoulli {
                log_on: p.map(|v| v.ln()),
                log_off: p.map(|v| (T::one() - v).ln()),
            });
        } else {
            let mut sum = [T::zero(); 2];
            for (r, &l) in data.rows().iter().zip(data.labels()) {
                sum[l as usize] += r[j];
            }
            let mean = [0, 1].map(|c| sum[c] / T::from_count(counts[c]));
            let mut ss = [T::zero(); 2];
            for (r, &l) in data.rows().iter().zip(data.labels()) {
                let d = r[j] - mean[l as usize];
                ss[l as usize] += d * d;
            }
            let var = [0, 1].map(|c| ss[c] / T::from_count(counts[c]));
            gaussian_at.push(columns.len());
            columns.push(ColumnLikelihood::Gaussian { mean, var });
        }
    }

    let max_var = columns
        .iter()
        .filter_map(|c| match c {
            ColumnLikelihood::Gaussian { var, .. } => Some(var[0].max(var[1])),
            _ => None,
        })
        .fold(T::zero(), T::max);
    let mut eps = T::lit(params.var_smoothing) * max_var;
    if !(eps > T::zero()) {
        eps = T::lit(1e-9);
    }
    for i in gaussian_at {
        if let ColumnLikelihood::Gaussian { var, .. } = &mut columns[i] {
            for v in var.iter_mut() {
                *v += eps;
            }
        }
    }
    Ok(NaiveBayesModel { log_prior, columns })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{CategoricalGroup, FeatureSchema};

    #[test]
    fn repeated_pattern_dominates_posterior() {
        let schema =
            FeatureSchema::new(vec![CategoricalGroup::new("g", ["a", "b", "c", "d"].map(String::from))], vec![])
                .unwrap();
        // 100 copies of (b) labelled 1; a handful of other patterns labelled 0.
        let mut rows = vec![vec![1.0, 0.0, 0.0]; 100];
        let mut labels = vec![1u8; 100];
        for r in [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]] {
            rows.push(r.to_vec());
            labels.push(0);
        }
        let ids = (0..rows.len()).map(|i| i.to_string()).collect();
        let data = EncodedDataset::new(rows, labels, schema, ids).unwrap();
        let m = fit(&NaiveBayesParams::default(), &data).unwrap();
        assert!(m.predict_proba(&[1.0f64, 0.0, 0.0]) > 0.9);
    }
}
