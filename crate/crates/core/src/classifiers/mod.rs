//! Six binary classifiers behind one train / predict-probability interface.
//!
//! Every learner is deterministic given its [`ClassifierSpec`] (seed
//! included) and the training data. Predicted class is 1 iff the
//! probability is at least 0.5.

pub mod boosting;
pub mod document;
pub mod forest;
pub mod logistic;
pub mod mlp;
pub mod naive_bayes;
pub mod svm;
pub mod tree;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{EncodedDataset, FeatureSchema};
use crate::scalar::Scalar;

pub use boosting::{BoostingModel, GradientBoostingParams};
pub use forest::{ForestModel, RandomForestParams};
pub use logistic::{LogisticModel, LogisticRegressionParams};
pub use mlp::{mlp_loss_and_gradient, Activation, MlpModel, MlpParams, MlpSpec};
pub use naive_bayes::{NaiveBayesModel, NaiveBayesParams};
pub use svm::{LinearSvmParams, SvmModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    NaiveBayes,
    GradientBoosting,
    LinearSvm,
    LogisticRegression,
    RandomForest,
    Mlp,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 6] = [
        ClassifierKind::NaiveBayes,
        ClassifierKind::GradientBoosting,
        ClassifierKind::LinearSvm,
        ClassifierKind::LogisticRegression,
        ClassifierKind::RandomForest,
        ClassifierKind::Mlp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierKind::NaiveBayes => "naive_bayes",
            ClassifierKind::GradientBoosting => "gradient_boosting",
            ClassifierKind::LinearSvm => "linear_svm",
            ClassifierKind::LogisticRegression => "logistic_regression",
            ClassifierKind::RandomForest => "random_forest",
            ClassifierKind::Mlp => "mlp",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ClassifierKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        ClassifierKind::ALL.into_iter().find(|k| k.as_str() == norm).ok_or_else(|| format!("unknown classifier `{s}`"))
    }
}

/// Kind-specific hyperparameters; serialized as `"kind"` + `"hyperparameters"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "hyperparameters", rename_all = "snake_case")]
pub enum Hyperparameters {
    NaiveBayes(NaiveBayesParams),
    GradientBoosting(GradientBoostingParams),
    LinearSvm(LinearSvmParams),
    LogisticRegression(LogisticRegressionParams),
    RandomForest(RandomForestParams),
    Mlp(MlpSpec),
}

impl Hyperparameters {
    pub fn defaults(kind: ClassifierKind) -> Self {
        match kind {
            ClassifierKind::NaiveBayes => Hyperparameters::NaiveBayes(Default::default()),
            ClassifierKind::GradientBoosting => Hyperparameters::GradientBoosting(Default::default()),
            ClassifierKind::LinearSvm => Hyperparameters::LinearSvm(Default::default()),
            ClassifierKind::LogisticRegression => Hyperparameters::LogisticRegression(Default::default()),
            ClassifierKind::RandomForest => Hyperparameters::RandomForest(Default::default()),
            ClassifierKind::Mlp => Hyperparameters::Mlp(Default::default()),
        }
    }

    pub fn kind(&self) -> ClassifierKind {
        match self {
            Hyperparameters::NaiveBayes(_) => ClassifierKind::NaiveBayes,
            Hyperparameters::GradientBoosting(_) => ClassifierKind::GradientBoosting,
            Hyperparameters::LinearSvm(_) => ClassifierKind::LinearSvm,
            Hyperparameters::LogisticRegression(_) => ClassifierKind::LogisticRegression,
            Hyperparameters::RandomForest(_) => ClassifierKind::RandomForest,
            Hyperparameters::Mlp(_) => ClassifierKind::Mlp,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Hyperparameters::NaiveBayes(p) => p.validate(),
            Hyperparameters::GradientBoosting(p) => p.validate(),
            Hyperparameters::LinearSvm(p) => p.validate(),
            Hyperparameters::LogisticRegression(p) => p.validate(),
            Hyperparameters::RandomForest(p) => p.validate(),
            Hyperparameters::Mlp(p) => p.validate(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSpec {
    #[serde(flatten)]
    pub hyperparameters: Hyperparameters,
    pub seed: u64,
}

impl ClassifierSpec {
    pub fn new(hyperparameters: Hyperparameters, seed: u64) -> Self {
        ClassifierSpec { hyperparameters, seed }
    }

    pub fn default_for(kind: ClassifierKind, seed: u64) -> Self {
        ClassifierSpec { hyperparameters: Hyperparameters::defaults(kind), seed }
    }

    pub fn kind(&self) -> ClassifierKind {
        self.hyperparameters.kind()
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidHyperparameter(msg.into())
}

/// Learned state of each kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar", tag = "kind", rename_all = "snake_case")]
pub enum ModelParameters<T> {
    NaiveBayes(NaiveBayesModel<T>),
    GradientBoosting(BoostingModel<T>),
    LinearSvm(SvmModel<T>),
    LogisticRegression(LogisticModel<T>),
    RandomForest(ForestModel<T>),
    Mlp(MlpModel<T>),
}

impl<T: Scalar> ModelParameters<T> {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            ModelParameters::NaiveBayes(_) => ClassifierKind::NaiveBayes,
            ModelParameters::GradientBoosting(_) => ClassifierKind::GradientBoosting,
            ModelParameters::LinearSvm(_) => ClassifierKind::LinearSvm,
            ModelParameters::LogisticRegression(_) => ClassifierKind::LogisticRegression,
            ModelParameters::RandomForest(_) => ClassifierKind::RandomForest,
            ModelParameters::Mlp(_) => ClassifierKind::Mlp,
        }
    }

    fn predict_proba(&self, row: &[T]) -> T {
        match self {
            ModelParameters::NaiveBayes(m) => m.predict_proba(row),
            ModelParameters::GradientBoosting(m) => m.predict_proba(row),
            ModelParameters::LinearSvm(m) => m.predict_proba(row),
            ModelParameters::LogisticRegression(m) => m.predict_proba(row),
            ModelParameters::RandomForest(m) => m.predict_proba(row),
            ModelParameters::Mlp(m) => m.predict_proba(row),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedClassifier<T> {
    spec: ClassifierSpec,
    schema: FeatureSchema,
    schema_fingerprint: String,
    training_rows: usize,
    parameters: ModelParameters<T>,
}

impl<T: Scalar> TrainedClassifier<T> {
    /// Assembles a classifier from stored parts, checking that they agree.
    pub fn from_parts(
        spec: ClassifierSpec,
        schema: FeatureSchema,
        parameters: ModelParameters<T>,
        training_rows: usize,
    ) -> Result<Self> {
        if spec.kind() != parameters.kind() {
            return Err(Error::CorruptDocument(format!(
                "spec kind {} does not match parameter kind {}",
                spec.kind(),
                parameters.kind()
            )));
        }
        Ok(TrainedClassifier { schema_fingerprint: schema.fingerprint(), spec, schema, training_rows, parameters })
    }

    pub fn spec(&self) -> &ClassifierSpec {
        &self.spec
    }

    pub fn kind(&self) -> ClassifierKind {
        self.spec.kind()
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn schema_fingerprint(&self) -> &str {
        &self.schema_fingerprint
    }

    pub fn training_rows(&self) -> usize {
        self.training_rows
    }

    pub fn parameters(&self) -> &ModelParameters<T> {
        &self.parameters
    }

    /// Probability of class 1 (home win) for one encoded row.
    pub fn predict_proba(&self, row: &[T]) -> Result<T> {
        if row.len() != self.schema.total_columns() {
            return Err(Error::SchemaMismatch(format!(
                "row has {} columns, model expects {}",
                row.len(),
                self.schema.total_columns()
            )));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::SchemaMismatch("row contains non-finite values".into()));
        }
        let p = self.parameters.predict_proba(row);
        Ok(if p.is_nan() { T::half() } else { p.max(T::zero()).min(T::one()) })
    }

    /// Probabilities for every row of a dataset encoded with the same schema.
    pub fn predict_dataset(&self, data: &EncodedDataset<T>) -> Result<Vec<T>> {
        if data.schema().fingerprint() != self.schema_fingerprint {
            return Err(Error::SchemaMismatch("dataset schema fingerprint differs from the model's".into()));
        }
        data.rows().iter().map(|r| self.predict_proba(r)).collect()
    }
}

/// Class decision: 1 iff `p >= 0.5`.
pub fn predicted_label<T: Scalar>(p: T) -> u8 {
    u8::from(p >= T::half())
}

/// Trains the classifier described by `spec` on `data`.
pub fn train<T: Scalar>(spec: &ClassifierSpec, data: &EncodedDataset<T>) -> Result<TrainedClassifier<T>> {
    spec.hyperparameters.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let [zeros, ones] = data.class_counts();
    if zeros == 0 || ones == 0 {
        return Err(Error::SingleClassData);
    }
    let parameters = match &spec.hyperparameters {
        Hyperparameters::NaiveBayes(p) => ModelParameters::NaiveBayes(naive_bayes::fit(p, data)?),
        Hyperparameters::GradientBoosting(p) => ModelParameters::GradientBoosting(boosting::fit(p, data)?),
        Hyperparameters::LinearSvm(p) => ModelParameters::LinearSvm(svm::fit(p, data, spec.seed)?),
        Hyperparameters::LogisticRegression(p) => ModelParameters::LogisticRegression(logistic::fit(p, data)?),
        Hyperparameters::RandomForest(p) => ModelParameters::RandomForest(forest::fit(p, data, spec.seed)?),
        Hyperparameters::Mlp(p) => ModelParameters::Mlp(mlp::fit(p, data, spec.seed)?),
    };
    TrainedClassifier::from_parts(spec.clone(), data.schema().clone(), parameters, data.len())
}

/// Per-column z-scoring used by the gradient-trained learners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Standardizer<T> {
    pub mean: Vec<T>,
    pub scale: Vec<T>,
}

impl<T: Scalar> Standardizer<T> {
    pub fn fit(rows: &[Vec<T>]) -> Self {
        let d = rows.first().map_or(0, Vec::len);
        let n = T::from_count(rows.len().max(1));
        let mut mean = vec![T::zero(); d];
        for r in rows {
            for (m, &v) in mean.iter_mut().zip(r) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![T::zero(); d];
        for r in rows {
            for ((s, &v), &m) in var.iter_mut().zip(r).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let scale = var
            .into_iter()
            .map(|s| {
                let sd = (s / n).sqrt();
                if sd > T::zero() {
                    sd
                } else {
                    T::one()
                }
            })
            .collect();
        Standardizer { mean, scale }
    }

    pub fn identity(d: usize) -> Self {
        Standardizer { mean: vec![T::zero(); d], scale: vec![T::one(); d] }
    }

    pub fn apply(&self, row: &[T]) -> Vec<T> {
        row.iter().zip(self.mean.iter().zip(&self.scale)).map(|(&v, (&m, &s))| (v - m) / s).collect()
    }

    pub fn apply_all(&self, rows: &[Vec<T>]) -> Vec<Vec<T>> {
        rows.iter().map(|r| self.apply(r)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_round_trips_through_strings() {
        for k in ClassifierKind::ALL {
            assert_eq!(k.as_str().parse::<ClassifierKind>().unwrap(), k);
        }
        assert!("knn".parse::<ClassifierKind>().is_err());
    }

    #[test]
    fn spec_serializes_kind_and_hyperparameters() {
        let spec = ClassifierSpec::default_for(ClassifierKind::LogisticRegression, 7);
        let v = serde_json::to_value(&spec).unwrap();
        assert_eq!(v["kind"], "logistic_regression");
        assert_eq!(v["seed"], 7);
        assert!(v["hyperparameters"]["learning_rate"].is_number());
        let back: ClassifierSpec = serde_json::from_value(v).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn threshold_ties_go_to_class_one() {
        assert_eq!(predicted_label(0.5f64), 1);
        assert_eq!(predicted_label(0.4999f64), 0);
    }

    #[test]
    fn standardizer_handles_constant_columns() {
        let s = Standardizer::fit(&[vec![1.0f64, 5.0], vec![3.0, 5.0]]);
        assert_eq!(s.apply(&[3.0, 5.0]), vec![1.0, 0.0]);
    }
}
