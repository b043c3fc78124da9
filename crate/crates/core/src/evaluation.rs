//! Stratified k-fold cross-validation, held-out season evaluation and the
//! binary classification metrics (per-class and support-weighted).

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classifiers::{predicted_label, train, ClassifierSpec, TrainedClassifier};
use crate::error::{Error, Result};
use crate::features::EncodedDataset;
use crate::scalar::Scalar;

pub const PREDICTION_COLUMNS: [&str; 4] = ["match_id", "probability", "predicted", "actual"];

/// Splits indices into `k` disjoint folds whose class-1 counts differ from
/// the proportional share `n1 / k` by less than one.
///
/// Each class is shuffled and dealt round-robin; class 0 resumes dealing at
/// the fold after class 1's last, which also keeps fold sizes within one.
pub fn stratified_folds(labels: &[u8], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::BadK(k));
    }
    let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, &l) in labels.iter().enumerate() {
        by_class[usize::from(l != 0)].push(i);
    }
    for class in [1u8, 0] {
        let count = by_class[usize::from(class)].len();
        if count < k {
            return Err(Error::TooFewPerClass { class, count, k });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut slot = 0;
    for class in [1usize, 0] {
        let mut members = by_class[class].clone();
        members.shuffle(&mut rng);
        for i in members {
            folds[slot].push(i);
            slot = (slot + 1) % k;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AveragedMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub n_evaluated: usize,
    pub correct: usize,
    pub accuracy: f64,
    /// Indexed by class: 0 = away win, 1 = home win.
    pub per_class: [ClassMetrics; 2],
    /// Support-weighted mean over the two classes.
    pub weighted_avg: AveragedMetrics,
    /// `confusion[actual][predicted]`.
    pub confusion: [[usize; 2]; 2],
    pub per_fold: Option<Vec<f64>>,
    pub mean_fold_accuracy: Option<f64>,
    /// Set when some precision, recall or F1 had a zero denominator and was
    /// reported as 0.
    pub zero_division: bool,
}

fn ratio(num: usize, den: usize, flag: &mut bool) -> f64 {
    if den == 0 {
        *flag = true;
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl EvalReport {
    pub fn from_labels(actual: &[u8], predicted: &[u8]) -> Self {
        assert_eq!(actual.len(), predicted.len());
        let mut confusion = [[0usize; 2]; 2];
        for (&a, &p) in actual.iter().zip(predicted) {
            confusion[usize::from(a != 0)][usize::from(p != 0)] += 1;
        }
        Self::from_confusion(confusion)
    }

    pub fn from_confusion(confusion: [[usize; 2]; 2]) -> Self {
        let n = confusion.iter().flatten().sum::<usize>();
        let correct = confusion[0][0] + confusion[1][1];
        let mut zero_division = false;
        let accuracy = ratio(correct, n, &mut zero_division);
        let per_class = [0usize, 1].map(|c| {
            let tp = confusion[c][c];
            let support = confusion[c][0] + confusion[c][1];
            let predicted = confusion[0][c] + confusion[1][c];
            let precision = ratio(tp, predicted, &mut zero_division);
            let recall = ratio(tp, support, &mut zero_division);
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                zero_division = true;
                0.0
            };
            ClassMetrics { precision, recall, f1, support }
        });
        let weight = |c: usize| if n == 0 { 0.0 } else { per_class[c].support as f64 / n as f64 };
        let avg = |f: fn(&ClassMetrics) -> f64| weight(0) * f(&per_class[0]) + weight(1) * f(&per_class[1]);
        EvalReport {
            n_evaluated: n,
            correct,
            accuracy,
            per_class,
            weighted_avg: AveragedMetrics {
                precision: avg(|m| m.precision),
                recall: avg(|m| m.recall),
                f1: avg(|m| m.f1),
            },
            confusion,
            per_fold: None,
            mean_fold_accuracy: None,
            zero_division,
        }
    }

    fn with_folds(mut self, folds: Vec<f64>) -> Self {
        self.mean_fold_accuracy = Some(folds.iter().sum::<f64>() / folds.len().max(1) as f64);
        self.per_fold = Some(folds);
        self
    }

    /// Human-readable summary: counts, accuracy, the per-class table with a
    /// `weighted_avg` row, and the confusion matrix.
    pub fn render_table(&self, title: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{title}");
        let _ = writeln!(
            s,
            "correct predictions: {} of {}  accuracy: {:.2}%",
            self.correct,
            self.n_evaluated,
            100.0 * self.accuracy
        );
        if let (Some(folds), Some(mean)) = (&self.per_fold, self.mean_fold_accuracy) {
            let list: Vec<String> = folds.iter().map(|a| format!("{a:.4}")).collect();
            let _ = writeln!(s, "fold accuracies: [{}]  mean: {:.4}", list.join(", "), mean);
        }
        let _ = writeln!(s, "{:<14}{:>10}{:>10}{:>10}{:>10}", "", "precision", "recall", "f1", "support");
        for (c, name) in ["0 (away win)", "1 (home win)"].iter().enumerate() {
            let m = &self.per_class[c];
            let _ = writeln!(s, "{:<14}{:>10.2}{:>10.2}{:>10.2}{:>10}", name, m.precision, m.recall, m.f1, m.support);
        }
        let w = &self.weighted_avg;
        let _ = writeln!(
            s,
            "{:<14}{:>10.2}{:>10.2}{:>10.2}{:>10}",
            "weighted_avg", w.precision, w.recall, w.f1, self.n_evaluated
        );
        let _ = writeln!(s, "confusion (rows actual, columns predicted):");
        let _ = writeln!(
            s,
            "  [[{}, {}], [{}, {}]]",
            self.confusion[0][0], self.confusion[0][1], self.confusion[1][0], self.confusion[1][1]
        );
        if self.zero_division {
            let _ = writeln!(s, "note: a zero denominator occurred; the affected metric is reported as 0");
        }
        s
    }

    /// `metric,value` rows in a fixed order.
    pub fn csv_rows(&self) -> Vec<(String, String)> {
        let mut rows = vec![
            ("n_evaluated".to_string(), self.n_evaluated.to_string()),
            ("correct".to_string(), self.correct.to_string()),
            ("accuracy".to_string(), self.accuracy.to_string()),
        ];
        for (c, m) in self.per_class.iter().enumerate() {
            rows.push((format!("class_{c}_precision"), m.precision.to_string()));
            rows.push((format!("class_{c}_recall"), m.recall.to_string()));
            rows.push((format!("class_{c}_f1"), m.f1.to_string()));
            rows.push((format!("class_{c}_support"), m.support.to_string()));
        }
        rows.push(("weighted_avg_precision".into(), self.weighted_avg.precision.to_string()));
        rows.push(("weighted_avg_recall".into(), self.weighted_avg.recall.to_string()));
        rows.push(("weighted_avg_f1".into(), self.weighted_avg.f1.to_string()));
        for a in 0..2 {
            for p in 0..2 {
                rows.push((format!("confusion_actual_{a}_predicted_{p}"), self.confusion[a][p].to_string()));
            }
        }
        if let Some(folds) = &self.per_fold {
            for (i, acc) in folds.iter().enumerate() {
                rows.push((format!("fold_{}_accuracy", i + 1), acc.to_string()));
            }
        }
        if let Some(mean) = self.mean_fold_accuracy {
            rows.push(("mean_fold_accuracy".into(), mean.to_string()));
        }
        rows.push(("zero_division".into(), self.zero_division.to_string()));
        rows
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["metric", "value"])?;
        for (k, v) in self.csv_rows() {
            w.write_record([k, v])?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

/// Trains on k−1 folds and tests on the remaining one, for every fold.
/// The report pools all out-of-fold predictions and lists fold accuracies.
pub fn cross_validate<T: Scalar>(
    spec: &ClassifierSpec,
    data: &EncodedDataset<T>,
    k: usize,
    seed: u64,
) -> Result<EvalReport> {
    let folds = stratified_folds(data.labels(), k, seed)?;
    let mut confusion = [[0usize; 2]; 2];
    let mut accuracies = Vec::with_capacity(k);
    let mut in_fold = vec![usize::MAX; data.len()];
    for (f, fold) in folds.iter().enumerate() {
        for &i in fold {
            in_fold[i] = f;
        }
    }
    for (f, fold) in folds.iter().enumerate() {
        let train_idx: Vec<usize> = (0..data.len()).filter(|&i| in_fold[i] != f).collect();
        let model = train(spec, &data.subset(&train_idx))?;
        let mut correct = 0;
        for &i in fold {
            let pred = predicted_label(model.predict_proba(&data.rows()[i])?);
            let actual = data.labels()[i];
            confusion[usize::from(actual != 0)][usize::from(pred != 0)] += 1;
            correct += usize::from(pred == actual);
        }
        accuracies.push(correct as f64 / fold.len() as f64);
    }
    Ok(EvalReport::from_confusion(confusion).with_folds(accuracies))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionRecord {
    pub match_id: String,
    pub probability: f64,
    pub predicted: u8,
    pub actual: u8,
}

/// Scores a trained model on a held-out dataset encoded with its schema.
pub fn evaluate_holdout<T: Scalar>(
    model: &TrainedClassifier<T>,
    holdout: &EncodedDataset<T>,
) -> Result<(EvalReport, Vec<PredictionRecord>)> {
    let probs = model.predict_dataset(holdout)?;
    let records: Vec<PredictionRecord> = probs
        .iter()
        .zip(holdout.labels())
        .zip(holdout.row_ids())
        .map(|((&p, &actual), id)| PredictionRecord {
            match_id: id.clone(),
            probability: p.as_f64(),
            predicted: predicted_label(p),
            actual,
        })
        .collect();
    let actual: Vec<u8> = records.iter().map(|r| r.actual).collect();
    let predicted: Vec<u8> = records.iter().map(|r| r.predicted).collect();
    Ok((EvalReport::from_labels(&actual, &predicted), records))
}

pub fn write_predictions_csv(path: impl AsRef<Path>, records: &[PredictionRecord]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(PREDICTION_COLUMNS)?;
    for r in records {
        w.write_record([r.match_id.clone(), r.probability.to_string(), r.predicted.to_string(), r.actual.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(ones: usize, zeros: usize) -> Vec<u8> {
        let mut v = vec![1u8; ones];
        v.extend(std::iter::repeat_n(0u8, zeros));
        v
    }

    #[test]
    fn exact_stratification_for_sixty_forty() {
        let y = labels(60, 40);
        let folds = stratified_folds(&y, 10, 3).unwrap();
        for f in &folds {
            assert_eq!(f.iter().filter(|&&i| y[i] == 1).count(), 6);
            assert_eq!(f.len(), 10);
        }
    }

    #[test]
    fn too_few_minority_members() {
        let err = stratified_folds(&labels(13, 7), 10, 0).unwrap_err();
        assert!(matches!(err, Error::TooFewPerClass { class: 0, count: 7, k: 10 }));
        assert!(matches!(stratified_folds(&labels(5, 5), 1, 0), Err(Error::BadK(1))));
    }

    #[test]
    fn folds_are_deterministic() {
        let y = labels(30, 25);
        assert_eq!(stratified_folds(&y, 5, 9).unwrap(), stratified_folds(&y, 5, 9).unwrap());
    }

    #[test]
    fn two_by_two_forced_composition() {
        let y = vec![1, 0, 1, 0];
        for f in stratified_folds(&y, 2, 1).unwrap() {
            assert_eq!(f.len(), 2);
            assert_eq!(f.iter().map(|&i| y[i]).sum::<u8>(), 1);
        }
    }

    #[test]
    fn constant_class_one_prediction() {
        // 60% class 1, every prediction 1: class-0 recall is 0
        let actual = labels(36, 24);
        let r = EvalReport::from_labels(&actual, &[1; 60]);
        assert_eq!(r.correct, 36);
        assert!((r.accuracy - 0.6).abs() < 1e-15);
        assert_eq!(r.per_class[0].recall, 0.0);
        assert_eq!(r.per_class[0].precision, 0.0);
        assert!(r.zero_division);
        // class 1: precision 0.6, recall 1, f1 0.75; weighted f1 = 0.6·0.75
        assert!((r.per_class[1].f1 - 0.75).abs() < 1e-15);
        assert!((r.weighted_avg.f1 - 0.45).abs() < 1e-15);
    }

    #[test]
    fn perfect_holdout_counts() {
        let y = labels(33, 27);
        let r = EvalReport::from_labels(&y, &y);
        assert_eq!((r.correct, r.n_evaluated), (60, 60));
        assert_eq!(r.accuracy, 1.0);
        assert!(!r.zero_division);
    }

    #[test]
    fn table_three_weighted_average_shape() {
        // 43 of 60 correct; the weighted F1 sits between the class F1s
        let r = EvalReport::from_confusion([[17, 8], [9, 26]]);
        assert_eq!(r.correct, 43);
        assert!((r.accuracy - 43.0 / 60.0).abs() < 1e-15);
        let lo = r.per_class[0].f1.min(r.per_class[1].f1);
        let hi = r.per_class[0].f1.max(r.per_class[1].f1);
        assert!(lo <= r.weighted_avg.f1 && r.weighted_avg.f1 <= hi);
    }
}
