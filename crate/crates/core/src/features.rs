//! Model-ready features: k−1 dummy encoding of the categorical match
//! attributes plus the two team weights, and recursive feature elimination
//! over the original (pre-encoding) features.

use std::collections::{BTreeSet, HashSet};
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::{label_of, MatchDataset, MatchRecord};
use crate::error::{Error, Result};
use crate::evaluation::stratified_folds;
use crate::linalg::{Cholesky, Matrix};
use crate::scalar::{sigmoid, softplus, Scalar};
use crate::strength::{lookup_weights, TeamWeightLedger};

pub const HOME_TEAM: &str = "home_team";
pub const AWAY_TEAM: &str = "away_team";
pub const TOSS_WINNER: &str = "toss_winner";
pub const TOSS_DECISION: &str = "toss_decision";
pub const VENUE: &str = "venue";
pub const HOME_WEIGHT: &str = "home_team_weight";
pub const AWAY_WEIGHT: &str = "away_team_weight";

pub const MATCH_CATEGORICAL: [&str; 5] = [HOME_TEAM, AWAY_TEAM, TOSS_WINNER, TOSS_DECISION, VENUE];
pub const MATCH_NUMERIC: [&str; 2] = [HOME_WEIGHT, AWAY_WEIGHT];

/// A categorical feature. Categories are kept sorted; the first is the
/// dropped (all-zero) level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CategoricalGroup {
    pub name: String,
    pub categories: Vec<String>,
}

impl CategoricalGroup {
    pub fn new(name: impl Into<String>, categories: impl IntoIterator<Item = String>) -> Self {
        let categories: BTreeSet<String> = categories.into_iter().collect();
        CategoricalGroup { name: name.into(), categories: categories.into_iter().collect() }
    }

    pub fn dropped(&self) -> Option<&str> {
        self.categories.first().map(String::as_str)
    }

    /// Encoded categories (all but the dropped one).
    pub fn encoded(&self) -> &[String] {
        self.categories.get(1..).unwrap_or(&[])
    }

    pub fn width(&self) -> usize {
        self.categories.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SchemaRepr", into = "SchemaRepr")]
pub struct FeatureSchema {
    categorical_groups: Vec<CategoricalGroup>,
    numeric_features: Vec<String>,
    total_columns: usize,
}

#[derive(Serialize, Deserialize)]
struct SchemaRepr {
    categorical_groups: Vec<CategoricalGroup>,
    numeric_features: Vec<String>,
    total_columns: usize,
    columns: Vec<String>,
}

impl TryFrom<SchemaRepr> for FeatureSchema {
    type Error = String;

    fn try_from(r: SchemaRepr) -> Result<Self, String> {
        let schema = FeatureSchema::new(r.categorical_groups, r.numeric_features).map_err(|e| e.to_string())?;
        if schema.total_columns != r.total_columns || schema.column_names() != r.columns {
            return Err("schema column list is inconsistent with its groups".into());
        }
        Ok(schema)
    }
}

impl From<FeatureSchema> for SchemaRepr {
    fn from(s: FeatureSchema) -> Self {
        let columns = s.column_names();
        SchemaRepr {
            categorical_groups: s.categorical_groups,
            numeric_features: s.numeric_features,
            total_columns: s.total_columns,
            columns,
        }
    }
}

/// An encoded row and the `(feature, value)` pairs that were not in the schema.
pub type EncodedRow<T> = (Vec<T>, Vec<(String, String)>);

/// Kind and column span of one original feature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSpan {
    pub name: String,
    pub categorical: bool,
    pub columns: Range<usize>,
}

impl FeatureSchema {
    pub fn new(categorical_groups: Vec<CategoricalGroup>, numeric_features: Vec<String>) -> Result<Self> {
        let mut names = HashSet::new();
        for n in categorical_groups.iter().map(|g| &g.name).chain(&numeric_features) {
            if !names.insert(n.as_str()) {
                return Err(Error::SchemaMismatch(format!("duplicate feature name `{n}`")));
            }
        }
        let categorical_groups: Vec<CategoricalGroup> =
            categorical_groups.into_iter().map(|g| CategoricalGroup::new(g.name, g.categories)).collect();
        let total_columns =
            categorical_groups.iter().map(CategoricalGroup::width).sum::<usize>() + numeric_features.len();
        Ok(FeatureSchema { categorical_groups, numeric_features, total_columns })
    }

    pub fn categorical_groups(&self) -> &[CategoricalGroup] {
        &self.categorical_groups
    }

    pub fn numeric_features(&self) -> &[String] {
        &self.numeric_features
    }

    pub fn total_columns(&self) -> usize {
        self.total_columns
    }

    /// Original feature names: categorical groups first, then numerics.
    pub fn feature_names(&self) -> Vec<String> {
        self.spans().into_iter().map(|s| s.name).collect()
    }

    pub fn spans(&self) -> Vec<FeatureSpan> {
        let mut out = Vec::new();
        let mut at = 0;
        for g in &self.categorical_groups {
            out.push(FeatureSpan { name: g.name.clone(), categorical: true, columns: at..at + g.width() });
            at += g.width();
        }
        for n in &self.numeric_features {
            out.push(FeatureSpan { name: n.clone(), categorical: false, columns: at..at + 1 });
            at += 1;
        }
        out
    }

    pub fn column_names(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.total_columns);
        for g in &self.categorical_groups {
            out.extend(g.encoded().iter().map(|c| format!("{}={}", g.name, c)));
        }
        out.extend(self.numeric_features.iter().cloned());
        out
    }

    /// `true` for columns holding a dummy indicator.
    pub fn dummy_mask(&self) -> Vec<bool> {
        let dummies: usize = self.categorical_groups.iter().map(CategoricalGroup::width).sum();
        (0..self.total_columns).map(|c| c < dummies).collect()
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_vec(self).expect("schema serializes");
        hex::encode(Sha256::digest(&json))
    }

    /// Restricts the schema to `keep`, preserving the schema's own order.
    pub fn project(&self, keep: &[String]) -> Result<FeatureSchema> {
        let known: HashSet<String> = self.feature_names().into_iter().collect();
        if let Some(unknown) = keep.iter().find(|k| !known.contains(*k)) {
            return Err(Error::UnknownFeature(unknown.clone()));
        }
        let keep: HashSet<&str> = keep.iter().map(String::as_str).collect();
        FeatureSchema::new(
            self.categorical_groups.iter().filter(|g| keep.contains(g.name.as_str())).cloned().collect(),
            self.numeric_features.iter().filter(|n| keep.contains(n.as_str())).cloned().collect(),
        )
    }

    /// Encodes one row. Unknown categories encode as the all-zero block and
    /// are returned as `(feature, value)` warnings.
    pub fn encode_values<T: Scalar>(
        &self,
        categorical: impl Fn(&str) -> Option<String>,
        numeric: impl Fn(&str) -> Option<T>,
    ) -> Result<EncodedRow<T>> {
        let mut row = vec![T::zero(); self.total_columns];
        let mut unseen = Vec::new();
        let mut at = 0;
        for g in &self.categorical_groups {
            let value = categorical(&g.name)
                .ok_or_else(|| Error::SchemaMismatch(format!("no value for feature `{}`", g.name)))?;
            match g.categories.iter().position(|c| *c == value) {
                Some(0) => {}
                Some(i) => row[at + i - 1] = T::one(),
                None => unseen.push((g.name.clone(), value)),
            }
            at += g.width();
        }
        for n in &self.numeric_features {
            let v = numeric(n).ok_or_else(|| Error::SchemaMismatch(format!("no value for feature `{n}`")))?;
            if !v.is_finite() {
                return Err(Error::SchemaMismatch(format!("non-finite value for `{n}`")));
            }
            row[at] = v;
            at += 1;
        }
        Ok((row, unseen))
    }

    /// Recovers categorical values and numerics from an encoded row.
    pub fn decode_row<T: Scalar>(&self, row: &[T]) -> Result<DecodedRow<T>> {
        if row.len() != self.total_columns {
            return Err(Error::SchemaMismatch(format!(
                "row has {} columns, schema has {}",
                row.len(),
                self.total_columns
            )));
        }
        let mut categorical = Vec::new();
        let mut at = 0;
        for g in &self.categorical_groups {
            let block = &row[at..at + g.width()];
            let mut hot = None;
            for (i, &v) in block.iter().enumerate() {
                if v == T::one() {
                    if hot.replace(i).is_some() {
                        return Err(Error::SchemaMismatch(format!("several levels set in `{}`", g.name)));
                    }
                } else if v != T::zero() {
                    return Err(Error::SchemaMismatch(format!("non-binary dummy in `{}`", g.name)));
                }
            }
            let value = match hot {
                Some(i) => g.categories[i + 1].clone(),
                None => g.dropped().unwrap_or_default().to_string(),
            };
            categorical.push((g.name.clone(), value));
            at += g.width();
        }
        let numeric = self.numeric_features.iter().enumerate().map(|(i, n)| (n.clone(), row[at + i])).collect();
        Ok(DecodedRow { categorical, numeric })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodedRow<T> {
    pub categorical: Vec<(String, String)>,
    pub numeric: Vec<(String, T)>,
}

/// Value of one of the five match-level categorical features.
pub fn match_category(m: &MatchRecord, feature: &str) -> Option<String> {
    Some(match feature {
        HOME_TEAM => m.home_team.clone(),
        AWAY_TEAM => m.away_team.clone(),
        TOSS_WINNER => m.toss_winner.clone(),
        TOSS_DECISION => m.toss_decision.as_str().to_string(),
        VENUE => m.venue.clone(),
        _ => return None,
    })
}

/// Five categorical groups with the categories observed in `dataset`, plus
/// the two team-weight numerics.
pub fn build_schema(dataset: &MatchDataset) -> Result<FeatureSchema> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let groups = MATCH_CATEGORICAL
        .iter()
        .map(|&name| CategoricalGroup::new(name, dataset.matches().iter().filter_map(|m| match_category(m, name))))
        .collect();
    FeatureSchema::new(groups, MATCH_NUMERIC.iter().map(|s| s.to_string()).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodedDataset<T> {
    rows: Vec<Vec<T>>,
    labels: Vec<u8>,
    schema: FeatureSchema,
    row_ids: Vec<String>,
}

impl<T: Scalar> EncodedDataset<T> {
    pub fn new(rows: Vec<Vec<T>>, labels: Vec<u8>, schema: FeatureSchema, row_ids: Vec<String>) -> Result<Self> {
        if rows.len() != labels.len() || rows.len() != row_ids.len() {
            return Err(Error::SchemaMismatch("rows, labels and ids differ in length".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != schema.total_columns()) {
            return Err(Error::SchemaMismatch(format!(
                "row width {} does not match schema width {}",
                r.len(),
                schema.total_columns()
            )));
        }
        if labels.iter().any(|&l| l > 1) {
            return Err(Error::SchemaMismatch("labels must be 0 or 1".into()));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::SchemaMismatch("encoded values must be finite".into()));
        }
        Ok(EncodedDataset { rows, labels, schema, row_ids })
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn width(&self) -> usize {
        self.schema.total_columns()
    }

    /// `[count of class 0, count of class 1]`.
    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&l| l == 1).count();
        [self.labels.len() - ones, ones]
    }

    pub fn subset(&self, indices: &[usize]) -> EncodedDataset<T> {
        EncodedDataset {
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            schema: self.schema.clone(),
            row_ids: indices.iter().map(|&i| self.row_ids[i].clone()).collect(),
        }
    }

    /// Keeps only the named original features.
    pub fn project(&self, keep: &[String]) -> Result<EncodedDataset<T>> {
        let target = self.schema.project(keep)?;
        self.reencode_for(&target)
    }

    /// Rewrites rows for a schema whose features are a subset of this one's.
    pub fn reencode_for(&self, target: &FeatureSchema) -> Result<EncodedDataset<T>> {
        if *target == self.schema {
            return Ok(self.clone());
        }
        let decoded: Vec<DecodedRow<T>> = self.rows.iter().map(|r| self.schema.decode_row(r)).collect::<Result<_>>()?;
        let mut rows = Vec::with_capacity(decoded.len());
        for d in &decoded {
            let (row, _) = target.encode_values(
                |name| d.categorical.iter().find(|(n, _)| n == name).map(|(_, v)| v.clone()),
                |name| d.numeric.iter().find(|(n, _)| n == name).map(|&(_, v)| v),
            )?;
            rows.push(row);
        }
        Ok(EncodedDataset { rows, labels: self.labels.clone(), schema: target.clone(), row_ids: self.row_ids.clone() })
    }
}

/// One row per decisive match, in date order.
pub fn encode<T: Scalar>(
    dataset: &MatchDataset,
    ledger: &TeamWeightLedger<T>,
    schema: &FeatureSchema,
) -> Result<EncodedDataset<T>> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut ids = Vec::new();
    for m in dataset.decisive() {
        let (row, unseen) = encode_match(m, ledger, schema)?;
        for (feature, value) in unseen {
            log::warn!("match {}: unseen {feature} `{value}` encoded as the dropped level", m.match_id);
        }
        rows.push(row);
        labels.push(label_of(m)?);
        ids.push(m.match_id.clone());
    }
    EncodedDataset::new(rows, labels, schema.clone(), ids)
}

/// Encodes a single match; returns the unseen categories alongside the row.
pub fn encode_match<T: Scalar>(
    m: &MatchRecord,
    ledger: &TeamWeightLedger<T>,
    schema: &FeatureSchema,
) -> Result<EncodedRow<T>> {
    let needs_weights = !schema.numeric_features().is_empty();
    let (w1, w2) = if needs_weights { lookup_weights(ledger, m)? } else { (T::zero(), T::zero()) };
    schema.encode_values(
        |name| match_category(m, name),
        |name| match name {
            HOME_WEIGHT => Some(w1),
            AWAY_WEIGHT => Some(w2),
            _ => None,
        },
    )
}

/// Outcome of recursive feature elimination.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RfeResult {
    /// Original features, most important first.
    pub ranking: Vec<String>,
    /// The first `target_count` entries of `ranking`.
    pub selected: Vec<String>,
    /// (subset size, stratified CV accuracy), from the full set downwards.
    pub per_subset_scores: Vec<(usize, f64)>,
    pub stability_runs: usize,
    /// Share of bootstrap resamples whose selection equals `selected`.
    pub stability_agreement: f64,
    /// First-round importance averaged over the full data and every resample, in `ranking` order.
    pub mean_importance: Vec<(String, f64)>,
}

pub const RFE_MIN_ROWS: usize = 20;
pub const RFE_CV_FOLDS: usize = 5;
/// L2 strength of the ranking model's mean log-loss objective.
pub const RFE_RANKER_LAMBDA: f64 = 1e-2;

/// Recursive feature elimination at the granularity of original features.
///
/// The ranking model is an L2 logistic regression on z-scored numerics and
/// raw dummies; a numeric feature's importance is its |coefficient|, a
/// categorical feature's is the largest |coefficient × column sd| in its
/// block. The least important feature is dropped each round until one
/// remains, recording 5-fold stratified CV accuracy at every size. The whole
/// elimination is repeated on `resamples` bootstrap resamples to measure how
/// often the same top `target_count` set comes out.
pub fn rfe_select<T: Scalar>(
    encoded: &EncodedDataset<T>,
    target_count: usize,
    resamples: usize,
    seed: u64,
) -> Result<RfeResult> {
    let features = encoded.schema().spans();
    if target_count == 0 || target_count > features.len() {
        return Err(Error::TargetTooLarge { target: target_count, available: features.len() });
    }
    if encoded.len() < RFE_MIN_ROWS {
        return Err(Error::TooFewRows { needed: RFE_MIN_ROWS, got: encoded.len() });
    }
    let rows: Vec<Vec<f64>> = encoded.rows().iter().map(|r| r.iter().map(|v| v.as_f64()).collect()).collect();
    let labels = encoded.labels();
    let [zeros, ones] = encoded.class_counts();
    if zeros == 0 || ones == 0 {
        return Err(Error::SingleClassData);
    }
    let folds = RFE_CV_FOLDS.min(zeros).min(ones);
    let cv = if folds >= 2 { Some((folds, seed)) } else { None };

    let main = eliminate(&rows, labels, &features, cv)?;
    let selected: Vec<String> = main.ranking[..target_count].to_vec();
    let selected_set: BTreeSet<&String> = selected.iter().collect();

    let mut importance_sum = main.first_importance.clone();
    let mut runs = 1usize;
    let mut agree = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..resamples {
        let idx: Vec<usize> = (0..rows.len()).map(|_| rng.random_range(0..rows.len())).collect();
        let r_rows: Vec<Vec<f64>> = idx.iter().map(|&i| rows[i].clone()).collect();
        let r_labels: Vec<u8> = idx.iter().map(|&i| labels[i]).collect();
        if r_labels.iter().all(|&l| l == r_labels[0]) {
            continue;
        }
        let run = eliminate(&r_rows, &r_labels, &features, None)?;
        let set: BTreeSet<&String> = run.ranking[..target_count].iter().collect();
        if set == selected_set {
            agree += 1;
        }
        for (acc, v) in importance_sum.iter_mut().zip(&run.first_importance) {
            *acc += v;
        }
        runs += 1;
    }

    let mean_importance = main
        .ranking
        .iter()
        .map(|name| {
            let i = features.iter().position(|f| &f.name == name).expect("ranked feature exists");
            (name.clone(), importance_sum[i] / runs as f64)
        })
        .collect();
    Ok(RfeResult {
        ranking: main.ranking,
        selected,
        per_subset_scores: main.scores,
        stability_runs: resamples,
        stability_agreement: if resamples == 0 { 1.0 } else { agree as f64 / resamples as f64 },
        mean_importance,
    })
}

struct Elimination {
    ranking: Vec<String>,
    scores: Vec<(usize, f64)>,
    first_importance: Vec<f64>,
}

fn eliminate(
    rows: &[Vec<f64>],
    labels: &[u8],
    features: &[FeatureSpan],
    cv: Option<(usize, u64)>,
) -> Result<Elimination> {
    let mut active: Vec<usize> = (0..features.len()).collect();
    let mut removed = Vec::with_capacity(features.len());
    let mut scores = Vec::new();
    let mut first_importance = vec![0.0; features.len()];
    let y: Vec<f64> = labels.iter().map(|&l| f64::from(l)).collect();

    while !active.is_empty() {
        let (design, owners, sds) = ranking_design(rows, features, &active);
        if let Some((k, seed)) = cv {
            let folds = stratified_folds(labels, k, seed)?;
            let mut correct = 0usize;
            for fold in &folds {
                let held: HashSet<usize> = fold.iter().copied().collect();
                let train: Vec<usize> = (0..rows.len()).filter(|i| !held.contains(i)).collect();
                let x_tr: Vec<Vec<f64>> = train.iter().map(|&i| design[i].clone()).collect();
                let y_tr: Vec<f64> = train.iter().map(|&i| y[i]).collect();
                let (w, b) = fit_ranker(&x_tr, &y_tr, RFE_RANKER_LAMBDA);
                correct += fold
                    .iter()
                    .filter(|&&i| {
                        let z: f64 = design[i].iter().zip(&w).map(|(a, c)| a * c).sum::<f64>() + b;
                        u8::from(sigmoid(z) >= 0.5) == labels[i]
                    })
                    .count();
            }
            scores.push((active.len(), correct as f64 / rows.len() as f64));
        }
        if active.len() == 1 {
            removed.push(active[0]);
            break;
        }
        let (w, _) = fit_ranker(&design, &y, RFE_RANKER_LAMBDA);
        let mut importance = vec![0.0f64; features.len()];
        for ((c, &owner), sd) in w.iter().zip(&owners).zip(&sds) {
            let v = if features[owner].categorical { (c * sd).abs() } else { c.abs() };
            importance[owner] = importance[owner].max(v);
        }
        if removed.is_empty() {
            first_importance = importance.clone();
        }
        // least important goes; ties drop the later feature
        let (pos, _) = active.iter().enumerate().fold((0usize, f64::INFINITY), |acc, (pos, &f)| {
            if importance[f] <= acc.1 {
                (pos, importance[f])
            } else {
                acc
            }
        });
        removed.push(active.remove(pos));
    }
    let ranking = removed.iter().rev().map(|&f| features[f].name.clone()).collect();
    Ok(Elimination { ranking, scores, first_importance })
}

/// Design matrix over the active features: numerics z-scored, dummies raw.
/// Returns the matrix, the owning feature of each column and each column's sd.
fn ranking_design(
    rows: &[Vec<f64>],
    features: &[FeatureSpan],
    active: &[usize],
) -> (Vec<Vec<f64>>, Vec<usize>, Vec<f64>) {
    let n = rows.len() as f64;
    let mut cols: Vec<(usize, usize)> = Vec::new();
    for &f in active {
        for c in features[f].columns.clone() {
            cols.push((f, c));
        }
    }
    let stats: Vec<(f64, f64)> = cols
        .iter()
        .map(|&(_, c)| {
            let mean = rows.iter().map(|r| r[c]).sum::<f64>() / n;
            let var = rows.iter().map(|r| (r[c] - mean).powi(2)).sum::<f64>() / n;
            (mean, var.sqrt())
        })
        .collect();
    let design = rows
        .iter()
        .map(|r| {
            cols.iter()
                .zip(&stats)
                .map(|(&(f, c), &(mean, sd))| {
                    if features[f].categorical {
                        r[c]
                    } else if sd > 0.0 {
                        (r[c] - mean) / sd
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    (design, cols.iter().map(|&(f, _)| f).collect(), stats.iter().map(|&(_, sd)| sd).collect())
}

/// Newton's method on mean log-loss + (λ/2)‖w‖² (bias unpenalised).
pub(crate) fn fit_ranker(x: &[Vec<f64>], y: &[f64], lambda: f64) -> (Vec<f64>, f64) {
    let d = x.first().map_or(0, Vec::len);
    let n = x.len() as f64;
    let mut theta = vec![0.0; d + 1];
    let objective = |theta: &[f64]| -> f64 {
        let (w, b) = theta.split_at(d);
        let loss: f64 = x
            .iter()
            .zip(y)
            .map(|(r, &t)| {
                let z: f64 = r.iter().zip(w).map(|(a, c)| a * c).sum::<f64>() + b[0];
                softplus(z) - t * z
            })
            .sum::<f64>()
            / n;
        loss + 0.5 * lambda * w.iter().map(|v| v * v).sum::<f64>()
    };
    let mut current = objective(&theta);
    for _ in 0..100 {
        let mut grad = vec![0.0; d + 1];
        let mut hess = Matrix::<f64>::zeros(d + 1, d + 1);
        for (r, &t) in x.iter().zip(y) {
            let z: f64 = r.iter().zip(&theta[..d]).map(|(a, c)| a * c).sum::<f64>() + theta[d];
            let p = sigmoid(z);
            let s = p * (1.0 - p);
            let xi = |j: usize| if j < d { r[j] } else { 1.0 };
            for j in 0..=d {
                grad[j] += (p - t) * xi(j) / n;
                for k in j..=d {
                    let cur = hess.get(j, k);
                    hess.set(j, k, cur + s * xi(j) * xi(k) / n);
                }
            }
        }
        for j in 0..=d {
            for k in 0..j {
                hess.set(j, k, hess.get(k, j));
            }
            let reg = if j < d { lambda } else { 1e-10 };
            hess.set(j, j, hess.get(j, j) + reg);
            if j < d {
                grad[j] += lambda * theta[j];
            }
        }
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < 1e-10 {
            break;
        }
        let Some(chol) = Cholesky::factor(&hess) else { break };
        let step = chol.solve(&grad);
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let cand: Vec<f64> = theta.iter().zip(&step).map(|(a, s)| a - t * s).collect();
            let val = objective(&cand);
            if val <= current {
                improved = current - val > 0.0;
                theta = cand;
                current = val;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    let b = theta[d];
    theta.truncate(d);
    (theta, b)
}
