//! Versioned JSON model documents.
//!
//! Floats are written with 17 significant digits so that every value
//! parses back to the identical binary number; files are replaced
//! atomically via a sibling temporary file and a rename.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use super::{ClassifierSpec, ModelParameters, TrainedClassifier};
use crate::error::{Error, Result};
use crate::features::FeatureSchema;
use crate::scalar::Scalar;
use crate::scoring::PointsModel;
use crate::strength::LedgerMode;

pub const FORMAT_VERSION: u64 = 1;

pub const LABEL_CONVENTION: &str = "1 = home team won, 0 = away team won; predicted 1 iff p >= 0.5";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentMetadata {
    pub label_convention: String,
    pub schema_fingerprint: String,
    pub training_rows: usize,
    pub ledger_mode: LedgerMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ModelDocument<T> {
    pub format_version: u64,
    pub spec: ClassifierSpec,
    pub schema: FeatureSchema,
    pub points_model: PointsModel<T>,
    pub parameters: ModelParameters<T>,
    pub metadata: DocumentMetadata,
}

impl<T: Scalar> ModelDocument<T> {
    pub fn new(model: &TrainedClassifier<T>, points_model: PointsModel<T>, ledger_mode: LedgerMode) -> Self {
        ModelDocument {
            format_version: FORMAT_VERSION,
            spec: model.spec().clone(),
            schema: model.schema().clone(),
            points_model,
            parameters: model.parameters().clone(),
            metadata: DocumentMetadata {
                label_convention: LABEL_CONVENTION.to_string(),
                schema_fingerprint: model.schema_fingerprint().to_string(),
                training_rows: model.training_rows(),
                ledger_mode,
            },
        }
    }

    pub fn classifier(&self) -> Result<TrainedClassifier<T>> {
        let model = TrainedClassifier::from_parts(
            self.spec.clone(),
            self.schema.clone(),
            self.parameters.clone(),
            self.metadata.training_rows,
        )?;
        if model.schema_fingerprint() != self.metadata.schema_fingerprint {
            return Err(Error::CorruptDocument("schema fingerprint does not match the stored schema".into()));
        }
        Ok(model)
    }

    pub fn to_json(&self) -> Vec<u8> {
        to_json_full_precision(self)
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_slice(bytes).map_err(|e| Error::CorruptDocument(e.to_string()))?;
        let version = value
            .get("format_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::CorruptDocument("missing or invalid format_version".into()))?;
        if version != FORMAT_VERSION {
            return Err(Error::VersionMismatch { found: version, supported: FORMAT_VERSION });
        }
        let doc: ModelDocument<T> = serde_json::from_value(value).map_err(|e| Error::CorruptDocument(e.to_string()))?;
        doc.classifier()?;
        Ok(doc)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_atomic(path.as_ref(), &self.to_json())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&bytes)
    }
}

/// Pretty JSON with every float written to 17 significant digits.
pub fn to_json_full_precision<S: Serialize + ?Sized>(value: &S) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision::default());
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    out.push(b'\n');
    out
}

/// Writes `bytes` to a temporary sibling, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).and_then(|_| f.sync_all()).map_err(|e| Error::io(&tmp, e))?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Pretty output with every float in `d.dddddddddddddddde±x` form.
#[derive(Default)]
struct FullPrecision<'a>(PrettyFormatter<'a>);

impl Formatter for FullPrecision<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::{train, ClassifierKind};
    use crate::features::{CategoricalGroup, EncodedDataset};

    fn tiny() -> EncodedDataset<f64> {
        let schema = FeatureSchema::new(
            vec![CategoricalGroup::new("venue", ["a".to_string(), "b".to_string()])],
            vec!["home_team_weight".into()],
        )
        .unwrap();
        let rows = (0..20).map(|i| vec![f64::from(i % 2), f64::from(i) / 3.0]).collect();
        let labels = (0..20).map(|i| u8::from(i % 3 == 0)).collect();
        EncodedDataset::new(rows, labels, schema, (0..20).map(|i| i.to_string()).collect()).unwrap()
    }

    fn doc() -> ModelDocument<f64> {
        let spec = ClassifierSpec::default_for(ClassifierKind::LogisticRegression, 0);
        let m = train(&spec, &tiny()).unwrap();
        ModelDocument::new(&m, PointsModel::reference(), LedgerMode::PerSeason)
    }

    #[test]
    fn round_trip_is_exact() {
        let d = doc();
        let back = ModelDocument::<f64>::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json(), d.to_json());
    }

    #[test]
    fn floats_carry_seventeen_digits() {
        let text = String::from_utf8(doc().to_json()).unwrap();
        assert!(text.contains("\"per_wicket\": 3.5000000000000000e0"), "{text}");
    }

    #[test]
    fn truncated_document_is_corrupt() {
        let bytes = doc().to_json();
        let err = ModelDocument::<f64>::from_json(&bytes[..bytes.len() / 2]).unwrap_err();
        assert!(matches!(err, Error::CorruptDocument(_)));
    }

    #[test]
    fn future_version_is_rejected() {
        let mut v: serde_json::Value = serde_json::from_slice(&doc().to_json()).unwrap();
        v["format_version"] = serde_json::json!(FORMAT_VERSION + 1);
        let err = ModelDocument::<f64>::from_json(&serde_json::to_vec(&v).unwrap()).unwrap_err();
        assert!(matches!(err, Error::VersionMismatch { found: 2, supported: 1 }));
    }
}
