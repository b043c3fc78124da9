//! Match-outcome prediction for auction-based Twenty20 leagues.
//!
//! The pipeline runs: ingest match and player CSVs ([`dataset`]), score
//! players with a linear points model ([`scoring`]), turn rosters into team
//! strengths ([`strength`]), encode matches as dummy variables plus the two
//! team weights and optionally prune features ([`features`]), train one of
//! six classifiers ([`classifiers`]) and evaluate it ([`evaluation`]).
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the CLI uses.

// NaN-rejecting `!(x > 0)` checks and index loops over matrices are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod classifiers;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod fixture;
pub mod linalg;
pub mod scalar;
pub mod scoring;
pub mod strength;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type PointsModel = scoring::PointsModel<f64>;
pub type TeamWeightLedger = strength::TeamWeightLedger<f64>;
pub type EncodedDataset = features::EncodedDataset<f64>;
pub type TrainedClassifier = classifiers::TrainedClassifier<f64>;
pub type ModelDocument = classifiers::document::ModelDocument<f64>;

pub type PointsModelF32 = scoring::PointsModel<f32>;
pub type EncodedDatasetF32 = features::EncodedDataset<f32>;
pub type TrainedClassifierF32 = classifiers::TrainedClassifier<f32>;
