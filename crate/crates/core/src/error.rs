use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    // ingestion
    #[error("missing required column `{column}`")]
    MissingColumn { column: String },
    #[error("row {row}: unknown team `{team}`")]
    UnknownTeam { row: usize, team: String },
    #[error("row {row}: {reason}")]
    InvalidRow { row: usize, reason: String },
    #[error("row {row}: negative value {value} in `{column}`")]
    NegativeStat { row: usize, column: String, value: i64 },
    #[error("row {row}: duplicate player entry ({season}, {team}, {player})")]
    DuplicatePlayer { row: usize, season: i32, team: String, player: String },
    #[error("match {match_id} has no decisive result")]
    NoResult { match_id: String },
    #[error("invalid team registry: {0}")]
    Registry(String),

    // points regression
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("regressor matrix is rank deficient; `{column}` is linearly dependent on the others")]
    RankDeficient { column: String },

    // team strength
    #[error("roster is empty")]
    EmptyRoster,
    #[error("team appearances must be at least 1")]
    ZeroAppearances,
    #[error("roster mixes teams or seasons: {0}")]
    MixedRoster(String),
    #[error("no player performances for {team} in season {season}")]
    MissingRoster { team: String, season: i32 },
    #[error("team weight ledger has no entry for {team} at {at}")]
    LedgerMiss { team: String, at: String },

    // features
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("feature selection needs at least {needed} rows, got {got}")]
    TooFewRows { needed: usize, got: usize },
    #[error("target feature count {target} exceeds the {available} available features")]
    TargetTooLarge { target: usize, available: usize },
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),

    // classifiers
    #[error("training data contains a single class")]
    SingleClassData,
    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),
    #[error("optimizer did not converge; loss trajectory tail: {trajectory:?}")]
    NonConvergence { trajectory: Vec<f64> },
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("unsupported model document version {found} (supported: {supported})")]
    VersionMismatch { found: u64, supported: u64 },
    #[error("corrupt model document: {0}")]
    CorruptDocument(String),

    // evaluation
    #[error("fold count k = {0} is invalid (need k >= 2)")]
    BadK(usize),
    #[error("class {class} has {count} members, fewer than k = {k}")]
    TooFewPerClass { class: u8, count: usize, k: usize },
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io { path: path.as_ref().display().to_string(), source }
    }
}
