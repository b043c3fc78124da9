//! Command-line front end.
//!
//! Exit codes: 0 success, 2 ingestion or validation failure, 3 training
//! failure, 4 bad prediction input. Every file goes under `--out-dir`:
//! `team_weights.csv`, `points_model.json`, `points_residuals.csv`,
//! `feature_ranking.csv`, `model_<kind>.json`, `cv_<kind>.csv`,
//! `report_<kind>.csv` and `predictions_<kind>.csv`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::classifiers::document::{to_json_full_precision, write_atomic, ModelDocument};
use crate::classifiers::{predicted_label, train, ClassifierKind, ClassifierSpec, Hyperparameters};
use crate::dataset::{
    load_matches, load_player_match_lines, load_player_performances, write_matches, write_player_match_lines,
    write_player_performances, MatchDataset, MatchRecord, PlayerMatchLine, PlayerPerformance, TeamRegistry,
    TossDecision,
};
use crate::error::Error;
use crate::evaluation::{cross_validate, evaluate_holdout, write_predictions_csv, EvalReport};
use crate::features::{build_schema, encode, encode_match, rfe_select, EncodedDataset};
use crate::fixture;
use crate::scoring::{fit_points_model, residual_report, PointsModel};
use crate::strength::{build_ledger, build_rolling_ledger, LedgerMode, RollingSource, TeamWeightLedger};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_FOLDS: usize = 10;
pub const DEFAULT_RFE_RESAMPLES: usize = 5;
pub const MIN_OFFICIAL_POINTS_ROWS: usize = 7;

#[derive(Debug, Parser)]
#[command(name = "t20predict", version, about = "Predict T20 league match outcomes from post-toss information")]
pub struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every random choice (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory receiving all outputs (default: current directory).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct DataArgs {
    #[arg(long)]
    pub matches: Option<PathBuf>,
    #[arg(long)]
    pub players: Option<PathBuf>,
    /// Optional per-match player statistics for exact rolling weights.
    #[arg(long)]
    pub player_matches: Option<PathBuf>,
    #[arg(long)]
    pub ledger_mode: Option<LedgerMode>,
    /// `fit` (OLS on official points), `reference` (bundled weights) or `auto`.
    #[arg(long)]
    pub points_model: Option<PointsChoice>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ClassifierArgs {
    /// Classifier kinds (repeat or comma-separate); `all` selects all six.
    #[arg(long = "classifier", value_delimiter = ',')]
    pub classifiers: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and validate the CSV inputs.
    Ingest(DataArgs),
    /// Fit the linear player points model and report residuals.
    FitPoints(DataArgs),
    /// Compute team weights and write team_weights.csv.
    TeamWeights(DataArgs),
    /// Rank the original features by recursive elimination.
    SelectFeatures {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        target: Option<usize>,
        #[arg(long)]
        resamples: Option<usize>,
        #[arg(long)]
        train_through: Option<i32>,
    },
    /// Train classifiers and write model documents.
    Train {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        kinds: ClassifierArgs,
        /// Last season used for training.
        #[arg(long)]
        train_through: Option<i32>,
        /// Season held out for `report`; must follow the training seasons.
        #[arg(long)]
        holdout: Option<i32>,
        /// Keep only the top N original features found by elimination.
        #[arg(long)]
        select: Option<usize>,
    },
    /// Stratified k-fold cross-validation on the training seasons.
    Cv {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        kinds: ClassifierArgs,
        #[arg(long)]
        folds: Option<usize>,
        #[arg(long)]
        train_through: Option<i32>,
    },
    /// Predict one match from its post-toss facts.
    Predict {
        #[arg(long)]
        model: Option<PathBuf>,
        /// team_weights.csv produced by `team-weights`.
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Season whose weights apply (default: latest in the weights file).
        #[arg(long)]
        season: Option<i32>,
        #[arg(long)]
        home: String,
        #[arg(long)]
        away: String,
        #[arg(long)]
        venue: String,
        #[arg(long)]
        toss_winner: String,
        #[arg(long)]
        toss_decision: TossDecision,
    },
    /// Evaluate trained models on the holdout season.
    Report {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        kinds: ClassifierArgs,
        /// A single model document (default: model_<kind>.json in the output directory).
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        holdout: Option<i32>,
    },
    /// Write the bundled synthetic league and reference season as CSV files.
    GenerateFixture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointsChoice {
    /// Fit when at least seven rows carry official points, else use the reference weights.
    #[default]
    Auto,
    Fit,
    Reference,
}

impl std::str::FromStr for PointsChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(PointsChoice::Auto),
            "fit" => Ok(PointsChoice::Fit),
            "reference" => Ok(PointsChoice::Reference),
            _ => Err(format!("points model must be auto, fit or reference, got `{s}`")),
        }
    }
}

/// Values readable from the `--config` file. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub matches: Option<PathBuf>,
    pub players: Option<PathBuf>,
    pub player_matches: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub weights: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub ledger_mode: Option<LedgerMode>,
    pub points_model: Option<PointsChoice>,
    pub classifiers: Option<Vec<String>>,
    pub folds: Option<usize>,
    pub seed: Option<u64>,
    pub train_through: Option<i32>,
    pub holdout_season: Option<i32>,
    pub select_features: Option<usize>,
    pub rfe_resamples: Option<usize>,
    /// Per-kind overrides, e.g. `[hyperparameters.mlp] epochs = 500`.
    pub hyperparameters: BTreeMap<String, toml::Table>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::new(2, Error::io(path, e)))?;
        toml::from_str(&text).map_err(|e| CliError::msg(2, format!("config {}: {e}", path.display())))
    }
}

/// An error with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, err: Error) -> Self {
        CliError { code, message: err.to_string() }
    }

    pub fn msg(code: u8, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn stage(code: u8) -> impl Fn(Error) -> CliError {
    move |e| CliError::new(code, e)
}

type CliResult<T = ()> = Result<T, CliError>;

/// Flags merged over the config file.
struct Settings {
    config: RunConfig,
    seed: u64,
    out_dir: PathBuf,
}

impl Settings {
    fn out(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    fn data(&self, args: &DataArgs) -> DataSettings {
        DataSettings {
            matches: args.matches.clone().or_else(|| self.config.matches.clone()),
            players: args.players.clone().or_else(|| self.config.players.clone()),
            player_matches: args.player_matches.clone().or_else(|| self.config.player_matches.clone()),
            ledger_mode: args.ledger_mode.or(self.config.ledger_mode).unwrap_or_default(),
            points: args.points_model.or(self.config.points_model).unwrap_or_default(),
        }
    }

    fn kinds(&self, args: &ClassifierArgs) -> CliResult<Vec<ClassifierKind>> {
        let names = if args.classifiers.is_empty() {
            self.config.classifiers.clone().unwrap_or_else(|| vec!["mlp".to_string()])
        } else {
            args.classifiers.clone()
        };
        let mut kinds = Vec::new();
        for n in names {
            if n.trim() == "all" {
                kinds.extend(ClassifierKind::ALL);
            } else {
                kinds.push(n.parse().map_err(|e: String| CliError::msg(3, e))?);
            }
        }
        kinds.dedup();
        Ok(kinds)
    }

    fn spec(&self, kind: ClassifierKind) -> CliResult<ClassifierSpec> {
        let defaults = Hyperparameters::defaults(kind);
        let Some(overrides) = self.config.hyperparameters.get(kind.as_str()) else {
            return Ok(ClassifierSpec::new(defaults, self.seed));
        };
        let bad = |m: String| CliError::new(3, Error::InvalidHyperparameter(m));
        let mut value = serde_json::to_value(&defaults).expect("hyperparameters serialize");
        let params = value["hyperparameters"].as_object_mut().expect("hyperparameters are an object");
        for (k, v) in overrides {
            if !params.contains_key(k) {
                return Err(bad(format!("{kind} has no hyperparameter `{k}`")));
            }
            params.insert(k.clone(), serde_json::to_value(v).map_err(|e| bad(e.to_string()))?);
        }
        let hp: Hyperparameters = serde_json::from_value(value).map_err(|e| bad(format!("{kind}: {e}")))?;
        hp.validate().map_err(stage(3))?;
        Ok(ClassifierSpec::new(hp, self.seed))
    }
}

struct DataSettings {
    matches: Option<PathBuf>,
    players: Option<PathBuf>,
    player_matches: Option<PathBuf>,
    ledger_mode: LedgerMode,
    points: PointsChoice,
}

struct Inputs {
    dataset: MatchDataset,
    performances: Vec<PlayerPerformance>,
    lines: Option<Vec<PlayerMatchLine>>,
}

fn load_inputs(d: &DataSettings) -> CliResult<Inputs> {
    let registry = TeamRegistry::default();
    let matches = d
        .matches
        .as_ref()
        .ok_or_else(|| CliError::msg(2, "no matches file: pass --matches or set `matches` in the config"))?;
    let players = d
        .players
        .as_ref()
        .ok_or_else(|| CliError::msg(2, "no players file: pass --players or set `players` in the config"))?;
    let dataset = load_matches(matches, &registry).map_err(stage(2))?;
    let performances = load_player_performances(players, &registry).map_err(stage(2))?;
    if performances.is_empty() {
        return Err(CliError::new(
            2,
            Error::InsufficientData(format!(
                "{} has no player rows; team weights cannot be computed",
                players.display()
            )),
        ));
    }
    let lines = match &d.player_matches {
        Some(p) => Some(load_player_match_lines(p, &registry).map_err(stage(2))?),
        None => None,
    };
    Ok(Inputs { dataset, performances, lines })
}

fn points_model(choice: PointsChoice, perfs: &[PlayerPerformance]) -> CliResult<PointsModel<f64>> {
    let with_points = perfs.iter().filter(|p| p.official_points.is_some()).count();
    match choice {
        PointsChoice::Reference => Ok(PointsModel::reference()),
        PointsChoice::Fit => fit_points_model(perfs).map_err(stage(3)),
        PointsChoice::Auto if with_points >= MIN_OFFICIAL_POINTS_ROWS => fit_points_model(perfs).map_err(stage(3)),
        PointsChoice::Auto => {
            log::info!("only {with_points} rows carry official points; using the reference points model");
            Ok(PointsModel::reference())
        }
    }
}

fn ledger(
    model: &PointsModel<f64>,
    inputs: &Inputs,
    dataset: &MatchDataset,
    mode: LedgerMode,
) -> CliResult<TeamWeightLedger<f64>> {
    match (mode, &inputs.lines) {
        (LedgerMode::PerMatch, Some(lines)) => {
            build_rolling_ledger(model, &inputs.performances, dataset, RollingSource::Exact(lines))
        }
        _ => build_ledger(model, &inputs.performances, dataset, mode),
    }
    .map_err(stage(2))
}

fn training_slice(dataset: &MatchDataset, through: Option<i32>) -> CliResult<MatchDataset> {
    let last = through.or_else(|| dataset.seasons().last().copied());
    let train = match last {
        Some(s) => dataset.filter(|m| m.season <= s),
        None => dataset.clone(),
    };
    if train.decisive().next().is_none() {
        return Err(CliError::new(3, Error::EmptyDataset));
    }
    Ok(train)
}

fn encoded_training(
    d: &DataSettings,
    inputs: &Inputs,
    through: Option<i32>,
) -> CliResult<(PointsModel<f64>, EncodedDataset<f64>)> {
    let pm = points_model(d.points, &inputs.performances)?;
    let train = training_slice(&inputs.dataset, through)?;
    let led = ledger(&pm, inputs, &train, d.ledger_mode)?;
    let schema = build_schema(&train).map_err(stage(3))?;
    let encoded = encode(&train, &led, &schema).map_err(stage(3))?;
    Ok((pm, encoded))
}

fn cmd_ingest(s: &Settings, args: &DataArgs) -> CliResult {
    let d = s.data(args);
    let inputs = load_inputs(&d)?;
    let ds = &inputs.dataset;
    let excluded = ds.no_result_ids();
    println!("{} matches loaded, {} excluded (no result)", ds.len(), excluded.len());
    for id in &excluded {
        println!("  excluded: {id}");
    }
    let seasons = ds.seasons();
    if let (Some(first), Some(last)) = (seasons.first(), seasons.last()) {
        println!("seasons: {first}–{last} ({} seasons), venues: {}", seasons.len(), ds.venues().len());
    }
    let with_points = inputs.performances.iter().filter(|p| p.official_points.is_some()).count();
    println!("{} player-season rows ({with_points} with official points)", inputs.performances.len());
    if with_points < MIN_OFFICIAL_POINTS_ROWS {
        log::warn!("fewer than {MIN_OFFICIAL_POINTS_ROWS} rows with official points; fit-points will fail and the reference model is used");
    }
    if let Some(lines) = &inputs.lines {
        println!("{} per-match player lines", lines.len());
    }
    let rosters: std::collections::BTreeSet<(i32, &str)> =
        inputs.performances.iter().map(|p| (p.season, p.team.as_str())).collect();
    for m in ds.matches() {
        for t in [&m.home_team, &m.away_team] {
            if !rosters.contains(&(m.season, t.as_str())) {
                return Err(CliError::new(2, Error::MissingRoster { team: t.clone(), season: m.season }));
            }
        }
    }
    println!("validation passed");
    Ok(())
}

fn cmd_fit_points(s: &Settings, args: &DataArgs) -> CliResult {
    let d = s.data(args);
    let inputs = load_inputs(&d)?;
    let model: PointsModel<f64> = fit_points_model(&inputs.performances).map_err(stage(3))?;
    let report = residual_report(&model, &inputs.performances).map_err(stage(3))?;
    println!(
        "points = {:.6} + {:.6}·wickets + {:.6}·dot_balls + {:.6}·fours + {:.6}·sixes + {:.6}·catches + {:.6}·stumpings",
        model.intercept,
        model.per_wicket,
        model.per_dot_ball,
        model.per_four,
        model.per_six,
        model.per_catch,
        model.per_stumping
    );
    println!("residual RMSE over {} rows: {:.6e}", report.residuals.len(), report.rmse);
    write_atomic(&s.out("points_model.json"), &to_json_full_precision(&model)).map_err(stage(2))?;
    let path = s.out("points_residuals.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::new(2, e.into()))?;
    let csv_err = |e: csv::Error| CliError::new(2, e.into());
    w.write_record(["season", "team", "player", "official", "predicted", "residual"]).map_err(csv_err)?;
    for r in &report.residuals {
        w.write_record([
            r.season.to_string(),
            r.team.clone(),
            r.player.clone(),
            r.official.to_string(),
            r.predicted.to_string(),
            r.residual.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::new(2, Error::io(&path, e)))?;
    Ok(())
}

fn cmd_team_weights(s: &Settings, args: &DataArgs) -> CliResult {
    let d = s.data(args);
    let inputs = load_inputs(&d)?;
    let pm = points_model(d.points, &inputs.performances)?;
    let led = ledger(&pm, &inputs, &inputs.dataset, d.ledger_mode)?;
    let path = s.out("team_weights.csv");
    led.write_csv(&path).map_err(stage(2))?;
    println!("{} {} weights written to {}", led.len(), led.mode(), path.display());
    Ok(())
}

fn cmd_select_features(
    s: &Settings,
    args: &DataArgs,
    target: Option<usize>,
    resamples: Option<usize>,
    through: Option<i32>,
) -> CliResult {
    let d = s.data(args);
    let inputs = load_inputs(&d)?;
    let through = through.or(s.config.train_through);
    let (_, encoded) = encoded_training(&d, &inputs, through)?;
    let n_features = encoded.schema().spans().len();
    let target = target.or(s.config.select_features).unwrap_or(n_features);
    let resamples = resamples.or(s.config.rfe_resamples).unwrap_or(DEFAULT_RFE_RESAMPLES);
    let rfe = rfe_select(&encoded, target, resamples, s.seed).map_err(stage(3))?;
    let score_at: BTreeMap<usize, f64> = rfe.per_subset_scores.iter().copied().collect();
    println!("{:<20}{:>6}{:>18}{:>16}", "feature", "rank", "mean_importance", "cv_accuracy");
    let path = s.out("feature_ranking.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::new(2, e.into()))?;
    let csv_err = |e: csv::Error| CliError::new(2, e.into());
    w.write_record(["feature", "rank", "mean_importance", "cv_accuracy", "selected"]).map_err(csv_err)?;
    for (i, (name, imp)) in rfe.mean_importance.iter().enumerate() {
        let rank = i + 1;
        let acc = score_at.get(&rank).map_or(String::new(), |a| a.to_string());
        println!("{name:<20}{rank:>6}{imp:>18.6}{:>16}", score_at.get(&rank).map_or("-".into(), |a| format!("{a:.4}")));
        w.write_record([name.clone(), rank.to_string(), imp.to_string(), acc, (rank <= target).to_string()])
            .map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::new(2, Error::io(&path, e)))?;
    println!("selected ({target}): {}", rfe.selected.join(", "));
    println!("bootstrap agreement over {} resamples: {:.2}", rfe.stability_runs, rfe.stability_agreement);
    Ok(())
}

fn resolve_split(s: &Settings, through: Option<i32>, holdout: Option<i32>) -> CliResult<(Option<i32>, Option<i32>)> {
    let through = through.or(s.config.train_through);
    let holdout = holdout.or(s.config.holdout_season);
    match (through, holdout) {
        (Some(t), Some(h)) if h <= t => {
            Err(CliError::msg(3, format!("holdout season {h} overlaps the training seasons (train through {t})")))
        }
        (None, Some(h)) => Ok((Some(h - 1), Some(h))),
        other => Ok(other),
    }
}

fn cmd_train(
    s: &Settings,
    args: &DataArgs,
    kinds: &ClassifierArgs,
    through: Option<i32>,
    holdout: Option<i32>,
    select: Option<usize>,
) -> CliResult {
    let (through, _) = resolve_split(s, through, holdout)?;
    let kinds = s.kinds(kinds)?;
    let specs = kinds.iter().map(|&k| s.spec(k)).collect::<CliResult<Vec<_>>>()?;
    let d = s.data(args);
    let inputs = load_inputs(&d)?;
    let (pm, mut encoded) = encoded_training(&d, &inputs, through)?;
    if let Some(n) = select.or(s.config.select_features) {
        let resamples = s.config.rfe_resamples.unwrap_or(DEFAULT_RFE_RESAMPLES);
        let rfe = rfe_select(&encoded, n, resamples, s.seed).map_err(stage(3))?;
        println!("selected features: {}", rfe.selected.join(", "));
        encoded = encoded.project(&rfe.selected).map_err(stage(3))?;
    }
    for spec in specs {
        let model = train(&spec, &encoded).map_err(stage(3))?;
        let doc = ModelDocument::new(&model, pm, d.ledger_mode);
        let path = s.out(&format!("model_{}.json", spec.kind()));
        doc.write(&path).map_err(stage(3))?;
        println!("{}: trained on {} matches, written to {}", spec.kind(), encoded.len(), path.display());
    }
    Ok(())
}

fn cmd_cv(
    s: &Settings,
    args: &DataArgs,
    kinds: &ClassifierArgs,
    folds: Option<usize>,
    through: Option<i32>,
) -> CliResult {
    let kinds = s.kinds(kinds)?;
    let specs = kinds.iter().map(|&k| s.spec(k)).collect::<CliResult<Vec<_>>>()?;
    let d = s.data(args);
    let inputs = load_inputs(&d)?;
    let through = through.or(s.config.train_through);
    let (_, encoded) = encoded_training(&d, &inputs, through)?;
    let k = folds.or(s.config.folds).unwrap_or(DEFAULT_FOLDS);
    for spec in specs {
        let report = cross_validate(&spec, &encoded, k, s.seed).map_err(stage(3))?;
        print!("{}", report.render_table(&format!("{}: {k}-fold stratified CV", spec.kind())));
        report.write_csv(s.out(&format!("cv_{}.csv", spec.kind()))).map_err(stage(2))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_predict(
    s: &Settings,
    model: Option<&PathBuf>,
    weights: Option<&PathBuf>,
    season: Option<i32>,
    home: &str,
    away: &str,
    venue: &str,
    toss_winner: &str,
    toss_decision: TossDecision,
) -> CliResult {
    let registry = TeamRegistry::default();
    for t in [home, away, toss_winner] {
        if !registry.contains(t) {
            return Err(CliError::msg(4, format!("unknown team `{t}`")));
        }
    }
    if home == away {
        return Err(CliError::msg(4, "home and away teams must differ"));
    }
    if toss_winner != home && toss_winner != away {
        return Err(CliError::msg(4, format!("toss winner `{toss_winner}` is not one of {home} / {away}")));
    }
    let model_path = model.cloned().or_else(|| s.config.model.clone()).unwrap_or_else(|| s.out("model_mlp.json"));
    let doc = ModelDocument::<f64>::read(&model_path).map_err(stage(4))?;
    let classifier = doc.classifier().map_err(stage(4))?;
    let weights_path =
        weights.cloned().or_else(|| s.config.weights.clone()).unwrap_or_else(|| s.out("team_weights.csv"));
    let ledger = TeamWeightLedger::<f64>::read_csv(&weights_path).map_err(stage(4))?;
    let season = season
        .or_else(|| ledger.entries().keys().map(|k| k.season).max())
        .ok_or_else(|| CliError::msg(4, format!("{} holds no weights", weights_path.display())))?;
    let weight = |team: &str| -> CliResult<f64> {
        if let Some((_, w)) = ledger.latest(team, Some(season)) {
            return Ok(w);
        }
        let w = ledger
            .league_median(Some(season))
            .ok_or_else(|| CliError::msg(4, format!("no weight for `{team}` and no league data to cold-start from")))?;
        log::warn!("{team} has no weight up to season {season}; using the league median {w}");
        Ok(w)
    };
    let (w1, w2) = (weight(home)?, weight(away)?);

    let date = chrono::NaiveDate::from_ymd_opt(season, 12, 31).expect("valid date");
    let m = MatchRecord {
        match_id: "query".into(),
        season,
        date,
        home_team: home.into(),
        away_team: away.into(),
        venue: crate::dataset::normalize_venue(venue),
        toss_winner: toss_winner.into(),
        toss_decision,
        winner: None,
    };
    let mut query = TeamWeightLedger::new(LedgerMode::PerSeason);
    query.insert(season, home, crate::strength::AsOf::Season, w1);
    query.insert(season, away, crate::strength::AsOf::Season, w2);
    let (row, unseen) = encode_match(&m, &query, classifier.schema()).map_err(stage(4))?;
    for (feature, value) in unseen {
        log::warn!("unseen {feature} `{value}`; encoded as the dropped level");
    }
    let p = classifier.predict_proba(&row).map_err(stage(4))?;
    let winner = if predicted_label(p) == 1 { home } else { away };
    println!(
        "predicted winner: {winner}  p(home win) = {p:.4}  home_team_weight = {w1}  away_team_weight = {w2}  model = {}",
        classifier.kind()
    );
    Ok(())
}

fn cmd_report(
    s: &Settings,
    args: &DataArgs,
    kinds: &ClassifierArgs,
    model: Option<&PathBuf>,
    holdout: Option<i32>,
) -> CliResult {
    let d = s.data(args);
    let inputs = load_inputs(&d)?;
    let holdout = holdout
        .or(s.config.holdout_season)
        .or_else(|| inputs.dataset.seasons().last().copied())
        .ok_or_else(|| CliError::new(2, Error::EmptyDataset))?;
    let paths: Vec<PathBuf> = match model.cloned().or_else(|| s.config.model.clone()) {
        Some(p) => vec![p],
        None => s.kinds(kinds)?.iter().map(|k| s.out(&format!("model_{k}.json"))).collect(),
    };
    let test = inputs.dataset.filter(|m| m.season == holdout);
    if test.decisive().next().is_none() {
        return Err(CliError::msg(2, format!("holdout season {holdout} has no decisive matches")));
    }
    let mut summary = Vec::new();
    for path in paths {
        let doc = ModelDocument::<f64>::read(&path).map_err(stage(3))?;
        let classifier = doc.classifier().map_err(stage(3))?;
        let seen = inputs.dataset.filter(|m| m.season <= holdout);
        let led = ledger(&doc.points_model, &inputs, &seen, doc.metadata.ledger_mode)?;
        let encoded = encode(&test, &led, classifier.schema()).map_err(stage(3))?;
        let (report, records) = evaluate_holdout(&classifier, &encoded).map_err(stage(3))?;
        let kind = classifier.kind();
        print!("{}", report.render_table(&format!("{kind}: holdout season {holdout}")));
        report.write_csv(s.out(&format!("report_{kind}.csv"))).map_err(stage(2))?;
        write_predictions_csv(s.out(&format!("predictions_{kind}.csv")), &records).map_err(stage(2))?;
        summary.push((kind, report));
    }
    print_summary(holdout, &summary);
    Ok(())
}

fn print_summary(holdout: i32, rows: &[(ClassifierKind, EvalReport)]) {
    let n = rows.first().map_or(0, |(_, r)| r.n_evaluated);
    println!("performance on season {holdout}");
    println!(
        "{:<22}{:>36}{:>10}{:>14}",
        "classifier",
        format!("correct predictions (of {n} matches)"),
        "accuracy",
        "weighted f1"
    );
    for (k, r) in rows {
        println!("{:<22}{:>36}{:>9.2}%{:>14.2}", k.as_str(), r.correct, 100.0 * r.accuracy, r.weighted_avg.f1);
    }
}

fn cmd_generate_fixture(s: &Settings) -> CliResult {
    std::fs::create_dir_all(&s.out_dir).map_err(|e| CliError::new(2, Error::io(&s.out_dir, e)))?;
    let league = fixture::synthetic_league(s.seed);
    write_matches(s.out("league_matches.csv"), &league.matches).map_err(stage(2))?;
    write_player_performances(s.out("league_players.csv"), &league.performances).map_err(stage(2))?;
    write_player_match_lines(s.out("league_player_matches.csv"), &league.lines).map_err(stage(2))?;
    let reference = fixture::reference_season();
    write_matches(s.out("reference_matches.csv"), &reference.matches).map_err(stage(2))?;
    write_player_performances(s.out("reference_players.csv"), &reference.performances).map_err(stage(2))?;
    println!(
        "league: {} matches, {} player-season rows, {} per-match lines; reference season: {} matches",
        league.matches.len(),
        league.performances.len(),
        league.lines.len(),
        reference.matches.len()
    );
    Ok(())
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> CliResult {
    let config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let seed = cli.seed.or(config.seed).unwrap_or(DEFAULT_SEED);
    let out_dir = cli.out_dir.clone().or_else(|| config.out_dir.clone()).unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::new(2, Error::io(&out_dir, e)))?;
    let s = Settings { config, seed, out_dir };
    match &cli.command {
        Command::Ingest(a) => cmd_ingest(&s, a),
        Command::FitPoints(a) => cmd_fit_points(&s, a),
        Command::TeamWeights(a) => cmd_team_weights(&s, a),
        Command::SelectFeatures { data, target, resamples, train_through } => {
            cmd_select_features(&s, data, *target, *resamples, *train_through)
        }
        Command::Train { data, kinds, train_through, holdout, select } => {
            cmd_train(&s, data, kinds, *train_through, *holdout, *select)
        }
        Command::Cv { data, kinds, folds, train_through } => cmd_cv(&s, data, kinds, *folds, *train_through),
        Command::Predict { model, weights, season, home, away, venue, toss_winner, toss_decision } => {
            cmd_predict(&s, model.as_ref(), weights.as_ref(), *season, home, away, venue, toss_winner, *toss_decision)
        }
        Command::Report { data, kinds, model, holdout } => cmd_report(&s, data, kinds, model.as_ref(), *holdout),
        Command::GenerateFixture => cmd_generate_fixture(&s),
    }
}

/// Process entry point: parses arguments, runs, maps errors to exit codes.
pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).format_timestamp(None).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn overlapping_holdout_is_a_training_error() {
        let s = Settings { config: RunConfig::default(), seed: 0, out_dir: PathBuf::from(".") };
        let err = resolve_split(&s, Some(2018), Some(2018)).expect_err("overlap");
        assert_eq!(err.code, 3);
        assert_eq!(resolve_split(&s, None, Some(2018)).unwrap(), (Some(2017), Some(2018)));
    }

    #[test]
    fn config_overrides_hyperparameters() {
        let config: RunConfig = toml::from_str("seed = 4\n[hyperparameters.mlp]\nepochs = 50\n").unwrap();
        let s = Settings { config, seed: 4, out_dir: PathBuf::from(".") };
        let spec = s.spec(ClassifierKind::Mlp).unwrap();
        match spec.hyperparameters {
            Hyperparameters::Mlp(m) => assert_eq!(m.epochs, 50),
            other => panic!("unexpected {other:?}"),
        }
        let bad: RunConfig = toml::from_str("[hyperparameters.mlp]\nhidden_layers = 4\n").unwrap();
        let s = Settings { config: bad, seed: 0, out_dir: PathBuf::from(".") };
        assert_eq!(s.spec(ClassifierKind::Mlp).err().unwrap().code, 3);
    }
}
