#![allow(dead_code)]

use chrono::{Days, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use t20predict::dataset::{MatchDataset, MatchRecord, PlayerPerformance, TeamRegistry, TossDecision};
use t20predict::features::{CategoricalGroup, EncodedDataset, FeatureSchema};
use t20predict::scoring::PointsModel;

pub const TEAMS: [&str; 13] = ["CSK", "DC", "DD", "GL", "KKR", "KTK", "KXIP", "MI", "PWI", "RCB", "RPS", "RR", "SRH"];

/// Players whose official points follow the reference weights exactly.
pub fn noiseless_players(n: usize, seed: u64) -> Vec<PlayerPerformance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let model = PointsModel::<f64>::reference();
    (0..n)
        .map(|i| {
            let stats = [
                rng.random_range(0..25),
                rng.random_range(0..200),
                rng.random_range(0..60),
                rng.random_range(0..40),
                rng.random_range(0..15),
                rng.random_range(0..6),
            ];
            PlayerPerformance {
                season: 2010,
                team: "CSK".into(),
                player: format!("p{i:03}"),
                appearances: rng.random_range(1..17),
                wickets: 0,
                dot_balls: 0,
                fours: 0,
                sixes: 0,
                catches: 0,
                stumpings: 0,
                official_points: Some(model.score_stats(&stats.map(f64::from))),
            }
            .with_stats(stats)
        })
        .collect()
}

/// Random matches over all thirteen franchises and `venues` grounds.
pub fn random_matches(n: usize, venues: usize, seed: u64) -> MatchDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = NaiveDate::from_ymd_opt(2012, 4, 1).unwrap();
    let records = (0..n)
        .map(|i| {
            // the first 13 matches put every team at home once
            let h = if i < TEAMS.len() { i } else { rng.random_range(0..TEAMS.len()) };
            let mut a = rng.random_range(0..TEAMS.len() - 1);
            if a >= h {
                a += 1;
            }
            let (home, away) = (TEAMS[h], TEAMS[a]);
            let toss = if rng.random_bool(0.5) { home } else { away };
            MatchRecord {
                match_id: format!("m{i:04}"),
                season: 2012,
                date: start + Days::new(i as u64 / 4),
                home_team: home.into(),
                away_team: away.into(),
                venue: format!("Ground {}", rng.random_range(0..venues)),
                toss_winner: toss.into(),
                toss_decision: if rng.random_bool(0.5) { TossDecision::Bat } else { TossDecision::Field },
                winner: Some(if rng.random_bool(0.5) { home } else { away }.into()),
            }
        })
        .collect();
    MatchDataset::from_records(records, TeamRegistry::default()).unwrap()
}

/// Seven original features (five categorical, two numeric) with random rows.
pub fn seven_feature_schema() -> FeatureSchema {
    let cats = |n: usize| (0..n).map(|i| format!("c{i}")).collect::<Vec<_>>();
    FeatureSchema::new(
        vec![
            CategoricalGroup::new("home_team", cats(4)),
            CategoricalGroup::new("away_team", cats(4)),
            CategoricalGroup::new("toss_winner", cats(2)),
            CategoricalGroup::new("toss_decision", cats(2)),
            CategoricalGroup::new("venue", cats(3)),
        ],
        vec!["home_team_weight".into(), "away_team_weight".into()],
    )
    .unwrap()
}

/// Random categorical levels and numerics for the seven-feature schema.
fn random_row(schema: &FeatureSchema, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<usize>, [f64; 2]) {
    let levels: Vec<usize> =
        schema.categorical_groups().iter().map(|g| rng.random_range(0..g.categories.len())).collect();
    let nums = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
    let (row, _) = schema
        .encode_values(
            |name| {
                let gi = schema.categorical_groups().iter().position(|g| g.name == name)?;
                Some(schema.categorical_groups()[gi].categories[levels[gi]].clone())
            },
            |name| Some(if name == "home_team_weight" { nums[0] } else { nums[1] }),
        )
        .unwrap();
    (row, levels, nums)
}

/// Labels depend only on `home_team_weight` and `venue`.
pub fn planted_signal(n: usize, seed: u64) -> EncodedDataset<f64> {
    let schema = seven_feature_schema();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let venue = schema.categorical_groups().iter().position(|g| g.name == "venue").unwrap();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..n {
        let (row, levels, nums) = random_row(&schema, &mut rng);
        let venue_effect = [-1.5, 0.0, 1.5][levels[venue]];
        let z = 3.0 * nums[0] + venue_effect + rng.random_range(-0.5..0.5);
        labels.push(u8::from(z > 0.0));
        rows.push(row);
    }
    EncodedDataset::new(rows, labels, schema, (0..n).map(|i| i.to_string()).collect()).unwrap()
}

/// Linearly separable data with a margin: class 1 iff
/// `w1 - w2 + dummy bonus > 0`, rows within 0.3 of the boundary discarded.
pub fn separable(n: usize, seed: u64) -> EncodedDataset<f64> {
    let schema = seven_feature_schema();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    while rows.len() < n {
        let (row, _, nums) = random_row(&schema, &mut rng);
        let score = 2.0 * (nums[0] - nums[1]) + 0.5 * row[0];
        if score.abs() < 0.3 {
            continue;
        }
        labels.push(u8::from(score > 0.0));
        rows.push(row);
    }
    EncodedDataset::new(rows, labels, schema, (0..n).map(|i| i.to_string()).collect()).unwrap()
}

pub fn accuracy(model: &t20predict::TrainedClassifier, data: &EncodedDataset<f64>) -> f64 {
    let probs = model.predict_dataset(data).unwrap();
    let correct =
        probs.iter().zip(data.labels()).filter(|(&p, &y)| t20predict::classifiers::predicted_label(p) == y).count();
    correct as f64 / data.len() as f64
}
