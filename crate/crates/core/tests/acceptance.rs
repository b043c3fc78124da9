//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! gating criterion fails. Criterion 9 is informational.

mod common;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use t20predict::classifiers::document::ModelDocument;
use t20predict::classifiers::{mlp_loss_and_gradient, train, ClassifierKind, ClassifierSpec, MlpParams};
use t20predict::cli::{run, Cli};
use t20predict::dataset::PlayerMatchLine;
use t20predict::evaluation::stratified_folds;
use t20predict::features::{build_schema, rfe_select};
use t20predict::fixture;
use t20predict::scoring::{fit_points_model, PointsModel};
use t20predict::strength::{build_rolling_ledger, team_weight, AsOf, RollingSource};

struct Gate {
    failures: usize,
}

impl Gate {
    fn record(&mut self, id: u8, pass: bool, detail: String) {
        println!("{} criterion {id}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failures += 1;
        }
    }
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn cli(args: &[&str]) -> Result<(), String> {
    let mut argv = vec!["t20predict"];
    argv.extend_from_slice(args);
    let parsed = Cli::try_parse_from(argv).map_err(|e| e.to_string())?;
    run(parsed).map_err(|e| format!("exit {}: {e}", e.code))
}

fn ols_recovery(g: &mut Gate) {
    let started = Instant::now();
    let players = common::noiseless_players(200, 1);
    let fit: PointsModel<f64> = fit_points_model(&players).expect("fit");
    let elapsed = started.elapsed().as_secs_f64();
    let truth = PointsModel::<f64>::reference().coefficients();
    let worst = fit.coefficients().iter().zip(truth).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    g.record(
        1,
        worst < 1e-6 && elapsed < 1.0,
        format!("OLS on 200 noiseless players: max |Δβ| = {worst:.2e} (< 1e-6), {elapsed:.3}s (< 1s)"),
    );
}

fn mlp_gradient(g: &mut Gate) {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let eps = 1e-5;
    let draws = 12;
    for _ in 0..draws {
        let mut params = MlpParams::<f64>::he_init(6, &[10, 10, 10], &mut rng);
        let mut flat = params.to_flat();
        for v in flat.iter_mut() {
            *v += rng.random_range(-0.1..0.1);
        }
        params.set_flat(&flat);
        let x: Vec<Vec<f64>> = (0..16).map(|_| (0..6).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        let y: Vec<u8> = (0..16).map(|_| u8::from(rng.random_bool(0.5))).collect();
        let lambda = 1e-3;
        let (_, grad) = mlp_loss_and_gradient(&params, &x, &y, lambda);
        let analytic = grad.to_flat();
        for i in 0..flat.len() {
            let mut p = params.clone();
            let mut f = flat.clone();
            f[i] = flat[i] + eps;
            p.set_flat(&f);
            let up = mlp_loss_and_gradient(&p, &x, &y, lambda).0;
            f[i] = flat[i] - eps;
            p.set_flat(&f);
            let down = mlp_loss_and_gradient(&p, &x, &y, lambda).0;
            let numeric = (up - down) / (2.0 * eps);
            let denom = analytic[i].abs().max(numeric.abs()).max(1e-6);
            worst = worst.max((analytic[i] - numeric).abs() / denom);
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    g.record(
        2,
        worst < 1e-4 && elapsed < 10.0,
        format!(
            "MLP gradient vs central differences (ε = 1e-5, {draws} draws, every parameter): max rel err = {worst:.2e} (< 1e-4), {elapsed:.2}s"
        ),
    );
}

fn stratification(g: &mut Gate) {
    let mut labels = vec![1u8; 60];
    labels.extend([0u8; 40]);
    let folds = stratified_folds(&labels, 10, 0).expect("folds");
    let exact = folds.iter().all(|f| {
        let ones = f.iter().filter(|&&i| labels[i] == 1).count();
        ones == 6 && f.len() - ones == 4
    });
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut partitions = true;
    for case in 0..50 {
        let k = rng.random_range(2..=10);
        let n = rng.random_range(2 * k..=300);
        let ones = rng.random_range(k..=n - k);
        let mut y = vec![0u8; n];
        for v in y.iter_mut().take(ones) {
            *v = 1;
        }
        let folds = stratified_folds(&y, k, case).expect("folds");
        let share = ones as f64 / k as f64;
        for f in &folds {
            let c = f.iter().filter(|&&i| y[i] == 1).count() as f64;
            worst = worst.max((c - share).abs());
        }
        let all: BTreeSet<usize> = folds.iter().flatten().copied().collect();
        partitions &= all.len() == n && folds.iter().map(Vec::len).sum::<usize>() == n;
    }
    g.record(
        3,
        exact && worst < 1.0 && partitions,
        format!("(100, 60 ones, k=10) exact 6/4 folds: {exact}; 50 random (n, k): max deviation {worst:.3} (< 1), partitions: {partitions}"),
    );
}

fn dummy_trap(g: &mut Gate) {
    let ds = common::random_matches(1000, 9, 4);
    let schema = build_schema(&ds).expect("schema");
    let widths_ok = schema.categorical_groups().iter().all(|gr| gr.width() + 1 == gr.categories.len());
    let home = schema.categorical_groups().iter().find(|gr| gr.name == "home_team").expect("home_team");
    let mut mismatches = 0;
    for m in ds.matches() {
        let (row, unseen) =
            schema.encode_values(|f| t20predict::features::match_category(m, f), |_| Some(100.0f64)).expect("encode");
        assert!(unseen.is_empty());
        let back = schema.decode_row(&row).expect("decode");
        for (feature, value) in back.categorical {
            if t20predict::features::match_category(m, &feature).as_deref() != Some(value.as_str()) {
                mismatches += 1;
            }
        }
    }
    g.record(
        4,
        widths_ok && home.width() == 12 && mismatches == 0,
        format!(
            "13-team dataset: every group k−1 columns: {widths_ok}, home_team → {} columns, round-trip mismatches on 1000 rows: {mismatches}",
            home.width()
        ),
    );
}

fn rfe_recovery(g: &mut Gate) {
    let planted: BTreeSet<String> = ["home_team_weight".to_string(), "venue".to_string()].into();
    let mut hits = 0;
    let mut agreement = Vec::new();
    for seed in 0..20 {
        let data = common::planted_signal(300, seed);
        let r = rfe_select(&data, 2, 5, seed).expect("rfe");
        if r.selected.iter().cloned().collect::<BTreeSet<_>>() == planted {
            hits += 1;
        }
        agreement.push(r.stability_agreement);
    }
    let mean = agreement.iter().sum::<f64>() / agreement.len() as f64;
    let min = agreement.iter().copied().fold(1.0, f64::min);
    g.record(
        5,
        hits >= 19 && mean >= 0.8,
        format!("planted 2-of-7 signal recovered in {hits}/20 runs (≥ 19); bootstrap agreement mean {mean:.2} (≥ 0.80), min {min:.2}"),
    );
}

fn separable_sanity(g: &mut Gate) {
    let started = Instant::now();
    let data = common::separable(500, 5);
    let mut lines = Vec::new();
    let mut ok = true;
    for kind in ClassifierKind::ALL {
        let model = train(&ClassifierSpec::default_for(kind, 0), &data).expect("train");
        let acc = common::accuracy(&model, &data);
        let need = if kind == ClassifierKind::NaiveBayes { 0.90 } else { 0.95 };
        ok &= acc >= need;
        lines.push(format!("{kind} {acc:.3}"));
    }
    let elapsed = started.elapsed().as_secs_f64();
    g.record(
        6,
        ok && elapsed < 120.0,
        format!("separable n=500 training accuracy: {} (≥ 0.95, naive Bayes ≥ 0.90), {elapsed:.1}s", lines.join(", ")),
    );
}

fn weights_fixture(g: &mut Gate) {
    let roster = fixture::reference_roster(2010, "CSK", 1017.5, 10);
    let w: f64 = team_weight(&PointsModel::reference(), &roster, 10).expect("weight");

    // 20-match season from the synthetic league, weights rebuilt on every prefix
    let league = fixture::synthetic_league(11);
    let first: Vec<String> = league
        .matches
        .matches()
        .iter()
        .filter(|m| m.season == 2008 && m.is_decisive())
        .take(20)
        .map(|m| m.match_id.clone())
        .collect();
    let season = league.matches.filter(|m| first.contains(&m.match_id));
    let lines_for = |ids: &[String]| -> Vec<PlayerMatchLine> {
        league.lines.iter().filter(|l| ids.contains(&l.match_id)).cloned().collect()
    };
    let model = PointsModel::<f64>::reference();
    let all_lines = lines_for(&first);
    let full_exact =
        build_rolling_ledger(&model, &league.performances, &season, RollingSource::Exact(&all_lines)).expect("ledger");
    let full_pro =
        build_rolling_ledger(&model, &league.performances, &season, RollingSource::ProRated).expect("ledger");
    let mut violations = 0;
    for (i, m) in season.matches().iter().enumerate() {
        // the truncated data ends at this match; its weights must be unchanged
        let ids = &first[..=i];
        let prefix = season.filter(|x| ids.contains(&x.match_id));
        let lines = lines_for(ids);
        let exact =
            build_rolling_ledger(&model, &league.performances, &prefix, RollingSource::Exact(&lines)).expect("ledger");
        let pro = build_rolling_ledger(&model, &league.performances, &prefix, RollingSource::ProRated).expect("ledger");
        for team in [&m.home_team, &m.away_team] {
            let at = AsOf::Date(m.date);
            if exact.get(m.season, team, at) != full_exact.get(m.season, team, at)
                || pro.get(m.season, team, at) != full_pro.get(m.season, team, at)
            {
                violations += 1;
            }
        }
    }
    g.record(
        7,
        w == 101.75 && season.len() == 20 && violations == 0,
        format!(
            "25-player roster weight = {w} (101.75 exactly); per-match causality over {} truncations: {violations} violations",
            season.len()
        ),
    );
}

fn determinism(g: &mut Gate) {
    let dir = tempfile::tempdir().expect("tempdir");
    let f = fixtures();
    let matches = f.join("league_matches.csv");
    let players = f.join("league_players.csv");
    let mut docs = Vec::new();
    for run_dir in ["a", "b"] {
        let out = dir.path().join(run_dir);
        cli(&[
            "--seed",
            "0",
            "--out-dir",
            out.to_str().unwrap(),
            "train",
            "--matches",
            matches.to_str().unwrap(),
            "--players",
            players.to_str().unwrap(),
            "--classifier",
            "all",
            "--holdout",
            "2018",
        ])
        .expect("train");
        docs.push(out);
    }
    let mut identical = true;
    let mut round_trip = true;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for kind in ClassifierKind::ALL {
        let name = format!("model_{kind}.json");
        let a = std::fs::read(docs[0].join(&name)).expect("doc");
        let b = std::fs::read(docs[1].join(&name)).expect("doc");
        identical &= a == b;

        let doc = ModelDocument::from_json(&a).expect("parse");
        let model = doc.classifier().expect("model");
        let again = ModelDocument::from_json(&doc.to_json()).expect("reparse").classifier().expect("model");
        let mask = model.schema().dummy_mask();
        for _ in 0..100 {
            let row: Vec<f64> = mask
                .iter()
                .map(|&d| if d { f64::from(u8::from(rng.random_bool(0.3))) } else { rng.random_range(40.0..160.0) })
                .collect();
            let p = model.predict_proba(&row).expect("p");
            let q = again.predict_proba(&row).expect("q");
            round_trip &= p.to_bits() == q.to_bits();
        }
    }
    g.record(
        8,
        identical && round_trip,
        format!("two seed-0 trainings byte-identical for all six kinds: {identical}; round-trip predictions bit-identical on 100 rows each: {round_trip}"),
    );
}

fn end_to_end(g: &mut Gate) {
    let dir = tempfile::tempdir().expect("tempdir");
    let out = dir.path().to_str().unwrap().to_string();
    let f = fixtures();
    let (matches, players, source) = match (std::env::var("T20_MATCHES"), std::env::var("T20_PLAYERS")) {
        (Ok(m), Ok(p)) => (m, p, "user-supplied data"),
        _ => (
            f.join("league_matches.csv").to_string_lossy().into_owned(),
            f.join("league_players.csv").to_string_lossy().into_owned(),
            "bundled synthetic league",
        ),
    };
    let data = ["--matches", matches.as_str(), "--players", players.as_str()];
    let mut train_args = vec!["--out-dir", out.as_str(), "train"];
    train_args.extend(data);
    train_args.extend(["--classifier", "all", "--train-through", "2017", "--holdout", "2018"]);
    let mut report_args = vec!["--out-dir", out.as_str(), "report"];
    report_args.extend(data);
    report_args.extend(["--classifier", "all", "--holdout", "2018"]);
    let result = cli(&train_args).and_then(|_| cli(&report_args));
    let report = dir.path().join("report_mlp.csv");
    let mlp = std::fs::read_to_string(&report).ok().and_then(|text| {
        let get = |k: &str| text.lines().find_map(|l| l.strip_prefix(&format!("{k},")).map(str::to_string));
        Some((get("correct")?, get("n_evaluated")?, get("accuracy")?.parse::<f64>().ok()?))
    });
    let pass = result.is_ok() && mlp.is_some() && dir.path().join("predictions_mlp.csv").exists();
    let detail = match (&result, mlp) {
        (Ok(()), Some((c, n, acc))) => format!(
            "train ≤ 2017 + report on 2018 ({source}) completed; MLP {c}/{n} = {:.2}% (informational; {} the 60–75% band; reference figure 71.66%)",
            100.0 * acc,
            if (0.60..=0.75).contains(&acc) { "inside" } else { "outside" }
        ),
        (Err(e), _) => format!("pipeline failed on {source}: {e}"),
        _ => "report file missing".to_string(),
    };
    g.record(9, pass, detail);
}

fn main() {
    let mut g = Gate { failures: 0 };
    ols_recovery(&mut g);
    mlp_gradient(&mut g);
    stratification(&mut g);
    dummy_trap(&mut g);
    rfe_recovery(&mut g);
    separable_sanity(&mut g);
    weights_fixture(&mut g);
    determinism(&mut g);
    end_to_end(&mut g);
    if g.failures > 0 {
        println!("{} criteria failed", g.failures);
        std::process::exit(1);
    }
    println!("all criteria passed");
}
