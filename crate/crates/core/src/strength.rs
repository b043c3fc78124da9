//! Team strength: the summed points of a team's eleven most-used players
//! divided by the team's appearances, computed either once per season or
//! rolling match by match.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::dataset::{MatchDataset, MatchRecord, PlayerMatchLine, PlayerPerformance};
use crate::error::{Error, Result};
use crate::scalar::{median, Scalar};
use crate::scoring::{stats_as, PointsModel};

/// Number of players counted towards a team's weight.
pub const TOP_PLAYERS: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LedgerMode {
    #[default]
    PerSeason,
    PerMatch,
}

impl std::str::FromStr for LedgerMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().replace('-', "_").as_str() {
            "per_season" => Ok(LedgerMode::PerSeason),
            "per_match" => Ok(LedgerMode::PerMatch),
            other => Err(format!("ledger mode must be per_season or per_match, got `{other}`")),
        }
    }
}

impl fmt::Display for LedgerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LedgerMode::PerSeason => "per_season",
            LedgerMode::PerMatch => "per_match",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AsOf {
    Season,
    Date(NaiveDate),
}

impl fmt::Display for AsOf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsOf::Season => f.write_str("season"),
            AsOf::Date(d) => write!(f, "{}", d.format("%Y-%m-%d")),
        }
    }
}

/// Ordered (season, team, as_of) so iteration matches the CSV sort order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LedgerKey {
    pub season: i32,
    pub team: String,
    pub as_of: AsOf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeamWeightLedger<T> {
    mode: LedgerMode,
    entries: BTreeMap<LedgerKey, T>,
}

impl<T: Scalar> TeamWeightLedger<T> {
    pub fn new(mode: LedgerMode) -> Self {
        TeamWeightLedger { mode, entries: BTreeMap::new() }
    }

    pub fn mode(&self) -> LedgerMode {
        self.mode
    }

    pub fn entries(&self) -> &BTreeMap<LedgerKey, T> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, season: i32, team: &str, as_of: AsOf, weight: T) {
        debug_assert!(weight.is_finite() && weight >= T::zero());
        self.entries.insert(LedgerKey { season, team: team.to_string(), as_of }, weight);
    }

    pub fn get(&self, season: i32, team: &str, as_of: AsOf) -> Option<T> {
        self.entries.get(&LedgerKey { season, team: team.to_string(), as_of }).copied()
    }

    fn weight_for(&self, team: &str, m: &MatchRecord) -> Result<T> {
        let as_of = match self.mode {
            LedgerMode::PerSeason => AsOf::Season,
            LedgerMode::PerMatch => AsOf::Date(m.date),
        };
        self.get(m.season, team, as_of).ok_or_else(|| Error::LedgerMiss {
            team: team.to_string(),
            at: match as_of {
                AsOf::Season => format!("season {}", m.season),
                AsOf::Date(d) => d.to_string(),
            },
        })
    }

    /// Most recent weight for `team` in or before `season` (any season when `None`).
    pub fn latest(&self, team: &str, season: Option<i32>) -> Option<(LedgerKey, T)> {
        self.entries
            .iter()
            .filter(|(k, _)| k.team == team && season.is_none_or(|s| k.season <= s))
            .max_by(|a, b| (a.0.season, a.0.as_of).cmp(&(b.0.season, b.0.as_of)))
            .map(|(k, &w)| (k.clone(), w))
    }

    /// Median over teams of each team's latest weight in the latest season at or before `season`.
    pub fn league_median(&self, season: Option<i32>) -> Option<T> {
        let last = self.entries.keys().map(|k| k.season).filter(|&s| season.is_none_or(|lim| s <= lim)).max()?;
        let mut latest: BTreeMap<&str, (AsOf, T)> = BTreeMap::new();
        for (k, &w) in self.entries.range(LedgerKey { season: last, team: String::new(), as_of: AsOf::Season }..) {
            if k.season != last {
                break;
            }
            let e = latest.entry(&k.team).or_insert((k.as_of, w));
            if k.as_of >= e.0 {
                *e = (k.as_of, w);
            }
        }
        median(&latest.values().map(|&(_, w)| w).collect::<Vec<_>>())
    }

    /// Writes `team,season,as_of,weight` sorted by (season, team, as_of).
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["team", "season", "as_of", "weight"])?;
        for (k, v) in &self.entries {
            w.write_record([k.team.clone(), k.season.to_string(), k.as_of.to_string(), v.to_string()])?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut r = csv::Reader::from_reader(file);
        let headers = r.headers()?.clone();
        for col in ["team", "season", "as_of", "weight"] {
            if !headers.iter().any(|h| h == col) {
                return Err(Error::MissingColumn { column: col.to_string() });
            }
        }
        let idx = |name: &str| headers.iter().position(|h| h == name).expect("checked");
        let (tc, sc, ac, wc) = (idx("team"), idx("season"), idx("as_of"), idx("weight"));
        let mut ledger = TeamWeightLedger::new(LedgerMode::PerSeason);
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let row = i + 2;
            let bad = |reason: String| Error::InvalidRow { row, reason };
            let season: i32 = rec[sc].parse().map_err(|e| bad(format!("season: {e}")))?;
            let as_of = match &rec[ac] {
                "season" => AsOf::Season,
                d => {
                    ledger.mode = LedgerMode::PerMatch;
                    AsOf::Date(NaiveDate::parse_from_str(d, "%Y-%m-%d").map_err(|e| bad(format!("as_of: {e}")))?)
                }
            };
            let weight: f64 = rec[wc].parse().map_err(|e| bad(format!("weight: {e}")))?;
            if !weight.is_finite() || weight < 0.0 {
                return Err(bad(format!("weight {weight} must be finite and non-negative")));
            }
            ledger.insert(season, &rec[tc], as_of, T::lit(weight));
        }
        Ok(ledger)
    }
}

/// A roster row with real-valued statistics, so rolling rosters can be pro-rated.
#[derive(Debug, Clone, PartialEq)]
pub struct RosterEntry<T> {
    pub player: String,
    pub appearances: T,
    pub stats: [T; 6],
}

impl<T: Scalar> RosterEntry<T> {
    pub fn from_performance(p: &PlayerPerformance) -> Self {
        RosterEntry { player: p.player.clone(), appearances: T::lit(f64::from(p.appearances)), stats: stats_as(p) }
    }
}

/// Top-eleven points over `team_appearances`. Ties in appearances go to the
/// higher scorer, then to the lexicographically smaller name.
pub fn weight_from_entries<T: Scalar>(
    model: &PointsModel<T>,
    entries: &[RosterEntry<T>],
    team_appearances: T,
) -> Result<T> {
    if entries.is_empty() {
        return Err(Error::EmptyRoster);
    }
    if !(team_appearances >= T::one()) {
        return Err(Error::ZeroAppearances);
    }
    let mut scored: Vec<(&RosterEntry<T>, T)> = entries.iter().map(|e| (e, model.score_stats(&e.stats))).collect();
    scored.sort_by(|(a, pa), (b, pb)| {
        b.appearances
            .partial_cmp(&a.appearances)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(pb.partial_cmp(pa).unwrap_or(std::cmp::Ordering::Equal))
            .then_with(|| a.player.cmp(&b.player))
    });
    let total: T = scored.iter().take(TOP_PLAYERS).map(|(_, p)| *p).sum();
    Ok(total / team_appearances)
}

/// Weight of one team-season roster.
pub fn team_weight<T: Scalar>(
    model: &PointsModel<T>,
    roster: &[PlayerPerformance],
    team_appearances: u32,
) -> Result<T> {
    let first = roster.first().ok_or(Error::EmptyRoster)?;
    if let Some(p) = roster.iter().find(|p| p.team != first.team || p.season != first.season) {
        return Err(Error::MixedRoster(format!(
            "{} ({}, {}) vs {} ({}, {})",
            first.player, first.team, first.season, p.player, p.team, p.season
        )));
    }
    if team_appearances == 0 {
        return Err(Error::ZeroAppearances);
    }
    let entries: Vec<RosterEntry<T>> = roster.iter().map(RosterEntry::from_performance).collect();
    weight_from_entries(model, &entries, T::lit(f64::from(team_appearances)))
}

type Rosters<'a> = HashMap<(i32, &'a str), Vec<&'a PlayerPerformance>>;

fn index_rosters(performances: &[PlayerPerformance]) -> Rosters<'_> {
    let mut map: Rosters<'_> = HashMap::new();
    for p in performances {
        map.entry((p.season, p.team.as_str())).or_default().push(p);
    }
    map
}

fn roster_entries<T: Scalar>(roster: &[&PlayerPerformance]) -> Vec<RosterEntry<T>> {
    roster.iter().map(|p| RosterEntry::from_performance(p)).collect()
}

/// (season, team) → number of decisive matches; teams with only no-results count all their matches.
fn season_appearances(matches: &MatchDataset) -> BTreeMap<(i32, String), (u32, u32)> {
    let mut counts: BTreeMap<(i32, String), (u32, u32)> = BTreeMap::new();
    for m in matches.matches() {
        for team in [&m.home_team, &m.away_team] {
            let e = counts.entry((m.season, team.clone())).or_default();
            e.1 += 1;
            if m.is_decisive() {
                e.0 += 1;
            }
        }
    }
    counts
}

fn per_season_weights<T: Scalar>(
    model: &PointsModel<T>,
    rosters: &Rosters<'_>,
    matches: &MatchDataset,
) -> Result<BTreeMap<(i32, String), T>> {
    let mut out = BTreeMap::new();
    for ((season, team), (decisive, total)) in season_appearances(matches) {
        let roster =
            rosters.get(&(season, team.as_str())).ok_or_else(|| Error::MissingRoster { team: team.clone(), season })?;
        let apps = if decisive > 0 { decisive } else { total };
        let w = weight_from_entries(model, &roster_entries(roster), T::lit(f64::from(apps)))?;
        out.insert((season, team), w);
    }
    Ok(out)
}

/// Where per-match rolling statistics come from.
#[derive(Debug, Clone, Copy)]
pub enum RollingSource<'a> {
    /// Scale season aggregates by each player's share of the matches played so far.
    ProRated,
    /// Exact cumulative sums from per-match player lines.
    Exact(&'a [PlayerMatchLine]),
}

/// Builds a per-season ledger, or a per-match ledger from pro-rated season aggregates.
pub fn build_ledger<T: Scalar>(
    model: &PointsModel<T>,
    performances: &[PlayerPerformance],
    matches: &MatchDataset,
    mode: LedgerMode,
) -> Result<TeamWeightLedger<T>> {
    match mode {
        LedgerMode::PerSeason => {
            let rosters = index_rosters(performances);
            let weights = per_season_weights(model, &rosters, matches)?;
            let mut ledger = TeamWeightLedger::new(LedgerMode::PerSeason);
            for ((season, team), w) in weights {
                ledger.insert(season, &team, AsOf::Season, w);
            }
            Ok(ledger)
        }
        LedgerMode::PerMatch => build_rolling_ledger(model, performances, matches, RollingSource::ProRated),
    }
}

/// Per-match ledger: every entry for a match dated `d` uses only that
/// season's matches strictly before `d`.
///
/// A team with no earlier match in the season takes its most recent earlier
/// season weight; failing that, the median of the latest earlier season's
/// weights; failing that (the first season on record), the median over the
/// season's rosters with each roster's top appearance count as denominator.
pub fn build_rolling_ledger<T: Scalar>(
    model: &PointsModel<T>,
    performances: &[PlayerPerformance],
    matches: &MatchDataset,
    source: RollingSource<'_>,
) -> Result<TeamWeightLedger<T>> {
    let rosters = index_rosters(performances);
    let season_weights = per_season_weights(model, &rosters, matches)?;
    let lines_by_match: HashMap<&str, Vec<&PlayerMatchLine>> = match source {
        RollingSource::Exact(lines) => crate::dataset::index_lines_by_match(lines),
        RollingSource::ProRated => HashMap::new(),
    };

    let mut ledger = TeamWeightLedger::new(LedgerMode::PerMatch);
    let mut cold_cache: HashMap<(i32, String), T> = HashMap::new();
    for m in matches.matches() {
        for team in [&m.home_team, &m.away_team] {
            let prior: Vec<&MatchRecord> = matches
                .matches()
                .iter()
                .filter(|p| p.season == m.season && p.date < m.date && p.is_decisive() && p.involves(team))
                .collect();
            let w = if prior.is_empty() {
                let key = (m.season, team.clone());
                match cold_cache.get(&key) {
                    Some(&w) => w,
                    None => {
                        let w = cold_start(model, &rosters, &season_weights, team, m.season)?;
                        cold_cache.insert(key, w);
                        w
                    }
                }
            } else {
                let n_prior = T::from_count(prior.len());
                let entries = match source {
                    RollingSource::ProRated => {
                        let roster = rosters
                            .get(&(m.season, team.as_str()))
                            .ok_or_else(|| Error::MissingRoster { team: team.clone(), season: m.season })?;
                        pro_rated_entries(roster, prior.len())
                    }
                    RollingSource::Exact(_) => exact_entries(&prior, team, &lines_by_match)
                        .ok_or_else(|| Error::MissingRoster { team: team.clone(), season: m.season })?,
                };
                weight_from_entries(model, &entries, n_prior)?
            };
            ledger.insert(m.season, team, AsOf::Date(m.date), w);
        }
    }
    Ok(ledger)
}

fn pro_rated_entries<T: Scalar>(roster: &[&PlayerPerformance], n_prior: usize) -> Vec<RosterEntry<T>> {
    roster
        .iter()
        .map(|p| {
            let so_far = p.appearances.min(n_prior as u32);
            let scale =
                if p.appearances == 0 { T::zero() } else { T::lit(f64::from(so_far) / f64::from(p.appearances)) };
            RosterEntry {
                player: p.player.clone(),
                appearances: T::lit(f64::from(so_far)),
                stats: stats_as::<T>(p).map(|s| s * scale),
            }
        })
        .collect()
}

fn exact_entries<T: Scalar>(
    prior: &[&MatchRecord],
    team: &str,
    lines_by_match: &HashMap<&str, Vec<&PlayerMatchLine>>,
) -> Option<Vec<RosterEntry<T>>> {
    let mut agg: BTreeMap<&str, (u32, [u64; 6])> = BTreeMap::new();
    for m in prior {
        for l in lines_by_match.get(m.match_id.as_str()).into_iter().flatten() {
            if l.team != team {
                continue;
            }
            let e = agg.entry(l.player.as_str()).or_default();
            e.0 += 1;
            for (acc, &s) in e.1.iter_mut().zip(&l.stats) {
                *acc += u64::from(s);
            }
        }
    }
    if agg.is_empty() {
        return None;
    }
    Some(
        agg.into_iter()
            .map(|(player, (apps, stats))| RosterEntry {
                player: player.to_string(),
                appearances: T::lit(f64::from(apps)),
                stats: stats.map(|s| T::lit(s as f64)),
            })
            .collect(),
    )
}

fn cold_start<T: Scalar>(
    model: &PointsModel<T>,
    rosters: &Rosters<'_>,
    season_weights: &BTreeMap<(i32, String), T>,
    team: &str,
    season: i32,
) -> Result<T> {
    if let Some((_, &w)) =
        season_weights.iter().filter(|((s, t), _)| *s < season && t == team).max_by_key(|((s, _), _)| *s)
    {
        return Ok(w);
    }
    if let Some(prev) = season_weights.keys().map(|(s, _)| *s).filter(|&s| s < season).max() {
        let ws: Vec<T> = season_weights.iter().filter(|((s, _), _)| *s == prev).map(|(_, &w)| w).collect();
        return Ok(median(&ws).expect("season has at least one team"));
    }
    let mut ws = Vec::new();
    let mut teams: Vec<&str> = rosters.keys().filter(|(s, _)| *s == season).map(|(_, t)| *t).collect();
    teams.sort_unstable();
    for t in teams {
        let roster = &rosters[&(season, t)];
        let apps = roster.iter().map(|p| p.appearances).max().unwrap_or(0);
        if apps > 0 {
            ws.push(weight_from_entries(model, &roster_entries(roster), T::lit(f64::from(apps)))?);
        }
    }
    median(&ws).ok_or_else(|| Error::MissingRoster { team: team.to_string(), season })
}

/// `(home_weight, away_weight)` for a match.
pub fn lookup_weights<T: Scalar>(ledger: &TeamWeightLedger<T>, m: &MatchRecord) -> Result<(T, T)> {
    Ok((ledger.weight_for(&m.home_team, m)?, ledger.weight_for(&m.away_team, m)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{TeamRegistry, TossDecision};

    fn player(team: &str, name: &str, apps: u32, dot_balls: u32) -> PlayerPerformance {
        PlayerPerformance {
            season: 2018,
            team: team.into(),
            player: name.into(),
            appearances: apps,
            wickets: 0,
            dot_balls,
            fours: 0,
            sixes: 0,
            catches: 0,
            stumpings: 0,
            official_points: None,
        }
    }

    fn game(id: &str, day: u32, home: &str, away: &str, winner: Option<&str>) -> MatchRecord {
        MatchRecord {
            match_id: id.into(),
            season: 2018,
            date: NaiveDate::from_ymd_opt(2018, 4, day).unwrap(),
            home_team: home.into(),
            away_team: away.into(),
            venue: "V".into(),
            toss_winner: home.into(),
            toss_decision: TossDecision::Bat,
            winner: winner.map(String::from),
        }
    }

    #[test]
    fn eleven_players_summing_to_1100_over_10() {
        let roster: Vec<_> = (0..11).map(|i| player("CSK", &format!("p{i}"), 10, 100)).collect();
        let w: f64 = team_weight(&PointsModel::reference(), &roster, 10).unwrap();
        assert_eq!(w, 110.0);
    }

    #[test]
    fn single_player_roster() {
        let p = player("CSK", "solo", 1, 0).with_stats([2, 10, 3, 1, 1, 0]);
        let w: f64 = team_weight(&PointsModel::reference(), &[p], 1).unwrap();
        assert_eq!(w, 30.5);
    }

    #[test]
    fn only_top_eleven_by_appearances_count() {
        let mut roster: Vec<_> = (0..11).map(|i| player("CSK", &format!("a{i}"), 10, 10)).collect();
        roster.push(player("CSK", "bench", 2, 1000));
        let w: f64 = team_weight(&PointsModel::reference(), &roster, 10).unwrap();
        assert_eq!(w, 11.0);
    }

    #[test]
    fn appearance_ties_prefer_higher_points_then_name() {
        let mut roster: Vec<_> = (0..10).map(|i| player("CSK", &format!("a{i}"), 10, 10)).collect();
        roster.push(player("CSK", "low", 5, 1));
        roster.push(player("CSK", "high", 5, 7));
        let w: f64 = team_weight(&PointsModel::reference(), &roster, 1).unwrap();
        assert_eq!(w, 107.0);
        let mut roster: Vec<_> = (0..10).map(|i| player("CSK", &format!("a{i}"), 10, 10)).collect();
        roster.push(player("CSK", "zed", 5, 3));
        roster.push(player("CSK", "abe", 5, 3));
        assert_eq!(team_weight::<f64>(&PointsModel::reference(), &roster, 1).unwrap(), 103.0);
    }

    #[test]
    fn roster_errors() {
        let m = PointsModel::<f64>::reference();
        assert!(matches!(team_weight(&m, &[], 3), Err(Error::EmptyRoster)));
        assert!(matches!(team_weight(&m, &[player("CSK", "a", 1, 1)], 0), Err(Error::ZeroAppearances)));
        assert!(matches!(
            team_weight(&m, &[player("CSK", "a", 1, 1), player("RR", "b", 1, 1)], 3),
            Err(Error::MixedRoster(_))
        ));
    }

    fn two_team_dataset() -> (MatchDataset, Vec<PlayerPerformance>) {
        let matches = vec![
            game("m1", 1, "CSK", "RR", Some("CSK")),
            game("m2", 3, "RR", "CSK", Some("CSK")),
            game("m3", 5, "CSK", "RR", None),
            game("m4", 7, "RR", "CSK", Some("RR")),
        ];
        let ds = MatchDataset::from_records(matches, TeamRegistry::default()).unwrap();
        let mut perfs = Vec::new();
        for i in 0..12 {
            perfs.push(player("CSK", &format!("c{i}"), 3 - (i % 3) as u32, 30 + i as u32));
            perfs.push(player("RR", &format!("r{i}"), 3, 20 + i as u32));
        }
        (ds, perfs)
    }

    #[test]
    fn per_season_counts_only_decisive_matches() {
        let (ds, perfs) = two_team_dataset();
        let ledger: TeamWeightLedger<f64> =
            build_ledger(&PointsModel::reference(), &perfs, &ds, LedgerMode::PerSeason).unwrap();
        let rr: f64 = (21..32).map(f64::from).sum::<f64>() / 3.0;
        assert!((ledger.get(2018, "RR", AsOf::Season).unwrap() - rr).abs() < 1e-12);
        let (h, a) = lookup_weights(&ledger, &ds.matches()[0]).unwrap();
        assert_eq!(a, ledger.get(2018, "RR", AsOf::Season).unwrap());
        assert_eq!(h, ledger.get(2018, "CSK", AsOf::Season).unwrap());
    }

    #[test]
    fn missing_roster_and_ledger_miss() {
        let (ds, perfs) = two_team_dataset();
        let only_csk: Vec<_> = perfs.iter().filter(|p| p.team == "CSK").cloned().collect();
        assert!(matches!(
            build_ledger::<f64>(&PointsModel::reference(), &only_csk, &ds, LedgerMode::PerSeason),
            Err(Error::MissingRoster { .. })
        ));
        let ledger = TeamWeightLedger::<f64>::new(LedgerMode::PerSeason);
        assert!(matches!(lookup_weights(&ledger, &ds.matches()[0]), Err(Error::LedgerMiss { .. })));
    }

    #[test]
    fn per_match_first_season_cold_start_uses_roster_median() {
        let (ds, perfs) = two_team_dataset();
        let model = PointsModel::reference();
        let ledger: TeamWeightLedger<f64> = build_ledger(&model, &perfs, &ds, LedgerMode::PerMatch).unwrap();
        let first_day = AsOf::Date(NaiveDate::from_ymd_opt(2018, 4, 1).unwrap());
        let csk = ledger.get(2018, "CSK", first_day).unwrap();
        let rr = ledger.get(2018, "RR", first_day).unwrap();
        assert_eq!(csk, rr);
        // m2: each side has one decisive prior match
        let d3 = AsOf::Date(NaiveDate::from_ymd_opt(2018, 4, 3).unwrap());
        let rr3 = ledger.get(2018, "RR", d3).unwrap();
        let expected: f64 = (21..32).map(|v| f64::from(v) / 3.0).sum::<f64>();
        assert!((rr3 - expected).abs() < 1e-9);
    }

    #[test]
    fn ledger_csv_round_trip() {
        let (ds, perfs) = two_team_dataset();
        let ledger: TeamWeightLedger<f64> =
            build_ledger(&PointsModel::reference(), &perfs, &ds, LedgerMode::PerMatch).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.csv");
        ledger.write_csv(&path).unwrap();
        let back = TeamWeightLedger::<f64>::read_csv(&path).unwrap();
        assert_eq!(back, ledger);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("team,season,as_of,weight\nCSK,2018,2018-04-01,"));
    }
}
