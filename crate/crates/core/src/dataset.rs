//! Domain types and CSV ingestion for match results and player statistics.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::Path;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MATCH_COLUMNS: [&str; 9] =
    ["match_id", "season", "date", "home_team", "away_team", "venue", "toss_winner", "toss_decision", "winner"];

pub const PLAYER_COLUMNS: [&str; 11] = [
    "season",
    "team",
    "player",
    "appearances",
    "wickets",
    "dot_balls",
    "fours",
    "sixes",
    "catches",
    "stumpings",
    "official_points",
];

pub const PLAYER_MATCH_COLUMNS: [&str; 9] =
    ["match_id", "team", "player", "wickets", "dot_balls", "fours", "sixes", "catches", "stumpings"];

/// Names of the six scored statistics, in regression column order.
pub const STAT_NAMES: [&str; 6] = ["wickets", "dot_balls", "fours", "sixes", "catches", "stumpings"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeamId {
    pub acronym: String,
    pub full_name: String,
    pub active: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TeamRegistry {
    teams: Vec<TeamId>,
}

impl TeamRegistry {
    pub fn new(teams: Vec<TeamId>) -> Result<Self> {
        let mut seen = HashSet::new();
        for t in &teams {
            if t.acronym.is_empty() || t.acronym.chars().count() > 5 {
                return Err(Error::Registry(format!("acronym `{}` must be 1 to 5 characters", t.acronym)));
            }
            if t.acronym != t.acronym.to_uppercase() {
                return Err(Error::Registry(format!("acronym `{}` must be uppercase", t.acronym)));
            }
            if !seen.insert(t.acronym.clone()) {
                return Err(Error::Registry(format!("duplicate acronym `{}`", t.acronym)));
            }
        }
        Ok(TeamRegistry { teams })
    }

    pub fn get(&self, acronym: &str) -> Option<&TeamId> {
        self.teams.iter().find(|t| t.acronym == acronym)
    }

    pub fn contains(&self, acronym: &str) -> bool {
        self.get(acronym).is_some()
    }

    pub fn teams(&self) -> &[TeamId] {
        &self.teams
    }

    pub fn active(&self) -> impl Iterator<Item = &TeamId> {
        self.teams.iter().filter(|t| t.active)
    }
}

impl Default for TeamRegistry {
    /// The thirteen franchises that have played in the league; five are defunct.
    fn default() -> Self {
        const TEAMS: [(&str, &str, bool); 13] = [
            ("CSK", "Chennai Super Kings", true),
            ("DD", "Delhi Daredevils", true),
            ("KXIP", "Kings XI Punjab", true),
            ("KKR", "Kolkata Knight Riders", true),
            ("MI", "Mumbai Indians", true),
            ("RR", "Rajasthan Royals", true),
            ("RCB", "Royal Challenger Bangalore", true),
            ("SRH", "Sunrisers Hyderabad", true),
            ("RPS", "Rising Pune Supergiant", false),
            ("DC", "Deccan Chargers", false),
            ("PWI", "Pune Warriors India", false),
            ("GL", "Gujrat Lions", false),
            ("KTK", "Kochi Tuskers Kerala", false),
        ];
        let teams = TEAMS
            .iter()
            .map(|&(acronym, full_name, active)| TeamId {
                acronym: acronym.to_string(),
                full_name: full_name.to_string(),
                active,
            })
            .collect();
        TeamRegistry::new(teams).expect("bundled registry is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TossDecision {
    Bat,
    Field,
}

impl TossDecision {
    pub fn as_str(self) -> &'static str {
        match self {
            TossDecision::Bat => "bat",
            TossDecision::Field => "field",
        }
    }
}

impl fmt::Display for TossDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for TossDecision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bat" => Ok(TossDecision::Bat),
            "field" => Ok(TossDecision::Field),
            other => Err(format!("toss_decision must be `bat` or `field`, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub match_id: String,
    pub season: i32,
    pub date: NaiveDate,
    pub home_team: String,
    pub away_team: String,
    pub venue: String,
    pub toss_winner: String,
    pub toss_decision: TossDecision,
    /// `None` marks a no-result.
    pub winner: Option<String>,
}

impl MatchRecord {
    pub fn is_decisive(&self) -> bool {
        self.winner.is_some()
    }

    pub fn involves(&self, team: &str) -> bool {
        self.home_team == team || self.away_team == team
    }

    /// Checks the record-level invariants, returning a human-readable reason on failure.
    pub fn check(&self) -> Result<(), String> {
        if self.match_id.trim().is_empty() {
            return Err("match_id is empty".into());
        }
        if self.home_team == self.away_team {
            return Err(format!("home_team and away_team are both `{}`", self.home_team));
        }
        if !self.involves(&self.toss_winner) {
            return Err(format!(
                "toss winner `{}` is not one of {} / {}",
                self.toss_winner, self.home_team, self.away_team
            ));
        }
        if let Some(w) = &self.winner {
            if !self.involves(w) {
                return Err(format!("winner `{}` is not one of {} / {}", w, self.home_team, self.away_team));
            }
        }
        let year = self.date.year();
        if year != self.season && year != self.season + 1 {
            return Err(format!("date {} is inconsistent with season {}", self.date, self.season));
        }
        Ok(())
    }
}

/// Binary target: 1 when the home team won, 0 when the away team won.
pub fn label_of(m: &MatchRecord) -> Result<u8> {
    match &m.winner {
        Some(w) if *w == m.home_team => Ok(1),
        Some(_) => Ok(0),
        None => Err(Error::NoResult { match_id: m.match_id.clone() }),
    }
}

/// Trims and collapses internal whitespace runs to a single space.
pub fn normalize_venue(raw: &str) -> String {
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchDataset {
    matches: Vec<MatchRecord>,
    registry: TeamRegistry,
    venues: Vec<String>,
}

impl MatchDataset {
    /// Validates and date-sorts records. Ties keep their input order.
    pub fn from_records(mut records: Vec<MatchRecord>, registry: TeamRegistry) -> Result<Self> {
        let mut ids = HashSet::new();
        for (i, m) in records.iter_mut().enumerate() {
            let row = i + 1;
            m.venue = normalize_venue(&m.venue);
            for team in [&m.home_team, &m.away_team, &m.toss_winner].into_iter().chain(m.winner.as_ref()) {
                if !registry.contains(team) {
                    return Err(Error::UnknownTeam { row, team: team.clone() });
                }
            }
            m.check().map_err(|reason| Error::InvalidRow { row, reason })?;
            if !ids.insert(m.match_id.clone()) {
                return Err(Error::InvalidRow { row, reason: format!("duplicate match_id `{}`", m.match_id) });
            }
        }
        records.sort_by_key(|m| m.date);
        let venues = records.iter().map(|m| m.venue.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        Ok(MatchDataset { matches: records, registry, venues })
    }

    pub fn matches(&self) -> &[MatchRecord] {
        &self.matches
    }

    pub fn registry(&self) -> &TeamRegistry {
        &self.registry
    }

    pub fn venues(&self) -> &[String] {
        &self.venues
    }

    pub fn len(&self) -> usize {
        self.matches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matches.is_empty()
    }

    pub fn decisive(&self) -> impl Iterator<Item = &MatchRecord> {
        self.matches.iter().filter(|m| m.is_decisive())
    }

    /// Match ids excluded from training and evaluation because there was no result.
    pub fn no_result_ids(&self) -> Vec<&str> {
        self.matches.iter().filter(|m| !m.is_decisive()).map(|m| m.match_id.as_str()).collect()
    }

    pub fn seasons(&self) -> Vec<i32> {
        self.matches.iter().map(|m| m.season).collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// Sub-dataset of matches satisfying `keep`, re-validated and re-sorted.
    pub fn filter(&self, keep: impl Fn(&MatchRecord) -> bool) -> MatchDataset {
        let matches: Vec<MatchRecord> = self.matches.iter().filter(|m| keep(m)).cloned().collect();
        let venues = matches.iter().map(|m| m.venue.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        MatchDataset { matches, registry: self.registry.clone(), venues }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerPerformance {
    pub season: i32,
    pub team: String,
    pub player: String,
    pub appearances: u32,
    pub wickets: u32,
    pub dot_balls: u32,
    pub fours: u32,
    pub sixes: u32,
    pub catches: u32,
    pub stumpings: u32,
    pub official_points: Option<f64>,
}

impl PlayerPerformance {
    /// The six scored statistics in regression column order.
    pub fn stats(&self) -> [u32; 6] {
        [self.wickets, self.dot_balls, self.fours, self.sixes, self.catches, self.stumpings]
    }

    pub fn with_stats(mut self, stats: [u32; 6]) -> Self {
        [self.wickets, self.dot_balls, self.fours, self.sixes, self.catches, self.stumpings] = stats;
        self
    }
}

/// One player's statistics in a single match; the optional input for exact
/// rolling team weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerMatchLine {
    pub match_id: String,
    pub team: String,
    pub player: String,
    pub stats: [u32; 6],
}

fn open_reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new().has_headers(true).flexible(false).from_reader(file))
}

/// Maps each required column to its index in the header.
fn column_index<const N: usize>(headers: &csv::StringRecord, required: [&str; N]) -> Result<[usize; N]> {
    let mut out = [0usize; N];
    for (slot, name) in out.iter_mut().zip(required) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::MissingColumn { column: name.to_string() })?;
    }
    Ok(out)
}

fn row_of(record: &csv::StringRecord, fallback: usize) -> usize {
    record.position().map(|p| p.line() as usize).unwrap_or(fallback)
}

fn parse_field<T: std::str::FromStr>(raw: &str, column: &str, row: usize) -> Result<T>
where
    T::Err: fmt::Display,
{
    raw.trim()
        .parse()
        .map_err(|e| Error::InvalidRow { row, reason: format!("cannot parse `{column}` value `{raw}`: {e}") })
}

fn parse_count(raw: &str, column: &str, row: usize) -> Result<u32> {
    let v: i64 = parse_field(raw, column, row)?;
    if v < 0 {
        return Err(Error::NegativeStat { row, column: column.to_string(), value: v });
    }
    u32::try_from(v).map_err(|_| Error::InvalidRow { row, reason: format!("`{column}` value {v} is out of range") })
}

fn known_team(raw: &str, registry: &TeamRegistry, row: usize) -> Result<String> {
    let team = raw.trim().to_string();
    if registry.contains(&team) {
        Ok(team)
    } else {
        Err(Error::UnknownTeam { row, team })
    }
}

/// Loads `matches.csv`. Row numbers in errors are 1-based file lines (the header is line 1).
pub fn load_matches(path: impl AsRef<Path>, registry: &TeamRegistry) -> Result<MatchDataset> {
    let path = path.as_ref();
    let mut reader = open_reader(path)?;
    let headers = reader.headers()?.clone();
    let [id_c, season_c, date_c, home_c, away_c, venue_c, toss_c, decision_c, winner_c] =
        column_index(&headers, MATCH_COLUMNS)?;

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let row = row_of(&rec, i + 2);
        let match_id = rec[id_c].trim().to_string();
        let season: i32 = parse_field(&rec[season_c], "season", row)?;
        let date = NaiveDate::parse_from_str(rec[date_c].trim(), "%Y-%m-%d")
            .map_err(|e| Error::InvalidRow { row, reason: format!("bad date `{}`: {e}", &rec[date_c]) })?;
        let home_team = known_team(&rec[home_c], registry, row)?;
        let away_team = known_team(&rec[away_c], registry, row)?;
        let toss_winner = known_team(&rec[toss_c], registry, row)?;
        let toss_decision =
            rec[decision_c].parse::<TossDecision>().map_err(|reason| Error::InvalidRow { row, reason })?;
        let winner = match rec[winner_c].trim() {
            "" => None,
            w => Some(known_team(w, registry, row)?),
        };
        let m = MatchRecord {
            match_id,
            season,
            date,
            home_team,
            away_team,
            venue: normalize_venue(&rec[venue_c]),
            toss_winner,
            toss_decision,
            winner,
        };
        m.check().map_err(|reason| Error::InvalidRow { row, reason })?;
        if !seen.insert(m.match_id.clone()) {
            return Err(Error::InvalidRow { row, reason: format!("duplicate match_id `{}`", m.match_id) });
        }
        records.push(m);
    }
    let dataset = MatchDataset::from_records(records, registry.clone())?;
    let excluded = dataset.no_result_ids();
    if !excluded.is_empty() {
        log::info!("{} no-result matches flagged: {}", excluded.len(), excluded.join(", "));
    }
    Ok(dataset)
}

/// Loads `players.csv`; `official_points` may be empty (or `?`) when unknown.
pub fn load_player_performances(path: impl AsRef<Path>, registry: &TeamRegistry) -> Result<Vec<PlayerPerformance>> {
    let path = path.as_ref();
    let mut reader = open_reader(path)?;
    let headers = reader.headers()?.clone();
    let cols = column_index(&headers, PLAYER_COLUMNS)?;

    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let row = row_of(&rec, i + 2);
        let season: i32 = parse_field(&rec[cols[0]], "season", row)?;
        let team = known_team(&rec[cols[1]], registry, row)?;
        let player = rec[cols[2]].trim().to_string();
        if player.is_empty() {
            return Err(Error::InvalidRow { row, reason: "player name is empty".into() });
        }
        let appearances = parse_count(&rec[cols[3]], PLAYER_COLUMNS[3], row)?;
        let mut stats = [0u32; 6];
        for (k, stat) in stats.iter_mut().enumerate() {
            *stat = parse_count(&rec[cols[4 + k]], PLAYER_COLUMNS[4 + k], row)?;
        }
        if appearances == 0 && stats.iter().any(|&s| s > 0) {
            return Err(Error::InvalidRow { row, reason: format!("{player} has statistics but zero appearances") });
        }
        let official_points = match rec[cols[10]].trim() {
            "" | "?" => None,
            raw => {
                let v: f64 = parse_field(raw, "official_points", row)?;
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidRow {
                        row,
                        reason: format!("official_points must be finite and non-negative, got {raw}"),
                    });
                }
                Some(v)
            }
        };
        if !seen.insert((season, team.clone(), player.clone())) {
            return Err(Error::DuplicatePlayer { row, season, team, player });
        }
        out.push(
            PlayerPerformance {
                season,
                team,
                player,
                appearances,
                wickets: 0,
                dot_balls: 0,
                fours: 0,
                sixes: 0,
                catches: 0,
                stumpings: 0,
                official_points,
            }
            .with_stats(stats),
        );
    }
    Ok(out)
}

/// Loads the optional per-match player statistics file.
pub fn load_player_match_lines(path: impl AsRef<Path>, registry: &TeamRegistry) -> Result<Vec<PlayerMatchLine>> {
    let path = path.as_ref();
    let mut reader = open_reader(path)?;
    let headers = reader.headers()?.clone();
    let cols = column_index(&headers, PLAYER_MATCH_COLUMNS)?;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let row = row_of(&rec, i + 2);
        let match_id = rec[cols[0]].trim().to_string();
        let team = known_team(&rec[cols[1]], registry, row)?;
        let player = rec[cols[2]].trim().to_string();
        let mut stats = [0u32; 6];
        for (k, stat) in stats.iter_mut().enumerate() {
            *stat = parse_count(&rec[cols[3 + k]], PLAYER_MATCH_COLUMNS[3 + k], row)?;
        }
        if !seen.insert((match_id.clone(), team.clone(), player.clone())) {
            return Err(Error::InvalidRow {
                row,
                reason: format!("duplicate line for {player} ({team}) in match {match_id}"),
            });
        }
        out.push(PlayerMatchLine { match_id, team, player, stats });
    }
    Ok(out)
}

/// Per-team lookups used when validating per-match lines against a dataset.
pub fn index_lines_by_match(lines: &[PlayerMatchLine]) -> HashMap<&str, Vec<&PlayerMatchLine>> {
    let mut map: HashMap<&str, Vec<&PlayerMatchLine>> = HashMap::new();
    for l in lines {
        map.entry(l.match_id.as_str()).or_default().push(l);
    }
    map
}

pub fn write_matches(path: impl AsRef<Path>, dataset: &MatchDataset) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(MATCH_COLUMNS)?;
    for m in dataset.matches() {
        w.write_record([
            m.match_id.as_str(),
            &m.season.to_string(),
            &m.date.format("%Y-%m-%d").to_string(),
            &m.home_team,
            &m.away_team,
            &m.venue,
            &m.toss_winner,
            m.toss_decision.as_str(),
            m.winner.as_deref().unwrap_or(""),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_player_performances(path: impl AsRef<Path>, rows: &[PlayerPerformance]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(PLAYER_COLUMNS)?;
    for p in rows {
        let mut fields = vec![p.season.to_string(), p.team.clone(), p.player.clone(), p.appearances.to_string()];
        fields.extend(p.stats().iter().map(|s| s.to_string()));
        fields.push(p.official_points.map(|v| v.to_string()).unwrap_or_default());
        w.write_record(&fields)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_player_match_lines(path: impl AsRef<Path>, lines: &[PlayerMatchLine]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(PLAYER_MATCH_COLUMNS)?;
    for l in lines {
        let mut fields = vec![l.match_id.clone(), l.team.clone(), l.player.clone()];
        fields.extend(l.stats.iter().map(|s| s.to_string()));
        w.write_record(&fields)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    const HEADER: &str = "match_id,season,date,home_team,away_team,venue,toss_winner,toss_decision,winner\n";
    const PHEADER: &str =
        "season,team,player,appearances,wickets,dot_balls,fours,sixes,catches,stumpings,official_points\n";

    #[test]
    fn default_registry_has_thirteen_teams_five_inactive() {
        let r = TeamRegistry::default();
        assert_eq!(r.teams().len(), 13);
        let inactive: BTreeSet<_> = r.teams().iter().filter(|t| !t.active).map(|t| t.acronym.as_str()).collect();
        assert_eq!(inactive, ["DC", "GL", "KTK", "PWI", "RPS"].into_iter().collect());
    }

    #[test]
    fn registry_rejects_duplicates_and_long_acronyms() {
        let t = |a: &str| TeamId { acronym: a.into(), full_name: a.into(), active: true };
        assert!(TeamRegistry::new(vec![t("AB"), t("AB")]).is_err());
        assert!(TeamRegistry::new(vec![t("ABCDEF")]).is_err());
        assert!(TeamRegistry::new(vec![t("")]).is_err());
    }

    #[test]
    fn empty_file_with_header_loads_zero_matches() {
        let f = write_tmp(HEADER);
        let d = load_matches(f.path(), &TeamRegistry::default()).unwrap();
        assert_eq!(d.len(), 0);
    }

    #[test]
    fn toss_winner_outside_fixture_is_invalid_row() {
        let f = write_tmp(&format!(
            "{HEADER}m1,2018,2018-04-07,CSK,RR,Wankhede Stadium,CSK,bat,CSK\nm2,2018,2018-04-08,CSK,RR,Wankhede Stadium,MI,bat,RR\n"
        ));
        match load_matches(f.path(), &TeamRegistry::default()) {
            Err(Error::InvalidRow { row, .. }) => assert_eq!(row, 3),
            other => panic!("expected InvalidRow, got {other:?}"),
        }
    }

    #[test]
    fn missing_column_and_unknown_team() {
        let f = write_tmp("match_id,season,date\n");
        assert!(matches!(load_matches(f.path(), &TeamRegistry::default()), Err(Error::MissingColumn { .. })));
        let f = write_tmp(&format!("{HEADER}m1,2018,2018-04-07,XYZ,RR,V,RR,bat,RR\n"));
        assert!(matches!(load_matches(f.path(), &TeamRegistry::default()), Err(Error::UnknownTeam { row: 2, .. })));
    }

    #[test]
    fn duplicate_match_id_rejected() {
        let f = write_tmp(&format!(
            "{HEADER}m1,2018,2018-04-07,CSK,RR,V,RR,bat,RR\nm1,2018,2018-04-09,MI,RR,V,RR,bat,RR\n"
        ));
        assert!(matches!(load_matches(f.path(), &TeamRegistry::default()), Err(Error::InvalidRow { row: 3, .. })));
    }

    #[test]
    fn rows_sorted_no_result_flagged_extra_columns_ignored() {
        let f = write_tmp(
            "extra,match_id,season,date,home_team,away_team,venue,toss_winner,toss_decision,winner\n\
             x,b,2018,2018-04-09,MI,RR,  Wankhede   Stadium ,RR,field,\n\
             y,a,2018,2018-04-07,CSK,RR,Wankhede Stadium,RR,bat,CSK\n",
        );
        let d = load_matches(f.path(), &TeamRegistry::default()).unwrap();
        assert_eq!(d.matches()[0].match_id, "a");
        assert_eq!(d.matches()[1].venue, "Wankhede Stadium");
        assert_eq!(d.no_result_ids(), vec!["b"]);
        assert_eq!(d.venues(), ["Wankhede Stadium".to_string()]);
        assert_eq!(d.decisive().count(), 1);
    }

    #[test]
    fn season_must_match_date() {
        let f = write_tmp(&format!("{HEADER}m1,2016,2018-04-07,CSK,RR,V,RR,bat,RR\n"));
        assert!(matches!(load_matches(f.path(), &TeamRegistry::default()), Err(Error::InvalidRow { .. })));
    }

    #[test]
    fn player_row_maps_fields() {
        let f = write_tmp(&format!("{PHEADER}2018,CSK,PlayerA,10,5,40,12,8,6,1,?\n"));
        let rows = load_player_performances(f.path(), &TeamRegistry::default()).unwrap();
        let p = &rows[0];
        assert_eq!((p.wickets, p.dot_balls, p.fours, p.sixes, p.catches, p.stumpings), (5, 40, 12, 8, 6, 1));
        assert_eq!(p.appearances, 10);
        assert_eq!(p.official_points, None);
    }

    #[test]
    fn negative_stat_and_duplicate_player() {
        let f = write_tmp(&format!("{PHEADER}2018,CSK,PlayerA,10,-1,40,12,8,6,1,\n"));
        assert!(matches!(
            load_player_performances(f.path(), &TeamRegistry::default()),
            Err(Error::NegativeStat { row: 2, .. })
        ));
        let f = write_tmp(&format!("{PHEADER}2018,CSK,PlayerA,10,1,40,12,8,6,1,\n2018,CSK,PlayerA,3,1,4,1,0,0,0,\n"));
        assert!(matches!(
            load_player_performances(f.path(), &TeamRegistry::default()),
            Err(Error::DuplicatePlayer { row: 3, .. })
        ));
    }

    #[test]
    fn labels_follow_home_win_convention() {
        let mut m = MatchRecord {
            match_id: "m".into(),
            season: 2018,
            date: NaiveDate::from_ymd_opt(2018, 4, 7).unwrap(),
            home_team: "CSK".into(),
            away_team: "RR".into(),
            venue: "V".into(),
            toss_winner: "RR".into(),
            toss_decision: TossDecision::Field,
            winner: Some("CSK".into()),
        };
        assert_eq!(label_of(&m).unwrap(), 1);
        m.winner = Some("RR".into());
        assert_eq!(label_of(&m).unwrap(), 0);
        m.winner = None;
        assert!(matches!(label_of(&m), Err(Error::NoResult { .. })));
    }
}
