//! Bundled data: the four-match reference season whose team weights are the
//! reference values, and a seeded synthetic league spanning 2008–2018 with
//! auction-style roster churn, per-match player lines and outcomes driven by
//! latent player quality.

use std::collections::{BTreeMap, HashMap};

use chrono::{Days, NaiveDate};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::dataset::{MatchDataset, MatchRecord, PlayerMatchLine, PlayerPerformance, TeamRegistry, TossDecision};
use crate::scalar::sigmoid;
use crate::scoring::PointsModel;

pub const REFERENCE_SEASON: i32 = 2010;

/// `(team, top-11 points total, decisive appearances)`; weight = total / appearances.
pub const REFERENCE_TEAMS: [(&str, f64, u32); 8] = [
    ("CSK", 1017.5, 10),
    ("RR", 1978.5, 16),
    ("KKR", 1245.0, 13),
    ("DC", 1358.5, 14),
    ("DD", 1483.0, 14),
    ("KXIP", 1724.0, 15),
    ("RCB", 1272.5, 14),
    ("MI", 1431.0, 14),
];

/// The four reference feature rows: home, away, toss winner, decision, venue.
pub const REFERENCE_MATCHES: [(&str, &str, &str, TossDecision, &str); 4] = [
    ("CSK", "RR", "RR", TossDecision::Field, "Dr DY Patil Sports Academy"),
    ("KKR", "DC", "DC", TossDecision::Bat, "Eden Gardens"),
    ("DD", "KXIP", "DD", TossDecision::Bat, "Feroz Shah Kotla"),
    ("RCB", "MI", "MI", TossDecision::Field, "M Chinnaswamy Stadium"),
];

pub const BENCH_PLAYERS: usize = 14;

pub fn home_venue(team: &str) -> &'static str {
    match team {
        "CSK" => "MA Chidambaram Stadium",
        "DD" => "Feroz Shah Kotla",
        "KXIP" => "Punjab Cricket Association Stadium",
        "KKR" => "Eden Gardens",
        "MI" => "Wankhede Stadium",
        "RR" => "Sawai Mansingh Stadium",
        "RCB" => "M Chinnaswamy Stadium",
        "SRH" | "DC" => "Rajiv Gandhi International Stadium",
        "PWI" => "Dr DY Patil Sports Academy",
        "RPS" => "Maharashtra Cricket Association Stadium",
        "GL" => "Saurashtra Cricket Association Stadium",
        "KTK" => "Nehru Stadium",
        _ => "Neutral Ground",
    }
}

/// Franchises taking part in each season.
pub fn season_teams(season: i32) -> &'static [&'static str] {
    const ORIGINAL: [&str; 8] = ["CSK", "DC", "DD", "KKR", "KXIP", "MI", "RCB", "RR"];
    const EXPANDED: [&str; 10] = ["CSK", "DC", "DD", "KKR", "KTK", "KXIP", "MI", "PWI", "RCB", "RR"];
    const NINE_2012: [&str; 9] = ["CSK", "DC", "DD", "KKR", "KXIP", "MI", "PWI", "RCB", "RR"];
    const NINE_2013: [&str; 9] = ["CSK", "DD", "KKR", "KXIP", "MI", "PWI", "RCB", "RR", "SRH"];
    const EIGHT: [&str; 8] = ["CSK", "DD", "KKR", "KXIP", "MI", "RCB", "RR", "SRH"];
    const INTERIM: [&str; 8] = ["DD", "GL", "KKR", "KXIP", "MI", "RCB", "RPS", "SRH"];
    match season {
        ..=2010 => &ORIGINAL,
        2011 => &EXPANDED,
        2012 => &NINE_2012,
        2013 => &NINE_2013,
        2016 | 2017 => &INTERIM,
        _ => &EIGHT,
    }
}

/// Matches, season aggregates and (for the synthetic league) per-match lines.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub matches: MatchDataset,
    pub performances: Vec<PlayerPerformance>,
    pub lines: Vec<PlayerMatchLine>,
}

fn points_of(stats: [u32; 6]) -> f64 {
    PointsModel::<f64>::reference().score_stats(&stats.map(f64::from))
}

fn perf(season: i32, team: &str, player: String, appearances: u32, stats: [u32; 6]) -> PlayerPerformance {
    PlayerPerformance {
        season,
        team: team.to_string(),
        player,
        appearances,
        wickets: 0,
        dot_balls: 0,
        fours: 0,
        sixes: 0,
        catches: 0,
        stumpings: 0,
        official_points: Some(points_of(stats)),
    }
    .with_stats(stats)
}

/// 25-player roster whose 11 most-appearing players score exactly `total`
/// under the reference points model and whose other 14 appear less often.
pub fn reference_roster(season: i32, team: &str, total: f64, appearances: u32) -> Vec<PlayerPerformance> {
    assert!(appearances >= 10, "roster layout needs at least 10 appearances");
    assert!((total * 2.0).fract() == 0.0, "total must be a multiple of 0.5");
    let mut out = Vec::with_capacity(11 + BENCH_PLAYERS);
    let share = (total / 11.0).floor() as u32;
    let mut used = 0.0;
    for i in 0..10u32 {
        // wickets + fours + sixes + catches kept even so the partial score is integral
        let (w, f, s, c) = match i % 4 {
            0 => (i % 3, 4, 2, 2 + i % 3),
            1 => (6, 1, 1, 2),
            2 => (2, 6, 3, 1),
            _ => (3, 2, 1, 2),
        };
        let (w, f, s, c) = if (w + f + s + c) % 2 == 1 { (w, f, s, c + 1) } else { (w, f, s, c) };
        let st = u32::from(i == 0) * 2;
        let partial = points_of([w, 0, f, s, c, st]);
        let target = f64::from(share.saturating_sub(2 * i)).max(partial);
        let dots = (target - partial) as u32;
        let stats = [w, dots, f, s, c, st];
        used += points_of(stats);
        out.push(perf(season, team, format!("{team} Player {:02}", i + 1), appearances - i / 2, stats));
    }
    let rest = total - used;
    assert!(rest >= 2.5, "constructed partial roster exceeds {total}");
    let (fours, dots) = if rest.fract() != 0.0 { (1, (rest - 2.5) as u32) } else { (0, rest as u32) };
    out.push(perf(season, team, format!("{team} Player 11"), appearances - 5, [0, dots, fours, 0, 0, 0]));
    let bench_cap = (appearances - 6).min(4);
    for j in 0..BENCH_PLAYERS as u32 {
        let apps = 1 + j % bench_cap;
        let stats = [j % 3, 4 + j, j % 2, 0, j % 2, 0];
        out.push(perf(season, team, format!("{team} Player {:02}", 12 + j), apps, stats));
    }
    out
}

/// The reference season: 55 decisive matches with the reference pairings
/// first, then greedy pairing of the teams with most remaining appearances.
pub fn reference_season() -> Fixture {
    let season = REFERENCE_SEASON;
    let mut remaining: BTreeMap<&str, u32> = REFERENCE_TEAMS.iter().map(|&(t, _, a)| (t, a)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2010);
    let start = NaiveDate::from_ymd_opt(season, 3, 12).expect("valid date");
    let mut records = Vec::new();
    let push = |records: &mut Vec<MatchRecord>, home: &str, away: &str, toss: &str, dec, venue: &str, win: &str| {
        let n = records.len();
        records.push(MatchRecord {
            match_id: format!("{season}-{:02}", n + 1),
            season,
            date: start + Days::new(n as u64),
            home_team: home.into(),
            away_team: away.into(),
            venue: venue.into(),
            toss_winner: toss.into(),
            toss_decision: dec,
            winner: Some(win.into()),
        });
    };
    for (h, a, toss, dec, venue) in REFERENCE_MATCHES {
        *remaining.get_mut(h).expect("team") -= 1;
        *remaining.get_mut(a).expect("team") -= 1;
        let win = if rng.random_bool(0.5) { h } else { a };
        push(&mut records, h, a, toss, dec, venue, win);
    }
    loop {
        let mut order: Vec<(&str, u32)> = remaining.iter().map(|(&t, &n)| (t, n)).filter(|&(_, n)| n > 0).collect();
        if order.is_empty() {
            break;
        }
        order.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(y.0)));
        assert!(order.len() >= 2, "appearance counts cannot be paired");
        let (x, y) = (order[0].0, order[1].0);
        let (h, a) = if records.len() % 2 == 0 { (x, y) } else { (y, x) };
        *remaining.get_mut(h).expect("team") -= 1;
        *remaining.get_mut(a).expect("team") -= 1;
        let toss = if rng.random_bool(0.5) { h } else { a };
        let dec = if rng.random_bool(0.6) { TossDecision::Field } else { TossDecision::Bat };
        let win = if rng.random_bool(0.5) { h } else { a };
        push(&mut records, h, a, toss, dec, home_venue(h), win);
    }
    let matches = MatchDataset::from_records(records, TeamRegistry::default()).expect("fixture is valid");
    let performances =
        REFERENCE_TEAMS.iter().flat_map(|&(t, total, apps)| reference_roster(season, t, total, apps)).collect();
    Fixture { matches, performances, lines: Vec::new() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Batter,
    Bowler,
    AllRounder,
    Keeper,
}

#[derive(Debug, Clone)]
struct Player {
    name: String,
    role: Role,
    quality: f64,
}

/// Per-match Poisson rates for wickets, dots, fours, sixes, catches, stumpings.
fn rates(role: Role, q: f64) -> [f64; 6] {
    match role {
        Role::Batter => [0.02, 0.3, 1.0 + 2.0 * q, 0.3 + 1.2 * q, 0.3, 0.0],
        Role::Bowler => [0.5 + 1.0 * q, 5.0 + 6.0 * q, 0.15, 0.05, 0.3, 0.0],
        Role::AllRounder => [0.3 + 0.6 * q, 3.0 + 3.0 * q, 0.5 + 1.0 * q, 0.2 + 0.8 * q, 0.4, 0.0],
        Role::Keeper => [0.0, 0.0, 0.8 + 1.5 * q, 0.2 + 0.8 * q, 0.6 + 0.4 * q, 0.1 + 0.2 * q],
    }
}

const SQUAD: usize = 22;
const LEAGUE_START: i32 = 2008;
const LEAGUE_END: i32 = 2018;

fn squad_roles() -> [Role; SQUAD] {
    use Role::*;
    [
        Keeper, Keeper, Batter, Batter, Batter, Batter, Batter, Batter, Batter, AllRounder, AllRounder, AllRounder,
        AllRounder, AllRounder, Bowler, Bowler, Bowler, Bowler, Bowler, Bowler, Bowler, Bowler,
    ]
}

/// Picks the playing XI: one keeper, four batters, two all-rounders and four
/// bowlers, each drawn with preference for higher quality.
fn pick_xi(squad: &[usize], pool: &[Player], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut xi = Vec::with_capacity(11);
    for (role, count) in [(Role::Keeper, 1), (Role::Batter, 4), (Role::AllRounder, 2), (Role::Bowler, 4)] {
        let mut cands: Vec<(f64, usize)> = squad
            .iter()
            .filter(|&&p| pool[p].role == role)
            .map(|&p| (pool[p].quality + rng.random_range(0.0..0.35), p))
            .collect();
        cands.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        xi.extend(cands.iter().take(count).map(|&(_, p)| p));
    }
    xi
}

/// Synthetic league 2008–2018 with a double round robin plus four playoff
/// matches per season. One league match per season before 2018 is a
/// no-result, so the final season has 60 decisive matches.
pub fn synthetic_league(seed: u64) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<Player> = Vec::new();
    let mut squads: HashMap<&'static str, Vec<usize>> = HashMap::new();
    let mut records = Vec::new();
    let mut lines = Vec::new();
    let mut agg: BTreeMap<(i32, String, usize), (u32, [u32; 6])> = BTreeMap::new();

    let new_player = |pool: &mut Vec<Player>, role: Role, rng: &mut ChaCha8Rng| {
        let id = pool.len();
        pool.push(Player { name: format!("Player {:04}", id + 1), role, quality: rng.random_range(0.0..1.0) });
        id
    };

    for season in LEAGUE_START..=LEAGUE_END {
        let teams = season_teams(season);
        // auction: every squad loses a share of its players to a free pool,
        // then squads are refilled by role from that pool and new players
        let mut free: Vec<usize> = Vec::new();
        squads.retain(|t, squad| {
            if teams.contains(t) {
                true
            } else {
                free.append(squad);
                false
            }
        });
        let mut names: Vec<&'static str> = squads.keys().copied().collect();
        names.sort_unstable();
        for t in names {
            let squad = squads.get_mut(t).expect("team");
            squad.shuffle(&mut rng);
            let keep = squad.len() * 7 / 10;
            free.extend(squad.drain(keep..));
        }
        free.sort_unstable();
        free.shuffle(&mut rng);
        for &t in teams {
            let squad = squads.entry(t).or_default();
            for role in squad_roles() {
                let have = squad.iter().filter(|&&p| pool[p].role == role).count();
                let want = squad_roles().iter().filter(|&&r| r == role).count();
                if have >= want {
                    continue;
                }
                let pos = free.iter().position(|&p| pool[p].role == role);
                let p = match pos {
                    Some(i) => free.swap_remove(i),
                    None => new_player(&mut pool, role, &mut rng),
                };
                squad.push(p);
            }
            squad.sort_unstable();
        }

        let mut fixtures: Vec<(&str, &str)> = Vec::new();
        for &h in teams {
            for &a in teams {
                if h != a {
                    fixtures.push((h, a));
                }
            }
        }
        fixtures.shuffle(&mut rng);
        let no_result = if season < LEAGUE_END { Some(rng.random_range(0..fixtures.len())) } else { None };
        let start = NaiveDate::from_ymd_opt(season, 4, 1).expect("valid date");
        let mut wins: BTreeMap<&str, u32> = teams.iter().map(|&t| (t, 0)).collect();
        let mut day = 0u64;

        let mut play = |home: &str,
                        away: &str,
                        venue: &str,
                        abandoned: bool,
                        day: u64,
                        records: &mut Vec<MatchRecord>,
                        rng: &mut ChaCha8Rng|
         -> Option<String> {
            let id = format!("{season}-{:02}", records.iter().filter(|m| m.season == season).count() + 1);
            let toss_winner = if rng.random_bool(0.5) { home } else { away };
            let decision = if rng.random_bool(0.6) { TossDecision::Field } else { TossDecision::Bat };
            let mut winner = None;
            if !abandoned {
                let mut strength = [0.0f64; 2];
                for (side, team) in [home, away].into_iter().enumerate() {
                    let xi = pick_xi(&squads[team], &pool, rng);
                    for p in xi {
                        let player = &pool[p];
                        strength[side] += player.quality;
                        let stats = rates(player.role, player.quality).map(|lambda| {
                            if lambda > 0.0 {
                                Poisson::new(lambda).expect("positive rate").sample(rng) as u32
                            } else {
                                0
                            }
                        });
                        lines.push(PlayerMatchLine {
                            match_id: id.clone(),
                            team: team.to_string(),
                            player: player.name.clone(),
                            stats,
                        });
                        let e = agg.entry((season, team.to_string(), p)).or_default();
                        e.0 += 1;
                        for (acc, s) in e.1.iter_mut().zip(stats) {
                            *acc += s;
                        }
                    }
                }
                let edge = 1.2 * (strength[0] - strength[1]) + 0.15 + if toss_winner == home { 0.1 } else { -0.1 };
                let home_wins = rng.random_bool(sigmoid(edge));
                winner = Some(if home_wins { home } else { away }.to_string());
            }
            records.push(MatchRecord {
                match_id: id,
                season,
                date: start + Days::new(day),
                home_team: home.to_string(),
                away_team: away.to_string(),
                venue: venue.to_string(),
                toss_winner: toss_winner.to_string(),
                toss_decision: decision,
                winner: winner.clone(),
            });
            winner
        };

        for (i, &(h, a)) in fixtures.iter().enumerate() {
            if let Some(w) = play(h, a, home_venue(h), no_result == Some(i), day, &mut records, &mut rng) {
                *wins.get_mut(w.as_str()).expect("team") += 1;
            }
            day += 1;
        }
        let mut table: Vec<(&str, u32)> = wins.into_iter().collect();
        table.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(y.0)));
        let seeds: Vec<&str> = table.iter().take(4).map(|&(t, _)| t).collect();
        let mut playoff = |h: &str, a: &str, day: u64, records: &mut Vec<MatchRecord>, rng: &mut ChaCha8Rng| {
            let w = play(h, a, home_venue(h), false, day, records, rng).expect("decisive");
            let l = if w == h { a } else { h };
            (w, l.to_string())
        };
        let (q1_w, q1_l) = playoff(seeds[0], seeds[1], day, &mut records, &mut rng);
        let (el_w, _) = playoff(seeds[2], seeds[3], day + 1, &mut records, &mut rng);
        let (q2_w, _) = playoff(&q1_l, &el_w, day + 2, &mut records, &mut rng);
        playoff(&q1_w, &q2_w, day + 3, &mut records, &mut rng);
    }

    let matches = MatchDataset::from_records(records, TeamRegistry::default()).expect("fixture is valid");
    let performances = agg
        .into_iter()
        .map(|((season, team, p), (apps, stats))| perf(season, &team, pool[p].name.clone(), apps, stats))
        .collect();
    Fixture { matches, performances, lines }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strength::{build_ledger, LedgerMode};

    #[test]
    fn reference_rosters_hit_the_reference_weights() {
        let f = reference_season();
        assert_eq!(f.matches.len(), 55);
        let ledger =
            build_ledger(&PointsModel::<f64>::reference(), &f.performances, &f.matches, LedgerMode::PerSeason).unwrap();
        let m = &f.matches.matches()[0];
        assert_eq!((m.home_team.as_str(), m.away_team.as_str()), ("CSK", "RR"));
        let (w1, w2) = crate::strength::lookup_weights(&ledger, m).unwrap();
        assert_eq!(w1, 101.75);
        assert_eq!(w2, 123.65625);
    }

    #[test]
    fn league_is_deterministic_and_shaped() {
        let a = synthetic_league(0);
        let b = synthetic_league(0);
        assert_eq!(a.matches, b.matches);
        assert_eq!(a.performances, b.performances);
        let holdout = a.matches.matches().iter().filter(|m| m.season == 2018).count();
        assert_eq!(holdout, 60);
        assert_eq!(a.matches.no_result_ids().len(), 10);
        assert_eq!(a.matches.seasons(), (2008..=2018).collect::<Vec<_>>());
    }
}
