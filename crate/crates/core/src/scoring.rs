//! Player points: a linear score over the six fielding/batting/bowling
//! statistics, and the least-squares fit that recovers its weights from
//! the league's official points.

use serde::{Deserialize, Serialize};

use crate::dataset::PlayerPerformance;
use crate::error::{Error, Result};
use crate::linalg::{lstsq_pivoted_qr, Cholesky, Matrix};
use crate::scalar::Scalar;

/// Regression column names, intercept first.
pub const COEFFICIENT_COLUMNS: [&str; 7] =
    ["intercept", "wickets", "dot_balls", "fours", "sixes", "catches", "stumpings"];

/// Normal equations are abandoned for QR above this condition estimate.
pub const CONDITION_LIMIT: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PointsModel<T> {
    pub intercept: T,
    pub per_wicket: T,
    pub per_dot_ball: T,
    pub per_four: T,
    pub per_six: T,
    pub per_catch: T,
    pub per_stumping: T,
}

impl<T: Scalar> PointsModel<T> {
    /// Weights recovered from the league's official player points.
    pub fn reference() -> Self {
        PointsModel {
            intercept: T::zero(),
            per_wicket: T::lit(3.5),
            per_dot_ball: T::one(),
            per_four: T::lit(2.5),
            per_six: T::lit(3.5),
            per_catch: T::lit(2.5),
            per_stumping: T::lit(2.5),
        }
    }

    /// `[intercept, per_wicket, ..., per_stumping]`.
    pub fn coefficients(&self) -> [T; 7] {
        [
            self.intercept,
            self.per_wicket,
            self.per_dot_ball,
            self.per_four,
            self.per_six,
            self.per_catch,
            self.per_stumping,
        ]
    }

    pub fn from_coefficients(c: [T; 7]) -> Result<Self> {
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InsufficientData("points model coefficients must be finite".into()));
        }
        Ok(PointsModel {
            intercept: c[0],
            per_wicket: c[1],
            per_dot_ball: c[2],
            per_four: c[3],
            per_six: c[4],
            per_catch: c[5],
            per_stumping: c[6],
        })
    }

    /// Score for real-valued statistics (used for pro-rated rosters).
    pub fn score_stats(&self, stats: &[T; 6]) -> T {
        let c = self.coefficients();
        c[0] + c[1..].iter().zip(stats).map(|(&b, &x)| b * x).sum::<T>()
    }

    pub fn cast<U: Scalar>(&self) -> PointsModel<U> {
        let c = self.coefficients().map(|v| U::lit(v.as_f64()));
        PointsModel::from_coefficients(c).expect("finite coefficients stay finite")
    }
}

pub fn stats_as<T: Scalar>(perf: &PlayerPerformance) -> [T; 6] {
    perf.stats().map(|s| T::lit(f64::from(s)))
}

pub fn score_player<T: Scalar>(model: &PointsModel<T>, perf: &PlayerPerformance) -> T {
    model.score_stats(&stats_as(perf))
}

fn design_row<T: Scalar>(perf: &PlayerPerformance) -> Vec<T> {
    let mut row = Vec::with_capacity(7);
    row.push(T::one());
    row.extend(stats_as::<T>(perf));
    row
}

/// Ordinary least squares fit of the points model on rows with official points.
pub fn fit_points_model<T: Scalar>(performances: &[PlayerPerformance]) -> Result<PointsModel<T>> {
    let usable: Vec<&PlayerPerformance> = performances.iter().filter(|p| p.official_points.is_some()).collect();
    if usable.len() < COEFFICIENT_COLUMNS.len() {
        return Err(Error::InsufficientData(format!(
            "need at least {} players with official points, got {}",
            COEFFICIENT_COLUMNS.len(),
            usable.len()
        )));
    }
    let x = Matrix::from_rows(&usable.iter().map(|p| design_row::<T>(p)).collect::<Vec<_>>());
    let y: Vec<T> = usable.iter().map(|p| T::lit(p.official_points.expect("filtered above"))).collect();

    let normal = Cholesky::factor(&x.gram())
        .filter(|c| c.condition_estimate().as_f64() <= CONDITION_LIMIT)
        .map(|c| c.solve(&x.t_mul_vec(&y)));
    let beta = match normal {
        Some(beta) => beta,
        None => lstsq_pivoted_qr(&x, &y)
            .map_err(|col| Error::RankDeficient { column: COEFFICIENT_COLUMNS[col].to_string() })?,
    };
    let mut c = [T::zero(); 7];
    c.copy_from_slice(&beta);
    PointsModel::from_coefficients(c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual<T> {
    pub season: i32,
    pub team: String,
    pub player: String,
    pub official: T,
    pub predicted: T,
    /// official − predicted
    pub residual: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport<T> {
    pub residuals: Vec<Residual<T>>,
    pub rmse: T,
}

pub fn residual_report<T: Scalar>(
    model: &PointsModel<T>,
    performances: &[PlayerPerformance],
) -> Result<ResidualReport<T>> {
    if performances.is_empty() {
        return Err(Error::InsufficientData("no players to report on".into()));
    }
    let mut residuals = Vec::with_capacity(performances.len());
    for p in performances {
        let official = p.official_points.ok_or_else(|| {
            Error::InsufficientData(format!("{} ({}, {}) has no official points", p.player, p.team, p.season))
        })?;
        let official = T::lit(official);
        let predicted = score_player(model, p);
        residuals.push(Residual {
            season: p.season,
            team: p.team.clone(),
            player: p.player.clone(),
            official,
            predicted,
            residual: official - predicted,
        });
    }
    let sse: T = residuals.iter().map(|r| r.residual * r.residual).sum();
    let rmse = (sse / T::from_count(residuals.len())).sqrt();
    Ok(ResidualReport { residuals, rmse })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perf(stats: [u32; 6], official: Option<f64>) -> PlayerPerformance {
        PlayerPerformance {
            season: 2018,
            team: "CSK".into(),
            player: format!("P{stats:?}"),
            appearances: 10,
            wickets: 0,
            dot_balls: 0,
            fours: 0,
            sixes: 0,
            catches: 0,
            stumpings: 0,
            official_points: official,
        }
        .with_stats(stats)
    }

    #[test]
    fn reference_scores() {
        let m = PointsModel::<f64>::reference();
        assert_eq!(score_player(&m, &perf([0; 6], None)), 0.0);
        assert_eq!(score_player(&m, &perf([1, 0, 0, 0, 0, 0], None)), 3.5);
        assert_eq!(score_player(&m, &perf([2, 10, 3, 1, 1, 0], None)), 30.5);
    }

    #[test]
    fn reference_coefficients_exact() {
        let c = PointsModel::<f64>::reference().coefficients();
        assert_eq!(c, [0.0, 3.5, 1.0, 2.5, 3.5, 2.5, 2.5]);
    }

    #[test]
    fn too_few_rows_is_insufficient() {
        let rows: Vec<_> = (0..6).map(|i| perf([i, 1, 1, 1, 1, 0], Some(1.0))).collect();
        assert!(matches!(fit_points_model::<f64>(&rows), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn identical_players_are_rank_deficient() {
        let rows: Vec<_> = (0..20).map(|_| perf([2, 30, 4, 1, 1, 0], Some(50.0))).collect();
        assert!(matches!(fit_points_model::<f64>(&rows), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn collinear_statistic_is_named() {
        // sixes always equals fours
        let rows: Vec<_> = (0..30u32)
            .map(|i| perf([i % 5, i * 3 % 17, i % 7, i % 7, i % 3, i % 2], Some(10.0 + f64::from(i))))
            .collect();
        match fit_points_model::<f64>(&rows) {
            Err(Error::RankDeficient { column }) => assert!(column == "fours" || column == "sixes"),
            other => panic!("expected RankDeficient, got {other:?}"),
        }
    }

    #[test]
    fn residuals_single_player() {
        let m = PointsModel::from_coefficients([8.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let r = residual_report(&m, &[perf([0; 6], Some(10.0))]).unwrap();
        assert_eq!(r.residuals[0].residual, 2.0);
        assert_eq!(r.rmse, 2.0);
        assert!(residual_report::<f64>(&m, &[]).is_err());
    }

    #[test]
    fn perturbed_wicket_weight_shifts_residuals() {
        let reference = PointsModel::<f64>::reference();
        let rows: Vec<_> = (0..5u32)
            .map(|i| {
                let p = perf([1, i, i % 2, 0, 1, 0], None);
                let pts = score_player(&reference, &p);
                PlayerPerformance { official_points: Some(pts), ..p }
            })
            .collect();
        let mut bumped = reference;
        bumped.per_wicket += 1.0;
        let r = residual_report(&bumped, &rows).unwrap();
        assert!(r.residuals.iter().all(|x| (x.residual + 1.0).abs() < 1e-12));
    }
}
