//! Season simulation: noisy realizations of drafted rosters, Rotisserie
//! scoring, and multi-draft experiments comparing agents.

mod experiment;
mod noise;
mod pool;

pub use experiment::{
    detect_punts, punt_rate, run_experiment, BatchResult, ExperimentConfig, Layout, PoolSource, SimReport,
    TeamRecord, WinRate, REPORT_SCHEMA_VERSION,
};
pub use noise::{build_noise_covariance, default_tau, default_taus, NoiseModelConfig, SeasonNoise};
pub use pool::{synthetic_pool, SyntheticPoolConfig};

use serde::{Deserialize, Serialize};

use crate::draft::{DraftContext, DraftState};
use crate::error::{Error, Result};
use crate::projection::team_totals;
use crate::rng::SeededRng;
use crate::scoring::{category_points, winner_of, Winner};

/// Default punt threshold in standard points.
pub const DEFAULT_PUNT_THRESHOLD: f64 = 1.5;

/// Final standings of one simulated season.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeasonStandings {
    /// Realized category totals, `[team][category]`, in category units.
    pub category_totals: Vec<Vec<f64>>,
    /// Internal-convention points, `[team][category]`.
    pub points: Vec<Vec<f64>>,
    /// Internal-convention totals per team.
    pub totals: Vec<f64>,
    pub winner: Winner,
}

impl SeasonStandings {
    /// Standard convention: last place in a category earns one point.
    pub fn standard_points(&self, team: usize, category: usize) -> f64 {
        self.points[team][category] + 1.0
    }

    pub fn standard_totals(&self) -> Vec<f64> {
        let c = self.points.first().map_or(0, Vec::len) as f64;
        self.totals.iter().map(|t| t + c).collect()
    }
}

/// Plays one season: each team's projected totals plus one correlated noise
/// draw, then Rotisserie scoring on the realized totals.
///
/// Noise is drawn in the direction-adjusted basis, so a lucky draw always
/// helps the team, including in lower-is-better categories.
pub fn simulate_season(
    ctx: &DraftContext,
    draft: &DraftState,
    noise: &SeasonNoise,
    rng: &mut SeededRng,
) -> Result<SeasonStandings> {
    let schema = ctx.schema();
    let config = ctx.config();
    if !draft.is_complete() {
        return Err(Error::Precondition("draft is not complete".into()));
    }
    if noise.dim() != schema.len() {
        return Err(Error::DimensionMismatch("noise and schema disagree".into()));
    }
    let c_len = schema.len();
    let mut category_totals = Vec::with_capacity(config.teams);
    let mut scores = vec![0.0; config.teams * c_len];
    for team in 0..config.teams {
        let mut totals = team_totals(schema, &ctx.players(draft.roster(team)));
        let eps = noise.sample(rng);
        for (c, cat) in schema.iter().enumerate() {
            let dir = cat.direction();
            totals[c] += dir * eps[c];
            scores[team * c_len + c] = dir * totals[c];
        }
        category_totals.push(totals);
    }
    let mut points = vec![vec![0.0; c_len]; config.teams];
    let mut column = vec![0.0; config.teams];
    let mut out = vec![0.0; config.teams];
    for c in 0..c_len {
        for t in 0..config.teams {
            column[t] = scores[t * c_len + c];
        }
        category_points(&column, &mut out);
        for t in 0..config.teams {
            points[t][c] = out[t];
        }
    }
    let totals: Vec<f64> = points.iter().map(|p| p.iter().sum()).collect();
    Ok(SeasonStandings {
        category_totals,
        points,
        winner: winner_of(&totals),
        totals,
    })
}
