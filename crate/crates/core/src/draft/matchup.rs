//! Turning rosters into the normalized matchup state the objective consumes.

use std::f64::consts::SQRT_2;

use super::ScoringBasis;
use crate::error::{Error, Result};
use crate::objective::{LeagueShape, MatchupMatrix};
use crate::projection::{team_totals, CategorySchema, PlayerProjection};
use crate::stats::CorrelationMatrix;

/// Id carried by the replacement-level filler player.
pub const PHANTOM_ID: &str = "__replacement__";

/// Opponent spread used when opponents cannot be told apart.
pub const FALLBACK_SIGMA_C: f64 = 1.0;

/// Replacement-level player: the per-category median of `available`.
pub fn replacement_phantom(schema: &CategorySchema, available: &[&PlayerProjection]) -> PlayerProjection {
    let median = |mut v: Vec<f64>| -> f64 {
        if v.is_empty() {
            return 0.0;
        }
        v.sort_by(f64::total_cmp);
        let m = v.len() / 2;
        if v.len() % 2 == 1 {
            v[m]
        } else {
            0.5 * (v[m - 1] + v[m])
        }
    };
    PlayerProjection {
        id: PHANTOM_ID.to_string(),
        name: "replacement".to_string(),
        stats: (0..schema.len())
            .map(|c| median(available.iter().map(|p| p.stats[c]).collect()))
            .collect(),
        volumes: (0..schema.len())
            .map(|c| median(available.iter().map(|p| p.volumes[c]).collect()))
            .collect(),
        eligibility: Vec::new(),
    }
}

/// Pads incomplete rosters with a filler player up to `roster_size`.
#[derive(Debug, Clone)]
pub struct RosterFill<'a> {
    pub phantom: &'a PlayerProjection,
    pub roster_size: usize,
}

/// Team totals for a roster, padded by `fill` when given.
pub fn filled_totals(
    schema: &CategorySchema,
    roster: &[&PlayerProjection],
    fill: Option<&RosterFill<'_>>,
) -> Vec<f64> {
    match fill {
        Some(f) if roster.len() < f.roster_size => {
            let mut padded = roster.to_vec();
            padded.resize(f.roster_size, f.phantom);
            team_totals(schema, &padded)
        }
        _ => team_totals(schema, roster),
    }
}

/// Matchup means of a team with `totals` against each opponent total row.
pub fn matchups_from_totals(
    schema: &CategorySchema,
    basis: &ScoringBasis,
    totals: &[f64],
    opponent_totals: &[Vec<f64>],
) -> MatchupMatrix {
    let mut mu = MatchupMatrix::zeros(schema.len(), opponent_totals.len());
    for (c, cat) in schema.iter().enumerate() {
        let scale = cat.direction() / (SQRT_2 * basis.sigma_total[c]);
        for (o, opp) in opponent_totals.iter().enumerate() {
            mu.set(c, o, (totals[c] - opp[c]) * scale);
        }
    }
    mu
}

/// `sqrt(2)` times the spread of opponents' normalized category strengths.
///
/// Falls back to [`FALLBACK_SIGMA_C`] for every category when fewer than two
/// opponents have distinguishable rosters.
pub fn opponent_spread(
    schema: &CategorySchema,
    basis: &ScoringBasis,
    opponent_totals: &[Vec<f64>],
    distinct_rosters: usize,
) -> Vec<f64> {
    if distinct_rosters < 2 {
        return vec![FALLBACK_SIGMA_C; schema.len()];
    }
    let n = opponent_totals.len() as f64;
    (0..schema.len())
        .map(|c| {
            let scaled: Vec<f64> = opponent_totals
                .iter()
                .map(|t| t[c] / (SQRT_2 * basis.sigma_total[c]))
                .collect();
            let mean = scaled.iter().sum::<f64>() / n;
            let var = scaled.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
            SQRT_2 * var.sqrt()
        })
        .collect()
}

pub(crate) fn count_distinct(rosters: &[Vec<&PlayerProjection>]) -> usize {
    let mut keys: Vec<Vec<&str>> = rosters
        .iter()
        .map(|r| {
            let mut ids: Vec<&str> = r.iter().map(|p| p.id.as_str()).collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    keys.sort();
    keys.dedup();
    keys.len()
}

/// Normalized matchup state of `drafter` against `opponents`, plus the
/// league shape (correlation `rho` and opponent spreads) it is evaluated in.
///
/// `mu[c][o] = dir_c * (T_c - O_{o,c}) / (sqrt(2) * sigma_c)`, where
/// percentage totals are volume-weighted rates and incomplete rosters are
/// padded by `fill`.
pub fn build_matchup_state(
    schema: &CategorySchema,
    basis: &ScoringBasis,
    rho: &CorrelationMatrix,
    drafter: &[&PlayerProjection],
    opponents: &[Vec<&PlayerProjection>],
    fill: Option<&RosterFill<'_>>,
) -> Result<(MatchupMatrix, LeagueShape)> {
    if opponents.is_empty() {
        return Err(Error::validation("at least one opponent is required"));
    }
    if basis.len() != schema.len() || rho.dim() != schema.len() {
        return Err(Error::DimensionMismatch(
            "schema, basis and correlation must cover the same categories".into(),
        ));
    }
    let own = filled_totals(schema, drafter, fill);
    let opp: Vec<Vec<f64>> = opponents.iter().map(|r| filled_totals(schema, r, fill)).collect();
    let state = matchups_from_totals(schema, basis, &own, &opp);
    let sigma_c = opponent_spread(schema, basis, &opp, count_distinct(opponents));
    let shape = LeagueShape::new(rho.clone(), sigma_c, opponents.len())?;
    Ok((state, shape))
}
