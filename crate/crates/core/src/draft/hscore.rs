//! Objective-driven pick selection.
//!
//! Each pre-filtered candidate is scored by the win probability of the
//! roster it would complete: current roster, the candidate, replacement-level
//! fillers for the remaining picks, and a controllable reshaping of those
//! future picks. The reshaping is a per-category vector in standardized
//! units that sums to zero (future picks are assumed average in total value
//! but free in profile), bounded in norm by a per-pick budget, and tuned by
//! projected gradient ascent on the objective.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matchup::{count_distinct, filled_totals, matchups_from_totals, opponent_spread};
use super::{replacement_phantom, DraftContext, DraftState, RosterFill};
use crate::error::{Error, Result};
use crate::gradient::evaluate_with_gradient;
use crate::objective::{LeagueShape, MatchupMatrix, ObjectiveBreakdown, PreparedShape};
use crate::projection::PlayerProjection;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HScoreParams {
    /// Candidates considered per pick, taken from the top of the G-score order.
    pub width: usize,
    /// Projected-gradient iterations per candidate.
    pub steps: usize,
    /// First step length as a fraction of the reshaping radius.
    pub step_size: f64,
    /// Stops once the projected gradient norm falls below this.
    pub grad_tol: f64,
    /// Multiplier on the per-pick reshaping budget.
    pub budget_scale: f64,
}

impl Default for HScoreParams {
    fn default() -> Self {
        HScoreParams {
            width: 40,
            steps: 200,
            step_size: 0.05,
            grad_tol: 1e-6,
            budget_scale: 0.05,
        }
    }
}

impl HScoreParams {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 {
            return Err(Error::validation("candidate width must be positive"));
        }
        if !(self.step_size > 0.0) || !(self.grad_tol >= 0.0) || !(self.budget_scale >= 0.0) {
            return Err(Error::validation(
                "step size, tolerance and budget must be non-negative",
            ));
        }
        Ok(())
    }
}

/// Result of evaluating one candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateEval {
    pub player: usize,
    pub v: f64,
    pub breakdown: ObjectiveBreakdown,
    /// Matchup state at the best reshaping found.
    pub state: MatchupMatrix,
    pub shape: LeagueShape,
    /// Future-pick reshaping in standardized units.
    pub future: Vec<f64>,
}

/// Index of the highest value; the earliest entry wins ties.
pub fn select_best(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if best.is_none_or(|b| *v > values[b]) {
            best = Some(i);
        }
    }
    best
}

/// Everything shared by the candidates of one pick.
struct PickSetup<'a> {
    ctx: &'a DraftContext,
    prepared: PreparedShape,
    opponent_totals: Vec<Vec<f64>>,
    own: Vec<&'a PlayerProjection>,
    phantom: PlayerProjection,
    radius: f64,
}

impl PickSetup<'_> {
    fn evaluate(&self, player: usize, params: &HScoreParams) -> Result<CandidateEval> {
        let ctx = self.ctx;
        let schema = ctx.schema();
        let mut roster = self.own.clone();
        roster.push(&ctx.pool()[player]);
        let fill = RosterFill {
            phantom: &self.phantom,
            roster_size: ctx.config().roster_size,
        };
        let totals = filled_totals(schema, &roster, Some(&fill));
        let base = matchups_from_totals(schema, ctx.basis(), &totals, &self.opponent_totals);
        let k = ctx.model().mu_per_z();

        let mut d = vec![0.0; schema.len()];
        let shift = |d: &[f64]| -> Vec<f64> { d.iter().zip(k).map(|(x, k)| x * k).collect() };
        let mut best_v = f64::NEG_INFINITY;
        let mut best: Option<(ObjectiveBreakdown, MatchupMatrix, Vec<f64>)> = None;

        let steps = if self.radius > 0.0 { params.steps } else { 0 };
        for step in 0..=steps {
            let state = base.shifted_rows(&shift(&d));
            let (b, g) = evaluate_with_gradient(&state, &self.prepared)?;
            if b.v > best_v {
                best_v = b.v;
                best = Some((b, state.clone(), d.clone()));
            }
            if step == steps {
                break;
            }
            let mut dir: Vec<f64> = (0..schema.len())
                .map(|c| k[c] * g.row(c).iter().sum::<f64>())
                .collect();
            center(&mut dir);
            let norm = l2(&dir);
            if norm < params.grad_tol {
                break;
            }
            let len = params.step_size * self.radius / (1.0 + 0.02 * step as f64);
            for (x, g) in d.iter_mut().zip(&dir) {
                *x += len * g / norm;
            }
            center(&mut d);
            let n = l2(&d);
            if n > self.radius {
                d.iter_mut().for_each(|x| *x *= self.radius / n);
            }
        }
        let (breakdown, state, future) = best.expect("at least one evaluation");
        Ok(CandidateEval {
            player,
            v: breakdown.v,
            breakdown,
            state,
            shape: self.prepared.shape().clone(),
            future,
        })
    }
}

fn center(v: &mut [f64]) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= m);
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn setup<'a>(
    ctx: &'a DraftContext,
    draft: &DraftState,
    seat: usize,
    available: &[usize],
    params: &HScoreParams,
) -> Result<PickSetup<'a>> {
    let schema = ctx.schema();
    let config = ctx.config();
    let avail_refs = ctx.players(available);
    let phantom = replacement_phantom(schema, &avail_refs);
    let fill = RosterFill {
        phantom: &phantom,
        roster_size: config.roster_size,
    };
    let opponents: Vec<Vec<&PlayerProjection>> = (0..config.teams)
        .filter(|&s| s != seat)
        .map(|s| ctx.players(draft.roster(s)))
        .collect();
    let opponent_totals: Vec<Vec<f64>> = opponents
        .iter()
        .map(|r| filled_totals(schema, r, Some(&fill)))
        .collect();
    let sigma_c = opponent_spread(schema, ctx.basis(), &opponent_totals, count_distinct(&opponents));
    let shape = LeagueShape::new(ctx.rho().clone(), sigma_c, opponents.len())?;

    // Per-pick budget: typical off-balance spread of the best remaining
    // players' standardized profiles.
    let top: Vec<Vec<f64>> = available
        .iter()
        .take(config.teams)
        .map(|&i| {
            let mut z = ctx.model().components(&ctx.pool()[i]);
            center(&mut z);
            z
        })
        .collect();
    let per_pick = if top.is_empty() {
        0.0
    } else {
        (top.iter()
            .map(|z| z.iter().map(|x| x * x).sum::<f64>())
            .sum::<f64>()
            / top.len() as f64)
            .sqrt()
    };
    let own_len = draft.roster(seat).len();
    let remaining_after = config.roster_size.saturating_sub(own_len + 1);
    Ok(PickSetup {
        ctx,
        prepared: PreparedShape::new(shape)?,
        opponent_totals,
        own: ctx.players(draft.roster(seat)),
        phantom,
        radius: remaining_after as f64 * per_pick * params.budget_scale,
    })
}

/// Scores the top `params.width` available players (G-score order) for
/// `seat`. Results keep the pre-filter order.
pub fn evaluate_candidates(
    ctx: &DraftContext,
    draft: &DraftState,
    seat: usize,
    params: &HScoreParams,
) -> Result<Vec<CandidateEval>> {
    params.validate()?;
    if seat >= ctx.config().teams {
        return Err(Error::validation(format!("seat {seat} out of range")));
    }
    if draft.roster(seat).len() >= ctx.config().roster_size {
        return Err(Error::validation(format!("seat {seat} roster is full")));
    }
    let available = ctx.available_ranked(draft);
    if available.is_empty() {
        return Err(Error::Precondition("no players left to draft".into()));
    }
    let setup = setup(ctx, draft, seat, &available, params)?;
    available
        .iter()
        .take(params.width)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&p| setup.evaluate(p, params))
        .collect()
}

/// Pool index of the candidate with the highest objective value.
pub fn hscore_pick(
    ctx: &DraftContext,
    draft: &DraftState,
    seat: usize,
    params: &HScoreParams,
) -> Result<usize> {
    let evals = evaluate_candidates(ctx, draft, seat, params)?;
    let values: Vec<f64> = evals.iter().map(|e| e.v).collect();
    let best = select_best(&values).expect("candidate list is non-empty");
    Ok(evals[best].player)
}
