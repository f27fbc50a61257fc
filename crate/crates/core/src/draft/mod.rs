//! Snake drafts between a static G-score baseline and an agent that picks by
//! maximizing the win-probability objective.

mod basis;
pub mod gscore;
pub mod hscore;
pub mod matchup;
pub mod snake;

pub use basis::ScoringBasis;
pub use gscore::{gscore_rank, GScoreModel};
pub use hscore::{evaluate_candidates, hscore_pick, select_best, CandidateEval, HScoreParams};
pub use matchup::{build_matchup_state, replacement_phantom, RosterFill, PHANTOM_ID};
pub use snake::{run_draft, seat_for_pick};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projection::{CategorySchema, PlayerProjection};
use crate::stats::{CorrelationMatrix, MAX_TABLE_N};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DraftConfig {
    /// Number of teams `K`; every team faces `K - 1` opponents.
    pub teams: usize,
    /// Players per roster `|N|`.
    pub roster_size: usize,
}

impl DraftConfig {
    pub fn new(teams: usize, roster_size: usize) -> Result<Self> {
        if teams < 2 {
            return Err(Error::validation(format!("need at least 2 teams, got {teams}")));
        }
        if teams - 1 > MAX_TABLE_N {
            return Err(Error::UnsupportedLeagueSize(teams - 1));
        }
        if roster_size == 0 {
            return Err(Error::validation("roster size must be positive"));
        }
        Ok(DraftConfig { teams, roster_size })
    }

    pub fn total_picks(&self) -> usize {
        self.teams * self.roster_size
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pick {
    /// Global pick number, starting at 0.
    pub number: usize,
    pub seat: usize,
    /// Index into the draft pool.
    pub player: usize,
}

/// Rosters and pick history of one draft. Players are pool indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DraftState {
    config: DraftConfig,
    rosters: Vec<Vec<usize>>,
    picks: Vec<Pick>,
    drafted: Vec<bool>,
}

impl DraftState {
    pub fn new(config: DraftConfig, pool_len: usize) -> Result<Self> {
        if pool_len < config.total_picks() {
            return Err(Error::validation(format!(
                "pool of {pool_len} players cannot fill {} rosters of {}",
                config.teams, config.roster_size
            )));
        }
        Ok(DraftState {
            config,
            rosters: vec![Vec::new(); config.teams],
            picks: Vec::new(),
            drafted: vec![false; pool_len],
        })
    }

    pub fn config(&self) -> DraftConfig {
        self.config
    }

    pub fn rosters(&self) -> &[Vec<usize>] {
        &self.rosters
    }

    pub fn roster(&self, seat: usize) -> &[usize] {
        &self.rosters[seat]
    }

    pub fn picks(&self) -> &[Pick] {
        &self.picks
    }

    pub fn pool_len(&self) -> usize {
        self.drafted.len()
    }

    pub fn is_complete(&self) -> bool {
        self.picks.len() == self.config.total_picks()
    }

    /// Round of the next pick, starting at 0.
    pub fn round(&self) -> usize {
        self.picks.len() / self.config.teams
    }

    /// Seat due to pick next, if the draft is not over.
    pub fn on_the_clock(&self) -> Option<usize> {
        (!self.is_complete()).then(|| seat_for_pick(self.picks.len(), self.config.teams))
    }

    pub fn is_available(&self, player: usize) -> bool {
        player < self.drafted.len() && !self.drafted[player]
    }

    pub fn available(&self) -> Vec<usize> {
        (0..self.drafted.len()).filter(|&i| !self.drafted[i]).collect()
    }

    /// Records `player` for `seat`, which must be on the clock.
    pub fn apply(&mut self, seat: usize, player: usize) -> Result<Pick> {
        match self.on_the_clock() {
            None => return Err(Error::validation("draft is complete")),
            Some(s) if s != seat => {
                return Err(Error::validation(format!(
                    "seat {seat} is not on the clock (seat {s} is)"
                )))
            }
            _ => {}
        }
        if player >= self.drafted.len() {
            return Err(Error::validation(format!("unknown player index {player}")));
        }
        if self.drafted[player] {
            return Err(Error::validation(format!(
                "player index {player} already drafted"
            )));
        }
        let pick = Pick {
            number: self.picks.len(),
            seat,
            player,
        };
        self.drafted[player] = true;
        self.rosters[seat].push(player);
        self.picks.push(pick);
        Ok(pick)
    }

    /// Reverts the most recent pick.
    pub fn undo(&mut self) -> Option<Pick> {
        let pick = self.picks.pop()?;
        self.drafted[pick.player] = false;
        self.rosters[pick.seat].pop();
        Some(pick)
    }
}

/// Per-seat drafting strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Agent {
    GScore,
    HScore(HScoreParams),
}

impl Agent {
    pub fn h_default() -> Self {
        Agent::HScore(HScoreParams::default())
    }

    pub fn pick(&self, ctx: &DraftContext, draft: &DraftState, seat: usize) -> Result<usize> {
        match self {
            Agent::GScore => ctx
                .best_available(draft)
                .ok_or_else(|| Error::Precondition("no players left to draft".into())),
            Agent::HScore(params) => hscore_pick(ctx, draft, seat, params),
        }
    }
}

/// Everything about a pool that stays fixed during a draft: projections,
/// scoring basis, the fitted G-score model, category correlation and the
/// pool's G-score order.
#[derive(Debug, Clone)]
pub struct DraftContext {
    schema: CategorySchema,
    pool: Vec<PlayerProjection>,
    basis: ScoringBasis,
    config: DraftConfig,
    model: GScoreModel,
    rho: CorrelationMatrix,
    order: Vec<usize>,
}

impl DraftContext {
    pub fn new(
        schema: CategorySchema,
        pool: Vec<PlayerProjection>,
        basis: ScoringBasis,
        config: DraftConfig,
    ) -> Result<Self> {
        if basis.len() != schema.len() {
            return Err(Error::DimensionMismatch(format!(
                "basis has {} categories, schema has {}",
                basis.len(),
                schema.len()
            )));
        }
        if pool.len() < config.total_picks() {
            return Err(Error::validation(format!(
                "pool of {} players cannot fill {} rosters of {}",
                pool.len(),
                config.teams,
                config.roster_size
            )));
        }
        for (i, p) in pool.iter().enumerate() {
            p.validate(&schema)?;
            if pool[..i].iter().any(|q| q.id == p.id) {
                return Err(Error::validation(format!("duplicate player id {}", p.id)));
            }
        }
        let q_size = config.total_picks();
        let model = GScoreModel::fit(&schema, &pool, &basis, config.roster_size, q_size)?;
        let order = model.rank(&pool, 0..pool.len());
        let q: Vec<&PlayerProjection> = order.iter().take(q_size).map(|&i| &pool[i]).collect();
        let rho = model.correlation(&q);
        Ok(DraftContext {
            schema,
            pool,
            basis,
            config,
            model,
            rho,
            order,
        })
    }

    pub fn schema(&self) -> &CategorySchema {
        &self.schema
    }

    pub fn pool(&self) -> &[PlayerProjection] {
        &self.pool
    }

    pub fn basis(&self) -> &ScoringBasis {
        &self.basis
    }

    pub fn config(&self) -> DraftConfig {
        self.config
    }

    pub fn model(&self) -> &GScoreModel {
        &self.model
    }

    pub fn rho(&self) -> &CorrelationMatrix {
        &self.rho
    }

    /// Whole pool in G-score order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.pool.iter().position(|p| p.id == id)
    }

    pub fn new_draft(&self) -> DraftState {
        DraftState::new(self.config, self.pool.len()).expect("pool size checked on construction")
    }

    /// Undrafted players in G-score order.
    pub fn available_ranked(&self, draft: &DraftState) -> Vec<usize> {
        self.order
            .iter()
            .copied()
            .filter(|&i| draft.is_available(i))
            .collect()
    }

    pub fn best_available(&self, draft: &DraftState) -> Option<usize> {
        self.order.iter().copied().find(|&i| draft.is_available(i))
    }

    pub fn players(&self, indices: &[usize]) -> Vec<&PlayerProjection> {
        indices.iter().map(|&i| &self.pool[i]).collect()
    }
}
