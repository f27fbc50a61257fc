//! Live draft state: configuration, the append-only event log, and
//! recommendation queries.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use roto_core::draft::{
    evaluate_candidates, DraftConfig, DraftContext, DraftState, HScoreParams, ScoringBasis,
};
use roto_core::io::read_projections;
use roto_core::objective::ObjectiveInput;
use roto_core::projection::{Category, CategorySchema, PlayerProjection};
use roto_core::rng::SeededRng;
use roto_core::season::{default_tau, synthetic_pool, SyntheticPoolConfig};
use roto_core::stats::norm_cdf;

use crate::error::ServiceError;

/// Upper bound on candidates evaluated per recommendation query.
pub const MAX_WIDTH: usize = 100;

fn default_chi() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PoolSpec {
    /// Generated nine-category pool.
    Synthetic {
        #[serde(default)]
        size: Option<usize>,
        #[serde(default)]
        seed: u64,
        #[serde(default)]
        low_ft_share: Option<f64>,
    },
    Players {
        players: Vec<PlayerProjection>,
    },
    /// Projection CSV text in the standard column layout.
    Csv {
        text: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeagueConfig {
    pub teams: usize,
    pub roster_size: usize,
    #[serde(default = "default_chi")]
    pub chi: f64,
    /// Defaults to the nine-category basketball schema.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub categories: Option<Vec<Category>>,
    /// Per-category noise scale overrides by name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tau: BTreeMap<String, f64>,
    pub pool: PoolSpec,
    /// Settings for recommendation queries.
    #[serde(default)]
    pub recommend: HScoreParams,
}

impl LeagueConfig {
    pub fn build(&self) -> Result<DraftContext, ServiceError> {
        let schema = match &self.categories {
            Some(c) => CategorySchema::new(c.clone())?,
            None => CategorySchema::nba_nine(),
        };
        let config = DraftConfig::new(self.teams, self.roster_size)?;
        self.recommend.validate()?;
        if self.recommend.width > MAX_WIDTH {
            return Err(ServiceError::Validation(format!(
                "recommend.width is capped at {MAX_WIDTH}"
            )));
        }
        if let Some(name) = self.tau.keys().find(|n| schema.index_of(n).is_none()) {
            return Err(ServiceError::Validation(format!(
                "tau given for unknown category {name:?}"
            )));
        }
        let tau = schema
            .iter()
            .map(|c| {
                self.tau
                    .get(&c.name)
                    .copied()
                    .or_else(|| default_tau(&c.name))
                    .ok_or_else(|| ServiceError::Validation(format!("no tau for category {:?}", c.name)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let players = match &self.pool {
            PoolSpec::Synthetic {
                size,
                seed,
                low_ft_share,
            } => {
                if schema != CategorySchema::nba_nine() {
                    return Err(ServiceError::Validation(
                        "synthetic pools require the nine-category schema".into(),
                    ));
                }
                let defaults = SyntheticPoolConfig::default();
                let cfg = SyntheticPoolConfig {
                    size: size.unwrap_or(defaults.size),
                    low_ft_share: low_ft_share.unwrap_or(defaults.low_ft_share),
                    ..defaults
                };
                synthetic_pool(&cfg, &mut SeededRng::new(*seed, 0))?
            }
            PoolSpec::Players { players } => players.clone(),
            PoolSpec::Csv { text } => read_projections(text.as_bytes(), &schema, Path::new("pool.csv"))?,
        };
        let basis = ScoringBasis::from_tau(&schema, &tau, self.roster_size, self.chi)?;
        Ok(DraftContext::new(schema, players, basis, config)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    Pick {
        seat: usize,
        player_id: String,
    },
    /// Compensating event: removes the most recent pick.
    Undo {
        seat: usize,
        player_id: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    /// League version after this event.
    pub version: u64,
    #[serde(flatten)]
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PickView {
    pub number: usize,
    pub seat: usize,
    pub player_id: String,
    pub player_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerView {
    pub player_id: String,
    pub player_name: String,
    pub g_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeagueView {
    pub id: String,
    pub version: u64,
    pub teams: usize,
    pub roster_size: usize,
    pub chi: f64,
    pub categories: Vec<String>,
    pub complete: bool,
    pub round: usize,
    pub on_the_clock: Option<usize>,
    pub picks: Vec<PickView>,
    /// Player ids per seat, in pick order.
    pub rosters: Vec<Vec<String>>,
    /// Undrafted players, best G-score first.
    pub available: Vec<PlayerView>,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub player_id: String,
    pub player_name: String,
    pub g_score: f64,
    /// Win probability with this player on the roster.
    pub v: f64,
    /// `v` minus the baseline candidate's `v`.
    pub delta_v: f64,
    /// Per category, the chance of beating an opponent in it, averaged over
    /// opponents.
    pub category_win_prob: Vec<f64>,
    /// The matchup state `v` was computed from, evaluable on its own.
    pub state: ObjectiveInput,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub player_id: String,
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecommendationList {
    pub league_id: String,
    pub version: u64,
    pub seat: usize,
    pub width: usize,
    pub categories: Vec<String>,
    /// The best available player by G-score.
    pub baseline: Baseline,
    /// Sorted by `v`, highest first.
    pub recommendations: Vec<Recommendation>,
}

/// Persistable form of a league: its configuration and event log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeagueRecord {
    pub id: String,
    pub config: LeagueConfig,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone)]
pub struct LiveDraft {
    id: String,
    config: LeagueConfig,
    ctx: Arc<DraftContext>,
    draft: DraftState,
    events: Vec<Event>,
}

impl LiveDraft {
    pub fn new(id: String, config: LeagueConfig) -> Result<Self, ServiceError> {
        let ctx = config.build()?;
        Ok(LiveDraft {
            id,
            config,
            draft: ctx.new_draft(),
            ctx: Arc::new(ctx),
            events: Vec::new(),
        })
    }

    /// Rebuilds a league by folding its event log over an empty draft.
    pub fn replay(record: LeagueRecord) -> Result<Self, ServiceError> {
        let mut live = LiveDraft::new(record.id, record.config)?;
        for event in record.events {
            let expected = live.version();
            let applied = match &event.kind {
                EventKind::Pick { seat, player_id } => live.record_pick(expected, *seat, player_id)?,
                EventKind::Undo { .. } => live.undo_last(expected)?,
            };
            if applied != event {
                return Err(ServiceError::Validation(format!(
                    "event log diverges at version {}",
                    event.version
                )));
            }
        }
        Ok(live)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn version(&self) -> u64 {
        self.events.len() as u64
    }

    pub fn draft(&self) -> &DraftState {
        &self.draft
    }

    pub fn context(&self) -> &Arc<DraftContext> {
        &self.ctx
    }

    pub fn record(&self) -> LeagueRecord {
        LeagueRecord {
            id: self.id.clone(),
            config: self.config.clone(),
            events: self.events.clone(),
        }
    }

    fn check_version(&self, expected: u64) -> Result<(), ServiceError> {
        if expected != self.version() {
            return Err(ServiceError::Conflict {
                expected,
                current: self.version(),
            });
        }
        Ok(())
    }

    fn push(&mut self, kind: EventKind) -> Event {
        let event = Event {
            version: self.version() + 1,
            kind,
        };
        self.events.push(event.clone());
        event
    }

    pub fn record_pick(
        &mut self,
        expected: u64,
        seat: usize,
        player_id: &str,
    ) -> Result<Event, ServiceError> {
        self.check_version(expected)?;
        let player = self
            .ctx
            .index_of(player_id)
            .ok_or_else(|| ServiceError::Validation(format!("unknown player {player_id:?}")))?;
        self.draft.apply(seat, player)?;
        Ok(self.push(EventKind::Pick {
            seat,
            player_id: player_id.to_string(),
        }))
    }

    pub fn undo_last(&mut self, expected: u64) -> Result<Event, ServiceError> {
        self.check_version(expected)?;
        let pick = self
            .draft
            .undo()
            .ok_or_else(|| ServiceError::Validation("no picks to undo".into()))?;
        Ok(self.push(EventKind::Undo {
            seat: pick.seat,
            player_id: self.ctx.pool()[pick.player].id.clone(),
        }))
    }

    pub fn view(&self) -> LeagueView {
        let pool = self.ctx.pool();
        let model = self.ctx.model();
        let config = self.draft.config();
        LeagueView {
            id: self.id.clone(),
            version: self.version(),
            teams: config.teams,
            roster_size: config.roster_size,
            chi: self.ctx.basis().chi,
            categories: self.ctx.schema().names(),
            complete: self.draft.is_complete(),
            round: self.draft.round(),
            on_the_clock: self.draft.on_the_clock(),
            picks: self
                .draft
                .picks()
                .iter()
                .map(|p| PickView {
                    number: p.number,
                    seat: p.seat,
                    player_id: pool[p.player].id.clone(),
                    player_name: pool[p.player].name.clone(),
                })
                .collect(),
            rosters: self
                .draft
                .rosters()
                .iter()
                .map(|r| r.iter().map(|&i| pool[i].id.clone()).collect())
                .collect(),
            available: self
                .ctx
                .available_ranked(&self.draft)
                .into_iter()
                .map(|i| PlayerView {
                    player_id: pool[i].id.clone(),
                    player_name: pool[i].name.clone(),
                    g_score: model.score(&pool[i]),
                })
                .collect(),
            events: self.events.clone(),
        }
    }

    pub fn recommend_params(&self) -> &HScoreParams {
        &self.config.recommend
    }
}

/// Ranks candidates for `seat` by win probability. Pure: works on a copy of
/// the league's state.
pub fn recommendations(
    league_id: &str,
    version: u64,
    ctx: &DraftContext,
    draft: &DraftState,
    seat: Option<usize>,
    params: &HScoreParams,
) -> Result<RecommendationList, ServiceError> {
    let seat = match seat.or_else(|| draft.on_the_clock()) {
        Some(s) => s,
        None => return Err(ServiceError::Validation("the draft is complete".into())),
    };
    if params.width == 0 || params.width > MAX_WIDTH {
        return Err(ServiceError::Validation(format!(
            "width must be in 1..={MAX_WIDTH}"
        )));
    }
    let evals = evaluate_candidates(ctx, draft, seat, params)?;
    let pool = ctx.pool();
    let baseline = Baseline {
        player_id: pool[evals[0].player].id.clone(),
        v: evals[0].v,
    };
    let mut recommendations: Vec<Recommendation> = evals
        .into_iter()
        .map(|e| {
            let p = &pool[e.player];
            let category_win_prob = (0..e.state.categories())
                .map(|c| {
                    let row = e.state.row(c);
                    row.iter().map(|mu| norm_cdf(*mu)).sum::<f64>() / row.len() as f64
                })
                .collect();
            Recommendation {
                player_id: p.id.clone(),
                player_name: p.name.clone(),
                g_score: ctx.model().score(p),
                v: e.v,
                delta_v: e.v - baseline.v,
                category_win_prob,
                state: ObjectiveInput::new(e.state, &e.shape),
            }
        })
        .collect();
    recommendations.sort_by(|a, b| b.v.total_cmp(&a.v));
    Ok(RecommendationList {
        league_id: league_id.to_string(),
        version,
        seat,
        width: params.width,
        categories: ctx.schema().names(),
        baseline,
        recommendations,
    })
}
