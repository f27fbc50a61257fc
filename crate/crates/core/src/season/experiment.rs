use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{simulate_season, synthetic_pool, NoiseModelConfig, SeasonNoise, SyntheticPoolConfig};
use crate::draft::{run_draft, Agent, DraftConfig, DraftContext, HScoreParams};
use crate::error::{Error, Result};
use crate::oracle::Z95;
use crate::projection::{CategorySchema, PlayerProjection};
use crate::rng::SeededRng;
use crate::scoring::LeagueSample;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

const POOL_STREAM: u64 = 0;
const SEASON_STREAM: u64 = 1;

/// Which agents sit where.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Layout {
    /// Every seat drafts by G-score; the focal team rotates through seats.
    AllG,
    /// One objective-driven seat against a G-score field, rotating through
    /// every seat.
    RotatingH { params: HScoreParams },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PoolSource {
    /// A fresh synthetic pool per batch.
    Synthetic(SyntheticPoolConfig),
    /// The same player list for every batch.
    Provided {
        label: String,
        players: Vec<PlayerProjection>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub categories: CategorySchema,
    pub teams: usize,
    pub roster_size: usize,
    pub chi: f64,
    pub tau: Vec<f64>,
    /// Independent draft batches; each batch drafts once per seat.
    pub batches: usize,
    pub seasons_per_draft: usize,
    pub punt_threshold: f64,
    pub layout: Layout,
    pub pool: PoolSource,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<DraftConfig> {
        let draft = DraftConfig::new(self.teams, self.roster_size)?;
        if self.tau.len() != self.categories.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} tau values for {} categories",
                self.tau.len(),
                self.categories.len()
            )));
        }
        if self.batches == 0 || self.seasons_per_draft == 0 {
            return Err(Error::validation(
                "batches and seasons_per_draft must be positive",
            ));
        }
        if !(self.chi > 0.0 && self.chi <= 1.0) {
            return Err(Error::validation(format!("chi {} must be in (0, 1]", self.chi)));
        }
        if !(self.punt_threshold >= 0.0) {
            return Err(Error::validation("punt threshold must be non-negative"));
        }
        if matches!(self.pool, PoolSource::Synthetic(_)) && self.categories != CategorySchema::nba_nine() {
            return Err(Error::validation(
                "synthetic pools require the nine-category schema",
            ));
        }
        if let Layout::RotatingH { params } = &self.layout {
            params.validate()?;
        }
        Ok(draft)
    }

    /// Total simulated seasons.
    pub fn seasons(&self) -> usize {
        self.batches * self.teams * self.seasons_per_draft
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WinRate {
    pub seasons: u64,
    /// Sum of win shares (ties split).
    pub wins: f64,
    pub rate: f64,
    /// 95% binomial half-width.
    pub ci_halfwidth: f64,
}

impl WinRate {
    fn new(wins: f64, seasons: u64) -> Self {
        let rate = wins / seasons as f64;
        WinRate {
            seasons,
            wins,
            rate,
            ci_halfwidth: Z95 * (rate * (1.0 - rate) / seasons as f64).sqrt(),
        }
    }

    pub fn excludes(&self, p: f64) -> bool {
        (self.rate - p).abs() > self.ci_halfwidth
    }
}

/// Focal-team win rate per seat within one batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchResult {
    pub batch: usize,
    pub seat_win_rate: Vec<f64>,
    pub mean: f64,
}

/// One focal roster and how it fared over its seasons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamRecord {
    pub batch: usize,
    pub seat: usize,
    pub seasons: u64,
    pub win_share: f64,
    /// Mean standard points per category.
    pub category_points: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub schema_version: u32,
    pub master_seed: u64,
    pub config: ExperimentConfig,
    pub categories: Vec<String>,
    pub batches: Vec<BatchResult>,
    /// Focal win rate per seat over all batches.
    pub seat_win_rate: Vec<f64>,
    pub focal: WinRate,
    /// Win share by seat over every simulated season, whoever sat there.
    pub league_seat_share: Vec<f64>,
    /// Mean standard points per category: focal teams, then everyone else.
    pub focal_category_points: Vec<f64>,
    pub field_category_points: Vec<f64>,
    /// Mean standard points per category of the focal team, by seat.
    pub seat_category_points: Vec<Vec<f64>>,
    pub teams: Vec<TeamRecord>,
    /// Seasons whose internal point total broke the constant-sum identity.
    pub conservation_violations: u64,
}

struct UnitResult {
    record: TeamRecord,
    field_points: Vec<f64>,
    seat_share: Vec<f64>,
    violations: u64,
}

fn batch_context(
    config: &ExperimentConfig,
    draft: DraftConfig,
    master_seed: u64,
    batch: usize,
) -> Result<DraftContext> {
    let players = match &config.pool {
        PoolSource::Synthetic(cfg) => {
            let mut rng = SeededRng::new(master_seed, POOL_STREAM).derive(batch as u64);
            synthetic_pool(cfg, &mut rng)?
        }
        PoolSource::Provided { players, .. } => players.clone(),
    };
    let basis = crate::draft::ScoringBasis::from_tau(
        &config.categories,
        &config.tau,
        config.roster_size,
        config.chi,
    )?;
    DraftContext::new(config.categories.clone(), players, basis, draft)
}

fn run_unit(
    config: &ExperimentConfig,
    ctx: &DraftContext,
    noise: &SeasonNoise,
    master_seed: u64,
    batch: usize,
    seat: usize,
) -> Result<UnitResult> {
    let teams = config.teams;
    let c_len = config.categories.len();
    let agents: Vec<Agent> = (0..teams)
        .map(|s| match &config.layout {
            Layout::RotatingH { params } if s == seat => Agent::HScore(params.clone()),
            _ => Agent::GScore,
        })
        .collect();
    let draft = run_draft(&agents, ctx)?;
    let base = SeededRng::new(master_seed, SEASON_STREAM)
        .derive(batch as u64)
        .derive(seat as u64);
    let expected = LeagueSample::expected_total(c_len, teams);

    let mut win_share = 0.0;
    let mut focal_points = vec![0.0; c_len];
    let mut field_points = vec![0.0; c_len];
    let mut seat_share = vec![0.0; teams];
    let mut violations = 0;
    for season in 0..config.seasons_per_draft {
        let mut rng = base.derive(season as u64);
        let st = simulate_season(ctx, &draft, noise, &mut rng)?;
        if st.totals.iter().sum::<f64>() != expected {
            violations += 1;
        }
        win_share += st.winner.share(seat);
        for (t, share) in seat_share.iter_mut().enumerate() {
            *share += st.winner.share(t);
        }
        for t in 0..teams {
            let target = if t == seat {
                &mut focal_points
            } else {
                &mut field_points
            };
            for c in 0..c_len {
                target[c] += st.standard_points(t, c);
            }
        }
    }
    let n = config.seasons_per_draft as f64;
    focal_points.iter_mut().for_each(|p| *p /= n);
    field_points.iter_mut().for_each(|p| *p /= n * (teams - 1) as f64);
    Ok(UnitResult {
        record: TeamRecord {
            batch,
            seat,
            seasons: config.seasons_per_draft as u64,
            win_share,
            category_points: focal_points,
        },
        field_points,
        seat_share,
        violations,
    })
}

/// Runs `batches x teams` drafts (the focal seat rotating through every
/// position) and simulates `seasons_per_draft` seasons after each.
///
/// Season noise depends only on `(master_seed, batch, seat, season)`, so two
/// runs that differ only in `chi` or the layout see paired randomness. Work
/// is spread over the current rayon pool and merged in a fixed order, so the
/// report does not depend on the worker count.
pub fn run_experiment(config: &ExperimentConfig, master_seed: u64) -> Result<SimReport> {
    let draft_cfg = config.validate()?;
    let teams = config.teams;
    let c_len = config.categories.len();

    let contexts: Vec<(DraftContext, SeasonNoise)> = (0..config.batches)
        .into_par_iter()
        .map(|b| {
            let ctx = batch_context(config, draft_cfg, master_seed, b)?;
            let noise = SeasonNoise::new(
                &NoiseModelConfig {
                    tau: config.tau.clone(),
                    chi: config.chi,
                    roster_size: config.roster_size,
                    rho: ctx.rho().clone(),
                },
                ctx.schema(),
            )?;
            Ok((ctx, noise))
        })
        .collect::<Result<_>>()?;

    let units: Vec<(usize, usize)> = (0..config.batches)
        .flat_map(|b| (0..teams).map(move |s| (b, s)))
        .collect();
    let results: Vec<UnitResult> = units
        .par_iter()
        .map(|&(b, s)| run_unit(config, &contexts[b].0, &contexts[b].1, master_seed, b, s))
        .collect::<Result<_>>()?;

    let spd = config.seasons_per_draft as f64;
    let mut batches = Vec::with_capacity(config.batches);
    let mut seat_win = vec![0.0; teams];
    let mut seat_points = vec![vec![0.0; c_len]; teams];
    let mut league_share = vec![0.0; teams];
    let mut focal_points = vec![0.0; c_len];
    let mut field_points = vec![0.0; c_len];
    let mut wins = 0.0;
    let mut violations = 0;
    for (b, chunk) in results.chunks(teams).enumerate() {
        let rates: Vec<f64> = chunk.iter().map(|u| u.record.win_share / spd).collect();
        let mean = rates.iter().sum::<f64>() / teams as f64;
        for u in chunk {
            let s = u.record.seat;
            seat_win[s] += u.record.win_share;
            wins += u.record.win_share;
            violations += u.violations;
            for c in 0..c_len {
                seat_points[s][c] += u.record.category_points[c];
                focal_points[c] += u.record.category_points[c];
                field_points[c] += u.field_points[c];
            }
            for (t, share) in u.seat_share.iter().enumerate() {
                league_share[t] += share;
            }
        }
        batches.push(BatchResult {
            batch: b,
            seat_win_rate: rates,
            mean,
        });
    }
    let nb = config.batches as f64;
    let drafts = results.len() as f64;
    let total_seasons = config.seasons() as u64;
    seat_win.iter_mut().for_each(|w| *w /= nb * spd);
    seat_points
        .iter_mut()
        .for_each(|row| row.iter_mut().for_each(|p| *p /= nb));
    league_share.iter_mut().for_each(|w| *w /= total_seasons as f64);
    focal_points.iter_mut().for_each(|p| *p /= drafts);
    field_points.iter_mut().for_each(|p| *p /= drafts);

    Ok(SimReport {
        schema_version: REPORT_SCHEMA_VERSION,
        master_seed,
        config: config.clone(),
        categories: config.categories.names(),
        batches,
        seat_win_rate: seat_win,
        focal: WinRate::new(wins, total_seasons),
        league_seat_share: league_share,
        focal_category_points: focal_points,
        field_category_points: field_points,
        seat_category_points: seat_points,
        teams: results.into_iter().map(|u| u.record).collect(),
        conservation_violations: violations,
    })
}

/// Per focal team and category: average standard points below `threshold`.
pub fn detect_punts(report: &SimReport, threshold: f64) -> Vec<Vec<bool>> {
    report
        .teams
        .iter()
        .map(|t| t.category_points.iter().map(|p| *p < threshold).collect())
        .collect()
}

/// Fraction of focal teams flagged in `category`, or in any category when
/// `category` is `None`.
pub fn punt_rate(report: &SimReport, threshold: f64, category: Option<usize>) -> f64 {
    let flags = detect_punts(report, threshold);
    if flags.is_empty() {
        return 0.0;
    }
    let hits = flags
        .iter()
        .filter(|f| match category {
            Some(c) => f[c],
            None => f.iter().any(|x| *x),
        })
        .count();
    hits as f64 / flags.len() as f64
}
