//! Static G-score valuation: per-category standardized production summed
//! across categories, with uncertainty from the season noise folded into the
//! standardizing spread.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::ScoringBasis;
use crate::error::{Error, Result};
use crate::projection::{CategoryKind, CategorySchema, PlayerProjection};
use crate::stats::{nearest_psd, CorrelationMatrix};

/// Reference statistics of the draftable player set and the per-category
/// standardizers derived from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GScoreModel {
    kinds: Vec<CategoryKind>,
    directions: Vec<f64>,
    /// Counting: mean weekly stat. Percentage: volume-weighted rate.
    reference: Vec<f64>,
    /// Percentage categories: mean weekly volume.
    mean_volume: Vec<f64>,
    /// Standardizing spread per category, in raw-contribution units.
    sigma_combined: Vec<f64>,
    /// Matchup-mean shift produced by one unit of standardized value.
    mu_per_z: Vec<f64>,
    roster_size: usize,
}

impl GScoreModel {
    /// Fits the model on the top `reference_size` players of `pool`, found by
    /// a first pass that uses the whole pool as reference.
    pub fn fit(
        schema: &CategorySchema,
        pool: &[PlayerProjection],
        basis: &ScoringBasis,
        roster_size: usize,
        reference_size: usize,
    ) -> Result<Self> {
        if pool.is_empty() {
            return Err(Error::validation("player pool is empty"));
        }
        if basis.len() != schema.len() {
            return Err(Error::DimensionMismatch("basis and schema disagree".into()));
        }
        let all: Vec<&PlayerProjection> = pool.iter().collect();
        let first = Self::fit_on(schema, &all, basis, roster_size);
        let order = first.rank(pool, 0..pool.len());
        let q: Vec<&PlayerProjection> = order
            .iter()
            .take(reference_size.clamp(1, pool.len()))
            .map(|&i| &pool[i])
            .collect();
        Ok(Self::fit_on(schema, &q, basis, roster_size))
    }

    fn fit_on(
        schema: &CategorySchema,
        reference: &[&PlayerProjection],
        basis: &ScoringBasis,
        roster_size: usize,
    ) -> Self {
        let n = reference.len() as f64;
        let nr = roster_size as f64;
        let mut model = GScoreModel {
            kinds: schema.iter().map(|c| c.kind).collect(),
            directions: schema.iter().map(|c| c.direction()).collect(),
            reference: vec![0.0; schema.len()],
            mean_volume: vec![0.0; schema.len()],
            sigma_combined: vec![1.0; schema.len()],
            mu_per_z: vec![0.0; schema.len()],
            roster_size,
        };
        for c in 0..schema.len() {
            match model.kinds[c] {
                CategoryKind::Counting => {
                    model.reference[c] = reference.iter().map(|p| p.stats[c]).sum::<f64>() / n;
                }
                CategoryKind::Percentage => {
                    let made: f64 = reference.iter().map(|p| p.stats[c] * p.volumes[c]).sum();
                    let att: f64 = reference.iter().map(|p| p.volumes[c]).sum();
                    model.reference[c] = if att > 0.0 { made / att } else { 0.0 };
                    model.mean_volume[c] = att / n;
                }
            }
            let raw: Vec<f64> = reference.iter().map(|p| model.raw_unsigned(p, c)).collect();
            let mean = raw.iter().sum::<f64>() / n;
            let var = raw.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
            // Per-player share of the season-total uncertainty, expressed in
            // raw-contribution units.
            let sigma_t = basis.sigma_total[c];
            let (noise, per_team_unit) = match model.kinds[c] {
                CategoryKind::Counting => (sigma_t / nr.sqrt(), 1.0),
                CategoryKind::Percentage => (sigma_t * nr.sqrt(), 1.0 / nr),
            };
            let s = (var + noise * noise).sqrt();
            model.sigma_combined[c] = if s > 0.0 { s } else { 1.0 };
            model.mu_per_z[c] =
                model.sigma_combined[c] * per_team_unit / (std::f64::consts::SQRT_2 * sigma_t);
        }
        model
    }

    /// Raw contribution before direction: the stat itself for counting
    /// categories, `(vol / mean_vol) * (rate - league_rate)` for percentages.
    fn raw_unsigned(&self, p: &PlayerProjection, c: usize) -> f64 {
        match self.kinds[c] {
            CategoryKind::Counting => p.stats[c],
            CategoryKind::Percentage => {
                if self.mean_volume[c] > 0.0 {
                    p.volumes[c] / self.mean_volume[c] * (p.stats[c] - self.reference[c])
                } else {
                    0.0
                }
            }
        }
    }

    /// Direction-adjusted contribution relative to the reference player set.
    pub fn contribution(&self, p: &PlayerProjection, c: usize) -> f64 {
        let centered = match self.kinds[c] {
            CategoryKind::Counting => p.stats[c] - self.reference[c],
            CategoryKind::Percentage => self.raw_unsigned(p, c),
        };
        self.directions[c] * centered
    }

    /// Standardized value per category.
    pub fn components(&self, p: &PlayerProjection) -> Vec<f64> {
        (0..self.kinds.len())
            .map(|c| self.contribution(p, c) / self.sigma_combined[c])
            .collect()
    }

    pub fn score(&self, p: &PlayerProjection) -> f64 {
        (0..self.kinds.len())
            .map(|c| self.contribution(p, c) / self.sigma_combined[c])
            .sum()
    }

    /// Matchup-mean shift (in every column of category `c`) caused by adding
    /// one unit of standardized value in `c` to a team.
    pub fn mu_per_z(&self) -> &[f64] {
        &self.mu_per_z
    }

    pub fn roster_size(&self) -> usize {
        self.roster_size
    }

    /// Indices from `candidates` sorted by descending score; equal scores
    /// fall back to ascending player id.
    pub fn rank(&self, pool: &[PlayerProjection], candidates: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut scored: Vec<(usize, f64)> = candidates
            .into_iter()
            .map(|i| (i, self.score(&pool[i])))
            .collect();
        scored.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(Ordering::Equal)
                .then_with(|| pool[a.0].id.cmp(&pool[b.0].id))
        });
        scored.into_iter().map(|(i, _)| i).collect()
    }

    /// Correlation of direction- and volume-adjusted contributions across
    /// `players`, repaired to be positive semidefinite.
    pub fn correlation(&self, players: &[&PlayerProjection]) -> CorrelationMatrix {
        let dim = self.kinds.len();
        let n = players.len().max(1) as f64;
        let cols: Vec<Vec<f64>> = (0..dim)
            .map(|c| players.iter().map(|p| self.contribution(p, c)).collect())
            .collect();
        let means: Vec<f64> = cols.iter().map(|v| v.iter().sum::<f64>() / n).collect();
        let mut cov = vec![vec![0.0; dim]; dim];
        for a in 0..dim {
            for b in a..dim {
                let s: f64 = cols[a]
                    .iter()
                    .zip(&cols[b])
                    .map(|(x, y)| (x - means[a]) * (y - means[b]))
                    .sum::<f64>()
                    / n;
                cov[a][b] = s;
                cov[b][a] = s;
            }
        }
        let mut rows = vec![vec![0.0; dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                rows[a][b] = if a == b {
                    1.0
                } else {
                    let d = (cov[a][a] * cov[b][b]).sqrt();
                    if d > 0.0 {
                        (cov[a][b] / d).clamp(-1.0, 1.0)
                    } else {
                        0.0
                    }
                };
            }
        }
        nearest_psd(&rows).expect("correlation rows are symmetric by construction")
    }
}

/// G-score order of `pool` restricted to `candidates`.
pub fn gscore_rank(model: &GScoreModel, pool: &[PlayerProjection], candidates: &[usize]) -> Vec<usize> {
    model.rank(pool, candidates.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::Category;

    fn schema() -> CategorySchema {
        CategorySchema::new(vec![
            Category::counting("pts"),
            Category::counting("to").inverted(),
            Category::percentage("ft"),
        ])
        .unwrap()
    }

    fn p(id: &str, pts: f64, to: f64, ft: f64, ftv: f64) -> PlayerProjection {
        PlayerProjection {
            id: id.into(),
            name: id.into(),
            stats: vec![pts, to, ft],
            volumes: vec![0.0, 0.0, ftv],
            eligibility: vec![],
        }
    }

    fn pool() -> Vec<PlayerProjection> {
        vec![
            p("a", 40.0, 5.0, 0.80, 10.0),
            p("b", 30.0, 3.0, 0.70, 12.0),
            p("c", 55.0, 8.0, 0.85, 20.0),
            p("d", 20.0, 2.0, 0.60, 4.0),
            p("e", 35.0, 4.0, 0.90, 8.0),
        ]
    }

    fn basis() -> ScoringBasis {
        ScoringBasis::new(vec![30.0, 6.0, 0.03], 0.5).unwrap()
    }

    #[test]
    fn dominant_player_ranks_first() {
        let mut pool = pool();
        pool.push(p("z", 80.0, 1.0, 0.95, 25.0));
        let m = GScoreModel::fit(&schema(), &pool, &basis(), 2, 4).unwrap();
        let order = gscore_rank(&m, &pool, &(0..pool.len()).collect::<Vec<_>>());
        assert_eq!(pool[order[0]].id, "z");
    }

    #[test]
    fn turnovers_count_against() {
        let pool = pool();
        let m = GScoreModel::fit(&schema(), &pool, &basis(), 2, 5).unwrap();
        let mut more_to = pool[0].clone();
        more_to.stats[1] += 3.0;
        assert!(m.score(&more_to) < m.score(&pool[0]));
    }

    #[test]
    fn affine_rescaling_preserves_order() {
        let pool = pool();
        let m = GScoreModel::fit(&schema(), &pool, &basis(), 2, 5).unwrap();
        let base = gscore_rank(&m, &pool, &[0, 1, 2, 3, 4]);

        let rescaled: Vec<PlayerProjection> = pool
            .iter()
            .map(|x| {
                let mut y = x.clone();
                y.stats[0] = 2.5 * y.stats[0] + 7.0;
                y
            })
            .collect();
        let mut b = basis();
        b = ScoringBasis::new(
            vec![b.weekly_sigma[0] * 2.5, b.weekly_sigma[1], b.weekly_sigma[2]],
            b.chi,
        )
        .unwrap();
        let m2 = GScoreModel::fit(&schema(), &rescaled, &b, 2, 5).unwrap();
        assert_eq!(gscore_rank(&m2, &rescaled, &[0, 1, 2, 3, 4]), base);
    }

    #[test]
    fn ties_break_by_id() {
        let pool = vec![p("b", 30.0, 3.0, 0.7, 10.0), p("a", 30.0, 3.0, 0.7, 10.0)];
        let m = GScoreModel::fit(&schema(), &pool, &basis(), 1, 2).unwrap();
        assert_eq!(gscore_rank(&m, &pool, &[0, 1]), vec![1, 0]);
    }

    #[test]
    fn correlation_is_valid() {
        let pool = pool();
        let m = GScoreModel::fit(&schema(), &pool, &basis(), 2, 5).unwrap();
        let refs: Vec<&PlayerProjection> = pool.iter().collect();
        let rho = m.correlation(&refs);
        assert!(rho.is_psd() || rho.min_eigenvalue() > -1e-12);
        assert_eq!(rho.get(0, 0), 1.0);
    }
}
