//! Monte Carlo ground truth for the analytic approximations.
//!
//! Every team's category score is its mean plus Normal noise with variance
//! 1/2 and cross-category correlation `rho`, independent across teams, so a
//! single matchup differential has unit variance. Draws are split into
//! fixed-size chunks, each with its own random stream, and chunk results are
//! merged in chunk order, so estimates do not depend on how many worker
//! threads run them.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::{LeagueShape, MatchupMatrix};
use crate::rng::SeededRng;
use crate::scoring::{category_points, winner_of, Winner};
use crate::stats::{covariance_factor, CorrelationMatrix};

/// Draws per independently seeded chunk.
pub const CHUNK_DRAWS: u64 = 4096;

/// Two-sided 95% Normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WinEstimate {
    /// Fraction of draws where the focal team strictly beats every opponent.
    pub p_win: f64,
    /// Fraction of draws where the focal team shares the top total.
    pub p_tie: f64,
    /// Expected split-credit from ties: mean of `1/|tied leaders|` over tie draws.
    pub tie_share: f64,
    /// 95% half-width for `p_win`.
    pub ci_halfwidth: f64,
    pub draws: u64,
    /// Set when the correlation matrix had to be repaired to sample.
    pub rho_repaired: bool,
}

/// Team score means reproducing a matchup state: the focal team sits at 0
/// and opponent `o` at `-mu[c][o]`, so `mean_t - mean_o = mu[c][o]`.
pub fn team_means_from_matchups(state: &MatchupMatrix) -> Vec<Vec<f64>> {
    let mut teams = vec![vec![0.0; state.categories()]];
    for o in 0..state.opponents() {
        teams.push((0..state.categories()).map(|c| -state.get(c, o)).collect());
    }
    teams
}

/// Sampler for per-team noise with covariance `rho / 2`.
struct NoiseSampler {
    factor: Vec<f64>,
    dim: usize,
    repaired: bool,
}

impl NoiseSampler {
    fn new(rho: &CorrelationMatrix) -> Result<Self> {
        let (rho, repaired) = if rho.is_psd() {
            (rho.clone(), false)
        } else {
            (rho.repaired(), true)
        };
        let dim = rho.dim();
        let cov: Vec<f64> = rho.as_slice().iter().map(|v| 0.5 * v).collect();
        Ok(NoiseSampler {
            factor: covariance_factor(&cov, dim)?,
            dim,
            repaired,
        })
    }

    #[inline]
    fn sample_into<R: Rng>(&self, rng: &mut R, z: &mut [f64], out: &mut [f64]) {
        for zi in z.iter_mut() {
            *zi = rng.sample(StandardNormal);
        }
        for i in 0..self.dim {
            let row = &self.factor[i * self.dim..(i + 1) * self.dim];
            out[i] += row.iter().zip(z.iter()).map(|(a, b)| a * b).sum::<f64>();
        }
    }
}

#[derive(Default, Clone, Copy)]
struct WinTally {
    wins: u64,
    ties: u64,
    tie_share: f64,
    draws: u64,
}

/// Full-league Monte Carlo win probability for team 0.
///
/// `means` is team-major (`means[t][c]`); team 0 is the focal team.
pub fn mc_win_probability(
    means: &[Vec<f64>],
    rho: &CorrelationMatrix,
    n: u64,
    rng: &SeededRng,
) -> Result<WinEstimate> {
    if n == 0 {
        return Err(Error::Precondition("need at least one draw".into()));
    }
    let teams = means.len();
    if teams < 2 {
        return Err(Error::validation("need the focal team and at least one opponent"));
    }
    let categories = rho.dim();
    if means.iter().any(|m| m.len() != categories) {
        return Err(Error::DimensionMismatch(format!(
            "every team needs {categories} category means"
        )));
    }
    let sampler = NoiseSampler::new(rho)?;
    let chunks = n.div_ceil(CHUNK_DRAWS);

    let tally = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut local = rng.derive(chunk);
            let draws = CHUNK_DRAWS.min(n - chunk * CHUNK_DRAWS);
            let mut z = vec![0.0; categories];
            let mut scores = vec![0.0; teams * categories];
            let mut column = vec![0.0; teams];
            let mut points = vec![0.0; teams];
            let mut totals = vec![0.0; teams];
            let mut t = WinTally::default();
            for _ in 0..draws {
                for (team, m) in means.iter().enumerate() {
                    let row = &mut scores[team * categories..(team + 1) * categories];
                    row.copy_from_slice(m);
                    sampler.sample_into(&mut local, &mut z, row);
                }
                totals.iter_mut().for_each(|x| *x = 0.0);
                for c in 0..categories {
                    for team in 0..teams {
                        column[team] = scores[team * categories + c];
                    }
                    category_points(&column, &mut points);
                    for team in 0..teams {
                        totals[team] += points[team];
                    }
                }
                match winner_of(&totals) {
                    Winner::Team(0) => t.wins += 1,
                    Winner::Tie(ref ts) if ts.contains(&0) => {
                        t.ties += 1;
                        t.tie_share += 1.0 / ts.len() as f64;
                    }
                    _ => {}
                }
                t.draws += 1;
            }
            t
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(WinTally::default(), |a, b| WinTally {
            wins: a.wins + b.wins,
            ties: a.ties + b.ties,
            tie_share: a.tie_share + b.tie_share,
            draws: a.draws + b.draws,
        });

    let nf = tally.draws as f64;
    let p_win = tally.wins as f64 / nf;
    Ok(WinEstimate {
        p_win,
        p_tie: tally.ties as f64 / nf,
        tie_share: tally.tie_share / nf,
        ci_halfwidth: Z95 * (p_win * (1.0 - p_win) / nf).sqrt(),
        draws: tally.draws,
        rho_repaired: sampler.repaired,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub ci_halfwidth: f64,
}

/// Running sums for a sample variance and the standard error of it.
#[derive(Default, Clone, Copy)]
struct Moments {
    n: f64,
    sum: f64,
    sum2: f64,
    sum3: f64,
    sum4: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        self.sum += x;
        self.sum2 += x * x;
        self.sum3 += x * x * x;
        self.sum4 += x * x * x * x;
    }

    fn merge(self, o: Moments) -> Moments {
        Moments {
            n: self.n + o.n,
            sum: self.sum + o.sum,
            sum2: self.sum2 + o.sum2,
            sum3: self.sum3 + o.sum3,
            sum4: self.sum4 + o.sum4,
        }
    }

    fn variance(&self) -> f64 {
        let m = self.sum / self.n;
        (self.sum2 - self.n * m * m) / (self.n - 1.0)
    }

    /// Large-sample standard error of the sample variance, `sqrt((m4 - s^4)/n)`.
    fn variance_se(&self) -> f64 {
        let n = self.n;
        let m = self.sum / n;
        let m4 = (self.sum4 - 4.0 * m * self.sum3 + 6.0 * m * m * self.sum2 - 4.0 * m * m * m * self.sum
            + n * m * m * m * m)
            / n;
        let s2 = self.variance();
        ((m4 - s2 * s2).max(0.0) / n).sqrt()
    }
}

/// Variance of one generic opponent's surpass count for fixed matchup means
/// `mu` (`categories x opponents`), measured over `draws` generative-model
/// samples.
fn opponent_count_moments(
    mu: &MatchupMatrix,
    sampler: &NoiseSampler,
    draws: u64,
    rng: &SeededRng,
) -> Moments {
    let categories = mu.categories();
    let others = mu.opponents();
    let chunks = draws.div_ceil(CHUNK_DRAWS);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut local = rng.derive(chunk);
            let count = CHUNK_DRAWS.min(draws - chunk * CHUNK_DRAWS);
            let mut z = vec![0.0; categories];
            let mut own = vec![0.0; categories];
            let mut other = vec![0.0; categories];
            let mut m = Moments::default();
            for _ in 0..count {
                own.iter_mut().for_each(|x| *x = 0.0);
                sampler.sample_into(&mut local, &mut z, &mut own);
                let mut wins = 0u32;
                for j in 0..others {
                    for c in 0..categories {
                        other[c] = -mu.get(c, j);
                    }
                    sampler.sample_into(&mut local, &mut z, &mut other);
                    for c in 0..categories {
                        if own[c] > other[c] {
                            wins += 1;
                        }
                    }
                }
                m.push(f64::from(wins));
            }
            m
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Moments::default(), Moments::merge)
}

/// Monte Carlo estimate of the expected generic-opponent variance.
///
/// Each scenario draws matchup means `mu[c][j] ~ N(0, sigma_c^2)` for the
/// generic opponent against each of the `|O|` other teams, then measures the
/// variance of its total over `n_inner` generative-model draws. With every
/// `sigma_c = 0` all scenarios coincide, so a single scenario with
/// `n_scenarios * n_inner` draws is run instead.
pub fn mc_opponent_variance(
    shape: &LeagueShape,
    n_scenarios: u64,
    n_inner: u64,
    rng: &SeededRng,
) -> Result<MeanEstimate> {
    if n_scenarios == 0 || n_inner < 2 {
        return Err(Error::Precondition(
            "need at least one scenario and two inner draws".into(),
        ));
    }
    let categories = shape.num_categories();
    let opponents = shape.num_opponents();
    let sampler = NoiseSampler::new(shape.rho())?;

    if shape.sigma_c().iter().all(|s| *s == 0.0) {
        let mu = MatchupMatrix::zeros(categories, opponents);
        let m = opponent_count_moments(&mu, &sampler, n_scenarios * n_inner, &rng.derive(0));
        return Ok(MeanEstimate {
            mean: m.variance(),
            ci_halfwidth: Z95 * m.variance_se(),
        });
    }

    let mut scenario_rng = rng.derive(u64::MAX);
    let mut per_scenario = Vec::with_capacity(n_scenarios as usize);
    for s in 0..n_scenarios {
        let mut mu = MatchupMatrix::zeros(categories, opponents);
        for c in 0..categories {
            for j in 0..opponents {
                let z: f64 = scenario_rng.sample(StandardNormal);
                mu.set(c, j, z * shape.sigma_c()[c]);
            }
        }
        let m = opponent_count_moments(&mu, &sampler, n_inner, &rng.derive(s));
        per_scenario.push((m.variance(), m.variance_se()));
    }
    let n = per_scenario.len() as f64;
    let mean = per_scenario.iter().map(|(v, _)| v).sum::<f64>() / n;
    let ci_halfwidth = if per_scenario.len() > 1 {
        let var = per_scenario.iter().map(|(v, _)| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Z95 * (var / n).sqrt()
    } else {
        Z95 * per_scenario[0].1
    };
    Ok(MeanEstimate { mean, ci_halfwidth })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqrtMoments {
    pub mean: f64,
    pub sd: f64,
}

/// Sample mean and standard deviation of `sqrt(max(X, 0))` for
/// `X ~ N(mu, sigma^2)`, in the regime `mu > 5 sigma` where `X` is almost
/// surely positive.
pub fn sqrt_normal_moments(mu: f64, sigma: f64, n: u64, rng: &SeededRng) -> Result<SqrtMoments> {
    if !(sigma >= 0.0) || !(mu > 5.0 * sigma) || !(mu > 0.0) {
        return Err(Error::Precondition(format!(
            "need mu > 5 sigma and mu > 0 (mu = {mu}, sigma = {sigma})"
        )));
    }
    if sigma == 0.0 {
        return Ok(SqrtMoments {
            mean: mu.sqrt(),
            sd: 0.0,
        });
    }
    if n < 2 {
        return Err(Error::Precondition("need at least two draws".into()));
    }
    let chunks = n.div_ceil(CHUNK_DRAWS);
    let (count, sum, sum2) = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut local = rng.derive(chunk);
            let draws = CHUNK_DRAWS.min(n - chunk * CHUNK_DRAWS);
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..draws {
                let z: f64 = local.sample(StandardNormal);
                let y = (mu + sigma * z).max(0.0).sqrt();
                s += y;
                s2 += y * y;
            }
            (draws as f64, s, s2)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, 0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let mean = sum / count;
    let var = (sum2 - count * mean * mean) / (count - 1.0);
    Ok(SqrtMoments {
        mean,
        sd: var.max(0.0).sqrt(),
    })
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for k in i..=j {
                r[idx[k]] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}
