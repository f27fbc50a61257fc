//! Season-level uncertainty of team category totals.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::draft::ScoringBasis;
use crate::error::{Error, Result};
use crate::projection::CategorySchema;
use crate::stats::{covariance_factor, CorrelationMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModelConfig {
    /// Per-category weekly scale: team sigma is `tau * |N|` for counting
    /// categories and `tau / |N|` for percentages.
    pub tau: Vec<f64>,
    pub chi: f64,
    pub roster_size: usize,
    pub rho: CorrelationMatrix,
}

impl NoiseModelConfig {
    pub fn basis(&self, schema: &CategorySchema) -> Result<ScoringBasis> {
        ScoringBasis::from_tau(schema, &self.tau, self.roster_size, self.chi)
    }
}

/// Default `tau` per category name, for per-game projections.
pub fn default_tau(name: &str) -> Option<f64> {
    Some(match name {
        "pts" => 5.0,
        "reb" => 2.2,
        "ast" => 1.5,
        "stl" => 0.5,
        "blk" => 0.45,
        "threes" | "3pm" => 0.8,
        "to" => 0.8,
        "fg" | "fg%" => 0.25,
        "ft" | "ft%" => 0.35,
        _ => return None,
    })
}

/// [`default_tau`] for every category of `schema`.
pub fn default_taus(schema: &CategorySchema) -> Result<Vec<f64>> {
    schema
        .iter()
        .map(|c| {
            default_tau(&c.name).ok_or_else(|| {
                Error::validation(format!(
                    "no default tau for category {:?}; pass one explicitly",
                    c.name
                ))
            })
        })
        .collect()
}

/// Season-total covariance `rho_ab * sigma_a * sigma_b`, where sigma is the
/// weekly team spread scaled by `chi^2`. Row-major `|C| x |C|`.
pub fn build_noise_covariance(config: &NoiseModelConfig, schema: &CategorySchema) -> Result<Vec<f64>> {
    if config.rho.dim() != schema.len() {
        return Err(Error::DimensionMismatch(format!(
            "correlation is {}x{}, schema has {} categories",
            config.rho.dim(),
            config.rho.dim(),
            schema.len()
        )));
    }
    let sigma = config.basis(schema)?.sigma_total;
    let rho = config.rho.repaired();
    let n = sigma.len();
    let mut cov = vec![0.0; n * n];
    for a in 0..n {
        for b in 0..n {
            cov[a * n + b] = rho.get(a, b) * sigma[a] * sigma[b];
        }
    }
    Ok(cov)
}

/// Correlated Gaussian sampler for one team's category noise.
#[derive(Debug, Clone)]
pub struct SeasonNoise {
    factor: Vec<f64>,
    dim: usize,
}

impl SeasonNoise {
    pub fn from_covariance(cov: &[f64], dim: usize) -> Result<Self> {
        Ok(SeasonNoise {
            factor: covariance_factor(cov, dim)?,
            dim,
        })
    }

    pub fn new(config: &NoiseModelConfig, schema: &CategorySchema) -> Result<Self> {
        Self::from_covariance(&build_noise_covariance(config, schema)?, schema.len())
    }

    /// No noise at all: seasons play out exactly as projected.
    pub fn zero(dim: usize) -> Self {
        SeasonNoise {
            factor: vec![0.0; dim * dim],
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let z: Vec<f64> = (0..self.dim).map(|_| rng.sample(StandardNormal)).collect();
        (0..self.dim)
            .map(|i| {
                self.factor[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(&z)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}
