use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projection::{CategoryKind, CategorySchema};

/// Per-category scales that turn raw category differentials into the
/// unit-variance matchup basis.
///
/// `weekly_sigma` is the week-to-week team-level standard deviation
/// (`tau * |N|` for counting stats, `tau / |N|` for percentages);
/// `sigma_total` is the uncertainty of a full-season team total, the weekly
/// figure scaled by `chi^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoringBasis {
    pub weekly_sigma: Vec<f64>,
    pub sigma_total: Vec<f64>,
    pub chi: f64,
}

impl ScoringBasis {
    pub fn new(weekly_sigma: Vec<f64>, chi: f64) -> Result<Self> {
        if !(chi > 0.0 && chi <= 1.0) {
            return Err(Error::validation(format!("chi {chi} must be in (0, 1]")));
        }
        if let Some(s) = weekly_sigma.iter().find(|s| !(**s > 0.0) || !s.is_finite()) {
            return Err(Error::validation(format!("category sigma {s} must be > 0")));
        }
        let sigma_total = weekly_sigma.iter().map(|s| s * chi * chi).collect();
        Ok(ScoringBasis {
            weekly_sigma,
            sigma_total,
            chi,
        })
    }

    /// Builds the weekly scales from per-category `tau` values.
    pub fn from_tau(schema: &CategorySchema, tau: &[f64], roster_size: usize, chi: f64) -> Result<Self> {
        if tau.len() != schema.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} tau values for {} categories",
                tau.len(),
                schema.len()
            )));
        }
        if roster_size == 0 {
            return Err(Error::validation("roster size must be positive"));
        }
        let n = roster_size as f64;
        let weekly = schema
            .iter()
            .zip(tau)
            .map(|(cat, t)| match cat.kind {
                CategoryKind::Counting => t * n,
                CategoryKind::Percentage => t / n,
            })
            .collect();
        Self::new(weekly, chi)
    }

    /// Same basis with every scale multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let weekly = self.weekly_sigma.iter().map(|s| s * factor).collect();
        Self::new(weekly, self.chi)
    }

    pub fn len(&self) -> usize {
        self.sigma_total.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma_total.is_empty()
    }
}
