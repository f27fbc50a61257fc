//! Synthetic nine-category player pools built from a handful of archetypes.

use rand::Rng;
use rand_distr::{Distribution, LogNormal, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projection::{CategorySchema, PlayerProjection};
use crate::rng::SeededRng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticPoolConfig {
    pub size: usize,
    /// Fraction of players drawn from the poor free-throw big archetype.
    pub low_ft_share: f64,
    /// Log-scale spread of overall player quality.
    pub quality_spread: f64,
}

impl Default for SyntheticPoolConfig {
    fn default() -> Self {
        SyntheticPoolConfig {
            size: 260,
            low_ft_share: 0.14,
            quality_spread: 0.35,
        }
    }
}

struct Archetype {
    label: &'static str,
    /// pts, reb, ast, stl, blk, threes, to
    counting: [f64; 7],
    fg: (f64, f64, f64),
    ft: (f64, f64, f64),
    quality_boost: f64,
}

const GUARD: Archetype = Archetype {
    label: "guard",
    counting: [15.0, 3.5, 5.5, 1.1, 0.3, 2.0, 2.3],
    fg: (0.45, 0.02, 12.0),
    ft: (0.82, 0.05, 3.5),
    quality_boost: 1.0,
};

const WING: Archetype = Archetype {
    label: "wing",
    counting: [14.0, 5.0, 2.8, 1.0, 0.5, 1.8, 1.6],
    fg: (0.46, 0.02, 11.0),
    ft: (0.79, 0.05, 3.0),
    quality_boost: 1.0,
};

const BIG: Archetype = Archetype {
    label: "big",
    counting: [13.0, 9.0, 2.0, 0.7, 1.3, 0.4, 1.7],
    fg: (0.54, 0.025, 10.0),
    ft: (0.72, 0.05, 3.5),
    quality_boost: 1.0,
};

const LOW_FT_BIG: Archetype = Archetype {
    label: "low-ft big",
    counting: [12.5, 11.0, 2.0, 0.8, 1.8, 0.1, 1.7],
    fg: (0.60, 0.025, 9.5),
    ft: (0.55, 0.05, 5.5),
    quality_boost: 1.15,
};

/// Generates a pool for [`CategorySchema::nba_nine`]; ids are `syn0001`,
/// `syn0002`, ... in generation order.
pub fn synthetic_pool(config: &SyntheticPoolConfig, rng: &mut SeededRng) -> Result<Vec<PlayerProjection>> {
    if config.size == 0 {
        return Err(Error::validation("synthetic pool size must be positive"));
    }
    if !(0.0..=1.0).contains(&config.low_ft_share) {
        return Err(Error::validation("low_ft_share must be in [0, 1]"));
    }
    if !(config.quality_spread >= 0.0) {
        return Err(Error::validation("quality_spread must be non-negative"));
    }
    let quality = LogNormal::new(0.0, config.quality_spread).expect("spread checked");
    let jitter = LogNormal::new(0.0, 0.2).expect("constant parameters");
    let schema = CategorySchema::nba_nine();
    let rest = (1.0 - config.low_ft_share) / 3.0;

    let mut pool = Vec::with_capacity(config.size);
    for i in 0..config.size {
        let u: f64 = rng.random();
        let arch = if u < config.low_ft_share {
            &LOW_FT_BIG
        } else if u < config.low_ft_share + rest {
            &GUARD
        } else if u < config.low_ft_share + 2.0 * rest {
            &WING
        } else {
            &BIG
        };
        let q = quality.sample(rng) * arch.quality_boost;
        let mut stats = Vec::with_capacity(9);
        let mut volumes = vec![0.0; 9];
        for base in arch.counting {
            stats.push((base * q * jitter.sample(rng)).max(0.0));
        }
        for (slot, (mean, sd, vol)) in [(7, arch.fg), (8, arch.ft)] {
            let rate = Normal::new(mean, sd).expect("positive sd").sample(rng);
            stats.push(rate.clamp(0.25, 0.98));
            volumes[slot] = vol * q * jitter.sample(rng);
        }
        let p = PlayerProjection {
            id: format!("syn{:04}", i + 1),
            name: format!("{} {}", arch.label, i + 1),
            stats,
            volumes,
            eligibility: vec![arch.label.to_string()],
        };
        p.validate(&schema)?;
        pool.push(p);
    }
    Ok(pool)
}
