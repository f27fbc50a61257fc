//! Scoring categories and per-player projections.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CategoryKind {
    /// Weekly event count (points, rebounds, ...).
    Counting,
    /// Success rate weighted by attempt volume (FG%, FT%).
    Percentage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Category {
    pub name: String,
    pub kind: CategoryKind,
    /// Turnovers and similar: the lowest total wins the category.
    #[serde(default)]
    pub lower_is_better: bool,
}

impl Category {
    pub fn counting(name: &str) -> Self {
        Category {
            name: name.to_string(),
            kind: CategoryKind::Counting,
            lower_is_better: false,
        }
    }

    pub fn percentage(name: &str) -> Self {
        Category {
            name: name.to_string(),
            kind: CategoryKind::Percentage,
            lower_is_better: false,
        }
    }

    pub fn inverted(mut self) -> Self {
        self.lower_is_better = true;
        self
    }

    /// +1 when more is better, -1 otherwise.
    #[inline]
    pub fn direction(&self) -> f64 {
        if self.lower_is_better {
            -1.0
        } else {
            1.0
        }
    }
}

/// Ordered list of scoring categories.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategorySchema {
    categories: Vec<Category>,
}

impl CategorySchema {
    pub fn new(categories: Vec<Category>) -> Result<Self> {
        if categories.is_empty() {
            return Err(Error::validation("at least one category is required"));
        }
        for (i, c) in categories.iter().enumerate() {
            if c.name.is_empty() || c.name.contains(',') {
                return Err(Error::validation(format!("invalid category name {:?}", c.name)));
            }
            if categories[..i].iter().any(|p| p.name == c.name) {
                return Err(Error::validation(format!("duplicate category {:?}", c.name)));
            }
        }
        Ok(CategorySchema { categories })
    }

    /// Standard nine-category basketball league.
    pub fn nba_nine() -> Self {
        CategorySchema {
            categories: vec![
                Category::counting("pts"),
                Category::counting("reb"),
                Category::counting("ast"),
                Category::counting("stl"),
                Category::counting("blk"),
                Category::counting("threes"),
                Category::counting("to").inverted(),
                Category::percentage("fg"),
                Category::percentage("ft"),
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.categories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Category> {
        self.categories.iter()
    }

    pub fn get(&self, i: usize) -> &Category {
        &self.categories[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.categories.iter().position(|c| c.name == name)
    }

    pub fn names(&self) -> Vec<String> {
        self.categories.iter().map(|c| c.name.clone()).collect()
    }
}

/// One player's weekly projection.
///
/// For a counting category `stats[c]` is the weekly mean and `volumes[c]` is
/// zero; for a percentage category `stats[c]` is the success rate and
/// `volumes[c]` the weekly attempts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerProjection {
    pub id: String,
    pub name: String,
    pub stats: Vec<f64>,
    pub volumes: Vec<f64>,
    #[serde(default)]
    pub eligibility: Vec<String>,
}

impl PlayerProjection {
    pub fn validate(&self, schema: &CategorySchema) -> Result<()> {
        if self.stats.len() != schema.len() || self.volumes.len() != schema.len() {
            return Err(Error::DimensionMismatch(format!(
                "player {} has {} stats for {} categories",
                self.id,
                self.stats.len(),
                schema.len()
            )));
        }
        for (c, cat) in schema.iter().enumerate() {
            let (x, v) = (self.stats[c], self.volumes[c]);
            if !x.is_finite() || !v.is_finite() {
                return Err(Error::validation(format!(
                    "player {}: non-finite {}",
                    self.id, cat.name
                )));
            }
            match cat.kind {
                CategoryKind::Counting if x < 0.0 => {
                    return Err(Error::validation(format!(
                        "player {}: negative {} mean {x}",
                        self.id, cat.name
                    )))
                }
                CategoryKind::Percentage if !(0.0..=1.0).contains(&x) => {
                    return Err(Error::validation(format!(
                        "player {}: {} rate {x} outside [0, 1]",
                        self.id, cat.name
                    )))
                }
                _ => {}
            }
            if v < 0.0 {
                return Err(Error::validation(format!(
                    "player {}: negative {} volume {v}",
                    self.id, cat.name
                )));
            }
        }
        Ok(())
    }
}

/// Team-level category totals: counting stats add up, percentage stats are
/// volume-weighted rates.
pub fn team_totals(schema: &CategorySchema, players: &[&PlayerProjection]) -> Vec<f64> {
    schema
        .iter()
        .enumerate()
        .map(|(c, cat)| match cat.kind {
            CategoryKind::Counting => players.iter().map(|p| p.stats[c]).sum(),
            CategoryKind::Percentage => {
                let made: f64 = players.iter().map(|p| p.stats[c] * p.volumes[c]).sum();
                let attempts: f64 = players.iter().map(|p| p.volumes[c]).sum();
                if attempts > 0.0 {
                    made / attempts
                } else {
                    0.0
                }
            }
        })
        .collect()
}

/// Volume-weighted league rate `sum(rate * vol) / sum(vol)` for category `c`.
pub fn league_rate(players: &[PlayerProjection], c: usize) -> f64 {
    let made: f64 = players.iter().map(|p| p.stats[c] * p.volumes[c]).sum();
    let attempts: f64 = players.iter().map(|p| p.volumes[c]).sum();
    if attempts > 0.0 {
        made / attempts
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn player(id: &str, ft_rate: f64, ft_vol: f64, pts: f64) -> PlayerProjection {
        let schema =
            CategorySchema::new(vec![Category::counting("pts"), Category::percentage("ft")]).unwrap();
        let p = PlayerProjection {
            id: id.into(),
            name: id.into(),
            stats: vec![pts, ft_rate],
            volumes: vec![0.0, ft_vol],
            eligibility: vec![],
        };
        p.validate(&schema).unwrap();
        p
    }

    #[test]
    fn team_totals_weight_rates_by_volume() {
        let schema =
            CategorySchema::new(vec![Category::counting("pts"), Category::percentage("ft")]).unwrap();
        let a = player("a", 0.9, 10.0, 30.0);
        let b = player("b", 0.5, 30.0, 20.0);
        let t = team_totals(&schema, &[&a, &b]);
        assert_eq!(t[0], 50.0);
        assert!((t[1] - (9.0 + 15.0) / 40.0).abs() < 1e-15);
    }

    #[test]
    fn validation_rejects_bad_rates() {
        let schema =
            CategorySchema::new(vec![Category::counting("pts"), Category::percentage("ft")]).unwrap();
        let mut p = player("a", 0.9, 10.0, 30.0);
        p.stats[1] = 1.2;
        assert!(p.validate(&schema).is_err());
        p.stats[1] = 0.8;
        p.volumes[1] = -1.0;
        assert!(p.validate(&schema).is_err());
    }

    #[test]
    fn schema_rules() {
        let nine = CategorySchema::nba_nine();
        assert_eq!(nine.len(), 9);
        assert_eq!(nine.get(nine.index_of("to").unwrap()).direction(), -1.0);
        assert!(CategorySchema::new(vec![]).is_err());
        assert!(CategorySchema::new(vec![Category::counting("a"), Category::counting("a")]).is_err());
    }
}
