//! Rotisserie scoring: per-category surpass counts and league winners.

use serde::{Deserialize, Serialize};

/// Internal-convention points for one category: each team earns one point
/// per team it strictly surpasses, and tied teams split the points of the
/// positions they share (half a point per tied rival).
///
/// Points always sum to `n(n-1)/2`.
pub fn category_points(scores: &[f64], out: &mut [f64]) {
    debug_assert_eq!(scores.len(), out.len());
    for (i, &si) in scores.iter().enumerate() {
        let mut p = 0.0;
        for (j, &sj) in scores.iter().enumerate() {
            if i != j {
                if si > sj {
                    p += 1.0;
                } else if si == sj {
                    p += 0.5;
                }
            }
        }
        out[i] = p;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Winner {
    Team(usize),
    Tie(Vec<usize>),
}

impl Winner {
    /// Share of the win credited to `team` (ties split evenly).
    pub fn share(&self, team: usize) -> f64 {
        match self {
            Winner::Team(t) => f64::from(u8::from(*t == team)),
            Winner::Tie(ts) if ts.contains(&team) => 1.0 / ts.len() as f64,
            Winner::Tie(_) => 0.0,
        }
    }
}

/// One scored league-season.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeagueSample {
    /// Internal-convention fantasy points per team.
    pub totals: Vec<f64>,
    pub winner: Winner,
}

impl LeagueSample {
    /// `|C| * K(K-1)/2`, the constant total of internal points.
    pub fn expected_total(categories: usize, teams: usize) -> f64 {
        (categories * teams * (teams - 1) / 2) as f64
    }
}

pub fn winner_of(totals: &[f64]) -> Winner {
    let best = totals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let leaders: Vec<usize> = totals
        .iter()
        .enumerate()
        .filter(|(_, &t)| t == best)
        .map(|(i, _)| i)
        .collect();
    if leaders.len() == 1 {
        Winner::Team(leaders[0])
    } else {
        Winner::Tie(leaders)
    }
}

/// Scores a league from a team-major `teams x categories` score table where
/// higher is better in every category.
pub fn score_league(scores: &[f64], teams: usize, categories: usize) -> LeagueSample {
    let mut totals = vec![0.0; teams];
    let mut column = vec![0.0; teams];
    let mut points = vec![0.0; teams];
    for c in 0..categories {
        for t in 0..teams {
            column[t] = scores[t * categories + c];
        }
        category_points(&column, &mut points);
        for t in 0..teams {
            totals[t] += points[t];
        }
    }
    let winner = winner_of(&totals);
    LeagueSample { totals, winner }
}
