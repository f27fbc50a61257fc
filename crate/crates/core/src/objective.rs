//! Tractable Rotisserie win-probability objective.
//!
//! A team's fantasy-point total `T` is a sum of correlated Bernoulli matchup
//! wins, approximated as Normal with mean `mu_T` and variance `sigma2_T`. The
//! opponents are modelled as iid copies of a generic opponent `M` whose
//! variance `E(sigma2_M)` depends only on the league shape; the best
//! opponent's lead over the opponent average is `L`, with moments taken from
//! the maximum-order-statistic table. The differential `D` against the best
//! opponent is Normal and `V = Phi(mu_D / sigma_D)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{max_order_stats, norm_cdf, norm_pdf, CorrelationMatrix, MAX_TABLE_N};

/// Floor applied to the own-team variance.
pub const SIGMA2_T_FLOOR: f64 = 1e-9;

/// League-level inputs that do not depend on the drafting team's roster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeagueShape {
    rho: CorrelationMatrix,
    sigma_c: Vec<f64>,
    num_opponents: usize,
}

impl LeagueShape {
    pub fn new(rho: CorrelationMatrix, sigma_c: Vec<f64>, num_opponents: usize) -> Result<Self> {
        if sigma_c.len() != rho.dim() {
            return Err(Error::DimensionMismatch(format!(
                "sigma_c has {} categories, correlation matrix has {}",
                sigma_c.len(),
                rho.dim()
            )));
        }
        if let Some(s) = sigma_c.iter().find(|s| !s.is_finite() || **s < 0.0) {
            return Err(Error::validation(format!(
                "sigma_c entry {s} must be finite and >= 0"
            )));
        }
        if num_opponents == 0 || num_opponents > MAX_TABLE_N {
            return Err(Error::UnsupportedLeagueSize(num_opponents));
        }
        Ok(LeagueShape {
            rho,
            sigma_c,
            num_opponents,
        })
    }

    /// Identity correlation and zero opponent spread.
    pub fn symmetric(num_categories: usize, num_opponents: usize) -> Result<Self> {
        Self::new(
            CorrelationMatrix::identity(num_categories),
            vec![0.0; num_categories],
            num_opponents,
        )
    }

    pub fn num_categories(&self) -> usize {
        self.sigma_c.len()
    }

    pub fn num_opponents(&self) -> usize {
        self.num_opponents
    }

    pub fn rho(&self) -> &CorrelationMatrix {
        &self.rho
    }

    pub fn sigma_c(&self) -> &[f64] {
        &self.sigma_c
    }

    /// Same league with categories reordered by `perm` (new index `a` is old
    /// index `perm[a]`).
    pub fn permuted_categories(&self, perm: &[usize]) -> LeagueShape {
        LeagueShape {
            rho: self.rho.permuted(perm),
            sigma_c: perm.iter().map(|&p| self.sigma_c[p]).collect(),
            num_opponents: self.num_opponents,
        }
    }
}

/// Normalized expected matchup differentials, one row per category and one
/// column per opponent. Each differential has unit variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct MatchupMatrix {
    categories: usize,
    opponents: usize,
    mu: Vec<f64>,
}

impl MatchupMatrix {
    pub fn zeros(categories: usize, opponents: usize) -> Self {
        Self::filled(categories, opponents, 0.0)
    }

    pub fn filled(categories: usize, opponents: usize, value: f64) -> Self {
        MatchupMatrix {
            categories,
            opponents,
            mu: vec![value; categories * opponents],
        }
    }

    /// Row-major constructor; `mu.len()` must equal `categories * opponents`.
    pub fn from_vec(categories: usize, opponents: usize, mu: Vec<f64>) -> Result<Self> {
        if mu.len() != categories * opponents {
            return Err(Error::DimensionMismatch(format!(
                "{} matchup entries for a {categories}x{opponents} matrix",
                mu.len()
            )));
        }
        if mu.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("matchup means must be finite"));
        }
        Ok(MatchupMatrix {
            categories,
            opponents,
            mu,
        })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let categories = rows.len();
        let opponents = rows.first().map_or(0, Vec::len);
        if categories == 0 || opponents == 0 {
            return Err(Error::validation("matchup matrix is empty"));
        }
        if rows.iter().any(|r| r.len() != opponents) {
            return Err(Error::DimensionMismatch("ragged matchup rows".into()));
        }
        Self::from_vec(categories, opponents, rows.into_iter().flatten().collect())
    }

    #[inline]
    pub fn categories(&self) -> usize {
        self.categories
    }

    #[inline]
    pub fn opponents(&self) -> usize {
        self.opponents
    }

    #[inline]
    pub fn get(&self, c: usize, o: usize) -> f64 {
        self.mu[c * self.opponents + o]
    }

    #[inline]
    pub fn set(&mut self, c: usize, o: usize, value: f64) {
        self.mu[c * self.opponents + o] = value;
    }

    pub fn row(&self, c: usize) -> &[f64] {
        &self.mu[c * self.opponents..(c + 1) * self.opponents]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.mu
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.mu
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.mu.chunks(self.opponents).map(<[f64]>::to_vec).collect()
    }

    /// Adds `shift[c]` to every entry of row `c`.
    pub fn shifted_rows(&self, shift: &[f64]) -> MatchupMatrix {
        let mut out = self.clone();
        for (c, s) in shift.iter().enumerate() {
            for v in &mut out.mu[c * self.opponents..(c + 1) * self.opponents] {
                *v += s;
            }
        }
        out
    }

    pub fn permuted_opponents(&self, perm: &[usize]) -> MatchupMatrix {
        let mut out = self.clone();
        for c in 0..self.categories {
            for (o, &p) in perm.iter().enumerate() {
                out.set(c, o, self.get(c, p));
            }
        }
        out
    }

    pub fn permuted_categories(&self, perm: &[usize]) -> MatchupMatrix {
        let mut out = self.clone();
        for (c, &p) in perm.iter().enumerate() {
            for o in 0..self.opponents {
                out.set(c, o, self.get(p, o));
            }
        }
        out
    }
}

impl TryFrom<Vec<Vec<f64>>> for MatchupMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        MatchupMatrix::from_rows(rows)
    }
}

impl From<MatchupMatrix> for Vec<Vec<f64>> {
    fn from(m: MatchupMatrix) -> Self {
        m.rows()
    }
}

/// Every derived moment of the objective, plus the win probability `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveBreakdown {
    pub mu_t: f64,
    pub sigma2_t: f64,
    pub e_sigma2_m: f64,
    pub mu_l: f64,
    pub sigma2_l: f64,
    pub mu_d: f64,
    pub sigma2_d: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelperValues {
    pub f_a: f64,
    pub f_b: f64,
    pub g_ab: f64,
    pub h_ab: f64,
}

fn check_dims(state: &MatchupMatrix, shape: &LeagueShape) -> Result<()> {
    if state.categories() != shape.num_categories() || state.opponents() != shape.num_opponents() {
        return Err(Error::DimensionMismatch(format!(
            "state is {}x{}, league shape is {}x{}",
            state.categories(),
            state.opponents(),
            shape.num_categories(),
            shape.num_opponents()
        )));
    }
    Ok(())
}

/// Per-opponent densities and their category sums for one state.
pub(crate) struct DensityTable {
    pub(crate) phi: Vec<f64>,
    pub(crate) cdf: Vec<f64>,
    pub(crate) f: Vec<f64>,
    pub(crate) opponents: usize,
}

impl DensityTable {
    pub(crate) fn new(state: &MatchupMatrix) -> Self {
        let phi: Vec<f64> = state.as_slice().iter().map(|&m| norm_pdf(m)).collect();
        let cdf: Vec<f64> = state.as_slice().iter().map(|&m| norm_cdf(m)).collect();
        let f = phi.chunks(state.opponents()).map(|r| r.iter().sum()).collect();
        DensityTable {
            phi,
            cdf,
            f,
            opponents: state.opponents(),
        }
    }

    #[inline]
    pub(crate) fn phi_row(&self, c: usize) -> &[f64] {
        &self.phi[c * self.opponents..(c + 1) * self.opponents]
    }

    pub(crate) fn g(&self, a: usize, b: usize) -> f64 {
        self.phi_row(a)
            .iter()
            .zip(self.phi_row(b))
            .map(|(x, y)| x * y)
            .sum()
    }

    pub(crate) fn h(&self, a: usize, b: usize) -> f64 {
        if a == b {
            self.f[a] * self.f[a] - self.g(a, a)
        } else {
            self.f[a] * self.f[b] + self.g(a, b)
        }
    }
}

/// Own-team helper functions `F(a)`, `F(b)`, `G(a,b)` and `H_T(a,b)`.
pub fn helpers_t(state: &MatchupMatrix, a: usize, b: usize) -> Result<HelperValues> {
    let n = state.categories();
    if a >= n || b >= n {
        return Err(Error::validation(format!(
            "category index out of range (have {n})"
        )));
    }
    let table = DensityTable::new(state);
    Ok(HelperValues {
        f_a: table.f[a],
        f_b: table.f[b],
        g_ab: table.g(a, b),
        h_ab: table.h(a, b),
    })
}

/// Generic-opponent helper `H_M(a,b)`, the expected covariance weight when
/// matchup means are drawn with spread `sigma_c`.
pub fn helper_h_m(shape: &LeagueShape, a: usize, b: usize) -> Result<f64> {
    let n = shape.num_categories();
    if a >= n || b >= n {
        return Err(Error::validation(format!(
            "category index out of range (have {n})"
        )));
    }
    Ok(h_m_unchecked(shape, a, b))
}

fn h_m_unchecked(shape: &LeagueShape, a: usize, b: usize) -> f64 {
    let o = shape.num_opponents() as f64;
    let s = shape.sigma_c();
    if a == b {
        o * (o - 1.0) / (2.0 * PI * (s[a] * s[a] + 1.0))
    } else {
        o * (o + 1.0) / (2.0 * PI * ((s[a] * s[a] + 1.0) * (s[b] * s[b] + 1.0)).sqrt())
    }
}

/// Expected fantasy-point variance of a generic opponent.
pub fn opponent_variance(shape: &LeagueShape) -> f64 {
    let n = shape.num_categories();
    let o = shape.num_opponents() as f64;
    let bernoulli: f64 = shape
        .sigma_c()
        .iter()
        .map(|s| {
            let s2 = s * s;
            (s2 / (1.0 + s2)).acos() / (2.0 * PI)
        })
        .sum();
    let mut covariance = 0.0;
    for a in 0..n {
        for b in 0..n {
            covariance += shape.rho().get(a, b) * h_m_unchecked(shape, a, b);
        }
    }
    (o * bernoulli + 0.5 * covariance).max(0.0)
}

/// Own-team moments `(mu_T, sigma2_T)`.
pub fn team_moments(state: &MatchupMatrix, shape: &LeagueShape) -> Result<(f64, f64)> {
    check_dims(state, shape)?;
    let table = DensityTable::new(state);
    let (mu_t, raw) = team_moments_raw(&table, shape);
    Ok((mu_t, raw.max(SIGMA2_T_FLOOR)))
}

/// Returns `mu_T` and the unclamped variance.
pub(crate) fn team_moments_raw(table: &DensityTable, shape: &LeagueShape) -> (f64, f64) {
    let n = shape.num_categories();
    let mut mu_t = 0.0;
    let mut bernoulli = 0.0;
    for &p in &table.cdf {
        mu_t += p;
        bernoulli += p * (1.0 - p);
    }
    let mut covariance = 0.0;
    for a in 0..n {
        for b in 0..n {
            let r = shape.rho().get(a, b);
            if r != 0.0 {
                covariance += r * table.h(a, b);
            }
        }
    }
    (mu_t, bernoulli + 0.5 * covariance)
}

/// Moments `(mu_L, sigma2_L)` of the best opponent's lead over the average.
pub fn gap_moments(e_sigma2_m: f64, shape: &LeagueShape) -> Result<(f64, f64)> {
    if !(e_sigma2_m >= 0.0) {
        return Err(Error::Precondition(format!(
            "opponent variance {e_sigma2_m} must be >= 0"
        )));
    }
    let (mev, mvar) = max_order_stats(shape.num_opponents())?;
    Ok((mev * e_sigma2_m.sqrt(), mvar * e_sigma2_m))
}

/// `(mu_D, sigma2_D, V)` from the team and gap moments.
///
/// With `sigma2_D = 0` the win probability is 1, 0 or 1/2 according to the
/// sign of `mu_D`.
pub fn differential_and_v(
    mu_t: f64,
    sigma2_t: f64,
    mu_l: f64,
    sigma2_l: f64,
    shape: &LeagueShape,
) -> Result<(f64, f64, f64)> {
    if !(sigma2_t >= 0.0) || !(sigma2_l >= 0.0) {
        return Err(Error::Precondition("variances must be >= 0".into()));
    }
    let o = shape.num_opponents() as f64;
    let c = shape.num_categories() as f64;
    let k = (o + 1.0) / o;
    let mu_d = mu_t * k - c * (o + 1.0) / 2.0 - mu_l;
    let sigma2_d = k * sigma2_t + sigma2_l;
    let v = if sigma2_d > 0.0 {
        norm_cdf(mu_d / sigma2_d.sqrt())
    } else if mu_d > 0.0 {
        1.0
    } else if mu_d < 0.0 {
        0.0
    } else {
        0.5
    };
    Ok((mu_d, sigma2_d, v))
}

/// Shape-only quantities, computed once and reused across many states.
#[derive(Debug, Clone)]
pub struct PreparedShape {
    shape: LeagueShape,
    e_sigma2_m: f64,
    mu_l: f64,
    sigma2_l: f64,
}

impl PreparedShape {
    pub fn new(shape: LeagueShape) -> Result<Self> {
        let e_sigma2_m = opponent_variance(&shape);
        let (mu_l, sigma2_l) = gap_moments(e_sigma2_m, &shape)?;
        Ok(PreparedShape {
            shape,
            e_sigma2_m,
            mu_l,
            sigma2_l,
        })
    }

    pub fn shape(&self) -> &LeagueShape {
        &self.shape
    }

    pub fn evaluate(&self, state: &MatchupMatrix) -> Result<ObjectiveBreakdown> {
        check_dims(state, &self.shape)?;
        let table = DensityTable::new(state);
        Ok(self.evaluate_table(&table).0)
    }

    /// Breakdown plus the unclamped own-team variance.
    pub(crate) fn evaluate_table(&self, table: &DensityTable) -> (ObjectiveBreakdown, f64) {
        let (mu_t, raw_sigma2_t) = team_moments_raw(table, &self.shape);
        let sigma2_t = raw_sigma2_t.max(SIGMA2_T_FLOOR);
        let (mu_d, sigma2_d, v) = differential_and_v(mu_t, sigma2_t, self.mu_l, self.sigma2_l, &self.shape)
            .expect("clamped variances are non-negative");
        (
            ObjectiveBreakdown {
                mu_t,
                sigma2_t,
                e_sigma2_m: self.e_sigma2_m,
                mu_l: self.mu_l,
                sigma2_l: self.sigma2_l,
                mu_d,
                sigma2_d,
                v,
            },
            raw_sigma2_t,
        )
    }
}

/// Serializable objective input: a matchup state plus the league shape it is
/// evaluated in. `rho` defaults to the identity and `sigma_c` to zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveInput {
    pub mu: MatchupMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<CorrelationMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_c: Option<Vec<f64>>,
}

impl ObjectiveInput {
    pub fn new(mu: MatchupMatrix, shape: &LeagueShape) -> Self {
        ObjectiveInput {
            mu,
            rho: Some(shape.rho().clone()),
            sigma_c: Some(shape.sigma_c().to_vec()),
        }
    }

    pub fn shape(&self) -> Result<LeagueShape> {
        let c = self.mu.categories();
        let rho = self.rho.clone().unwrap_or_else(|| CorrelationMatrix::identity(c));
        let sigma_c = self.sigma_c.clone().unwrap_or_else(|| vec![0.0; c]);
        LeagueShape::new(rho, sigma_c, self.mu.opponents())
    }

    pub fn evaluate(&self) -> Result<ObjectiveBreakdown> {
        evaluate(&self.mu, &self.shape()?)
    }
}

/// Full objective evaluation for one state.
pub fn evaluate(state: &MatchupMatrix, shape: &LeagueShape) -> Result<ObjectiveBreakdown> {
    check_dims(state, shape)?;
    PreparedShape::new(shape.clone())?.evaluate(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PHI0_SQ: f64 = 1.0 / (2.0 * PI);

    /// Brute-force H_T straight from the pairwise covariance structure:
    /// same-category pairs of distinct opponents, and for a != b every
    /// opponent pair with the same opponent counted twice.
    fn brute_h(state: &MatchupMatrix, a: usize, b: usize) -> f64 {
        let o = state.opponents();
        let mut total = 0.0;
        for m in 0..o {
            for n in 0..o {
                let w = norm_pdf(state.get(a, m)) * norm_pdf(state.get(b, n));
                if a == b {
                    if m != n {
                        total += w;
                    }
                } else {
                    total += if m == n { 2.0 * w } else { w };
                }
            }
        }
        total
    }

    #[test]
    fn helper_examples_at_zero() {
        let state = MatchupMatrix::zeros(2, 3);
        let h = helpers_t(&state, 0, 0).unwrap();
        assert!((h.f_a - 1.196_827).abs() < 1e-6);
        assert!((h.h_ab - 0.954_930).abs() < 1e-6);
        assert!((h.h_ab - PHI0_SQ * 6.0).abs() < 1e-12);
        assert!((h.h_ab - brute_h(&state, 0, 0)).abs() < 1e-12);
        let h = helpers_t(&state, 0, 1).unwrap();
        assert!((h.h_ab - 1.909_859).abs() < 1e-6);
        assert!((h.h_ab - brute_h(&state, 0, 1)).abs() < 1e-12);
    }

    #[test]
    fn helper_h_matches_brute_force_on_random_state() {
        let state = MatchupMatrix::from_vec(
            3,
            4,
            vec![0.3, -1.2, 0.8, 2.0, -0.4, 0.0, 1.1, -0.7, 0.5, 0.25, -1.9, 1.4],
        )
        .unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let h = helpers_t(&state, a, b).unwrap();
                assert!((h.h_ab - brute_h(&state, a, b)).abs() < 1e-12, "({a},{b})");
            }
        }
        assert!(helpers_t(&state, 3, 0).is_err());
    }

    #[test]
    fn h_m_examples() {
        let shape = LeagueShape::symmetric(2, 3).unwrap();
        assert!((helper_h_m(&shape, 0, 0).unwrap() - 6.0 / (2.0 * PI)).abs() < 1e-12);
        assert!((helper_h_m(&shape, 0, 1).unwrap() - 12.0 / (2.0 * PI)).abs() < 1e-12);
        let wide = LeagueShape::new(CorrelationMatrix::identity(2), vec![1.0, 1.0], 3).unwrap();
        assert!((helper_h_m(&wide, 1, 1).unwrap() - 0.477_465).abs() < 1e-6);
    }

    #[test]
    fn opponent_variance_examples() {
        let shape = LeagueShape::symmetric(2, 3).unwrap();
        assert!((opponent_variance(&shape) - 2.454_930).abs() < 1e-6);
        // Large spread kills the Bernoulli term: acos(1) = 0.
        let wide = LeagueShape::new(CorrelationMatrix::identity(1), vec![1e8], 3).unwrap();
        assert!(opponent_variance(&wide) < 1e-6);
    }

    #[test]
    fn team_moments_examples() {
        let shape = LeagueShape::symmetric(9, 11).unwrap();
        let (mu, var) = team_moments(&MatchupMatrix::zeros(9, 11), &shape).unwrap();
        assert_eq!(mu, 49.5);
        // 99/4 + 9 * 110 / (4 pi)
        let expected = 24.75 + 9.0 * 110.0 / (4.0 * PI);
        assert!((var - expected).abs() < 1e-9);
        assert!((var - 103.53).abs() < 1e-2);

        let (mu, var) = team_moments(&MatchupMatrix::filled(9, 11, 8.0), &shape).unwrap();
        assert!((mu - 99.0).abs() < 1e-9);
        assert!(var < 1e-9 + 1e-12);
    }

    #[test]
    fn team_moments_rejects_bad_dims() {
        let shape = LeagueShape::symmetric(9, 11).unwrap();
        assert!(matches!(
            team_moments(&MatchupMatrix::zeros(9, 10), &shape),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn gap_moments_examples() {
        let eleven = LeagueShape::symmetric(1, 11).unwrap();
        assert_eq!(gap_moments(1.0, &eleven).unwrap(), (1.586436352, 0.333247443));
        assert_eq!(gap_moments(0.0, &eleven).unwrap(), (0.0, 0.0));
        let two = LeagueShape::symmetric(1, 2).unwrap();
        assert!((gap_moments(4.0, &two).unwrap().0 - 2.0 * 0.564_189_584).abs() < 1e-12);
        assert!(gap_moments(-1.0, &two).is_err());
    }

    #[test]
    fn differential_examples() {
        let shape = LeagueShape::symmetric(9, 11).unwrap();
        let (mu_d, _, _) = differential_and_v(49.5, 10.0, 2.0, 1.0, &shape).unwrap();
        assert!((mu_d + 2.0).abs() < 1e-12);
        let (_, _, v) = differential_and_v(49.5 + 2.0 * 11.0 / 12.0, 10.0, 0.0, 1.0, &shape).unwrap();
        assert!((v - norm_cdf(2.0 / (10.0f64 * 12.0 / 11.0 + 1.0).sqrt())).abs() < 1e-12);
        let mu_at_zero = 9.0 * 11.0 / 2.0 + 1.5 * 11.0 / 12.0;
        let (mu_d, _, v) = differential_and_v(mu_at_zero, 4.0, 1.5, 1.0, &shape).unwrap();
        assert!(mu_d.abs() < 1e-12);
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn degenerate_differential_rule() {
        let shape = LeagueShape::symmetric(1, 1).unwrap();
        let (_, s, v) = differential_and_v(1.0, 0.0, 0.0, 0.0, &shape).unwrap();
        assert_eq!((s, v), (0.0, 1.0));
        let (_, _, v) = differential_and_v(0.0, 0.0, 0.0, 0.0, &shape).unwrap();
        assert_eq!(v, 0.0);
        let (_, _, v) = differential_and_v(0.5, 0.0, 0.0, 0.0, &shape).unwrap();
        assert_eq!(v, 0.5);
    }

    #[test]
    fn symmetric_league_breakdown() {
        let shape = LeagueShape::symmetric(9, 11).unwrap();
        let b = evaluate(&MatchupMatrix::zeros(9, 11), &shape).unwrap();
        assert!((b.mu_d + b.mu_l).abs() < 1e-9);
        assert!(b.v > 0.0 && b.v < 0.5);
        assert!((b.v - 1.0 / 12.0).abs() <= 0.06);
    }

    #[test]
    fn uniform_improvement_raises_v() {
        let shape = LeagueShape::symmetric(9, 11).unwrap();
        let base = evaluate(&MatchupMatrix::zeros(9, 11), &shape).unwrap();
        let better = evaluate(&MatchupMatrix::filled(9, 11, 3.0), &shape).unwrap();
        assert!(better.v > base.v);
    }

    #[test]
    fn variance_identity_with_zero_spread() {
        let rho = CorrelationMatrix::from_rows(vec![
            vec![1.0, 0.3, -0.2],
            vec![0.3, 1.0, 0.1],
            vec![-0.2, 0.1, 1.0],
        ])
        .unwrap();
        let shape = LeagueShape::new(rho, vec![0.0; 3], 7).unwrap();
        let (_, var) = team_moments(&MatchupMatrix::zeros(3, 7), &shape).unwrap();
        assert!((opponent_variance(&shape) - var).abs() < 1e-9);
    }

    #[test]
    fn serde_shapes() {
        let state: MatchupMatrix = serde_json::from_str("[[0.5, -0.5], [1.0, 0.0]]").unwrap();
        assert_eq!(state.get(1, 0), 1.0);
        assert!(serde_json::from_str::<MatchupMatrix>("[[0.5], [1.0, 0.0]]").is_err());
    }
}
