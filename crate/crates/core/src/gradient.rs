//! Analytic gradient of the win probability with respect to every matchup
//! mean, and a central-difference verifier.
//!
//! The opponent-side quantities (`E(sigma2_M)`, `mu_L`, `sigma2_L`) do not
//! depend on the drafting team's matchups and are held constant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::{
    evaluate, DensityTable, LeagueShape, MatchupMatrix, ObjectiveBreakdown, PreparedShape, SIGMA2_T_FLOOR,
};
use crate::stats::norm_pdf;

/// `dV / dmu[c][o]`, laid out like the state it was computed from.
pub type GradientMatrix = MatchupMatrix;

/// Analytic gradient of `V`.
pub fn analytic_gradient(state: &MatchupMatrix, shape: &LeagueShape) -> Result<GradientMatrix> {
    let prepared = PreparedShape::new(shape.clone())?;
    Ok(evaluate_with_gradient(state, &prepared)?.1)
}

/// Evaluates the objective and its gradient in one pass.
pub fn evaluate_with_gradient(
    state: &MatchupMatrix,
    prepared: &PreparedShape,
) -> Result<(ObjectiveBreakdown, GradientMatrix)> {
    let shape = prepared.shape();
    if state.categories() != shape.num_categories() || state.opponents() != shape.num_opponents() {
        return Err(Error::DimensionMismatch(format!(
            "state is {}x{}, league shape is {}x{}",
            state.categories(),
            state.opponents(),
            shape.num_categories(),
            shape.num_opponents()
        )));
    }
    let table = DensityTable::new(state);
    let (b, raw_sigma2_t) = prepared.evaluate_table(&table);
    if !(b.sigma2_d > 0.0) {
        return Err(Error::DegenerateDifferential);
    }

    let n_cat = shape.num_categories();
    let n_opp = shape.num_opponents();
    let k = (n_opp as f64 + 1.0) / n_opp as f64;
    let sigma_d = b.sigma2_d.sqrt();
    let scale = norm_pdf(b.mu_d / sigma_d) / (sigma_d * sigma_d * sigma_d);
    // The floor on sigma2_T is flat, so its gradient vanishes when active.
    let variance_active = raw_sigma2_t > SIGMA2_T_FLOOR;
    let rho = shape.rho();

    let mut grad = MatchupMatrix::zeros(n_cat, n_opp);
    for c in 0..n_cat {
        let phi_c = table.phi_row(c);
        for o in 0..n_opp {
            let mu = state.get(c, o);
            let phi = phi_c[o];
            let cdf = table.cdf[c * n_opp + o];
            let d_mu_d = k * phi;

            let d_sigma2_t = if variance_active {
                let mut cross = 0.0;
                for other in 0..n_cat {
                    if other != c {
                        let r = rho.get(other, c);
                        if r != 0.0 {
                            cross += r * (-table.phi_row(other)[o] - table.f[other]);
                        }
                    }
                }
                let own = phi - table.f[c];
                mu * phi * (cross + own) + phi - 2.0 * cdf * phi
            } else {
                0.0
            };
            // sigma2_D = k * sigma2_T + sigma2_L
            let d_sigma2_d = k * d_sigma2_t;
            grad.set(c, o, scale * (b.sigma2_d * d_mu_d - 0.5 * b.mu_d * d_sigma2_d));
        }
    }
    Ok((b, grad))
}

/// Central-difference gradient of `evaluate(..).v`, entry by entry.
pub fn fd_gradient(state: &MatchupMatrix, shape: &LeagueShape, h: f64) -> Result<GradientMatrix> {
    if !(h > 0.0) {
        return Err(Error::Precondition(format!("step {h} must be > 0")));
    }
    let prepared = PreparedShape::new(shape.clone())?;
    // Surfaces dimension errors before the loop.
    evaluate(state, shape)?;
    let mut grad = MatchupMatrix::zeros(state.categories(), state.opponents());
    let mut probe = state.clone();
    for c in 0..state.categories() {
        for o in 0..state.opponents() {
            let x = state.get(c, o);
            probe.set(c, o, x + h);
            let up = prepared.evaluate(&probe)?.v;
            probe.set(c, o, x - h);
            let down = prepared.evaluate(&probe)?.v;
            probe.set(c, o, x);
            grad.set(c, o, (up - down) / (2.0 * h));
        }
    }
    Ok(grad)
}

/// Absolute floor in the relative-error denominator.
pub const RELATIVE_ERROR_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientCheckReport {
    pub max_relative_error: f64,
    /// `(category, opponent)` of the worst entry.
    pub worst_entry: (usize, usize),
    pub tolerance: f64,
    pub pass: bool,
}

/// `|a - b| / max(|a|, |b|, floor)`
pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(RELATIVE_ERROR_FLOOR)
}

/// Compares the analytic gradient with central differences at `h`.
pub fn gradient_check_with_step(
    state: &MatchupMatrix,
    shape: &LeagueShape,
    tol: f64,
    h: f64,
) -> Result<GradientCheckReport> {
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tolerance {tol} must be > 0")));
    }
    let analytic = analytic_gradient(state, shape)?;
    let numeric = fd_gradient(state, shape, h)?;
    let mut worst = 0.0;
    let mut worst_entry = (0, 0);
    for c in 0..state.categories() {
        for o in 0..state.opponents() {
            let e = relative_error(analytic.get(c, o), numeric.get(c, o));
            if e > worst {
                worst = e;
                worst_entry = (c, o);
            }
        }
    }
    Ok(GradientCheckReport {
        max_relative_error: worst,
        worst_entry,
        tolerance: tol,
        pass: worst <= tol,
    })
}

/// [`gradient_check_with_step`] at the default step `h = 1e-4`.
pub fn gradient_check(state: &MatchupMatrix, shape: &LeagueShape, tol: f64) -> Result<GradientCheckReport> {
    gradient_check_with_step(state, shape, tol, 1e-4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::team_moments;
    use crate::stats::{norm_cdf, CorrelationMatrix};

    fn sample_state() -> (MatchupMatrix, LeagueShape) {
        let rho = CorrelationMatrix::from_rows(vec![
            vec![1.0, 0.15, -0.1],
            vec![0.15, 1.0, 0.05],
            vec![-0.1, 0.05, 1.0],
        ])
        .unwrap();
        let shape = LeagueShape::new(rho, vec![0.4, 0.0, 1.1], 5).unwrap();
        let state = MatchupMatrix::from_vec(
            3,
            5,
            vec![
                0.3, -1.2, 0.8, 1.7, -0.4, 0.0, 1.1, -0.7, 0.5, 0.25, -1.9, 1.4, 0.9, -0.3, 0.6,
            ],
        )
        .unwrap();
        (state, shape)
    }

    #[test]
    fn mu_d_gradient_at_zero() {
        // At mu = 0 with identity rho the variance gradient vanishes, so the
        // gradient is scale * sigma2_D * (12/11) phi(0).
        let shape = LeagueShape::symmetric(9, 11).unwrap();
        let state = MatchupMatrix::zeros(9, 11);
        let b = evaluate(&state, &shape).unwrap();
        let g = analytic_gradient(&state, &shape).unwrap();
        let d_mu_d = 12.0 / 11.0 * norm_pdf(0.0);
        assert!((d_mu_d - 0.435_210).abs() < 1e-6);
        let expected = norm_pdf(b.mu_d / b.sigma2_d.sqrt()) / b.sigma2_d.sqrt() * d_mu_d;
        for v in g.as_slice() {
            assert!((v - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn variance_gradient_vanishes_at_symmetric_point() {
        let shape = LeagueShape::symmetric(4, 6).unwrap();
        let state = MatchupMatrix::zeros(4, 6);
        let (_, base) = team_moments(&state, &shape).unwrap();
        let h = 1e-5;
        for c in 0..4 {
            let mut up = state.clone();
            up.set(c, 2, h);
            let (_, v) = team_moments(&up, &shape).unwrap();
            assert!(((v - base) / h).abs() < 1e-4);
        }
    }

    #[test]
    fn symmetric_state_has_equal_entries_within_category() {
        let (_, shape) = sample_state();
        let mut state = MatchupMatrix::zeros(3, 5);
        for o in 0..5 {
            state.set(0, o, 0.7);
            state.set(1, o, -0.2);
            state.set(2, o, 1.3);
        }
        let g = analytic_gradient(&state, &shape).unwrap();
        for c in 0..3 {
            let first = g.get(c, 0);
            for o in 1..5 {
                assert!((g.get(c, o) - first).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn matches_central_differences() {
        let (state, shape) = sample_state();
        let report = gradient_check(&state, &shape, 1e-6).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn central_difference_error_is_second_order() {
        let (state, shape) = sample_state();
        let exact = analytic_gradient(&state, &shape).unwrap();
        let err = |h: f64| {
            let fd = fd_gradient(&state, &shape, h).unwrap();
            exact
                .as_slice()
                .iter()
                .zip(fd.as_slice())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        };
        let coarse = err(0.1);
        let fine = err(0.05);
        let ratio = coarse / fine;
        assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn saturated_wins_have_flat_gradient() {
        let shape = LeagueShape::symmetric(9, 11).unwrap();
        let g = fd_gradient(&MatchupMatrix::filled(9, 11, 8.0), &shape, 1e-4).unwrap();
        assert!(g.as_slice().iter().all(|v| v.abs() < 1e-12));
        let g = analytic_gradient(&MatchupMatrix::filled(9, 11, 8.0), &shape).unwrap();
        assert!(g.as_slice().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn zero_state_passes_check() {
        let shape = LeagueShape::symmetric(9, 11).unwrap();
        let r = gradient_check(&MatchupMatrix::zeros(9, 11), &shape, 1e-3).unwrap();
        assert!(r.pass);
        assert!(r.max_relative_error < 1e-6);
    }

    #[test]
    fn opponent_permutation_equivariance() {
        let (state, shape) = sample_state();
        let perm = [3, 0, 4, 1, 2];
        let g = analytic_gradient(&state, &shape).unwrap();
        let gp = analytic_gradient(&state.permuted_opponents(&perm), &shape).unwrap();
        for c in 0..3 {
            for (o, &p) in perm.iter().enumerate() {
                assert!((gp.get(c, o) - g.get(c, p)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let (state, shape) = sample_state();
        assert!(fd_gradient(&state, &shape, 0.0).is_err());
        assert!(gradient_check(&state, &shape, 0.0).is_err());
        assert!(analytic_gradient(&MatchupMatrix::zeros(2, 5), &shape).is_err());
    }

    #[test]
    fn bernoulli_part_matches_closed_form() {
        // One category, one opponent: sigma2_T = Phi(1 - Phi), no covariance.
        let shape = LeagueShape::symmetric(1, 1).unwrap();
        let state = MatchupMatrix::from_vec(1, 1, vec![0.4]).unwrap();
        let (_, v) = team_moments(&state, &shape).unwrap();
        let p = norm_cdf(0.4);
        assert!((v - p * (1.0 - p)).abs() < 1e-15);
        assert!(gradient_check(&state, &shape, 1e-6).unwrap().pass);
    }
}
