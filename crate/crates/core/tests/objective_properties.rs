use proptest::prelude::*;
use roto_core::gradient::{analytic_gradient, gradient_check};
use roto_core::objective::{evaluate, opponent_variance, team_moments, LeagueShape, MatchupMatrix};
use roto_core::stats::{nearest_psd, norm_cdf, CorrelationMatrix};

fn correlation(dim: usize, max_abs: f64) -> impl Strategy<Value = CorrelationMatrix> {
    prop::collection::vec(-max_abs..max_abs, dim * (dim - 1) / 2).prop_map(move |off| {
        let mut rows = vec![vec![0.0; dim]; dim];
        let mut k = 0;
        for a in 0..dim {
            rows[a][a] = 1.0;
            for b in (a + 1)..dim {
                rows[a][b] = off[k];
                rows[b][a] = off[k];
                k += 1;
            }
        }
        nearest_psd(&rows).unwrap()
    })
}

fn league(
    cats: std::ops::Range<usize>,
    opps: std::ops::Range<usize>,
) -> impl Strategy<Value = (MatchupMatrix, LeagueShape)> {
    (cats, opps).prop_flat_map(|(c, o)| {
        (
            prop::collection::vec(-2.0..2.0f64, c * o),
            correlation(c, 0.2),
            prop::collection::vec(0.0..1.5f64, c),
        )
            .prop_map(move |(mu, rho, sigma)| {
                (
                    MatchupMatrix::from_vec(c, o, mu).unwrap(),
                    LeagueShape::new(rho, sigma, o).unwrap(),
                )
            })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn opponent_permutation_invariance((state, shape) in league(1..7, 1..12), seed in any::<u64>()) {
        let o = state.opponents();
        let mut perm: Vec<usize> = (0..o).collect();
        perm.rotate_left((seed % o as u64) as usize);
        if o > 2 { perm.swap(0, 2); }
        let a = evaluate(&state, &shape).unwrap();
        let b = evaluate(&state.permuted_opponents(&perm), &shape).unwrap();
        prop_assert!((a.v - b.v).abs() < 1e-12);
        prop_assert!((a.sigma2_t - b.sigma2_t).abs() < 1e-9);
    }

    #[test]
    fn category_permutation_equivariance(
        (state, shape, perm) in league(2..7, 1..9)
            .prop_flat_map(|(s, sh)| { let c = s.categories(); (Just(s), Just(sh), permutation(c)) })
    ) {
        let a = evaluate(&state, &shape).unwrap();
        let b = evaluate(&state.permuted_categories(&perm), &shape.permuted_categories(&perm)).unwrap();
        prop_assert!((a.v - b.v).abs() < 1e-12);
        prop_assert!((a.mu_d - b.mu_d).abs() < 1e-9);
        prop_assert!((a.e_sigma2_m - b.e_sigma2_m).abs() < 1e-9);
    }

    #[test]
    fn zero_spread_variance_identity(rho in (1usize..10).prop_flat_map(|c| correlation(c, 0.6)), o in 1usize..21) {
        let c = rho.dim();
        let shape = LeagueShape::new(rho, vec![0.0; c], o).unwrap();
        let (_, s2) = team_moments(&MatchupMatrix::zeros(c, o), &shape).unwrap();
        prop_assert!((opponent_variance(&shape) - s2).abs() < 1e-9);
    }

    #[test]
    fn bernoulli_term_peaks_at_even_odds(mu in -6.0..6.0f64) {
        let p = norm_cdf(mu);
        prop_assert!(p * (1.0 - p) <= 0.25);
        if mu != 0.0 { prop_assert!(p * (1.0 - p) < 0.25); }
    }

    #[test]
    fn breakdown_is_finite_and_bounded((state, shape) in league(1..10, 1..21)) {
        let b = evaluate(&state, &shape).unwrap();
        let c = state.categories() as f64;
        let o = state.opponents() as f64;
        for x in [b.mu_t, b.sigma2_t, b.e_sigma2_m, b.mu_l, b.sigma2_l, b.mu_d, b.sigma2_d, b.v] {
            prop_assert!(x.is_finite());
        }
        prop_assert!(b.v > 0.0 && b.v < 1.0);
        prop_assert!(b.sigma2_t >= 0.0 && b.sigma2_d > 0.0);
        prop_assert!(b.mu_t >= 0.0 && b.mu_t <= c * o);
    }

    #[test]
    fn uniform_improvement_raises_v((state, shape) in league(1..8, 1..12), step in 0.05..1.0f64) {
        let c = state.categories();
        let up = state.shifted_rows(&vec![step; c]);
        let a = evaluate(&state, &shape).unwrap();
        let b = evaluate(&up, &shape).unwrap();
        prop_assert!(b.mu_t > a.mu_t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gradient_matches_central_differences((state, shape) in league(9..10, 11..12)) {
        let r = gradient_check(&state, &shape, 1e-3).unwrap();
        prop_assert!(r.pass, "{:?}", r);
    }

    #[test]
    fn gradient_opponent_equivariance((state, shape) in league(2..6, 2..8)) {
        let o = state.opponents();
        let perm: Vec<usize> = (0..o).rev().collect();
        let g = analytic_gradient(&state, &shape).unwrap();
        let gp = analytic_gradient(&state.permuted_opponents(&perm), &shape).unwrap();
        for c in 0..state.categories() {
            for (j, &p) in perm.iter().enumerate() {
                prop_assert!((gp.get(c, j) - g.get(c, p)).abs() < 1e-12);
            }
        }
    }
}
