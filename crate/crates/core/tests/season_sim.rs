use roto_core::draft::{run_draft, Agent, DraftConfig, DraftContext, HScoreParams, ScoringBasis};
use roto_core::io::RunStore;
use roto_core::projection::CategorySchema;
use roto_core::rng::SeededRng;
use roto_core::scoring::LeagueSample;
use roto_core::season::*;
use roto_core::Error;

fn context(chi: f64) -> DraftContext {
    let schema = CategorySchema::nba_nine();
    let pool = synthetic_pool(
        &SyntheticPoolConfig {
            size: 60,
            ..Default::default()
        },
        &mut SeededRng::new(8, 0),
    )
    .unwrap();
    let basis = ScoringBasis::from_tau(&schema, &default_taus(&schema).unwrap(), 5, chi).unwrap();
    DraftContext::new(schema, pool, basis, DraftConfig::new(4, 5).unwrap()).unwrap()
}

fn noise(ctx: &DraftContext, chi: f64) -> SeasonNoise {
    SeasonNoise::new(
        &NoiseModelConfig {
            tau: default_taus(ctx.schema()).unwrap(),
            chi,
            roster_size: 5,
            rho: ctx.rho().clone(),
        },
        ctx.schema(),
    )
    .unwrap()
}

fn config(layout: Layout, chi: f64) -> ExperimentConfig {
    let schema = CategorySchema::nba_nine();
    ExperimentConfig {
        tau: default_taus(&schema).unwrap(),
        categories: schema,
        teams: 4,
        roster_size: 5,
        chi,
        batches: 2,
        seasons_per_draft: 5,
        punt_threshold: DEFAULT_PUNT_THRESHOLD,
        layout,
        pool: PoolSource::Synthetic(SyntheticPoolConfig {
            size: 50,
            ..Default::default()
        }),
    }
}

fn quick_h() -> Layout {
    Layout::RotatingH {
        params: HScoreParams {
            width: 6,
            steps: 20,
            ..Default::default()
        },
    }
}

#[test]
fn seasons_conserve_points_and_replay() {
    let ctx = context(0.5);
    let draft = run_draft(&vec![Agent::GScore; 4], &ctx).unwrap();
    let noise = noise(&ctx, 0.5);
    for s in 0..500 {
        let mut rng = SeededRng::new(3, 0).derive(s);
        let st = simulate_season(&ctx, &draft, &noise, &mut rng).unwrap();
        assert_eq!(st.totals.iter().sum::<f64>(), LeagueSample::expected_total(9, 4));
        let standard: f64 = st.standard_totals().iter().sum();
        assert_eq!(standard, (9 * 4 * 5 / 2) as f64);
        let again = simulate_season(&ctx, &draft, &noise, &mut SeededRng::new(3, 0).derive(s)).unwrap();
        assert_eq!(st, again);
    }
}

#[test]
fn zero_noise_is_deterministic() {
    let ctx = context(0.5);
    let draft = run_draft(&vec![Agent::GScore; 4], &ctx).unwrap();
    let zero = SeasonNoise::zero(9);
    let a = simulate_season(&ctx, &draft, &zero, &mut SeededRng::new(1, 0)).unwrap();
    let b = simulate_season(&ctx, &draft, &zero, &mut SeededRng::new(2, 0)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn standard_points_are_internal_plus_one() {
    let ctx = context(0.5);
    let draft = run_draft(&vec![Agent::GScore; 4], &ctx).unwrap();
    let st = simulate_season(&ctx, &draft, &noise(&ctx, 0.5), &mut SeededRng::new(5, 0)).unwrap();
    for t in 0..4 {
        for c in 0..9 {
            assert_eq!(st.standard_points(t, c), st.points[t][c] + 1.0);
            assert!(st.standard_points(t, c) >= 1.0);
        }
    }
}

#[test]
fn all_g_shares_sum_to_one() {
    let r = run_experiment(&config(Layout::AllG, 0.5), 21).unwrap();
    let total: f64 = r.league_seat_share.iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert_eq!(r.conservation_violations, 0);
    assert_eq!(r.teams.len(), 8);
    assert_eq!(r.focal.seasons, 40);
}

#[test]
fn experiments_are_reproducible_across_worker_counts() {
    let cfg = config(quick_h(), 0.25);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_experiment(&cfg, 5).unwrap())
    };
    let a = run(1);
    let b = run(2);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn punt_rules() {
    let mut r = run_experiment(&config(Layout::AllG, 0.5), 1).unwrap();
    r.teams[0].category_points = vec![7.0; 9];
    r.teams[0].category_points[8] = 1.2;
    let flags = detect_punts(&r, 1.5);
    assert!(flags[0][8]);
    assert!(!flags[0][..8].iter().any(|f| *f));
    assert!(detect_punts(&r, 0.0).iter().flatten().all(|f| !f));
    r.teams[1].category_points = vec![6.5; 9];
    assert!(detect_punts(&r, 1.5)[1].iter().all(|f| !f));
    assert!(punt_rate(&r, 1.5, Some(8)) >= 1.0 / r.teams.len() as f64);
}

#[test]
fn invalid_experiments_rejected() {
    let mut cfg = config(Layout::AllG, 0.5);
    cfg.teams = 22;
    assert!(matches!(
        run_experiment(&cfg, 1),
        Err(Error::UnsupportedLeagueSize(21))
    ));
    let mut cfg = config(Layout::AllG, 0.5);
    cfg.chi = 0.0;
    assert!(run_experiment(&cfg, 1).unwrap_err().is_validation());
}

#[test]
fn run_store_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let store = RunStore::open(dir.path().join("runs")).unwrap();
    let cfg = config(Layout::AllG, 0.5);
    let report = run_experiment(&cfg, 9).unwrap();
    let id = store.write_report(&report, None).unwrap();
    assert_eq!(store.read_report(&id).unwrap(), report);
    assert_eq!(store.read_manifest(&id).unwrap().master_seed, 9);
    assert!(matches!(
        store.write_report(&report, None),
        Err(Error::RunExists(_))
    ));

    // A second store, same config and seed: byte-identical files.
    let other = RunStore::open(dir.path().join("again")).unwrap();
    let id2 = other
        .write_report(&run_experiment(&cfg, 9).unwrap(), None)
        .unwrap();
    assert_eq!(id, id2);
    for f in ["report.json", "report.csv", "config.json"] {
        assert_eq!(
            std::fs::read(store.run_dir(&id).join(f)).unwrap(),
            std::fs::read(other.run_dir(&id).join(f)).unwrap()
        );
    }

    let csv = std::fs::read_to_string(store.run_dir(&id).join("report.csv")).unwrap();
    for line in csv.lines() {
        assert_eq!(line.split(',').count(), cfg.teams + 2);
    }
    assert_eq!(csv.lines().count(), 1 + cfg.batches + 1);
}

#[test]
fn run_store_checks_schema_version() {
    let dir = tempfile::tempdir().unwrap();
    let store = RunStore::open(dir.path()).unwrap();
    let report = run_experiment(&config(Layout::AllG, 0.5), 2).unwrap();
    let id = store.write_report(&report, Some("manual")).unwrap();
    let path = store.run_dir(&id).join("report.json");
    let text =
        std::fs::read_to_string(&path)
            .unwrap()
            .replacen("\"schema_version\": 1", "\"schema_version\": 7", 1);
    std::fs::write(&path, text).unwrap();
    assert!(matches!(
        store.read_report(&id),
        Err(Error::SchemaVersion {
            found: 7,
            expected: 1
        })
    ));
    assert!(store.write_report(&report, Some("../escape")).is_err());
}
