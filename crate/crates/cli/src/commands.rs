use std::fmt::{self, Write as _};
use std::io::Read;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use roto_core::draft::{run_draft, Agent, DraftConfig, DraftContext, HScoreParams, ScoringBasis};
use roto_core::gradient::gradient_check_with_step;
use roto_core::io::{load_projections, save_projections, RunStore};
use roto_core::objective::{opponent_variance, team_moments, LeagueShape, MatchupMatrix, ObjectiveInput};
use roto_core::oracle::{
    mc_opponent_variance, mc_win_probability, spearman, sqrt_normal_moments, team_means_from_matchups,
};
use roto_core::projection::{CategorySchema, PlayerProjection};
use roto_core::rng::SeededRng;
use roto_core::season::{
    default_taus, punt_rate, run_experiment, synthetic_pool, ExperimentConfig, Layout, PoolSource,
    SyntheticPoolConfig,
};
use roto_core::stats::{
    bvn_cdf_approx, bvn_cdf_reference, nearest_psd, scenario_count, CorrelationMatrix, MaxOrderStatsTable,
};

use crate::*;

/// Tolerance of the table's internal consistency check.
const TABLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Runtime(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<roto_core::Error> for CliError {
    fn from(e: roto_core::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

pub fn dispatch(cli: &Cli) -> CliResult<String> {
    let pretty = cli.pretty;
    match &cli.command {
        Command::Objective(ObjectiveCmd::Eval(a)) => objective_eval(a, pretty),
        Command::Gradient(GradientCmd::Check(a)) => gradient_check(a, pretty),
        Command::Oracle(OracleCmd::Compare(a)) => oracle_compare(a, pretty),
        Command::Oracle(OracleCmd::OpponentVariance(a)) => oracle_opponent_variance(a, pretty),
        Command::Oracle(OracleCmd::SqrtMoments(a)) => oracle_sqrt(a, pretty),
        Command::Oracle(OracleCmd::BvnGrid(a)) => oracle_bvn(a, pretty),
        Command::Draft(DraftCmd::Run(a)) => draft_run(a, pretty),
        Command::Simulate(a) => simulate(a, pretty),
        Command::Table(TableCmd::MaxStats) => table_max_stats(pretty),
        Command::ScenarioCount(a) => scenario(a, pretty),
        Command::Pool(PoolCmd::Synth(a)) => pool_synth(a, pretty),
    }
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))
}

/// JSON unless `--pretty`, in which case `text` renders a table.
fn render<T: Serialize>(value: &T, pretty: bool, text: impl FnOnce() -> String) -> CliResult<String> {
    if pretty {
        Ok(text().trim_end().to_string())
    } else {
        to_json(value)
    }
}

fn read_input(path: &str) -> CliResult<String> {
    let mut buf = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| invalid(format!("reading stdin: {e}")))?;
    } else {
        buf = std::fs::read_to_string(path).map_err(|e| invalid(format!("{path}: {e}")))?;
    }
    Ok(buf)
}

fn read_state(path: &str) -> CliResult<(MatchupMatrix, LeagueShape)> {
    let input: ObjectiveInput =
        serde_json::from_str(&read_input(path)?).map_err(|e| invalid(format!("{path}: {e}")))?;
    let shape = input.shape()?;
    Ok((input.mu, shape))
}

/// Symmetric matrix with unit diagonal and off-diagonal entries uniform in
/// `[-rho_max, rho_max]`, moved to the nearest valid correlation matrix.
fn random_rho(rng: &mut SeededRng, dim: usize, rho_max: f64) -> CliResult<CorrelationMatrix> {
    let mut rows = vec![vec![0.0; dim]; dim];
    for a in 0..dim {
        rows[a][a] = 1.0;
        for b in 0..a {
            let r = if rho_max > 0.0 {
                rng.random_range(-rho_max..=rho_max)
            } else {
                0.0
            };
            rows[a][b] = r;
            rows[b][a] = r;
        }
    }
    Ok(nearest_psd(&rows)?)
}

fn random_mu(
    rng: &mut SeededRng,
    categories: usize,
    opponents: usize,
    mu_max: f64,
) -> CliResult<MatchupMatrix> {
    let mu = (0..categories * opponents)
        .map(|_| {
            if mu_max > 0.0 {
                rng.random_range(-mu_max..=mu_max)
            } else {
                0.0
            }
        })
        .collect();
    Ok(MatchupMatrix::from_vec(categories, opponents, mu)?)
}

fn check_league(l: &RandomLeagueArgs) -> CliResult<()> {
    if l.categories == 0 || l.opponents == 0 {
        return Err(invalid("categories and opponents must be positive"));
    }
    if !(0.0..1.0).contains(&l.rho_max) {
        return Err(invalid("--rho-max must be in [0, 1)"));
    }
    Ok(())
}

fn check_mu_max(mu_max: f64) -> CliResult<()> {
    if !(mu_max >= 0.0) || !mu_max.is_finite() {
        return Err(invalid("--mu-max must be a finite non-negative number"));
    }
    Ok(())
}

fn objective_eval(a: &EvalArgs, pretty: bool) -> CliResult<String> {
    let (state, shape) = match &a.state {
        Some(path) => read_state(path)?,
        None => {
            if a.categories == 0 || a.opponents == 0 {
                return Err(invalid("categories and opponents must be positive"));
            }
            (
                MatchupMatrix::zeros(a.categories, a.opponents),
                LeagueShape::symmetric(a.categories, a.opponents)?,
            )
        }
    };
    let b = roto_core::objective::evaluate(&state, &shape)?;
    render(&b, pretty, || {
        let mut s = String::new();
        for (k, v) in [
            ("mu_t", b.mu_t),
            ("sigma2_t", b.sigma2_t),
            ("e_sigma2_m", b.e_sigma2_m),
            ("mu_l", b.mu_l),
            ("sigma2_l", b.sigma2_l),
            ("mu_d", b.mu_d),
            ("sigma2_d", b.sigma2_d),
            ("v", b.v),
        ] {
            let _ = writeln!(s, "{k:<12} {v:>14.9}");
        }
        s
    })
}

fn gradient_check(a: &GradientArgs, pretty: bool) -> CliResult<String> {
    if !(a.step > 0.0) {
        return Err(invalid("--step must be positive"));
    }
    let states: Vec<(MatchupMatrix, LeagueShape)> = match &a.state {
        Some(path) => vec![read_state(path)?],
        None => {
            check_league(&a.random_league)?;
            check_mu_max(a.mu_max)?;
            if a.random == 0 {
                return Err(invalid("--random must be positive"));
            }
            let l = &a.random_league;
            let root = SeededRng::new(a.seed, 0);
            (0..a.random as u64)
                .map(|i| {
                    let mut rng = root.derive(i);
                    let rho = random_rho(&mut rng, l.categories, l.rho_max)?;
                    let sigma_c = (0..l.categories).map(|_| rng.random_range(0.0..1.0)).collect();
                    let mu = random_mu(&mut rng, l.categories, l.opponents, a.mu_max)?;
                    Ok((mu, LeagueShape::new(rho, sigma_c, l.opponents)?))
                })
                .collect::<CliResult<_>>()?
        }
    };
    let reports = states
        .par_iter()
        .map(|(mu, shape)| gradient_check_with_step(mu, shape, a.tol, a.step))
        .collect::<Result<Vec<_>, _>>()?;
    let (worst_state, worst) = reports
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.max_relative_error.total_cmp(&y.1.max_relative_error))
        .expect("at least one state");
    let failures = reports.iter().filter(|r| !r.pass).count();
    let out = json!({
        "states": reports.len(),
        "tolerance": a.tol,
        "step": a.step,
        "max_relative_error": worst.max_relative_error,
        "worst_state": worst_state,
        "worst_entry": worst.worst_entry,
        "failures": failures,
        "pass": failures == 0,
    });
    render(&out, pretty, || {
        format!(
            "states {}  max relative error {:.3e} (state {worst_state}, entry {:?})  tolerance {:.1e}  {}",
            reports.len(),
            worst.max_relative_error,
            worst.worst_entry,
            a.tol,
            if failures == 0 { "PASS" } else { "FAIL" }
        )
    })
}

#[derive(Serialize)]
struct CompareRow {
    config: usize,
    analytic_v: f64,
    mc_p_win: f64,
    mc_tie_share: f64,
    /// Win probability with ties split: `p_win + tie_share`.
    mc_value: f64,
    mc_ci_halfwidth: f64,
}

fn compare_one(
    mu: &MatchupMatrix,
    shape: &LeagueShape,
    draws: u64,
    rng: &SeededRng,
    config: usize,
) -> CliResult<CompareRow> {
    let v = roto_core::objective::evaluate(mu, shape)?.v;
    let est = mc_win_probability(&team_means_from_matchups(mu), shape.rho(), draws, rng)?;
    Ok(CompareRow {
        config,
        analytic_v: v,
        mc_p_win: est.p_win,
        mc_tie_share: est.tie_share,
        mc_value: est.p_win + est.tie_share,
        mc_ci_halfwidth: est.ci_halfwidth,
    })
}

/// Opponent spread implied by a state: `sqrt(2)` times the population
/// standard deviation of each category's row, matching how the draft engine
/// measures the spread of opponents' normalized totals.
fn implied_sigma_c(mu: &MatchupMatrix) -> Vec<f64> {
    (0..mu.categories())
        .map(|c| {
            let row = mu.row(c);
            let n = row.len() as f64;
            let mean = row.iter().sum::<f64>() / n;
            (2.0 * row.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
        })
        .collect()
}

fn oracle_compare(a: &CompareArgs, pretty: bool) -> CliResult<String> {
    let l = &a.random_league;
    check_league(l)?;
    check_mu_max(a.mu_max)?;
    if a.draws == 0 {
        return Err(invalid("--draws must be positive"));
    }
    let symmetric_shape = LeagueShape::symmetric(l.categories, l.opponents)?;
    let sym = compare_one(
        &MatchupMatrix::zeros(l.categories, l.opponents),
        &symmetric_shape,
        a.draws,
        &SeededRng::new(a.seed, 0),
        0,
    )?;
    let truth = 1.0 / (l.opponents as f64 + 1.0);

    let configs = SeededRng::new(a.seed, 1);
    let draws_root = SeededRng::new(a.seed, 2);
    let mut sweep = Vec::with_capacity(a.configs);
    for i in 0..a.configs {
        let mut rng = configs.derive(i as u64);
        let rho = random_rho(&mut rng, l.categories, l.rho_max)?;
        let mut mu = random_mu(&mut rng, l.categories, l.opponents, a.mu_max)?;
        if a.focal_shift > 0.0 {
            let shift = rng.random_range(-a.focal_shift..=a.focal_shift);
            mu.as_mut_slice().iter_mut().for_each(|x| *x += shift);
        }
        let shape = LeagueShape::new(rho, implied_sigma_c(&mu), l.opponents)?;
        sweep.push(compare_one(
            &mu,
            &shape,
            a.draws,
            &draws_root.derive(i as u64),
            i,
        )?);
    }
    let analytic: Vec<f64> = sweep.iter().map(|r| r.analytic_v).collect();
    let mc: Vec<f64> = sweep.iter().map(|r| r.mc_value).collect();
    let rank_correlation = if sweep.len() >= 2 {
        Some(spearman(&analytic, &mc))
    } else {
        None
    };

    let out = json!({
        "draws": a.draws,
        "mu_max": a.mu_max,
        "focal_shift": a.focal_shift,
        "symmetric": {
            "analytic_v": sym.analytic_v,
            "mc_p_win": sym.mc_p_win,
            "mc_tie_share": sym.mc_tie_share,
            "mc_value": sym.mc_value,
            "mc_ci_halfwidth": sym.mc_ci_halfwidth,
            "truth": truth,
            "analytic_abs_error": (sym.analytic_v - truth).abs(),
        },
        "sweep": sweep,
        "spearman": rank_correlation,
    });
    render(&out, pretty, || {
        let mut s = format!(
            "symmetric  analytic {:.6}  mc {:.6} ± {:.6}  truth {:.6}\n\n{:>6} {:>12} {:>12}\n",
            sym.analytic_v, sym.mc_value, sym.mc_ci_halfwidth, truth, "config", "analytic", "mc"
        );
        for r in &sweep {
            let _ = writeln!(s, "{:>6} {:>12.6} {:>12.6}", r.config, r.analytic_v, r.mc_value);
        }
        if let Some(r) = rank_correlation {
            let _ = writeln!(s, "\nspearman {r:.4}");
        }
        s
    })
}

fn oracle_opponent_variance(a: &OpponentVarianceArgs, pretty: bool) -> CliResult<String> {
    let l = &a.random_league;
    check_league(l)?;
    if !(a.sigma_c >= 0.0) {
        return Err(invalid("--sigma-c must be non-negative"));
    }
    let mut rng = SeededRng::new(a.seed, 0);
    let rho = random_rho(&mut rng, l.categories, l.rho_max)?;
    let shape = LeagueShape::new(rho, vec![a.sigma_c; l.categories], l.opponents)?;
    let analytic = opponent_variance(&shape);
    let (_, sigma2_t) = team_moments(&MatchupMatrix::zeros(l.categories, l.opponents), &shape)?;
    let mc = if a.inner > 0 {
        Some(mc_opponent_variance(
            &shape,
            a.scenarios,
            a.inner,
            &SeededRng::new(a.seed, 1),
        )?)
    } else {
        None
    };
    let out = json!({
        "categories": l.categories,
        "opponents": l.opponents,
        "sigma_c": a.sigma_c,
        "rho": shape.rho().rows(),
        "opponent_variance": analytic,
        "sigma2_t_at_zero": sigma2_t,
        "identity_error": (analytic - sigma2_t).abs(),
        "mc": mc,
    });
    render(&out, pretty, || {
        let mut s = format!(
            "opponent variance {analytic:.12}\nsigma2_T at mu=0  {sigma2_t:.12}\ndifference        {:.3e}\n",
            (analytic - sigma2_t).abs()
        );
        if let Some(m) = mc {
            let _ = writeln!(s, "monte carlo       {:.6} ± {:.6}", m.mean, m.ci_halfwidth);
        }
        s
    })
}

fn oracle_sqrt(a: &SqrtArgs, pretty: bool) -> CliResult<String> {
    let m = sqrt_normal_moments(a.mu, a.sigma, a.draws, &SeededRng::new(a.seed, 0))?;
    let approx_mean = a.mu.sqrt();
    let approx_sd = a.sigma / (2.0 * a.mu.sqrt());
    let out = json!({
        "mu": a.mu,
        "sigma": a.sigma,
        "draws": a.draws,
        "mean": m.mean,
        "sd": m.sd,
        "approx_mean": approx_mean,
        "approx_sd": approx_sd,
        "mean_abs_error": (m.mean - approx_mean).abs(),
        "sd_rel_error": (m.sd / approx_sd - 1.0).abs(),
    });
    render(&out, pretty, || {
        format!(
            "sample mean {:.6}  approx {approx_mean:.6}\nsample sd   {:.6}  approx {approx_sd:.6}",
            m.mean, m.sd
        )
    })
}

fn grid(max: f64, step: f64) -> Vec<f64> {
    let n = (max / step).round() as i64;
    (-n..=n).map(|i| i as f64 * step).collect()
}

fn oracle_bvn(a: &BvnArgs, pretty: bool) -> CliResult<String> {
    if !(a.step > 0.0) || !(a.max_abs >= 0.0) || !(0.0..1.0).contains(&a.max_rho) {
        return Err(invalid("need step > 0, max-abs >= 0 and max-rho in [0, 1)"));
    }
    let xs = grid(a.max_abs, a.step);
    let rhos = grid(a.max_rho, a.step);
    let mut points = 0usize;
    let mut worst = (0.0, [0.0; 3]);
    for &x in &xs {
        for &y in &xs {
            for &r in &rhos {
                let e = (bvn_cdf_approx(x, y, r) - bvn_cdf_reference(x, y, r)?).abs();
                points += 1;
                if e > worst.0 {
                    worst = (e, [x, y, r]);
                }
            }
        }
    }
    let origin_rho = 0.1_f64;
    let origin_approx = bvn_cdf_approx(0.0, 0.0, origin_rho);
    let arcsin = 0.25 + origin_rho.asin() / (2.0 * std::f64::consts::PI);
    let out = json!({
        "points": points,
        "max_error": worst.0,
        "worst": {"x": worst.1[0], "y": worst.1[1], "rho": worst.1[2]},
        "origin": {
            "rho": origin_rho,
            "approx": origin_approx,
            "arcsin": arcsin,
            "error": (origin_approx - arcsin).abs(),
        },
    });
    render(&out, pretty, || {
        format!(
            "grid points {points}  max error {:.3e} at (x {}, y {}, rho {})\norigin rho 0.1  approx {origin_approx:.9}  arcsin {arcsin:.9}  error {:.3e}",
            worst.0,
            worst.1[0],
            worst.1[1],
            worst.1[2],
            (origin_approx - arcsin).abs()
        )
    })
}

fn table_max_stats(pretty: bool) -> CliResult<String> {
    let rows: Vec<Value> = MaxOrderStatsTable
        .rows()
        .iter()
        .map(|r| {
            let err = (r.mvar - (r.ex2 - r.mev * r.mev)).abs();
            json!({
                "n": r.n,
                "mev": r.mev,
                "ex2": r.ex2,
                "mvar": r.mvar,
                "consistency_error": err,
                "consistent": err <= TABLE_TOLERANCE,
            })
        })
        .collect();
    let consistent = rows.iter().all(|r| r["consistent"] == true);
    let out = json!({ "tolerance": TABLE_TOLERANCE, "consistent": consistent, "rows": rows });
    render(&out, pretty, || {
        let mut s = format!(
            "{:>3} {:>12} {:>12} {:>12} {:>10}\n",
            "n", "mev", "ex2", "mvar", "error"
        );
        for r in MaxOrderStatsTable.rows() {
            let err = (r.mvar - (r.ex2 - r.mev * r.mev)).abs();
            let _ = writeln!(
                s,
                "{:>3} {:>12.9} {:>12.9} {:>12.9} {:>10.2e}",
                r.n, r.mev, r.ex2, r.mvar, err
            );
        }
        s
    })
}

fn scenario(a: &ScenarioArgs, pretty: bool) -> CliResult<String> {
    let value = scenario_count(a.teams, a.categories)?.to_string();
    let digits = value.len();
    let out = json!({ "teams": a.teams, "categories": a.categories, "value": value, "digits": digits });
    render(&out, pretty, || format!("{value}\n({digits} digits)"))
}

fn parse_taus(schema: &CategorySchema, overrides: &[String]) -> CliResult<Vec<f64>> {
    let mut tau = default_taus(schema)?;
    for o in overrides {
        let (name, value) = o
            .split_once('=')
            .ok_or_else(|| invalid(format!("--tau expects NAME=VALUE, got {o:?}")))?;
        let c = schema
            .index_of(name.trim())
            .ok_or_else(|| invalid(format!("unknown category {name:?} in --tau")))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| invalid(format!("bad --tau value {value:?}")))?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(invalid(format!("--tau {name} must be positive")));
        }
        tau[c] = v;
    }
    Ok(tau)
}

fn load_pool(path: &str, schema: &CategorySchema) -> CliResult<Vec<PlayerProjection>> {
    if !Path::new(path).is_file() {
        return Err(invalid(format!("{path}: no such file")));
    }
    Ok(load_projections(Path::new(path), schema)?)
}

fn synthetic_config(p: &PoolArgs) -> SyntheticPoolConfig {
    SyntheticPoolConfig {
        size: p.synthetic_size,
        low_ft_share: p.low_ft_share,
        ..SyntheticPoolConfig::default()
    }
}

fn h_params(h: &HArgs) -> HScoreParams {
    HScoreParams {
        width: h.width,
        steps: h.steps,
        budget_scale: h.budget_scale,
        ..HScoreParams::default()
    }
}

fn draft_run(a: &DraftArgs, pretty: bool) -> CliResult<String> {
    let schema = CategorySchema::nba_nine();
    let l = &a.league;
    let config = DraftConfig::new(l.teams, l.roster)?;
    let tau = parse_taus(&schema, &l.tau)?;
    let pool = match &a.pool.projections {
        Some(path) => load_pool(path, &schema)?,
        None => synthetic_pool(&synthetic_config(&a.pool), &mut SeededRng::new(a.seed, 0))?,
    };
    let basis = ScoringBasis::from_tau(&schema, &tau, l.roster, l.chi)?;
    let ctx = DraftContext::new(schema, pool, basis, config)?;
    let params = h_params(&a.h);
    params.validate()?;
    let mut agents = vec![Agent::GScore; l.teams];
    for &s in &a.h_seats {
        if s >= l.teams {
            return Err(invalid(format!(
                "--h-seat {s} is out of range for {} teams",
                l.teams
            )));
        }
        agents[s] = Agent::HScore(params.clone());
    }
    let draft = run_draft(&agents, &ctx)?;
    let pool = ctx.pool();
    let picks: Vec<Value> = draft
        .picks()
        .iter()
        .map(|p| {
            json!({
                "number": p.number,
                "seat": p.seat,
                "player_id": pool[p.player].id,
                "player_name": pool[p.player].name,
            })
        })
        .collect();
    let rosters: Vec<Vec<&str>> = draft
        .rosters()
        .iter()
        .map(|r| r.iter().map(|&i| pool[i].id.as_str()).collect())
        .collect();
    let agent_names: Vec<&str> = agents
        .iter()
        .map(|a| match a {
            Agent::GScore => "g_score",
            Agent::HScore(_) => "h_score",
        })
        .collect();
    let out = json!({ "agents": agent_names, "picks": picks, "rosters": rosters });
    render(&out, pretty, || {
        let mut s = String::new();
        for (seat, r) in draft.rosters().iter().enumerate() {
            let names: Vec<&str> = r.iter().map(|&i| pool[i].name.as_str()).collect();
            let _ = writeln!(s, "seat {seat:>2} ({}): {}", agent_names[seat], names.join(", "));
        }
        s
    })
}

fn simulate(a: &SimulateArgs, pretty: bool) -> CliResult<String> {
    let schema = CategorySchema::nba_nine();
    let l = &a.league;
    let tau = parse_taus(&schema, &l.tau)?;
    let pool = match &a.pool.projections {
        Some(path) => {
            let label = Path::new(path)
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.clone());
            PoolSource::Provided {
                label,
                players: load_pool(path, &schema)?,
            }
        }
        None => PoolSource::Synthetic(synthetic_config(&a.pool)),
    };
    let layout = match a.layout {
        LayoutArg::AllG => Layout::AllG,
        LayoutArg::RotatingH => Layout::RotatingH {
            params: h_params(&a.h),
        },
    };
    let config = ExperimentConfig {
        categories: schema,
        teams: l.teams,
        roster_size: l.roster,
        chi: l.chi,
        tau,
        batches: a.batches,
        seasons_per_draft: a.seasons_per_draft,
        punt_threshold: a.punt_threshold,
        layout,
        pool,
    };
    config.validate()?;
    let store = RunStore::open(PathBuf::from(&a.store))?;
    let report = run_experiment(&config, a.seed)?;
    let run_id = store.write_report(&report, a.run_id.as_deref())?;

    let baseline = 1.0 / l.teams as f64;
    let mut punts = serde_json::Map::new();
    for (c, name) in report.categories.iter().enumerate() {
        punts.insert(name.clone(), json!(punt_rate(&report, a.punt_threshold, Some(c))));
    }
    let any = punt_rate(&report, a.punt_threshold, None);
    let focal = report.focal;
    let out = json!({
        "run_id": run_id,
        "run_dir": store.run_dir(&run_id),
        "chi": l.chi,
        "seasons": focal.seasons,
        "baseline": baseline,
        "focal": focal,
        "focal_advantage": focal.rate - baseline,
        "focal_excludes_baseline": focal.excludes(baseline),
        "seat_win_rate": report.seat_win_rate,
        "league_seat_share": report.league_seat_share,
        "punt_threshold": a.punt_threshold,
        "punt_rate": punts,
        "punt_rate_any": any,
        "focal_category_points": report.focal_category_points,
        "field_category_points": report.field_category_points,
        "conservation_violations": report.conservation_violations,
    });
    render(&out, pretty, || {
        let mut s = format!(
            "run {run_id}\nseasons {}  focal win rate {:.4} ± {:.4}  (baseline {baseline:.4})\nconservation violations {}\n\n{:<8} {:>8} {:>8} {:>8}\n",
            focal.seasons,
            focal.rate,
            focal.ci_halfwidth,
            report.conservation_violations,
            "category",
            "focal",
            "field",
            "punts"
        );
        for (c, name) in report.categories.iter().enumerate() {
            let _ = writeln!(
                s,
                "{name:<8} {:>8.3} {:>8.3} {:>8.3}",
                report.focal_category_points[c],
                report.field_category_points[c],
                punt_rate(&report, a.punt_threshold, Some(c))
            );
        }
        s
    })
}

fn pool_synth(a: &SynthArgs, pretty: bool) -> CliResult<String> {
    let schema = CategorySchema::nba_nine();
    let config = SyntheticPoolConfig {
        size: a.size,
        low_ft_share: a.low_ft_share,
        ..SyntheticPoolConfig::default()
    };
    let players = synthetic_pool(&config, &mut SeededRng::new(a.seed, 0))?;
    save_projections(Path::new(&a.out), &schema, &players)?;
    let out = json!({ "path": a.out, "players": players.len() });
    render(&out, pretty, || {
        format!("wrote {} players to {}", players.len(), a.out)
    })
}
