use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use roto_core::objective::ObjectiveInput;
use roto_core::projection::{CategorySchema, PlayerProjection};
use roto_core::rng::SeededRng;
use roto_core::season::{synthetic_pool, SyntheticPoolConfig};
use roto_service::{router, AppState, LeagueRecord, LiveDraft};

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(b) => {
            req = req.header("content-type", "application/json");
            Body::from(b.to_string())
        }
        None => Body::empty(),
    };
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, value)
}

fn small_league() -> Value {
    json!({
        "teams": 4,
        "roster_size": 4,
        "chi": 0.5,
        "pool": {"kind": "synthetic", "size": 40, "seed": 3},
        "recommend": {"width": 8, "steps": 30}
    })
}

async fn create(app: &Router, config: Value) -> String {
    let (status, body) = call(app, Method::POST, "/leagues", Some(config)).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    body["id"].as_str().unwrap().to_string()
}

async fn pick(app: &Router, id: &str, version: u64, seat: u64, player: &str) -> (StatusCode, Value) {
    let body = json!({"expected_version": version, "seat": seat, "player_id": player});
    call(app, Method::POST, &format!("/leagues/{id}/picks"), Some(body)).await
}

#[tokio::test]
async fn create_and_fetch() {
    let app = router(AppState::new());
    let (status, body) = call(
        &app,
        Method::POST,
        "/leagues",
        Some(json!({"teams": 12, "roster_size": 13, "pool": {"kind": "synthetic"}})),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(body["version"], 0);
    assert_eq!(body["on_the_clock"], 0);
    assert_eq!(body["available"].as_array().unwrap().len(), 260);
    let id = body["id"].as_str().unwrap().to_string();

    let (status, fetched) = call(&app, Method::GET, &format!("/leagues/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(fetched, body);

    let other = create(&app, small_league()).await;
    assert_ne!(other, id);
}

#[tokio::test]
async fn invalid_configs_are_rejected() {
    let app = router(AppState::new());
    let too_many = json!({"teams": 22, "roster_size": 13, "pool": {"kind": "synthetic", "size": 400}});
    let (status, body) = call(&app, Method::POST, "/leagues", Some(too_many)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"], "invalid_request");

    for bad in [
        json!({"teams": 4, "roster_size": 4, "pool": {"kind": "synthetic", "size": 10}}),
        json!({"teams": 4, "roster_size": 4, "chi": 2.0, "pool": {"kind": "synthetic"}}),
        json!({"teams": 4, "roster_size": 4, "tau": {"xyz": 1.0}, "pool": {"kind": "synthetic"}}),
        json!({"teams": 4, "roster_size": 4, "pool": {"kind": "synthetic"}, "extra": 1}),
        json!({"teams": 4, "roster_size": 4, "pool": {"kind": "csv", "text": "not,a,pool\n"}}),
    ] {
        let (status, _) = call(&app, Method::POST, "/leagues", Some(bad.clone())).await;
        assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{bad}");
    }

    let req = Request::builder()
        .method(Method::POST)
        .uri("/leagues")
        .header("content-type", "application/json")
        .body(Body::from("{not json"))
        .unwrap();
    assert_eq!(
        app.clone().oneshot(req).await.unwrap().status(),
        StatusCode::UNPROCESSABLE_ENTITY
    );
}

#[tokio::test]
async fn unknown_league_is_not_found() {
    let app = router(AppState::new());
    let (status, body) = call(&app, Method::GET, "/leagues/lg-99", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["error"], "not_found");
    let (status, _) = call(&app, Method::GET, "/leagues/lg-99/recommendations", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = pick(&app, "lg-99", 0, 0, "syn0001").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn pick_round_trip_and_conflicts() {
    let app = router(AppState::new());
    let id = create(&app, small_league()).await;
    let (_, board) = call(&app, Method::GET, &format!("/leagues/{id}"), None).await;
    let top = board["available"][0]["player_id"].as_str().unwrap().to_string();
    let second = board["available"][1]["player_id"].as_str().unwrap().to_string();

    let (status, out) = pick(&app, &id, 0, 0, &top).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(out["version"], 1);
    assert_eq!(out["on_the_clock"], 1);
    assert_eq!(out["event"]["kind"], "pick");

    let (_, board) = call(&app, Method::GET, &format!("/leagues/{id}"), None).await;
    assert_eq!(board["version"], 1);
    assert_eq!(board["rosters"][0][0], top.as_str());
    assert_eq!(board["picks"][0]["player_id"], top.as_str());
    assert!(board["available"]
        .as_array()
        .unwrap()
        .iter()
        .all(|p| p["player_id"] != top.as_str()));

    // Stale version.
    let (status, body) = pick(&app, &id, 0, 1, &second).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "version_conflict");
    assert_eq!(body["current_version"], 1);
    // Same player twice.
    let (status, _) = pick(&app, &id, 1, 1, &top).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    // Out of turn.
    let (status, _) = pick(&app, &id, 1, 2, &second).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    // Unknown player.
    let (status, _) = pick(&app, &id, 1, 1, "nobody").await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let (_, board) = call(&app, Method::GET, &format!("/leagues/{id}"), None).await;
    assert_eq!(board["version"], 1, "rejected picks must not change the league");
}

#[tokio::test]
async fn undo_is_a_compensating_event() {
    let app = router(AppState::new());
    let id = create(&app, small_league()).await;
    let (_, board) = call(&app, Method::GET, &format!("/leagues/{id}"), None).await;
    let top = board["available"][0]["player_id"].as_str().unwrap().to_string();
    pick(&app, &id, 0, 0, &top).await;

    let (status, _) = call(
        &app,
        Method::DELETE,
        &format!("/leagues/{id}/picks/last?expected_version=0"),
        None,
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, out) = call(
        &app,
        Method::DELETE,
        &format!("/leagues/{id}/picks/last?expected_version=1"),
        None,
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(out["version"], 2);
    assert_eq!(out["event"]["kind"], "undo");
    assert_eq!(out["event"]["player_id"], top.as_str());

    let (_, after) = call(&app, Method::GET, &format!("/leagues/{id}"), None).await;
    assert_eq!(after["picks"], json!([]));
    assert_eq!(after["available"], board["available"]);
    assert_eq!(after["events"].as_array().unwrap().len(), 2);

    let (status, _) = call(
        &app,
        Method::DELETE,
        &format!("/leagues/{id}/picks/last?expected_version=2"),
        None,
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) = call(&app, Method::DELETE, &format!("/leagues/{id}/picks/last"), None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn recommendations_are_sorted_and_reproducible() {
    let app = router(AppState::new());
    let id = create(&app, small_league()).await;
    let uri = format!("/leagues/{id}/recommendations?seat=0&width=6");
    let (status, recs) = call(&app, Method::GET, &uri, None).await;
    assert_eq!(status, StatusCode::OK, "{recs}");
    let list = recs["recommendations"].as_array().unwrap();
    assert_eq!(list.len(), 6);
    assert_eq!(recs["version"], 0);

    let vs: Vec<f64> = list.iter().map(|r| r["v"].as_f64().unwrap()).collect();
    assert!(vs.windows(2).all(|w| w[0] >= w[1]));
    assert!(vs.iter().all(|v| *v > 0.0 && *v < 1.0));
    let baseline = recs["baseline"]["v"].as_f64().unwrap();
    for r in list {
        let v = r["v"].as_f64().unwrap();
        assert_eq!(r["delta_v"].as_f64().unwrap(), v - baseline);
        let probs = r["category_win_prob"].as_array().unwrap();
        assert_eq!(probs.len(), 9);
        assert!(probs.iter().all(|p| (0.0..=1.0).contains(&p.as_f64().unwrap())));
        // Same path as `roto objective eval --state`.
        let input: ObjectiveInput = serde_json::from_value(r["state"].clone()).unwrap();
        assert_eq!(input.evaluate().unwrap().v, v);
    }

    let (_, again) = call(&app, Method::GET, &uri, None).await;
    assert_eq!(again, recs);
    let (_, board) = call(&app, Method::GET, &format!("/leagues/{id}"), None).await;
    assert_eq!(board["version"], 0, "queries never mutate");

    // Record the top recommendation; it leaves the next list.
    let best = list[0]["player_id"].as_str().unwrap().to_string();
    let (status, _) = pick(&app, &id, 0, 0, &best).await;
    assert_eq!(status, StatusCode::CREATED);
    let (_, next) = call(&app, Method::GET, &format!("/leagues/{id}/recommendations"), None).await;
    assert_eq!(next["seat"], 1);
    assert!(next["recommendations"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["player_id"] != best.as_str()));
}

#[tokio::test]
async fn recommendation_queries_are_validated() {
    let app = router(AppState::new());
    let id = create(&app, small_league()).await;
    for q in ["seat=9", "width=0", "width=1000", "seat=x"] {
        let (status, _) = call(
            &app,
            Method::GET,
            &format!("/leagues/{id}/recommendations?{q}"),
            None,
        )
        .await;
        assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{q}");
    }
}

#[tokio::test]
async fn dominant_player_ranks_first() {
    let schema = CategorySchema::nba_nine();
    let mut players: Vec<PlayerProjection> = synthetic_pool(
        &SyntheticPoolConfig {
            size: 40,
            ..Default::default()
        },
        &mut SeededRng::new(5, 0),
    )
    .unwrap();
    // The weakest player becomes better than everyone in every category.
    let star = players.len() - 1;
    for c in 0..schema.len() {
        let cat = schema.get(c);
        let best = players
            .iter()
            .map(|p| p.stats[c] * cat.direction())
            .fold(f64::NEG_INFINITY, f64::max);
        players[star].stats[c] = match cat.kind {
            roto_core::projection::CategoryKind::Counting if cat.lower_is_better => 0.0,
            roto_core::projection::CategoryKind::Counting => best * 1.5,
            roto_core::projection::CategoryKind::Percentage => 0.95,
        };
        if cat.kind == roto_core::projection::CategoryKind::Percentage {
            players[star].volumes[c] = players.iter().map(|p| p.volumes[c]).fold(0.0, f64::max);
        }
    }
    let star_id = players[star].id.clone();
    let app = router(AppState::new());
    let config = json!({
        "teams": 4, "roster_size": 4,
        "pool": {"kind": "players", "players": players},
        "recommend": {"width": 10, "steps": 30}
    });
    let id = create(&app, config).await;
    let (_, recs) = call(&app, Method::GET, &format!("/leagues/{id}/recommendations"), None).await;
    assert_eq!(recs["recommendations"][0]["player_id"], star_id.as_str());
}

#[tokio::test]
async fn replay_reproduces_state() {
    let state = AppState::new();
    let app = router(state.clone());
    let id = create(&app, small_league()).await;
    let mut version = 0;
    for _ in 0..6 {
        let (_, board) = call(&app, Method::GET, &format!("/leagues/{id}"), None).await;
        let seat = board["on_the_clock"].as_u64().unwrap();
        let player = board["available"][1]["player_id"].as_str().unwrap().to_string();
        let (status, out) = pick(&app, &id, version, seat, &player).await;
        assert_eq!(status, StatusCode::CREATED);
        version = out["version"].as_u64().unwrap();
    }
    call(
        &app,
        Method::DELETE,
        &format!("/leagues/{id}/picks/last?expected_version={version}"),
        None,
    )
    .await;

    let (_, live) = call(&app, Method::GET, &format!("/leagues/{id}"), None).await;
    let record: LeagueRecord = serde_json::from_value(json!({
        "id": id,
        "config": small_league(),
        "events": live["events"],
    }))
    .unwrap();
    let rebuilt = LiveDraft::replay(record).unwrap();
    assert_eq!(serde_json::to_value(rebuilt.view()).unwrap(), live);
}

#[tokio::test]
async fn snapshot_survives_restart() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("leagues.json");
    let app = router(AppState::with_snapshot(path.clone()).unwrap());
    let id = create(&app, small_league()).await;
    let (_, board) = call(&app, Method::GET, &format!("/leagues/{id}"), None).await;
    let top = board["available"][0]["player_id"].as_str().unwrap().to_string();
    pick(&app, &id, 0, 0, &top).await;
    let (_, before) = call(&app, Method::GET, &format!("/leagues/{id}"), None).await;

    let restarted = router(AppState::with_snapshot(path).unwrap());
    let (status, after) = call(&restarted, Method::GET, &format!("/leagues/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(after, before);
    let fresh = create(&restarted, small_league()).await;
    assert_ne!(fresh, id);
}
