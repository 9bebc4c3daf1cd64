use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use cannibal::engine::decode_record;
use cannibal::service::{router, AppState};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, String) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = req.body(body.map_or(Body::empty(), |b| Body::from(b.to_string()))).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

async fn call_json(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let (s, text) = call(app, method, uri, body).await;
    (s, serde_json::from_str(&text).unwrap_or(Value::Null))
}

async fn create(app: &Router, body: Value) -> Value {
    let (s, v) = call_json(app, "POST", "/v1/games", Some(body)).await;
    assert_eq!(s, StatusCode::CREATED, "{v}");
    v
}

#[tokio::test]
async fn alice_vs_pairing_session() {
    let app = router(AppState::in_memory());
    let v = create(&app, json!({"animal": "O 4 6 1", "human_side": "alice", "engine": "bob:pairing", "seed": 1})).await;
    let id = v["session_id"].as_str().unwrap().to_owned();
    assert_eq!(v["to_move"], "alice");
    assert_eq!(v["cells"].as_array().unwrap().len(), 0);
    assert_eq!(v["partition"]["block_w"], 5);

    let (s, v) = call_json(&app, "POST", &format!("/v1/games/{id}/moves"), Some(json!({"move": "A 2 2"}))).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    let reply = v["last_engine_move"].as_str().unwrap();
    assert!(reply.starts_with("B "));
    assert_eq!(v["to_move"], "alice");
    assert_eq!(v["ply"], 2);
    assert_eq!(v["delta"].as_array().unwrap().len(), 1 + v["animal_cells"].as_array().unwrap().len());
    // Bob answers inside the block of Alice's cell.
    let copy = &v["copies"][0];
    assert!(copy["dx"].as_i64().unwrap() >= 0 && copy["dy"].as_i64().unwrap() >= 0);

    let (s, v) = call_json(&app, "POST", &format!("/v1/games/{id}/moves"), Some(json!({"move": "A 2 2"}))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"], "CellOccupied");

    let (s, v) = call_json(&app, "POST", &format!("/v1/games/{id}/moves"), Some(json!({"move": "B 0 9 9"}))).await;
    assert_eq!(s, StatusCode::CONFLICT, "{v}");

    let (s, text) = call(&app, "GET", &format!("/v1/games/{id}/record"), None).await;
    assert_eq!(s, StatusCode::OK);
    let replayed = decode_record(&text).unwrap();
    assert_eq!(replayed.ply(), 2);

    let (s, v) = call_json(&app, "GET", &format!("/v1/games/{id}/hint"), None).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert!(v["move"].as_str().unwrap().starts_with("A "));
}

#[tokio::test]
async fn unsupported_pairing_is_400() {
    let app = router(AppState::in_memory());
    let (s, v) = call_json(
        &app,
        "POST",
        "/v1/games",
        Some(json!({"animal": "U 2 4 1", "human_side": "alice", "engine": "bob:pairing"})),
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"], "UnsupportedAnimal");
    assert!(v["message"].as_str().unwrap().contains("(2,4)"));

    for bad in [
        json!({"animal": "Q 1", "human_side": "alice", "engine": "bob:pairing"}),
        json!({"animal": "R 2 2", "human_side": "alice", "engine": "bob:nope"}),
        json!({"animal": "R 2 2", "human_side": "alice", "engine": "alice:greedy"}),
        json!({"animal": "R 2 2", "board": "9x9", "human_side": "alice", "engine": "bob:solver"}),
        json!({"animal": "R 3 3", "board": "2x2", "human_side": "alice", "engine": "bob:random"}),
    ] {
        let (s, _) = call_json(&app, "POST", "/v1/games", Some(bad.clone())).await;
        assert_eq!(s, StatusCode::BAD_REQUEST, "{bad}");
    }
}

#[tokio::test]
async fn human_bob_vs_fast_square_until_alice_wins() {
    let app = router(AppState::in_memory());
    let v = create(&app, json!({"animal": "R 3 3", "human_side": "bob", "engine": "alice:fast-square", "seed": 4})).await;
    let id = v["session_id"].as_str().unwrap().to_owned();
    assert_eq!(v["last_engine_move"], "A 0 0");
    assert_eq!(v["to_move"], "bob");

    let (s, v) = call_json(&app, "POST", &format!("/v1/games/{id}/moves"), Some(json!({"move": "B 0 -2 -2"}))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"], "OverlapsOccupied");

    // Bob keeps far away; the hint endpoint supplies his moves.
    let mut last = v;
    for k in 0..20 {
        let (s, hint) = call_json(&app, "GET", &format!("/v1/games/{id}/hint"), None).await;
        if s == StatusCode::CONFLICT {
            break;
        }
        assert_eq!(s, StatusCode::OK, "{hint}");
        let mv = if k % 2 == 0 { format!("B 0 {} 40", 10 * k) } else { hint["move"].as_str().unwrap().to_owned() };
        let (s, v) = call_json(&app, "POST", &format!("/v1/games/{id}/moves"), Some(json!({"move": mv}))).await;
        assert_eq!(s, StatusCode::OK, "{v}");
        last = v;
        if last["status"] != "ongoing" {
            break;
        }
    }
    assert_eq!(last["status"], "alice_won");
    assert!(last["alice_move_count"].as_u64().unwrap() <= 12);
    let (s, v) = call_json(&app, "POST", &format!("/v1/games/{id}/moves"), Some(json!({"move": "B 0 99 99"}))).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["error"], "GameOver");
    let (s, v) = call_json(&app, "GET", &format!("/v1/games/{id}"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["winner"], "alice");
}

#[tokio::test]
async fn unknown_session_is_404() {
    let app = router(AppState::in_memory());
    for uri in ["/v1/games/nope", "/v1/games/nope/record", "/v1/games/nope/hint"] {
        let (s, _) = call(&app, "GET", uri, None).await;
        assert_eq!(s, StatusCode::NOT_FOUND, "{uri}");
    }
    let (s, _) = call(&app, "POST", "/v1/games/nope/moves", Some(json!({"move": "A 0 0"}))).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn stale_expected_ply_is_409() {
    let app = router(AppState::in_memory());
    let v = create(&app, json!({"animal": "L 2", "human_side": "alice", "engine": "bob:pairing"})).await;
    let id = v["session_id"].as_str().unwrap().to_owned();
    let uri = format!("/v1/games/{id}/moves");
    let (a, b) = tokio::join!(
        call_json(&app, "POST", &uri, Some(json!({"move": "A 0 0", "expected_ply": 0}))),
        call_json(&app, "POST", &uri, Some(json!({"move": "A 5 5", "expected_ply": 0}))),
    );
    let mut codes = [a.0, b.0];
    codes.sort();
    assert_eq!(codes, [StatusCode::OK, StatusCode::CONFLICT]);
    let (_, v) = call_json(&app, "GET", &format!("/v1/games/{id}"), None).await;
    assert_eq!(v["ply"], 2);
}

#[tokio::test]
async fn solver_engine_on_tiny_board() {
    let app = router(AppState::in_memory());
    let v = create(&app, json!({"animal": "R 1 2", "board": "2x2", "human_side": "bob", "engine": "alice:solver"})).await;
    assert_eq!(v["ply"], 1);
    assert_eq!(v["board"], "2x2");
}

#[tokio::test]
async fn sessions_survive_restart() {
    let dir = tempfile::tempdir().unwrap();
    let app = router(AppState::with_records_dir(dir.path()).unwrap());
    let v = create(&app, json!({"animal": "O 4 6 1", "human_side": "alice", "engine": "bob:pairing", "seed": 3})).await;
    let id = v["session_id"].as_str().unwrap().to_owned();
    let (_, before) = call_json(&app, "POST", &format!("/v1/games/{id}/moves"), Some(json!({"move": "A 7 1"}))).await;

    let state = AppState::with_records_dir(dir.path()).unwrap();
    assert_eq!(state.session_count(), 1);
    let app = router(state);
    let (s, after) = call_json(&app, "GET", &format!("/v1/games/{id}"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(after["cells"], before["cells"]);
    let (s, _) = call_json(&app, "POST", &format!("/v1/games/{id}/moves"), Some(json!({"move": "A 30 30"}))).await;
    assert_eq!(s, StatusCode::OK);
}
