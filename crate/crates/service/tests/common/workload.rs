//! Random API traffic for crash-recovery tests.

use rand::rngs::StdRng;
use rand::Rng;
use serde_json::{json, Value};

use super::App;

const SC_GOALS: [&str; 5] = [
    "p --> p",
    "(p --> q) \\/ (p /\\ ~q)",
    "(exists x. P(x) --> forall y. P(y))",
    "p \\/ q --> p",
    "(forall x. P(x) /\\ Q(x)) --> forall x. P(x)",
];
const ND_GOALS: [&str; 3] = ["p --> p", "(p /\\ q) --> (q /\\ p)", "(forall x. P(x)) --> exists x. P(x)"];
pub const ASSIGNMENTS: [&str; 3] = ["hw1", "hw2", "hw3"];
const JUNK_RULES: [&str; 4] = ["Basic", "DeltaUni const: ''c''", "GammaExi term: Fun ''a'' []", "ExiI term: Var 0"];

/// Issues `n` random requests, mutating and read-only, and returns how many
/// succeeded.
pub async fn random_calls(app: &App, rng: &mut StdRng, n: usize) -> usize {
    let mut ok = 0;
    for _ in 0..n {
        let sessions = app.get("/sessions").await.data().as_array().unwrap().clone();
        let pick = |rng: &mut StdRng| -> Option<Value> {
            (!sessions.is_empty()).then(|| sessions[rng.gen_range(0..sessions.len())].clone())
        };
        let r = match rng.gen_range(0..12) {
            0 | 1 => {
                let (system, goal) =
                    if rng.gen_bool(0.6) { ("sc", SC_GOALS[rng.gen_range(0..SC_GOALS.len())]) } else { ("nd", ND_GOALS[rng.gen_range(0..ND_GOALS.len())]) };
                app.post("/sessions", json!({ "system": system, "goal": goal })).await
            }
            2..=5 => match pick(rng) {
                Some(s) => {
                    let id = s["id"].as_str().unwrap();
                    let mut revision = s["revision"].as_u64().unwrap();
                    if rng.gen_bool(0.1) {
                        revision += 1;
                    }
                    let open = app.get(&format!("/sessions/{id}")).await.data()["open"].as_u64().unwrap();
                    let goal = if open == 0 { 0 } else { rng.gen_range(0..open) };
                    let offers = app.get(&format!("/sessions/{id}/applicable?goal={goal}")).await;
                    let suggestions: Vec<String> = offers.body["data"]["rules"]
                        .as_array()
                        .map(|a| a.iter().filter_map(|o| o["suggestion"].as_str().map(String::from)).collect())
                        .unwrap_or_default();
                    let rule = if suggestions.is_empty() || rng.gen_bool(0.15) {
                        JUNK_RULES[rng.gen_range(0..JUNK_RULES.len())].to_string()
                    } else {
                        suggestions[rng.gen_range(0..suggestions.len())].clone()
                    };
                    app.post(&format!("/sessions/{id}/apply"), json!({ "revision": revision, "goal": goal, "rule": rule })).await
                }
                None => app.get("/sessions/s1").await,
            },
            6 => match pick(rng) {
                Some(s) => {
                    let id = s["id"].as_str().unwrap();
                    let len = app.get(&format!("/sessions/{id}")).await.data()["history"].as_array().unwrap().len();
                    let index = rng.gen_range(0..=len);
                    app.post(&format!("/sessions/{id}/goto"), json!({ "revision": s["revision"], "index": index })).await
                }
                None => app.get("/sessions/s1/export").await,
            },
            7 | 8 => match pick(rng) {
                Some(s) => {
                    let op = if rng.gen_bool(0.5) { "undo" } else { "redo" };
                    app.post(&format!("/sessions/{}/{op}", s["id"].as_str().unwrap()), json!({ "revision": s["revision"] })).await
                }
                None => app.get("/sessions").await,
            },
            9 => {
                let id = ASSIGNMENTS[rng.gen_range(0..ASSIGNMENTS.len())];
                app.post("/assignments", json!({ "id": id, "system": "sc", "goal": SC_GOALS[rng.gen_range(0..2)] })).await
            }
            10 => match pick(rng) {
                Some(s) => {
                    let a = ASSIGNMENTS[rng.gen_range(0..ASSIGNMENTS.len())];
                    let student = ["ana", "bo", "cy"][rng.gen_range(0..3)];
                    let ts: u64 = rng.gen_range(0..1_000_000);
                    app.post(&format!("/assignments/{a}/submit"), json!({ "student": student, "session": s["id"], "timestamp": ts })).await
                }
                None => app.get("/assignments/hw1/progress").await,
            },
            _ => app.post("/prove", json!({ "formula": SC_GOALS[rng.gen_range(0..SC_GOALS.len())] })).await,
        };
        ok += usize::from(r.status == 200);
    }
    ok
}

/// Every state-reading response, keyed by path, as raw bytes.
pub async fn observe(app: &App) -> Vec<(String, Vec<u8>)> {
    let mut paths = vec!["/sessions".to_string()];
    let list = app.get("/sessions").await;
    for s in list.data().as_array().unwrap() {
        let id = s["id"].as_str().unwrap();
        for suffix in ["", "/export", "/applicable?goal=0"] {
            paths.push(format!("/sessions/{id}{suffix}"));
        }
    }
    for a in ASSIGNMENTS {
        paths.push(format!("/assignments/{a}/progress"));
    }
    let mut out = Vec::new();
    for p in paths {
        let r = app.get(&p).await;
        out.push((p, r.raw));
    }
    out
}
