#![allow(dead_code)]

pub mod workload;

use std::path::Path;
use std::time::Duration;

use axum::body::Body;
use axum::http::Request;
use axum::Router;
use http_body_util::BodyExt;
use secav_service::{router, AppState, Durable};
use serde_json::Value;
use tower::ServiceExt;

pub struct App {
    router: Router,
}

pub struct Reply {
    pub status: u16,
    pub body: Value,
    pub raw: Vec<u8>,
}

impl Reply {
    pub fn data(&self) -> &Value {
        assert_eq!(self.body["ok"], true, "expected success, got {}", self.body);
        &self.body["data"]
    }

    pub fn code(&self) -> &str {
        self.body["error"]["code"].as_str().unwrap_or_else(|| panic!("expected an error, got {}", self.body))
    }
}

impl App {
    pub fn open(dir: &Path, snapshot_every: u64) -> App {
        let store = Durable::open(dir, snapshot_every).expect("store opens");
        App { router: router(AppState::new(store, 2, Duration::from_secs(10))) }
    }

    pub async fn call(&self, method: &str, path: &str, body: Option<Value>) -> Reply {
        let req = Request::builder().method(method).uri(path).header("content-type", "application/json");
        let req = req.body(body.map_or_else(Body::empty, |b| Body::from(b.to_string()))).unwrap();
        let resp = self.router.clone().oneshot(req).await.unwrap();
        let status = resp.status().as_u16();
        let raw = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
        let body = serde_json::from_slice(&raw).expect("responses are JSON");
        Reply { status, body, raw }
    }

    pub async fn get(&self, path: &str) -> Reply {
        self.call("GET", path, None).await
    }

    pub async fn post(&self, path: &str, body: Value) -> Reply {
        self.call("POST", path, Some(body)).await
    }
}

pub const IMP_P_P: &str = "goal: Imp (Pre ''p'' []) (Pre ''p'' [])
by: AlphaImp
  sequent:
    Imp (Pre ''p'' []) Falsity
    Pre ''p'' []
  by: Ext to: [Pre ''p'' [], Imp (Pre ''p'' []) Falsity]
    sequent:
      Pre ''p'' []
      Imp (Pre ''p'' []) Falsity
    qed: Basic
";
