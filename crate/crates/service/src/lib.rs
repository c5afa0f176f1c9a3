//! HTTP JSON service over proof sessions, the checkers, the prover and
//! countermodel search.
//!
//! Every response is an envelope `{"ok": true, "data": ...}` or
//! `{"ok": false, "error": {"code", "message", "detail"?}}`. State changes
//! are logged to disk before they are acknowledged and replayed at startup.

mod config;
mod error;
mod http;
mod log;
pub mod ops;
mod openapi;
mod store;

pub use config::{Config, ConfigError};
pub use error::{envelope, ApiError};
pub use http::{router, AppState};
pub use log::{Durable, StoreError};
pub use openapi::{document as openapi_document, envelope_schema};
pub use store::{session_view, Command, Snapshot, Store};

/// Opens the data directory and serves until interrupted. In-flight requests
/// finish before the final snapshot is written.
pub async fn serve(config: Config) -> Result<(), Box<dyn std::error::Error + Send + Sync>> {
    let store = Durable::open(&config.data_dir, config.snapshot_every)?;
    let state = AppState::new(store, config.workers, config.prover_deadline);
    let listener = tokio::net::TcpListener::bind(config.addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state.clone()))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    state.snapshot()?;
    Ok(())
}
