use std::net::SocketAddr;
use std::path::PathBuf;
use std::time::Duration;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub addr: SocketAddr,
    pub data_dir: PathBuf,
    /// Upper bound on any prover deadline a request may ask for.
    pub prover_deadline: Duration,
    /// Commands between snapshots; 0 disables periodic snapshots.
    pub snapshot_every: u64,
    /// Concurrent prover and countermodel jobs.
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{var}: {message}")]
pub struct ConfigError {
    pub var: &'static str,
    pub message: String,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            addr: SocketAddr::from(([127, 0, 0, 1], 8080)),
            data_dir: PathBuf::from("secav-data"),
            prover_deadline: Duration::from_secs(10),
            snapshot_every: 256,
            workers: std::thread::available_parallelism().map_or(2, |n| n.get()),
        }
    }
}

impl Config {
    /// Reads `SECAV_ADDR`, `SECAV_DATA_DIR` and `SECAV_PROVER_BUDGET`
    /// (seconds, fractions allowed).
    pub fn from_env() -> Result<Config, ConfigError> {
        Config::from_lookup(|k| std::env::var(k).ok())
    }

    pub fn from_lookup(get: impl Fn(&str) -> Option<String>) -> Result<Config, ConfigError> {
        let mut c = Config::default();
        if let Some(a) = get("SECAV_ADDR") {
            c.addr = a.parse().map_err(|e| ConfigError { var: "SECAV_ADDR", message: format!("{e}") })?;
        }
        if let Some(d) = get("SECAV_DATA_DIR") {
            c.data_dir = PathBuf::from(d);
        }
        if let Some(b) = get("SECAV_PROVER_BUDGET") {
            let secs: f64 = b
                .parse()
                .ok()
                .filter(|s: &f64| s.is_finite() && *s > 0.0)
                .ok_or_else(|| ConfigError { var: "SECAV_PROVER_BUDGET", message: format!("expected positive seconds, got `{b}`") })?;
            c.prover_deadline = Duration::from_secs_f64(secs);
        }
        Ok(c)
    }
}
