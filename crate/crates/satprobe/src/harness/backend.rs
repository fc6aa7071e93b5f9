//! Prediction backends: scripted clients and the generic HTTP adapter.
//!
//! A backend maps an evaluation task to raw response text. Scripted clients
//! are pure and deterministic — they drive tests, CI, and the degenerate
//! baselines (always-SAT, scheduled timeouts) that the paired metrics are
//! designed to expose. The HTTP backend speaks a minimal JSON wire format:
//! POST `{"model", "prompt", "parameters"}`, response `{"text": "..."}`;
//! provider-specific schemas are adapted behind that shape. Credentials come
//! from a named environment variable, never from files.

use super::Representation;
use crate::metrics::Label;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::time::Duration;
use thiserror::Error;

/// One unit of backend work: a rendered prompt plus the metadata scripted
/// clients key off (the solver-certified label for the oracle, the task
/// index for scheduled timeouts).
#[derive(Debug, Clone, PartialEq)]
pub struct EvalTask {
    /// Position in the evaluation run's input order.
    pub index: usize,
    pub instance_id: String,
    pub representation: Representation,
    pub true_label: Label,
    pub pair_id: Option<String>,
    pub prompt: String,
}

#[derive(Debug, Error)]
pub enum BackendError {
    /// Connectivity, timeout, or 5xx: worth retrying.
    #[error("transport error: {0}")]
    Transport(String),
    /// The endpoint answered but not in the expected shape: not retried.
    #[error("protocol error: {0}")]
    Protocol(String),
    /// Local misconfiguration (bad limits, missing credentials): not retried.
    #[error("backend configuration error: {0}")]
    Config(String),
}

impl BackendError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, BackendError::Transport(_))
    }
}

/// Connection settings for a live endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendConfig {
    pub endpoint: String,
    /// Model identifier forwarded in the request body and stamped on records.
    pub model: String,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    #[serde(default = "default_max_retries")]
    pub max_retries: u32,
    #[serde(default = "default_concurrency")]
    pub concurrency: usize,
    /// Name of the environment variable holding the bearer token, if any.
    #[serde(default)]
    pub credential_env: Option<String>,
    /// Opaque sampling parameters passed through to the endpoint.
    #[serde(default)]
    pub parameters: serde_json::Value,
}

fn default_timeout_secs() -> u64 {
    60
}

fn default_max_retries() -> u32 {
    2
}

fn default_concurrency() -> usize {
    4
}

impl BackendConfig {
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>) -> Self {
        BackendConfig {
            endpoint: endpoint.into(),
            model: model.into(),
            timeout_secs: default_timeout_secs(),
            max_retries: default_max_retries(),
            concurrency: default_concurrency(),
            credential_env: None,
            parameters: serde_json::Value::Null,
        }
    }

    pub fn validate(&self) -> Result<(), BackendError> {
        if self.timeout_secs == 0 {
            return Err(BackendError::Config("timeout must be positive".into()));
        }
        if self.concurrency == 0 {
            return Err(BackendError::Config("concurrency must be positive".into()));
        }
        Ok(())
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs(self.timeout_secs)
    }
}

/// Maps evaluation tasks to raw response text.
pub trait Backend: Send + Sync {
    /// Identifier stamped into evaluation records.
    fn name(&self) -> String;
    fn respond(&self, task: &EvalTask) -> Result<String, BackendError>;
}

fn affirmative(representation: Representation) -> &'static str {
    match representation {
        Representation::Cnf => "SATISFIABLE",
        _ => "YES",
    }
}

fn negative(representation: Representation) -> &'static str {
    match representation {
        Representation::Cnf => "UNSATISFIABLE",
        _ => "NO",
    }
}

/// Answers with the solver-certified label of every task.
pub struct OracleClient;

impl Backend for OracleClient {
    fn name(&self) -> String {
        "scripted:oracle".into()
    }

    fn respond(&self, task: &EvalTask) -> Result<String, BackendError> {
        let decision = match task.true_label {
            Label::Sat => affirmative(task.representation),
            Label::Unsat => negative(task.representation),
        };
        Ok(json!({ "decision": decision }).to_string())
    }
}

/// The SAT-biased baseline: affirms everything.
pub struct AlwaysSatClient;

impl Backend for AlwaysSatClient {
    fn name(&self) -> String {
        "scripted:always-sat".into()
    }

    fn respond(&self, task: &EvalTask) -> Result<String, BackendError> {
        Ok(json!({ "decision": affirmative(task.representation) }).to_string())
    }
}

/// Denies everything.
pub struct AlwaysUnsatClient;

impl Backend for AlwaysUnsatClient {
    fn name(&self) -> String {
        "scripted:always-unsat".into()
    }

    fn respond(&self, task: &EvalTask) -> Result<String, BackendError> {
        Ok(json!({ "decision": negative(task.representation) }).to_string())
    }
}

/// Wraps a backend and times out on every `period`-th task (by task index),
/// producing an exact timeout share of 1/period on full runs.
pub struct PeriodicTimeoutClient<B> {
    inner: B,
    period: usize,
}

impl<B: Backend> PeriodicTimeoutClient<B> {
    /// Times out tasks whose index is ≡ period−1 (mod period).
    pub fn every(period: usize, inner: B) -> Self {
        assert!(period >= 1);
        PeriodicTimeoutClient { inner, period }
    }

    /// Approximates a timeout `rate` in (0, 1] as the nearest period.
    pub fn from_rate(rate: f64, inner: B) -> Self {
        assert!(rate > 0.0 && rate <= 1.0);
        Self::every((1.0 / rate).round().max(1.0) as usize, inner)
    }
}

impl<B: Backend> Backend for PeriodicTimeoutClient<B> {
    fn name(&self) -> String {
        format!("{}+timeout-every-{}", self.inner.name(), self.period)
    }

    fn respond(&self, task: &EvalTask) -> Result<String, BackendError> {
        if (task.index + 1) % self.period == 0 {
            return Err(BackendError::Transport("scripted timeout".into()));
        }
        self.inner.respond(task)
    }
}

/// Live endpoint speaking the generic JSON wire format.
pub struct HttpBackend {
    config: BackendConfig,
    client: reqwest::blocking::Client,
}

impl HttpBackend {
    pub fn new(config: BackendConfig) -> Result<Self, BackendError> {
        config.validate()?;
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout())
            .build()
            .map_err(|e| BackendError::Config(e.to_string()))?;
        Ok(HttpBackend { config, client })
    }

    fn bearer_token(&self) -> Result<Option<String>, BackendError> {
        match &self.config.credential_env {
            None => Ok(None),
            Some(var) => std::env::var(var).map(Some).map_err(|_| {
                BackendError::Config(format!("credential environment variable {var} is not set"))
            }),
        }
    }
}

impl Backend for HttpBackend {
    fn name(&self) -> String {
        self.config.model.clone()
    }

    fn respond(&self, task: &EvalTask) -> Result<String, BackendError> {
        let body = json!({
            "model": self.config.model,
            "prompt": task.prompt,
            "parameters": self.config.parameters,
        });
        let mut request = self.client.post(&self.config.endpoint).json(&body);
        if let Some(token) = self.bearer_token()? {
            request = request.bearer_auth(token);
        }
        let response = request
            .send()
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        let status = response.status();
        if status.is_server_error() {
            return Err(BackendError::Transport(format!("server error {status}")));
        }
        if !status.is_success() {
            return Err(BackendError::Protocol(format!("unexpected status {status}")));
        }
        let payload: serde_json::Value = response
            .json()
            .map_err(|e| BackendError::Protocol(format!("response body is not JSON: {e}")))?;
        payload
            .get("text")
            .and_then(serde_json::Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| BackendError::Protocol("response JSON lacks a \"text\" field".into()))
    }
}
