use secav_core::script::ScriptError;
use secav_core::syntax::ParseError;
use secav_session::SessionError;
use serde_json::{json, Value};
use thiserror::Error;

/// An error as reported to clients: an HTTP status, a stable code and an
/// optional structured detail.
#[derive(Clone, Debug, PartialEq, Error)]
#[error("{code}: {message}")]
pub struct ApiError {
    pub status: u16,
    pub code: String,
    pub message: String,
    pub detail: Option<Value>,
}

impl ApiError {
    pub fn new(status: u16, code: &str, message: impl Into<String>) -> ApiError {
        ApiError { status, code: code.to_string(), message: message.into(), detail: None }
    }

    pub fn with_detail(mut self, detail: Value) -> ApiError {
        self.detail = Some(detail);
        self
    }

    pub fn bad_request(message: impl Into<String>) -> ApiError {
        ApiError::new(400, "BadRequest", message)
    }

    pub fn not_found(what: &str, id: &str) -> ApiError {
        ApiError::new(404, "NotFound", format!("no {what} `{id}`")).with_detail(json!({ "kind": what, "id": id }))
    }

    pub fn internal(message: impl Into<String>) -> ApiError {
        ApiError::new(500, "Internal", message)
    }

    pub fn to_json(&self) -> Value {
        let mut e = json!({ "code": self.code, "message": self.message });
        if let Some(d) = &self.detail {
            e["detail"] = d.clone();
        }
        e
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> ApiError {
        let status = match &e {
            SessionError::UnknownAssignment(_) => 404,
            SessionError::DuplicateAssignment(_) => 409,
            _ => 400,
        };
        let detail = match &e {
            SessionError::RuleText(s) => Some(json!({ "line": s.line() })),
            SessionError::Parse(p) => Some(json!({ "position": p.position })),
            SessionError::BadIndex { what, index } => Some(json!({ "what": what, "index": index })),
            _ => None,
        };
        ApiError { status, code: e.code().to_string(), message: e.to_string(), detail }
    }
}

impl From<ParseError> for ApiError {
    fn from(e: ParseError) -> ApiError {
        ApiError::new(400, "ParseError", e.to_string()).with_detail(json!({ "position": e.position }))
    }
}

impl From<ScriptError> for ApiError {
    fn from(e: ScriptError) -> ApiError {
        ApiError::new(400, "ParseError", e.to_string()).with_detail(json!({ "line": e.line() }))
    }
}

/// The response body shared by every endpoint.
pub fn envelope(result: &Result<Value, ApiError>) -> Value {
    match result {
        Ok(data) => json!({ "ok": true, "data": data }),
        Err(e) => json!({ "ok": false, "error": e.to_json() }),
    }
}
