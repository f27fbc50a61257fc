use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

#[derive(Debug)]
pub enum ServiceError {
    NotFound(String),
    /// The client's expected version is stale.
    Conflict {
        expected: u64,
        current: u64,
    },
    Validation(String),
    Internal(String),
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    current_version: Option<u64>,
}

impl ServiceError {
    pub fn status(&self) -> StatusCode {
        match self {
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::Conflict { .. } => StatusCode::CONFLICT,
            ServiceError::Validation(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl std::fmt::Display for ServiceError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ServiceError::NotFound(m) | ServiceError::Validation(m) | ServiceError::Internal(m) => {
                f.write_str(m)
            }
            ServiceError::Conflict { expected, current } => {
                write!(f, "expected version {expected}, league is at version {current}")
            }
        }
    }
}

impl From<roto_core::Error> for ServiceError {
    fn from(e: roto_core::Error) -> Self {
        if e.is_validation() {
            ServiceError::Validation(e.to_string())
        } else {
            ServiceError::Internal(e.to_string())
        }
    }
}

impl From<JsonRejection> for ServiceError {
    fn from(e: JsonRejection) -> Self {
        ServiceError::Validation(e.body_text())
    }
}

impl From<QueryRejection> for ServiceError {
    fn from(e: QueryRejection) -> Self {
        ServiceError::Validation(e.body_text())
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let (code, current_version) = match &self {
            ServiceError::NotFound(_) => ("not_found", None),
            ServiceError::Conflict { current, .. } => ("version_conflict", Some(*current)),
            ServiceError::Validation(_) => ("invalid_request", None),
            ServiceError::Internal(_) => ("internal", None),
        };
        if let ServiceError::Internal(m) = &self {
            tracing::error!("{m}");
        }
        let body = ErrorBody {
            error: code,
            message: self.to_string(),
            current_version,
        };
        (self.status(), Json(body)).into_response()
    }
}
