use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use refwatch_core::analytics::AnalyticsError;
use refwatch_core::query::CriteriaError;
use refwatch_core::store::StoreError;
use refwatch_ingest::IngestError;
use serde::Serialize;

/// Body of every non-2xx response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApiError {
    pub status: u16,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status: status.as_u16(),
            code,
            message: message.into(),
        }
    }

    pub fn bad_parameter(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "invalid_parameter", message)
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "not_found", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

impl From<CriteriaError> for ApiError {
    fn from(e: CriteriaError) -> Self {
        if e.is_date_error() {
            ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid_date_range", e.to_string())
        } else {
            ApiError::new(StatusCode::BAD_REQUEST, "invalid_criteria", e.to_string())
        }
    }
}

impl From<AnalyticsError> for ApiError {
    fn from(e: AnalyticsError) -> Self {
        match e {
            AnalyticsError::TooShort { .. } => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "window_too_large", e.to_string())
            }
            AnalyticsError::Alignment { .. } => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "misaligned_buckets", e.to_string())
            }
            AnalyticsError::InvalidParameter(_) => ApiError::bad_parameter(e.to_string()),
        }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        tracing::error!(error = %e, "store failure");
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "storage_error", e.to_string())
    }
}

impl From<IngestError> for ApiError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::BeforeDocApiCoverage { .. } => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "doc_api_date_range", e.to_string())
            }
            IngestError::Invalid(_) => ApiError::bad_parameter(e.to_string()),
            _ => ApiError::new(StatusCode::BAD_GATEWAY, "upstream_error", e.to_string()),
        }
    }
}
