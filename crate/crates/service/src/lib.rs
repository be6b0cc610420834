//! Read-only JSON API over a store: criteria queries, chart aggregates,
//! event lookups, ingest status and CAMEO tables.
//!
//! Every aggregate endpoint takes the criteria query-string keys (`criteria`,
//! `from`, `to`, `theme_mode`, ...) plus its own parameters, and returns the
//! corresponding library value serialized as JSON.

mod error;
mod params;
mod routes;

use std::path::PathBuf;
use std::sync::Arc;

use axum::http::{HeaderValue, Method};
use axum::Router;
use refwatch_core::cameo::CameoTables;
use refwatch_core::store::Store;
use refwatch_ingest::DocApiClient;
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::services::{ServeDir, ServeFile};

pub use error::ApiError;
pub use routes::{CodeDescription, EventPage, DEFAULT_PAGE_SIZE, MAX_PAGE_SIZE};

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<Store>,
    pub cameo: &'static CameoTables,
    /// Backs `/api/volume`; absent means the endpoint answers 503.
    pub doc_api: Option<Arc<DocApiClient>>,
}

impl AppState {
    pub fn new(store: Arc<Store>) -> Self {
        AppState {
            store,
            cameo: CameoTables::bundled(),
            doc_api: None,
        }
    }

    pub fn with_doc_api(mut self, client: DocApiClient) -> Self {
        self.doc_api = Some(Arc::new(client));
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// Allowed CORS origins, comma-separated; `*` allows any, empty
    /// disables CORS headers.
    pub cors_origin: String,
    /// Directory with a built dashboard, served at `/`.
    pub static_dir: Option<PathBuf>,
}

fn cors(origins: &str) -> Option<CorsLayer> {
    let origins = origins.trim();
    if origins.is_empty() {
        return None;
    }
    let allow = if origins == "*" {
        AllowOrigin::any()
    } else {
        let list: Vec<HeaderValue> = origins
            .split(',')
            .filter_map(|o| HeaderValue::from_str(o.trim()).ok())
            .collect();
        AllowOrigin::list(list)
    };
    Some(CorsLayer::new().allow_origin(allow).allow_methods([Method::GET]))
}

pub fn router(state: AppState, config: &ServiceConfig) -> Router {
    let mut app = Router::new().nest("/api", routes::api().with_state(state));
    if let Some(dir) = &config.static_dir {
        let index = dir.join("index.html");
        app = app.fallback_service(ServeDir::new(dir).fallback(ServeFile::new(index)));
    }
    if let Some(layer) = cors(&config.cors_origin) {
        app = app.layer(layer);
    }
    app
}

/// Serve `app` on `listener` until `shutdown` resolves.
pub async fn serve<F>(listener: tokio::net::TcpListener, app: Router, shutdown: F) -> std::io::Result<()>
where
    F: std::future::Future<Output = ()> + Send + 'static,
{
    axum::serve(listener, app).with_graceful_shutdown(shutdown).await
}
