use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use refwatch_ingest::{http_client, DocApiClient, DEFAULT_DOC_API_URL};
use refwatch_service::{router, AppState, ServiceConfig};

use super::open_store;

/// Serve the read-only HTTP API (and optionally a built dashboard).
#[derive(clap::Args)]
pub struct Args {
    #[arg(long, env = "REFWATCH_BIND", default_value = "127.0.0.1:8080")]
    bind: String,
    /// Allowed CORS origins, comma-separated; `*` for any, empty for none.
    #[arg(long, env = "REFWATCH_CORS_ORIGIN", default_value = "*")]
    cors_origin: String,
    /// Directory holding a built dashboard, served at `/`.
    #[arg(long, env = "REFWATCH_STATIC_DIR")]
    static_dir: Option<PathBuf>,
    /// DOC 2.0 API endpoint used by /api/volume; empty disables it.
    #[arg(long, env = "REFWATCH_DOC_API_URL", default_value = DEFAULT_DOC_API_URL)]
    doc_api_url: String,
}

pub fn run(store: &Path, args: Args) -> Result<()> {
    let store = Arc::new(open_store(store)?);
    let mut state = AppState::new(store);
    if !args.doc_api_url.is_empty() {
        state = state.with_doc_api(DocApiClient::new(http_client(), args.doc_api_url.clone()));
    }
    let config = ServiceConfig {
        cors_origin: args.cors_origin,
        static_dir: args.static_dir,
    };
    let app = router(state, &config);
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(&args.bind)
            .await
            .with_context(|| format!("binding {}", args.bind))?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        refwatch_service::serve(listener, app, async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
        Ok(())
    })
}
