use std::path::Path;

use chrono::Utc;
use refwatch_core::formats::{
    parse_events_file, parse_gkg_file, parse_mentions_file, read_maybe_zipped, ParseDiagnostics, TableKind,
};
use refwatch_core::store::{Store, UpsertCounts};
use serde::Serialize;

use crate::{IngestError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileReport {
    pub name: String,
    pub kind: TableKind,
    pub diagnostics: ParseDiagnostics,
    pub upserted: UpsertCounts,
}

/// Parse and store one GDELT export, zipped or plain. The table is chosen
/// from the file name.
pub fn ingest_file(store: &Store, path: &Path) -> Result<FileReport> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let bytes = std::fs::read(path)?;
    ingest_bytes(store, &name, bytes)
}

pub fn ingest_bytes(store: &Store, name: &str, bytes: Vec<u8>) -> Result<FileReport> {
    let kind = TableKind::from_file_name(name).ok_or_else(|| IngestError::UnknownKind(name.to_string()))?;
    let text = read_maybe_zipped(bytes)?;
    let (diagnostics, upserted) = match kind {
        TableKind::Events => {
            let (rows, diag) = parse_events_file(text.as_slice())?;
            (diag, store.upsert_events(&rows)?)
        }
        TableKind::Mentions => {
            let (rows, diag) = parse_mentions_file(text.as_slice())?;
            (diag, store.upsert_mentions(&rows)?)
        }
        TableKind::Gkg => {
            let (rows, diag) = parse_gkg_file(text.as_slice())?;
            (diag, store.upsert_gkg(&rows)?)
        }
    };
    store.record_file(name, kind, &diagnostics, Utc::now().naive_utc())?;
    tracing::info!(
        file = name,
        kind = %kind,
        rows_ok = diagnostics.rows_ok,
        rows_skipped = diagnostics.rows_skipped,
        inserted = upserted.inserted,
        "ingested"
    );
    Ok(FileReport {
        name: name.to_string(),
        kind,
        diagnostics,
        upserted,
    })
}
