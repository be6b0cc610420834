pub mod ingest;
pub mod query;
pub mod replay;
pub mod serve;
pub mod volume;

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use refwatch_core::store::Store;

pub fn open_store(path: &Path) -> Result<Store> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    Store::open(path).with_context(|| format!("opening store {}", path.display()))
}

/// Write to `out`, or stdout when it is absent or `-`.
pub fn emit(out: Option<&Path>, body: &str) -> Result<()> {
    match out.filter(|p| p.as_os_str() != "-") {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn status(store: &Path) -> Result<()> {
    let store = open_store(store)?;
    let status = store.ingest_status()?;
    emit(None, &refwatch_core::casestudy::to_json(&status))
}
