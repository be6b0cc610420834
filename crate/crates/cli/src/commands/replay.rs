use std::path::{Path, PathBuf};

use anyhow::Result;
use refwatch_core::cameo::CameoTables;
use refwatch_core::casestudy::{replay, to_json, CaseStudy};

use super::{emit, open_store};
use crate::Usage;

/// Re-run a case study over the store and write its chart data.
#[derive(clap::Args)]
pub struct Args {
    /// kurdi (March 2015 to March 2016) or march2021.
    case_study: String,
    /// Output directory for the JSON and CSV files.
    #[arg(long, default_value = "replay")]
    out: PathBuf,
}

pub fn run(store: &Path, args: Args) -> Result<()> {
    let case: CaseStudy = args.case_study.parse().map_err(|e| Usage(format!("{e}")))?;
    let store = open_store(store)?;
    let summary = replay(&store, case, &args.out, CameoTables::bundled())?;
    emit(None, &to_json(&summary))
}
