use std::path::PathBuf;

use anyhow::Result;
use refwatch_core::analytics::{volume_timeline, Granularity};
use refwatch_core::casestudy::to_json;
use refwatch_core::query::{DateRange, GKG_THEMES_REF};
use refwatch_ingest::{http_client, DocApiClient, DocApiQuery, DEFAULT_DOC_API_URL};

use super::emit;

/// Matched and total article volume from the DOC 2.0 API (2017 onward), as
/// a percent-of-total timeline.
#[derive(clap::Args)]
pub struct Args {
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: String,
    /// Themes to OR together; defaults to the eight discrimination themes.
    #[arg(long, value_delimiter = ',')]
    themes: Vec<String>,
    #[arg(long, default_value = "day")]
    granularity: String,
    #[arg(long, env = "REFWATCH_DOC_API_URL", default_value = DEFAULT_DOC_API_URL)]
    doc_api_url: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<()> {
    let range = DateRange::parse(&args.from, &args.to)?;
    let granularity: Granularity = args.granularity.parse().map_err(|e| crate::Usage(format!("{e}")))?;
    let themes: Vec<String> = if args.themes.is_empty() {
        GKG_THEMES_REF.iter().map(|t| t.to_string()).collect()
    } else {
        args.themes.clone()
    };
    let query = DocApiQuery::themes(&themes, range.start(), range.end());
    query.validate()?;
    let client = DocApiClient::new(http_client(), args.doc_api_url);
    let points = tokio::runtime::Runtime::new()?.block_on(client.timeline(&query))?;
    emit(args.out.as_deref(), &to_json(&volume_timeline(&points, &range, granularity)?))
}
