use std::path::{Path, PathBuf};

use anyhow::Result;
use refwatch_core::cameo::RefugeeMode;
use refwatch_core::query::{criteria1, criteria2, DateRange, QueryCriteria, ThemeMode};
use refwatch_core::store::EventWithContext;

use super::{emit, open_store};
use crate::Usage;

/// Column order of the query CSV export. Frozen: append only.
pub const COLUMNS: [&str; 20] = [
    "global_event_id",
    "day",
    "actor1_code",
    "actor1_name",
    "actor1_country",
    "actor2_code",
    "actor2_name",
    "actor2_country",
    "event_code",
    "event_root_code",
    "quad_class",
    "goldstein_scale",
    "avg_tone",
    "num_mentions",
    "num_sources",
    "num_articles",
    "action_geo_country",
    "mention_count",
    "document_count",
    "source_url",
];

/// Export the events matching a criteria preset as CSV.
#[derive(clap::Args)]
pub struct Args {
    /// 1: Actor2 is a refugee; 2: additionally a discrimination theme.
    #[arg(long, value_parser = ["1", "2"])]
    criteria: String,
    /// First day, YYYY-MM-DD (inclusive).
    #[arg(long)]
    from: String,
    /// Last day, YYYY-MM-DD (inclusive).
    #[arg(long)]
    to: String,
    #[arg(long, default_value = "exact", value_parser = ["exact", "prefix"])]
    theme_mode: String,
    #[arg(long, default_value = "exact", value_parser = ["exact", "contains-type"])]
    refugee_mode: String,
    /// Restrict to these event root codes, comma-separated.
    #[arg(long, value_delimiter = ',')]
    roots: Vec<String>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn criteria(args: &Args) -> Result<QueryCriteria> {
    let range = DateRange::parse(&args.from, &args.to)?;
    let theme_mode: ThemeMode = args.theme_mode.parse()?;
    let mut c = match args.criteria.as_str() {
        "1" => criteria1(range),
        "2" => criteria2(range, theme_mode),
        other => return Err(Usage(format!("unknown criteria {other}")).into()),
    };
    c.refugee_mode = args.refugee_mode.parse::<RefugeeMode>().map_err(Usage)?;
    if !args.roots.is_empty() {
        c.event_root_codes = Some(args.roots.iter().map(|r| r.trim().to_string()).collect());
    }
    Ok(c)
}

fn text(v: Option<&String>) -> String {
    v.cloned().unwrap_or_default()
}

pub fn to_csv(rows: &[EventWithContext]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS)?;
    for ctx in rows {
        let e = &ctx.event;
        let a1 = e.actor1.as_ref();
        let a2 = e.actor2.as_ref();
        w.write_record([
            e.global_event_id.to_string(),
            e.day.to_string(),
            a1.map(|a| a.code.clone()).unwrap_or_default(),
            text(a1.and_then(|a| a.name.as_ref())),
            text(a1.and_then(|a| a.country_code.as_ref())),
            a2.map(|a| a.code.clone()).unwrap_or_default(),
            text(a2.and_then(|a| a.name.as_ref())),
            text(a2.and_then(|a| a.country_code.as_ref())),
            e.event_code.clone(),
            e.event_root_code.clone(),
            e.quad_class.to_string(),
            e.goldstein_scale.to_string(),
            e.avg_tone.to_string(),
            e.num_mentions.to_string(),
            e.num_sources.to_string(),
            e.num_articles.to_string(),
            text(e.action_geo.as_ref().and_then(|g| g.country_code.as_ref())),
            ctx.mentions.len().to_string(),
            ctx.documents.len().to_string(),
            e.source_url.clone(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn run(store: &Path, args: Args) -> Result<()> {
    let criteria = criteria(&args)?;
    let store = open_store(store)?;
    let rows = store.scan(&criteria)?;
    emit(args.out.as_deref(), &to_csv(&rows)?)?;
    if args.out.is_some() {
        eprintln!("{} events", rows.len());
    }
    Ok(())
}
