//! Parsers for the GDELT 2.0 bulk exports: Events, Mentions and GKG.
//!
//! All three files are tab-delimited (despite the `.CSV` suffix) with one
//! record per line. Malformed lines are skipped and counted in
//! [`ParseDiagnostics`]; they never abort a file.

mod container;
mod events;
mod gkg;
pub mod layout;
mod mentions;

use std::fmt;
use std::io::{BufRead, BufReader, Read};

use chrono::{NaiveDate, NaiveDateTime};
use serde::{Deserialize, Serialize};

pub use container::{open_export_container, read_maybe_zipped, ContainerError};
pub use events::{parse_events_file, render_event_row};
pub use gkg::{parse_gkg_file, parse_v2themes, render_gkg_row, render_v2themes};
pub use mentions::{parse_mentions_file, render_mention_row};

/// Upper bound on the number of `(line, reason)` pairs kept in diagnostics.
pub const MAX_RECORDED_ERRORS: usize = 20;

/// The three GDELT 2.0 tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Events,
    Mentions,
    Gkg,
}

impl TableKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TableKind::Events => "events",
            TableKind::Mentions => "mentions",
            TableKind::Gkg => "gkg",
        }
    }

    /// Infer the table from a GDELT file name or URL
    /// (`*.export.CSV[.zip]`, `*.mentions.CSV[.zip]`, `*.gkg.csv[.zip]`).
    pub fn from_file_name(name: &str) -> Option<TableKind> {
        let lower = name.to_ascii_lowercase();
        let stem = lower.strip_suffix(".zip").unwrap_or(&lower);
        if stem.ends_with(".export.csv") {
            Some(TableKind::Events)
        } else if stem.ends_with(".mentions.csv") {
            Some(TableKind::Mentions)
        } else if stem.ends_with(".gkg.csv") {
            Some(TableKind::Gkg)
        } else {
            None
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A CAMEO actor as coded on an event row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActorRef {
    /// Raw composite CAMEO actor code, e.g. `REF`, `SYRREF`, `USAGOV`.
    pub code: String,
    pub name: Option<String>,
    pub country_code: Option<String>,
    /// Type/role codes from the Type1..Type3 columns, empty cells dropped.
    pub type_codes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub latitude: f64,
    pub longitude: f64,
    pub country_code: Option<String>,
    pub full_name: Option<String>,
}

/// One coded event row from the Event table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub global_event_id: i64,
    pub day: NaiveDate,
    pub actor1: Option<ActorRef>,
    pub actor2: Option<ActorRef>,
    pub is_root_event: bool,
    pub event_code: String,
    pub event_base_code: String,
    pub event_root_code: String,
    pub quad_class: u8,
    pub goldstein_scale: f64,
    pub num_mentions: u32,
    pub num_sources: u32,
    pub num_articles: u32,
    pub avg_tone: f64,
    pub action_geo: Option<GeoPoint>,
    pub date_added: NaiveDateTime,
    pub source_url: String,
}

impl EventRecord {
    pub fn actor(&self, which: ActorSlot) -> Option<&ActorRef> {
        match which {
            ActorSlot::Actor1 => self.actor1.as_ref(),
            ActorSlot::Actor2 => self.actor2.as_ref(),
        }
    }
}

/// Selects the initiating (`actor1`) or receiving (`actor2`) actor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActorSlot {
    #[default]
    Actor1,
    Actor2,
}

impl std::str::FromStr for ActorSlot {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "actor1" => Ok(ActorSlot::Actor1),
            "actor2" => Ok(ActorSlot::Actor2),
            other => Err(format!("expected actor1 or actor2, got {other:?}")),
        }
    }
}

/// One mention of an event in one source document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MentionRecord {
    pub global_event_id: i64,
    pub event_time: NaiveDateTime,
    pub mention_time: NaiveDateTime,
    pub mention_type: i32,
    pub mention_source_name: String,
    pub mention_identifier: String,
    pub sentence_id: i32,
    pub confidence: u8,
    pub mention_doc_tone: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThemeHit {
    pub theme: String,
    pub char_offset: u64,
}

impl ThemeHit {
    pub fn new(theme: impl Into<String>, char_offset: u64) -> Self {
        Self {
            theme: theme.into(),
            char_offset,
        }
    }
}

/// The leading four values of the GKG tone cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToneTuple {
    pub tone: f64,
    pub positive: f64,
    pub negative: f64,
    pub polarity: f64,
}

/// One GKG document record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GkgRecord {
    pub gkg_record_id: String,
    pub date: NaiveDateTime,
    pub document_identifier: String,
    pub themes: Vec<ThemeHit>,
    pub v2_tone: Option<ToneTuple>,
    /// `V2EnhancedLocations`, kept verbatim.
    pub locations_raw: String,
    /// `V2GCAM`, kept verbatim.
    pub gcam_raw: String,
}

/// Per-file parse accounting.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseDiagnostics {
    pub rows_total: u64,
    pub rows_ok: u64,
    pub rows_skipped: u64,
    /// The first [`MAX_RECORDED_ERRORS`] skipped lines as `(1-based line, reason)`.
    pub first_errors: Vec<(u64, String)>,
}

impl ParseDiagnostics {
    fn record_ok(&mut self) {
        self.rows_total += 1;
        self.rows_ok += 1;
    }

    fn record_skip(&mut self, reason: String) {
        self.rows_total += 1;
        self.rows_skipped += 1;
        if self.first_errors.len() < MAX_RECORDED_ERRORS {
            self.first_errors.push((self.rows_total, reason));
        }
    }

    /// Fraction of lines that parsed; 1.0 for an empty file.
    pub fn ok_ratio(&self) -> f64 {
        if self.rows_total == 0 {
            1.0
        } else {
            self.rows_ok as f64 / self.rows_total as f64
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("failed to read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("no parseable {kind} rows in {} non-empty line(s); first error: {}", .diagnostics.rows_total, first_reason(.diagnostics))]
    NoValidRows {
        kind: TableKind,
        diagnostics: ParseDiagnostics,
    },
    #[error(transparent)]
    Container(#[from] ContainerError),
}

fn first_reason(diagnostics: &ParseDiagnostics) -> String {
    diagnostics
        .first_errors
        .first()
        .map(|(line, reason)| format!("line {line}: {reason}"))
        .unwrap_or_default()
}

pub type Parsed<T> = (Vec<T>, ParseDiagnostics);

/// Drive a row parser over every newline-delimited line of `input`.
///
/// Lines are decoded as UTF-8 with invalid sequences replaced. A trailing
/// `\r` is stripped. An input with lines but no parseable row is an error.
fn parse_rows<R, T, F>(input: R, kind: TableKind, width: usize, parse_row: F) -> Result<Parsed<T>, FormatError>
where
    R: Read,
    F: Fn(&[&str]) -> Result<T, String>,
{
    let mut reader = BufReader::new(input);
    let mut buf = Vec::new();
    let mut records = Vec::new();
    let mut diagnostics = ParseDiagnostics::default();

    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        if buf.last() == Some(&b'\n') {
            buf.pop();
        }
        if buf.last() == Some(&b'\r') {
            buf.pop();
        }
        let line = String::from_utf8_lossy(&buf);
        let cells: Vec<&str> = line.split('\t').collect();
        if cells.len() != width {
            diagnostics.record_skip(format!("expected {width} columns, found {}", cells.len()));
            continue;
        }
        match parse_row(&cells) {
            Ok(record) => {
                records.push(record);
                diagnostics.record_ok();
            }
            Err(reason) => diagnostics.record_skip(reason),
        }
    }

    if diagnostics.rows_total > 0 && diagnostics.rows_ok == 0 {
        return Err(FormatError::NoValidRows { kind, diagnostics });
    }
    Ok((records, diagnostics))
}

// Cell helpers shared by the three row parsers. Each takes the column name
// for error messages.

fn opt(cell: &str) -> Option<String> {
    let cell = cell.trim();
    (!cell.is_empty()).then(|| cell.to_string())
}

fn req<'a>(cell: &'a str, column: &str) -> Result<&'a str, String> {
    let cell = cell.trim();
    if cell.is_empty() {
        Err(format!("{column}: empty required cell"))
    } else {
        Ok(cell)
    }
}

fn num<T: std::str::FromStr>(cell: &str, column: &str) -> Result<T, String> {
    let cell = req(cell, column)?;
    cell.parse()
        .map_err(|_| format!("{column}: cannot parse {cell:?} as a number"))
}

fn opt_num<T: std::str::FromStr>(cell: &str, column: &str) -> Result<Option<T>, String> {
    if cell.trim().is_empty() {
        Ok(None)
    } else {
        num(cell, column).map(Some)
    }
}

fn finite(value: f64, column: &str) -> Result<f64, String> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("{column}: non-finite value"))
    }
}

const DAY_FORMAT: &str = "%Y%m%d";
const TIMESTAMP_FORMAT: &str = "%Y%m%d%H%M%S";

fn day(cell: &str, column: &str) -> Result<NaiveDate, String> {
    let cell = req(cell, column)?;
    NaiveDate::parse_from_str(cell, DAY_FORMAT)
        .map_err(|_| format!("{column}: {cell:?} is not a YYYYMMDD date"))
}

fn timestamp(cell: &str, column: &str) -> Result<NaiveDateTime, String> {
    let cell = req(cell, column)?;
    if cell.len() != 14 {
        return Err(format!("{column}: {cell:?} is not a YYYYMMDDHHMMSS timestamp"));
    }
    NaiveDateTime::parse_from_str(cell, TIMESTAMP_FORMAT)
        .map_err(|_| format!("{column}: {cell:?} is not a YYYYMMDDHHMMSS timestamp"))
}

fn fmt_day(day: NaiveDate) -> String {
    day.format(DAY_FORMAT).to_string()
}

fn fmt_timestamp(ts: NaiveDateTime) -> String {
    ts.format(TIMESTAMP_FORMAT).to_string()
}

fn cell_text(value: &Option<String>) -> &str {
    value.as_deref().unwrap_or("")
}
