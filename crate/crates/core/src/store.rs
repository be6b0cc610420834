//! Embedded SQLite store for the three tables and their join.
//!
//! Events link to Mentions by `global_event_id` (one to many); Mentions link
//! to GKG documents by `mention_identifier == document_identifier`. Rows are
//! stored as soon as they arrive; mentions or documents whose partner row is
//! missing are linked when the partner shows up, at read time.
//!
//! Each table keeps its key columns plus the record as JSON.

use std::collections::HashMap;
use std::hash::Hash;
use std::path::Path;
use std::sync::{Mutex, MutexGuard};

use chrono::NaiveDateTime;
use rusqlite::{params, Connection, OptionalExtension, Transaction};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cameo::{RefugeeMode, REFUGEE_CODE};
use crate::formats::{EventRecord, GkgRecord, MentionRecord, ParseDiagnostics, TableKind};
use crate::query::{matches, QueryCriteria};

pub const SCHEMA_VERSION: i64 = 1;

const SCHEMA: &str = "
CREATE TABLE IF NOT EXISTS events (
    global_event_id INTEGER PRIMARY KEY,
    day TEXT NOT NULL,
    actor2_code TEXT,
    date_added TEXT NOT NULL,
    record TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS events_day ON events(day);
CREATE INDEX IF NOT EXISTS events_actor2_code ON events(actor2_code);
CREATE TABLE IF NOT EXISTS mentions (
    global_event_id INTEGER NOT NULL,
    mention_identifier TEXT NOT NULL,
    record TEXT NOT NULL,
    PRIMARY KEY (global_event_id, mention_identifier)
);
CREATE INDEX IF NOT EXISTS mentions_identifier ON mentions(mention_identifier);
CREATE TABLE IF NOT EXISTS gkg (
    gkg_record_id TEXT PRIMARY KEY,
    document_identifier TEXT NOT NULL,
    record TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS gkg_document_identifier ON gkg(document_identifier);
CREATE TABLE IF NOT EXISTS ingested_files (
    name TEXT PRIMARY KEY,
    kind TEXT NOT NULL,
    rows_ok INTEGER NOT NULL,
    rows_skipped INTEGER NOT NULL,
    ingested_at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS meta (
    key TEXT PRIMARY KEY,
    value TEXT NOT NULL
);
";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("database error: {0}")]
    Sqlite(#[from] rusqlite::Error),
    #[error("stored record is not valid JSON: {0}")]
    Record(#[from] serde_json::Error),
    #[error("store schema version {found} is not supported (expected {SCHEMA_VERSION})")]
    SchemaVersion { found: i64 },
}

pub type Result<T> = std::result::Result<T, StoreError>;

/// An event joined with its mentions and their GKG documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventWithContext {
    pub event: EventRecord,
    /// Ordered by `mention_identifier`.
    pub mentions: Vec<MentionRecord>,
    /// Documents whose identifier equals some mention identifier, ordered by
    /// `gkg_record_id`.
    pub documents: Vec<GkgRecord>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpsertCounts {
    pub inserted: u64,
    pub updated: u64,
    pub unchanged: u64,
    /// Rows superseded by a later row with the same key in the same batch.
    pub batch_duplicates: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCounts {
    pub events: u64,
    pub mentions: u64,
    pub gkg: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestedFile {
    pub name: String,
    pub kind: TableKind,
    pub rows_ok: u64,
    pub rows_skipped: u64,
    pub ingested_at: NaiveDateTime,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStatus {
    pub last_poll: Option<NaiveDateTime>,
    pub files_ingested: u64,
    pub rows_skipped: u64,
    pub rows: TableCounts,
}

pub struct Store {
    conn: Mutex<Connection>,
}

impl std::fmt::Debug for Store {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Store").finish_non_exhaustive()
    }
}

/// Insert/update plumbing shared by the three tables.
trait Row: Serialize + DeserializeOwned {
    type Key: Eq + Hash + Clone;
    const SELECT: &'static str;
    const INSERT: &'static str;
    const UPDATE: &'static str;

    fn key(&self) -> Self::Key;
    fn bind_key(key: &Self::Key) -> Vec<rusqlite::types::Value>;
    fn bind_row(&self, key: &Self::Key, json: String) -> Vec<rusqlite::types::Value>;
    /// Whether `self` may replace the stored `existing` row.
    fn supersedes(&self, _existing: &Self) -> bool {
        true
    }
}

impl Row for EventRecord {
    type Key = i64;
    const SELECT: &'static str = "SELECT record FROM events WHERE global_event_id = ?1";
    const INSERT: &'static str =
        "INSERT INTO events (global_event_id, day, actor2_code, date_added, record) VALUES (?1, ?2, ?3, ?4, ?5)";
    const UPDATE: &'static str =
        "UPDATE events SET day = ?2, actor2_code = ?3, date_added = ?4, record = ?5 WHERE global_event_id = ?1";

    fn key(&self) -> i64 {
        self.global_event_id
    }

    fn bind_key(key: &i64) -> Vec<rusqlite::types::Value> {
        vec![(*key).into()]
    }

    fn bind_row(&self, key: &i64, json: String) -> Vec<rusqlite::types::Value> {
        vec![
            (*key).into(),
            self.day.to_string().into(),
            self.actor2.as_ref().map(|a| a.code.clone()).into(),
            self.date_added.to_string().into(),
            json.into(),
        ]
    }

    /// Re-published events replace the stored row unless they are older.
    fn supersedes(&self, existing: &Self) -> bool {
        self.date_added >= existing.date_added
    }
}

impl Row for MentionRecord {
    type Key = (i64, String);
    const SELECT: &'static str = "SELECT record FROM mentions WHERE global_event_id = ?1 AND mention_identifier = ?2";
    const INSERT: &'static str = "INSERT INTO mentions (global_event_id, mention_identifier, record) VALUES (?1, ?2, ?3)";
    const UPDATE: &'static str = "UPDATE mentions SET record = ?3 WHERE global_event_id = ?1 AND mention_identifier = ?2";

    fn key(&self) -> Self::Key {
        (self.global_event_id, self.mention_identifier.clone())
    }

    fn bind_key(key: &Self::Key) -> Vec<rusqlite::types::Value> {
        vec![key.0.into(), key.1.clone().into()]
    }

    fn bind_row(&self, key: &Self::Key, json: String) -> Vec<rusqlite::types::Value> {
        vec![key.0.into(), key.1.clone().into(), json.into()]
    }
}

impl Row for GkgRecord {
    type Key = String;
    const SELECT: &'static str = "SELECT record FROM gkg WHERE gkg_record_id = ?1";
    const INSERT: &'static str = "INSERT INTO gkg (gkg_record_id, document_identifier, record) VALUES (?1, ?2, ?3)";
    const UPDATE: &'static str = "UPDATE gkg SET document_identifier = ?2, record = ?3 WHERE gkg_record_id = ?1";

    fn key(&self) -> String {
        self.gkg_record_id.clone()
    }

    fn bind_key(key: &String) -> Vec<rusqlite::types::Value> {
        vec![key.clone().into()]
    }

    fn bind_row(&self, key: &String, json: String) -> Vec<rusqlite::types::Value> {
        vec![key.clone().into(), self.document_identifier.clone().into(), json.into()]
    }
}

fn upsert_batch<R: Row>(tx: &Transaction<'_>, batch: &[R]) -> Result<UpsertCounts> {
    let mut counts = UpsertCounts::default();

    // Last write wins within the batch; keep first-seen order of keys.
    let mut latest: HashMap<R::Key, usize> = HashMap::with_capacity(batch.len());
    let mut order = Vec::with_capacity(batch.len());
    for (i, row) in batch.iter().enumerate() {
        let key = row.key();
        if latest.insert(key.clone(), i).is_some() {
            counts.batch_duplicates += 1;
        } else {
            order.push(key);
        }
    }

    let mut select = tx.prepare_cached(R::SELECT)?;
    let mut insert = tx.prepare_cached(R::INSERT)?;
    let mut update = tx.prepare_cached(R::UPDATE)?;
    for key in order {
        let row = &batch[latest[&key]];
        let json = serde_json::to_string(row)?;
        let existing: Option<String> = select
            .query_row(rusqlite::params_from_iter(R::bind_key(&key)), |r| r.get(0))
            .optional()?;
        match existing {
            None => {
                insert.execute(rusqlite::params_from_iter(row.bind_row(&key, json)))?;
                counts.inserted += 1;
            }
            Some(stored) if stored == json => counts.unchanged += 1,
            Some(stored) => {
                let stored: R = serde_json::from_str(&stored)?;
                if row.supersedes(&stored) {
                    update.execute(rusqlite::params_from_iter(row.bind_row(&key, json)))?;
                    counts.updated += 1;
                } else {
                    counts.unchanged += 1;
                }
            }
        }
    }
    Ok(counts)
}

fn decode<T: DeserializeOwned>(json: String) -> Result<T> {
    Ok(serde_json::from_str(&json)?)
}

impl Store {
    pub fn open(path: &Path) -> Result<Store> {
        let conn = Connection::open(path)?;
        conn.pragma_update(None, "journal_mode", "WAL")?;
        conn.busy_timeout(std::time::Duration::from_secs(30))?;
        Store::init(conn)
    }

    pub fn open_in_memory() -> Result<Store> {
        Store::init(Connection::open_in_memory()?)
    }

    fn init(conn: Connection) -> Result<Store> {
        conn.execute_batch("CREATE TABLE IF NOT EXISTS schema_version (version INTEGER NOT NULL);")?;
        let found: Option<i64> = conn
            .query_row("SELECT version FROM schema_version", [], |r| r.get(0))
            .optional()?;
        match found {
            None => {
                conn.execute_batch(SCHEMA)?;
                conn.execute("INSERT INTO schema_version (version) VALUES (?1)", [SCHEMA_VERSION])?;
            }
            Some(SCHEMA_VERSION) => conn.execute_batch(SCHEMA)?,
            Some(found) => return Err(StoreError::SchemaVersion { found }),
        }
        Ok(Store { conn: Mutex::new(conn) })
    }

    fn conn(&self) -> MutexGuard<'_, Connection> {
        self.conn.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
    }

    fn upsert<R: Row>(&self, batch: &[R]) -> Result<UpsertCounts> {
        let mut conn = self.conn();
        let tx = conn.transaction()?;
        let counts = upsert_batch(&tx, batch)?;
        tx.commit()?;
        Ok(counts)
    }

    /// Insert or update events by `global_event_id`. A stored event is only
    /// replaced by one with an equal or later `date_added`.
    pub fn upsert_events(&self, batch: &[EventRecord]) -> Result<UpsertCounts> {
        self.upsert(batch)
    }

    /// Insert or update mentions by `(global_event_id, mention_identifier)`.
    pub fn upsert_mentions(&self, batch: &[MentionRecord]) -> Result<UpsertCounts> {
        self.upsert(batch)
    }

    /// Insert or update GKG records by `gkg_record_id`.
    pub fn upsert_gkg(&self, batch: &[GkgRecord]) -> Result<UpsertCounts> {
        self.upsert(batch)
    }

    fn load_context(conn: &Connection, event: EventRecord) -> Result<EventWithContext> {
        let mut mentions_stmt = conn.prepare_cached(
            "SELECT record FROM mentions WHERE global_event_id = ?1 ORDER BY mention_identifier",
        )?;
        let mentions = mentions_stmt
            .query_map([event.global_event_id], |r| r.get::<_, String>(0))?
            .map(|json| decode(json?))
            .collect::<Result<Vec<MentionRecord>>>()?;

        let mut docs_stmt = conn.prepare_cached(
            "SELECT g.record FROM gkg g
             WHERE g.document_identifier IN
                 (SELECT mention_identifier FROM mentions WHERE global_event_id = ?1)
             ORDER BY g.gkg_record_id",
        )?;
        let documents = docs_stmt
            .query_map([event.global_event_id], |r| r.get::<_, String>(0))?
            .map(|json| decode(json?))
            .collect::<Result<Vec<GkgRecord>>>()?;

        Ok(EventWithContext {
            event,
            mentions,
            documents,
        })
    }

    /// The event with all of its stored mentions and linked documents.
    pub fn get_event_with_context(&self, global_event_id: i64) -> Result<Option<EventWithContext>> {
        let conn = self.conn();
        let event: Option<String> = conn
            .query_row(
                "SELECT record FROM events WHERE global_event_id = ?1",
                [global_event_id],
                |r| r.get(0),
            )
            .optional()?;
        match event {
            Some(json) => Ok(Some(Store::load_context(&conn, decode(json)?)?)),
            None => Ok(None),
        }
    }

    /// All events passing `criteria`, with context, ordered by
    /// `(day, global_event_id)`.
    pub fn scan(&self, criteria: &QueryCriteria) -> Result<Vec<EventWithContext>> {
        let conn = self.conn();
        let start = criteria.date_range.start().to_string();
        let end = criteria.date_range.end().to_string();
        let exact_ref = criteria.actor2_refugee && criteria.refugee_mode == RefugeeMode::Exact;

        let actor2_code = exact_ref.then_some(REFUGEE_CODE);

        let mut stmt = conn.prepare_cached(
            "SELECT record FROM events
             WHERE day BETWEEN ?1 AND ?2 AND (?3 IS NULL OR actor2_code = ?3)
             ORDER BY day, global_event_id",
        )?;
        let events = stmt
            .query_map(params![start, end, actor2_code], |r| r.get::<_, String>(0))?
            .map(|json| decode::<EventRecord>(json?))
            .collect::<Result<Vec<_>>>()?;
        drop(stmt);

        let mut out = Vec::new();
        for event in events {
            let ctx = Store::load_context(&conn, event)?;
            if matches(criteria, &ctx) {
                out.push(ctx);
            }
        }
        Ok(out)
    }

    /// Mentions whose event row has not been stored (yet).
    pub fn orphan_mentions(&self) -> Result<Vec<MentionRecord>> {
        let conn = self.conn();
        let mut stmt = conn.prepare(
            "SELECT m.record FROM mentions m
             LEFT JOIN events e ON e.global_event_id = m.global_event_id
             WHERE e.global_event_id IS NULL
             ORDER BY m.global_event_id, m.mention_identifier",
        )?;
        let rows = stmt
            .query_map([], |r| r.get::<_, String>(0))?
            .map(|json| decode(json?))
            .collect();
        rows
    }

    pub fn counts(&self) -> Result<TableCounts> {
        let conn = self.conn();
        let count = |table: &str| -> Result<u64> {
            Ok(conn.query_row(&format!("SELECT COUNT(*) FROM {table}"), [], |r| r.get::<_, i64>(0))? as u64)
        };
        Ok(TableCounts {
            events: count("events")?,
            mentions: count("mentions")?,
            gkg: count("gkg")?,
        })
    }

    /// Record that a file was ingested; re-ingesting a name replaces its entry.
    pub fn record_file(
        &self,
        name: &str,
        kind: TableKind,
        diagnostics: &ParseDiagnostics,
        at: NaiveDateTime,
    ) -> Result<()> {
        self.conn().execute(
            "INSERT OR REPLACE INTO ingested_files (name, kind, rows_ok, rows_skipped, ingested_at)
             VALUES (?1, ?2, ?3, ?4, ?5)",
            params![
                name,
                kind.as_str(),
                diagnostics.rows_ok as i64,
                diagnostics.rows_skipped as i64,
                at.to_string()
            ],
        )?;
        Ok(())
    }

    pub fn ingested_files(&self) -> Result<Vec<IngestedFile>> {
        let conn = self.conn();
        let mut stmt =
            conn.prepare("SELECT name, kind, rows_ok, rows_skipped, ingested_at FROM ingested_files ORDER BY name")?;
        let rows = stmt
            .query_map([], |r| {
                Ok((
                    r.get::<_, String>(0)?,
                    r.get::<_, String>(1)?,
                    r.get::<_, i64>(2)?,
                    r.get::<_, i64>(3)?,
                    r.get::<_, String>(4)?,
                ))
            })?
            .map(|row| {
                let (name, kind, ok, skipped, at) = row?;
                let kind = match kind.as_str() {
                    "events" => TableKind::Events,
                    "mentions" => TableKind::Mentions,
                    _ => TableKind::Gkg,
                };
                Ok(IngestedFile {
                    name,
                    kind,
                    rows_ok: ok as u64,
                    rows_skipped: skipped as u64,
                    ingested_at: parse_stored_timestamp(&at)?,
                })
            })
            .collect();
        rows
    }

    pub fn record_poll(&self, at: NaiveDateTime) -> Result<()> {
        self.conn().execute(
            "INSERT OR REPLACE INTO meta (key, value) VALUES ('last_poll', ?1)",
            [at.to_string()],
        )?;
        Ok(())
    }

    pub fn ingest_status(&self) -> Result<IngestStatus> {
        let rows = self.counts()?;
        let conn = self.conn();
        let last_poll: Option<String> = conn
            .query_row("SELECT value FROM meta WHERE key = 'last_poll'", [], |r| r.get(0))
            .optional()?;
        let (files, skipped): (i64, i64) = conn.query_row(
            "SELECT COUNT(*), COALESCE(SUM(rows_skipped), 0) FROM ingested_files",
            [],
            |r| Ok((r.get(0)?, r.get(1)?)),
        )?;
        Ok(IngestStatus {
            last_poll: last_poll.as_deref().map(parse_stored_timestamp).transpose()?,
            files_ingested: files as u64,
            rows_skipped: skipped as u64,
            rows,
        })
    }
}

fn parse_stored_timestamp(value: &str) -> Result<NaiveDateTime> {
    NaiveDateTime::parse_from_str(value, "%Y-%m-%d %H:%M:%S%.f").map_err(|e| {
        StoreError::Sqlite(rusqlite::Error::FromSqlConversionFailure(
            0,
            rusqlite::types::Type::Text,
            Box::new(e),
        ))
    })
}

#[cfg(test)]
mod tests {
    use chrono::NaiveDate;

    use super::*;
    use crate::formats::{ActorRef, ThemeHit};
    use crate::query::{criteria1, criteria2, DateRange, ThemeMode};

    fn ts(s: &str) -> NaiveDateTime {
        NaiveDateTime::parse_from_str(s, "%Y%m%d%H%M%S").unwrap()
    }

    fn event(id: i64, day: &str, actor2: Option<&str>) -> EventRecord {
        EventRecord {
            global_event_id: id,
            day: NaiveDate::parse_from_str(day, "%Y-%m-%d").unwrap(),
            actor1: None,
            actor2: actor2.map(|code| ActorRef {
                code: code.into(),
                name: None,
                country_code: None,
                type_codes: vec![],
            }),
            is_root_event: false,
            event_code: "010".into(),
            event_base_code: "010".into(),
            event_root_code: "01".into(),
            quad_class: 1,
            goldstein_scale: 0.0,
            num_mentions: 0,
            num_sources: 0,
            num_articles: 0,
            avg_tone: 0.0,
            action_geo: None,
            date_added: ts("20210301000000"),
            source_url: String::new(),
        }
    }

    fn mention(event_id: i64, identifier: &str) -> MentionRecord {
        MentionRecord {
            global_event_id: event_id,
            event_time: ts("20210301000000"),
            mention_time: ts("20210301001500"),
            mention_type: 1,
            mention_source_name: "ex.org".into(),
            mention_identifier: identifier.into(),
            sentence_id: 1,
            confidence: 100,
            mention_doc_tone: -2.0,
        }
    }

    fn doc(id: &str, identifier: &str, themes: &[&str]) -> GkgRecord {
        GkgRecord {
            gkg_record_id: id.into(),
            date: ts("20210301001500"),
            document_identifier: identifier.into(),
            themes: themes.iter().map(|t| ThemeHit::new(*t, 0)).collect(),
            v2_tone: None,
            locations_raw: String::new(),
            gcam_raw: String::new(),
        }
    }

    #[test]
    fn upsert_is_idempotent() {
        let store = Store::open_in_memory().unwrap();
        let batch = vec![event(1, "2021-03-01", Some("REF")), event(2, "2021-03-02", None)];
        let first = store.upsert_events(&batch).unwrap();
        assert_eq!(first.inserted, 2);
        let second = store.upsert_events(&batch).unwrap();
        assert_eq!((second.inserted, second.updated, second.unchanged), (0, 0, 2));
    }

    #[test]
    fn duplicate_keys_in_a_batch_keep_the_last_row() {
        let store = Store::open_in_memory().unwrap();
        let mut later = event(1, "2021-03-01", Some("REF"));
        later.avg_tone = -7.0;
        let counts = store
            .upsert_events(&[event(1, "2021-03-01", Some("REF")), later.clone()])
            .unwrap();
        assert_eq!(counts.inserted, 1);
        assert_eq!(counts.batch_duplicates, 1);
        assert_eq!(store.counts().unwrap().events, 1);
        assert_eq!(store.get_event_with_context(1).unwrap().unwrap().event, later);
    }

    #[test]
    fn empty_batches_change_nothing() {
        let store = Store::open_in_memory().unwrap();
        let c = store.upsert_mentions(&[]).unwrap();
        assert_eq!((c.inserted, c.updated), (0, 0));
    }

    #[test]
    fn republished_events_keep_the_later_date_added() {
        let store = Store::open_in_memory().unwrap();
        let mut newer = event(1, "2021-03-01", Some("REF"));
        newer.date_added = ts("20210302000000");
        newer.num_mentions = 9;
        store.upsert_events(&[newer.clone()]).unwrap();

        let mut older = event(1, "2021-03-01", Some("REF"));
        older.num_mentions = 3;
        let c = store.upsert_events(&[older]).unwrap();
        assert_eq!((c.updated, c.unchanged), (0, 1));

        let mut newest = newer.clone();
        newest.date_added = ts("20210303000000");
        let c = store.upsert_events(&[newest.clone()]).unwrap();
        assert_eq!(c.updated, 1);
        assert_eq!(store.get_event_with_context(1).unwrap().unwrap().event, newest);
    }

    #[test]
    fn context_joins_mentions_and_documents() {
        let store = Store::open_in_memory().unwrap();
        store.upsert_events(&[event(1, "2021-03-01", Some("REF")), event(2, "2021-03-01", None)]).unwrap();
        store
            .upsert_mentions(&[mention(1, "a"), mention(1, "b"), mention(1, "c"), mention(2, "a")])
            .unwrap();
        store.upsert_gkg(&[doc("g1", "a", &[]), doc("g2", "b", &[]), doc("g3", "zz", &[])]).unwrap();

        let ctx = store.get_event_with_context(1).unwrap().unwrap();
        assert_eq!(ctx.mentions.len(), 3);
        let ids: Vec<_> = ctx.documents.iter().map(|d| d.gkg_record_id.as_str()).collect();
        assert_eq!(ids, ["g1", "g2"]);

        let ctx = store.get_event_with_context(2).unwrap().unwrap();
        assert_eq!(ctx.documents.len(), 1);
    }

    #[test]
    fn event_without_mentions_and_unknown_ids() {
        let store = Store::open_in_memory().unwrap();
        store.upsert_events(&[event(5, "2021-03-01", None)]).unwrap();
        let ctx = store.get_event_with_context(5).unwrap().unwrap();
        assert!(ctx.mentions.is_empty() && ctx.documents.is_empty());
        assert!(store.get_event_with_context(6).unwrap().is_none());
    }

    #[test]
    fn orphans_are_linked_once_the_event_arrives() {
        let store = Store::open_in_memory().unwrap();
        store.upsert_mentions(&[mention(9, "x")]).unwrap();
        store.upsert_gkg(&[doc("g", "x", &[])]).unwrap();
        assert_eq!(store.orphan_mentions().unwrap().len(), 1);
        store.upsert_events(&[event(9, "2021-03-01", None)]).unwrap();
        assert!(store.orphan_mentions().unwrap().is_empty());
        let ctx = store.get_event_with_context(9).unwrap().unwrap();
        assert_eq!((ctx.mentions.len(), ctx.documents.len()), (1, 1));
    }

    #[test]
    fn scan_orders_by_day_then_id_and_applies_criteria() {
        let store = Store::open_in_memory().unwrap();
        store
            .upsert_events(&[
                event(3, "2021-03-02", Some("REF")),
                event(1, "2021-03-02", Some("REF")),
                event(2, "2021-03-01", Some("REF")),
                event(4, "2021-03-01", Some("GOV")),
                event(5, "2021-04-01", Some("REF")),
            ])
            .unwrap();
        store.upsert_mentions(&[mention(1, "doc1")]).unwrap();
        store
            .upsert_gkg(&[doc("g1", "doc1", &["DISCRIMINATION_IMMIGRATION_XENOPHOBIA"])])
            .unwrap();

        let range = DateRange::parse("2021-03-01", "2021-03-31").unwrap();
        let ids: Vec<i64> = store
            .scan(&criteria1(range))
            .unwrap()
            .iter()
            .map(|c| c.event.global_event_id)
            .collect();
        assert_eq!(ids, [2, 1, 3]);
        let ids: Vec<i64> = store
            .scan(&criteria2(range, ThemeMode::ExactSet))
            .unwrap()
            .iter()
            .map(|c| c.event.global_event_id)
            .collect();
        assert_eq!(ids, [1]);
        assert!(Store::open_in_memory().unwrap().scan(&criteria1(range)).unwrap().is_empty());
    }

    #[test]
    fn ingest_status_tracks_files_and_polls() {
        let store = Store::open_in_memory().unwrap();
        let diag = ParseDiagnostics {
            rows_total: 3,
            rows_ok: 2,
            rows_skipped: 1,
            first_errors: vec![],
        };
        store.record_file("a.export.CSV.zip", TableKind::Events, &diag, ts("20210301000000")).unwrap();
        store.record_file("a.export.CSV.zip", TableKind::Events, &diag, ts("20210301001500")).unwrap();
        store.record_file("a.mentions.CSV.zip", TableKind::Mentions, &diag, ts("20210301000000")).unwrap();
        store.record_poll(ts("20210301003000")).unwrap();
        let status = store.ingest_status().unwrap();
        assert_eq!(status.files_ingested, 2);
        assert_eq!(status.rows_skipped, 2);
        assert_eq!(status.last_poll, Some(ts("20210301003000")));
        assert_eq!(store.ingested_files().unwrap()[0].ingested_at, ts("20210301001500"));
    }

    #[test]
    fn file_store_persists_and_checks_schema_version() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("store.db");
        {
            let store = Store::open(&path).unwrap();
            store.upsert_events(&[event(1, "2021-03-01", None)]).unwrap();
        }
        assert_eq!(Store::open(&path).unwrap().counts().unwrap().events, 1);
        {
            let conn = Connection::open(&path).unwrap();
            conn.execute("UPDATE schema_version SET version = 99", []).unwrap();
        }
        assert!(matches!(Store::open(&path), Err(StoreError::SchemaVersion { found: 99 })));
    }
}
