//! Synthetic GDELT data for tests and fixtures.
//!
//! Available in this crate's tests and, with the `testkit` feature, to other
//! crates. All generators are deterministic in their seed.

use std::io::Write;

use chrono::{Days, NaiveDate, NaiveDateTime};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formats::{ActorRef, EventRecord, GeoPoint, GkgRecord, MentionRecord, ThemeHit, ToneTuple};
use crate::query::{GKG_THEMES_REF, GKG_THEMES_REF_PREFIX};
use crate::store::{EventWithContext, Store, UpsertCounts};

pub mod oracle;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn day(s: &str) -> NaiveDate {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").expect("YYYY-MM-DD")
}

pub fn midnight(d: NaiveDate) -> NaiveDateTime {
    d.and_hms_opt(0, 0, 0).expect("midnight")
}

pub fn actor(code: &str, country: Option<&str>) -> ActorRef {
    ActorRef {
        code: code.to_string(),
        name: None,
        country_code: country.map(str::to_string),
        type_codes: Vec::new(),
    }
}

/// A minimal event on `day` with no actors, root code `01`.
pub fn bare_event(id: i64, on: &str) -> EventRecord {
    let d = day(on);
    EventRecord {
        global_event_id: id,
        day: d,
        actor1: None,
        actor2: None,
        is_root_event: true,
        event_code: "010".into(),
        event_base_code: "010".into(),
        event_root_code: "01".into(),
        quad_class: 1,
        goldstein_scale: 0.0,
        num_mentions: 1,
        num_sources: 1,
        num_articles: 1,
        avg_tone: 0.0,
        action_geo: None,
        date_added: midnight(d),
        source_url: format!("http://example.org/{id}"),
    }
}

pub fn bare_context(id: i64, on: &str) -> EventWithContext {
    EventWithContext {
        event: bare_event(id, on),
        mentions: Vec::new(),
        documents: Vec::new(),
    }
}

pub fn mention(event_id: i64, identifier: &str, at: NaiveDateTime) -> MentionRecord {
    MentionRecord {
        global_event_id: event_id,
        event_time: at,
        mention_time: at,
        mention_type: 1,
        mention_source_name: "example.org".into(),
        mention_identifier: identifier.to_string(),
        sentence_id: 1,
        confidence: 100,
        mention_doc_tone: -1.0,
    }
}

pub fn document(record_id: &str, identifier: &str, themes: &[&str], at: NaiveDateTime) -> GkgRecord {
    GkgRecord {
        gkg_record_id: record_id.to_string(),
        date: at,
        document_identifier: identifier.to_string(),
        themes: themes.iter().enumerate().map(|(i, t)| ThemeHit::new(*t, i as u64 * 10)).collect(),
        v2_tone: None,
        locations_raw: String::new(),
        gcam_raw: String::new(),
    }
}

const COUNTRIES: [&str; 8] = ["ESP", "USA", "ITA", "GRC", "TUR", "DEU", "SYR", "LBY"];
const ACTOR2_CODES: [&str; 6] = ["REF", "REF", "SYRREF", "GOV", "CVL", "MED"];
const ROOTS: [&str; 6] = ["01", "02", "04", "07", "14", "17"];
const NOISE_THEMES: [&str; 5] = [
    "TAX_ETHNICITY",
    "REFUGEES",
    "DISCRIMINATION_IMMIGRATION_SOMETHINGELSE",
    "IMMIGRATION",
    "TAX_FNCACT_POLICE",
];

fn word(rng: &mut TestRng, len: usize) -> String {
    (0..len).map(|_| rng.gen_range(b'A'..=b'Z') as char).collect()
}

fn timestamp_in(rng: &mut TestRng, d: NaiveDate) -> NaiveDateTime {
    d.and_hms_opt(rng.gen_range(0..24), rng.gen_range(0..4) * 15, 0).expect("valid time")
}

fn random_actor(rng: &mut TestRng, code: String) -> ActorRef {
    let n_types = rng.gen_range(0..=3);
    ActorRef {
        code,
        name: rng.gen_bool(0.7).then(|| word(rng, 6)),
        country_code: rng.gen_bool(0.8).then(|| COUNTRIES.choose(rng).unwrap().to_string()),
        type_codes: (0..n_types).map(|_| word(rng, 3)).collect(),
    }
}

/// An arbitrary well-formed event whose fields all survive a text round trip.
pub fn random_event(rng: &mut TestRng, id: i64, on: NaiveDate) -> EventRecord {
    let root = *ROOTS.choose(rng).unwrap();
    let event_code = format!("{root}{}", rng.gen_range(0..10));
    let actor1 = rng.gen_bool(0.9).then(|| {
        let code = format!("{}{}", COUNTRIES.choose(rng).unwrap(), word(rng, 3));
        let mut a = random_actor(rng, code);
        a.country_code = rng.gen_bool(0.85).then(|| COUNTRIES.choose(rng).unwrap().to_string());
        a
    });
    let actor2 = rng.gen_bool(0.8).then(|| {
        let code = ACTOR2_CODES.choose(rng).unwrap().to_string();
        let mut a = random_actor(rng, code.clone());
        if code == "SYRREF" {
            a.type_codes = vec!["REF".into()];
        }
        a
    });
    EventRecord {
        global_event_id: id,
        day: on,
        actor1,
        actor2,
        is_root_event: rng.gen_bool(0.5),
        event_base_code: event_code.clone(),
        event_code,
        event_root_code: root.to_string(),
        quad_class: rng.gen_range(1..=4),
        goldstein_scale: f64::from(rng.gen_range(-100..=100)) / 10.0,
        num_mentions: rng.gen_range(0..50),
        num_sources: rng.gen_range(0..20),
        num_articles: rng.gen_range(0..50),
        avg_tone: rng.gen_range(-15.0..8.0),
        action_geo: rng.gen_bool(0.7).then(|| GeoPoint {
            latitude: rng.gen_range(-90.0..=90.0),
            longitude: rng.gen_range(-180.0..=180.0),
            country_code: rng.gen_bool(0.9).then(|| word(rng, 2)),
            full_name: rng.gen_bool(0.9).then(|| format!("{}, {}", word(rng, 5), word(rng, 4))),
        }),
        date_added: timestamp_in(rng, on),
        source_url: format!("https://news.example/{}/{id}", word(rng, 4).to_lowercase()),
    }
}

pub fn random_mention(rng: &mut TestRng, event_id: i64, identifier: String, on: NaiveDate) -> MentionRecord {
    MentionRecord {
        global_event_id: event_id,
        event_time: timestamp_in(rng, on),
        mention_time: timestamp_in(rng, on),
        mention_type: rng.gen_range(1..=6),
        mention_source_name: format!("{}.example", word(rng, 5).to_lowercase()),
        mention_identifier: identifier,
        sentence_id: rng.gen_range(1..40),
        confidence: rng.gen_range(0..=100),
        mention_doc_tone: rng.gen_range(-20.0..10.0),
    }
}

fn random_themes(rng: &mut TestRng) -> Vec<ThemeHit> {
    let n = rng.gen_range(0..5);
    (0..n)
        .map(|_| {
            let theme = match rng.gen_range(0..10) {
                0..=2 => GKG_THEMES_REF.choose(rng).unwrap().to_string(),
                3 => format!("{GKG_THEMES_REF_PREFIX}_{}", word(rng, 5)),
                _ => NOISE_THEMES.choose(rng).unwrap().to_string(),
            };
            ThemeHit::new(theme, rng.gen_range(0..5000))
        })
        .collect()
}

pub fn random_gkg(rng: &mut TestRng, record_id: String, identifier: String, on: NaiveDate) -> GkgRecord {
    GkgRecord {
        gkg_record_id: record_id,
        date: timestamp_in(rng, on),
        document_identifier: identifier,
        themes: random_themes(rng),
        v2_tone: rng.gen_bool(0.9).then(|| ToneTuple {
            tone: rng.gen_range(-10.0..10.0),
            positive: rng.gen_range(0.0..10.0),
            negative: rng.gen_range(0.0..10.0),
            polarity: rng.gen_range(0.0..20.0),
        }),
        locations_raw: format!("1#{}#SP#SP##40#-4#SP#{}", word(rng, 5), rng.gen_range(0..900)),
        gcam_raw: format!("wc:{},c1.1:{}", rng.gen_range(10..900), rng.gen_range(0..9)),
    }
}

/// A random store-shaped data set: events spread over a date range,
/// mentions mostly pointing at those events (a few orphans), and GKG
/// documents mostly matching mention identifiers.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub events: Vec<EventRecord>,
    pub mentions: Vec<MentionRecord>,
    pub gkg: Vec<GkgRecord>,
}

impl Corpus {
    pub fn generate(seed: u64, events: usize, mentions: usize, gkg: usize, from: NaiveDate, days: u64) -> Corpus {
        let mut rng = rng(seed);
        let events: Vec<EventRecord> = (0..events)
            .map(|i| {
                let on = from + Days::new(rng.gen_range(0..days.max(1)));
                random_event(&mut rng, 1_000_000 + i as i64, on)
            })
            .collect();

        let doc_pool = (mentions / 2).max(1);
        let mut mention_rows = Vec::with_capacity(mentions);
        for _ in 0..mentions {
            let (event_id, on) = if rng.gen_bool(0.97) && !events.is_empty() {
                let e = events.choose(&mut rng).unwrap();
                (e.global_event_id, e.day)
            } else {
                (9_000_000 + rng.gen_range(0..1000), from)
            };
            let identifier = format!("https://doc.example/{}", rng.gen_range(0..doc_pool));
            mention_rows.push(random_mention(&mut rng, event_id, identifier, on));
        }

        let gkg_rows = (0..gkg)
            .map(|i| {
                let identifier = if rng.gen_bool(0.9) {
                    format!("https://doc.example/{}", rng.gen_range(0..doc_pool))
                } else {
                    format!("https://unlinked.example/{i}")
                };
                random_gkg(&mut rng, format!("{}-{i}", from.format("%Y%m%d")), identifier, from)
            })
            .collect();

        Corpus {
            events,
            mentions: mention_rows,
            gkg: gkg_rows,
        }
    }

    pub fn load_into(&self, store: &Store) -> crate::store::Result<[UpsertCounts; 3]> {
        Ok([
            store.upsert_events(&self.events)?,
            store.upsert_mentions(&self.mentions)?,
            store.upsert_gkg(&self.gkg)?,
        ])
    }
}

/// Zip `body` as the single member `name`.
pub fn zip_single(name: &str, body: &[u8]) -> Vec<u8> {
    let mut out = std::io::Cursor::new(Vec::new());
    {
        let mut w = zip::ZipWriter::new(&mut out);
        w.start_file(name, zip::write::SimpleFileOptions::default())
            .expect("zip entry");
        w.write_all(body).expect("zip write");
        w.finish().expect("zip finish");
    }
    out.into_inner()
}

/// Render records as tab-delimited lines with a trailing newline each.
pub fn render_lines<T>(records: &[T], render: impl Fn(&T) -> String) -> String {
    records.iter().map(|r| render(r) + "\n").collect()
}

fn refugee_event(rng: &mut TestRng, id: i64, on: NaiveDate, actor1_country: &str, root: &str) -> EventRecord {
    let mut e = random_event(rng, id, on);
    e.actor1 = Some(actor(&format!("{actor1_country}GOV"), Some(actor1_country)));
    e.actor2 = Some(actor("REF", None));
    e.event_root_code = root.to_string();
    e.event_code = format!("{root}0");
    e.event_base_code = e.event_code.clone();
    e
}

/// March 2015 to March 2016 refugee events with a September 2015 surge,
/// plus unrelated events, each with one or two mentions.
pub fn kurdi_fixture(seed: u64) -> Corpus {
    let mut rng = rng(seed);
    let mut corpus = Corpus::default();
    let mut id = 100_000;
    let mut month = day("2015-03-01");
    while month <= day("2016-03-01") {
        let per_month = if month == day("2015-09-01") { 60 } else { rng.gen_range(8..20) };
        for _ in 0..per_month {
            let on = month + Days::new(rng.gen_range(0..28));
            let country = *COUNTRIES.choose(&mut rng).unwrap();
            let root = *ROOTS.choose(&mut rng).unwrap();
            let mut event = refugee_event(&mut rng, id, on, country, root);
            if rng.gen_bool(0.3) {
                event.actor2 = Some(actor("GOV", Some("TUR")));
            }
            for m in 0..rng.gen_range(1..=2) {
                let identifier = format!("https://news.example/kurdi/{id}/{m}");
                corpus.mentions.push(random_mention(&mut rng, id, identifier, on));
            }
            corpus.events.push(event);
            id += 1;
        }
        month = month + chrono::Months::new(1);
    }
    corpus
}

/// March 2021 refugee events tagged with the discrimination themes,
/// weighted ESP > USA > ITA by Actor1 country, plus decoys that fail the
/// theme clause.
pub fn march2021_fixture(seed: u64) -> Corpus {
    let mut rng = rng(seed);
    let mut corpus = Corpus::default();
    let mut id = 500_000;
    let weights = [("ESP", 30), ("USA", 20), ("ITA", 12), ("GRC", 6), ("DEU", 4)];
    for (country, n) in weights {
        for _ in 0..n {
            let on = day("2021-03-01") + Days::new(rng.gen_range(0..31));
            let root = *ROOTS.choose(&mut rng).unwrap();
            corpus.events.push(refugee_event(&mut rng, id, on, country, root));
            let identifier = format!("https://news.example/mar21/{id}");
            corpus.mentions.push(random_mention(&mut rng, id, identifier.clone(), on));
            let theme = *GKG_THEMES_REF.choose(&mut rng).unwrap();
            corpus
                .gkg
                .push(document(&format!("20210301000000-{id}"), &identifier, &[theme, "TAX_ETHNICITY"], midnight(on)));
            id += 1;
        }
    }
    // Decoys: plenty of USA events without a discrimination theme.
    for _ in 0..40 {
        let on = day("2021-03-01") + Days::new(rng.gen_range(0..31));
        corpus.events.push(refugee_event(&mut rng, id, on, "USA", "01"));
        let identifier = format!("https://news.example/mar21/{id}");
        corpus.mentions.push(random_mention(&mut rng, id, identifier.clone(), on));
        corpus
            .gkg
            .push(document(&format!("20210301000000-{id}"), &identifier, &["REFUGEES"], midnight(on)));
        id += 1;
    }
    corpus
}

/// Break a well-formed row in one of several ways so that every parser
/// must reject it.
pub fn corrupt_line(rng: &mut TestRng, line: &str) -> String {
    let mut cells: Vec<&str> = line.split('\t').collect();
    match rng.gen_range(0..4) {
        0 => cells.truncate(3),
        1 => cells.push("extra"),
        2 => cells[1] = "notadate",
        _ => return String::new(),
    }
    cells.join("\t")
}

/// Join rendered rows into a file body, corrupting roughly `ratio` of them.
/// Returns the body and the number of corrupted lines.
pub fn with_malformed(rng: &mut TestRng, lines: &[String], ratio: f64) -> (String, usize) {
    let mut body = String::new();
    let mut bad = 0;
    for line in lines {
        if rng.gen_bool(ratio) {
            body.push_str(&corrupt_line(rng, line));
            bad += 1;
        } else {
            body.push_str(line);
        }
        body.push('\n');
    }
    (body, bad)
}

/// The fixed data set behind the API golden files: the March 2021 fixture
/// plus 50 random events with their mentions and documents in the same
/// month.
pub fn frozen_corpus() -> Corpus {
    let mut corpus = march2021_fixture(7);
    let extra = Corpus::generate(42, 50, 150, 100, day("2021-03-01"), 31);
    corpus.events.extend(extra.events);
    corpus.mentions.extend(extra.mentions);
    corpus.gkg.extend(extra.gkg);
    corpus
}
