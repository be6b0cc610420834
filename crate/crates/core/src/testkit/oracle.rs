//! Brute-force reference implementations, written independently of the
//! store, query and analytics code they check.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{Datelike, NaiveDate};

use super::Corpus;
use crate::cameo::RefugeeMode;
use crate::formats::{EventRecord, GkgRecord, MentionRecord};
use crate::query::{QueryCriteria, ThemeMode};
use crate::store::EventWithContext;

/// The corpus as it would look after upserting it in order: the last row per
/// key wins, except that an event is only replaced by a row added no earlier.
pub struct Tables {
    pub events: BTreeMap<i64, EventRecord>,
    pub mentions: BTreeMap<(i64, String), MentionRecord>,
    pub gkg: BTreeMap<String, GkgRecord>,
}

impl Tables {
    pub fn from_corpus(corpus: &Corpus) -> Tables {
        let mut events: BTreeMap<i64, EventRecord> = BTreeMap::new();
        for e in &corpus.events {
            let replace = events.get(&e.global_event_id).map_or(true, |old| e.date_added >= old.date_added);
            if replace {
                events.insert(e.global_event_id, e.clone());
            }
        }
        let mentions = corpus
            .mentions
            .iter()
            .map(|m| ((m.global_event_id, m.mention_identifier.clone()), m.clone()))
            .collect();
        let gkg = corpus.gkg.iter().map(|g| (g.gkg_record_id.clone(), g.clone())).collect();
        Tables { events, mentions, gkg }
    }

    pub fn join(&self, global_event_id: i64) -> Option<EventWithContext> {
        let event = self.events.get(&global_event_id)?.clone();
        let mut mentions: Vec<MentionRecord> = self
            .mentions
            .values()
            .filter(|m| m.global_event_id == global_event_id)
            .cloned()
            .collect();
        mentions.sort_by(|a, b| a.mention_identifier.cmp(&b.mention_identifier));
        let mut documents: Vec<GkgRecord> = self
            .gkg
            .values()
            .filter(|g| mentions.iter().any(|m| m.mention_identifier == g.document_identifier))
            .cloned()
            .collect();
        documents.sort_by(|a, b| a.gkg_record_id.cmp(&b.gkg_record_id));
        Some(EventWithContext {
            event,
            mentions,
            documents,
        })
    }

    /// Every event joined, grouping mentions and documents in one pass.
    pub fn all_contexts(&self) -> Vec<EventWithContext> {
        let mut by_event: BTreeMap<i64, Vec<MentionRecord>> = BTreeMap::new();
        for ((id, _), m) in &self.mentions {
            by_event.entry(*id).or_default().push(m.clone());
        }
        let mut by_doc: BTreeMap<&str, Vec<&GkgRecord>> = BTreeMap::new();
        for g in self.gkg.values() {
            by_doc.entry(&g.document_identifier).or_default().push(g);
        }
        self.events
            .values()
            .map(|event| {
                let mentions = by_event.remove(&event.global_event_id).unwrap_or_default();
                let ids: BTreeSet<&str> = mentions.iter().map(|m| m.mention_identifier.as_str()).collect();
                let mut documents: Vec<GkgRecord> = ids
                    .iter()
                    .flat_map(|id| by_doc.get(id).into_iter().flatten())
                    .map(|g| (*g).clone())
                    .collect();
                documents.sort_by(|a, b| a.gkg_record_id.cmp(&b.gkg_record_id));
                EventWithContext {
                    event: event.clone(),
                    mentions,
                    documents,
                }
            })
            .collect()
    }

    pub fn filter(&self, criteria: &QueryCriteria) -> Vec<EventWithContext> {
        let mut out: Vec<EventWithContext> = self
            .all_contexts()
            .into_iter()
            .filter(|ctx| predicate(criteria, ctx))
            .collect();
        out.sort_by_key(|c| (c.event.day, c.event.global_event_id));
        out
    }
}

pub fn predicate(c: &QueryCriteria, ctx: &EventWithContext) -> bool {
    let e = &ctx.event;
    let day_ok = e.day >= c.date_range.start() && e.day <= c.date_range.end();
    let refugee_ok = !c.actor2_refugee
        || match &e.actor2 {
            None => false,
            Some(a) => {
                a.code == "REF"
                    || (c.refugee_mode == RefugeeMode::ContainsType && a.type_codes.iter().any(|t| t == "REF"))
            }
        };
    let theme_ok = match &c.themes {
        None => true,
        Some(m) => ctx.documents.iter().any(|d| {
            d.themes.iter().any(|h| match m.mode() {
                ThemeMode::ExactSet => m.tokens().iter().any(|t| *t == h.theme),
                ThemeMode::Prefix => m.tokens().iter().any(|t| h.theme.len() >= t.len() && h.theme[..t.len()] == **t),
            })
        }),
    };
    let root_ok = c.event_root_codes.as_ref().map_or(true, |s| s.contains(&e.event_root_code));
    let country_ok = c.actor1_country.as_ref().map_or(true, |s| {
        e.actor1
            .as_ref()
            .and_then(|a| a.country_code.clone())
            .is_some_and(|cc| s.contains(&cc))
    });
    day_ok && refugee_ok && theme_ok && root_ok && country_ok
}

pub fn month_start(d: NaiveDate) -> NaiveDate {
    NaiveDate::from_ymd_opt(d.year(), d.month(), 1).unwrap()
}

/// Events per bucket, keyed by `bucket(day)`.
pub fn count_events(contexts: &[EventWithContext], bucket: impl Fn(NaiveDate) -> NaiveDate) -> BTreeMap<NaiveDate, u64> {
    let mut out = BTreeMap::new();
    for c in contexts {
        *out.entry(bucket(c.event.day)).or_insert(0) += 1;
    }
    out
}

/// Distinct mention identifiers per bucket.
pub fn count_articles(contexts: &[EventWithContext], bucket: impl Fn(NaiveDate) -> NaiveDate) -> BTreeMap<NaiveDate, u64> {
    let mut sets: BTreeMap<NaiveDate, BTreeSet<&str>> = BTreeMap::new();
    for c in contexts {
        let set = sets.entry(bucket(c.event.day)).or_default();
        for m in &c.mentions {
            set.insert(&m.mention_identifier);
        }
    }
    sets.into_iter().map(|(k, v)| (k, v.len() as u64)).collect()
}

/// (min, median, max) by full sort.
pub fn sorted_stats(values: &[f64]) -> (f64, f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    let median = if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 };
    (v[0], median, v[n - 1])
}

/// Country code → event count for the chosen actor, ignoring blanks.
pub fn group_by_country(contexts: &[EventWithContext], actor2: bool, roots: Option<&BTreeSet<String>>) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    for c in contexts {
        if roots.is_some_and(|r| !r.contains(&c.event.event_root_code)) {
            continue;
        }
        let actor = if actor2 { &c.event.actor2 } else { &c.event.actor1 };
        if let Some(cc) = actor.as_ref().and_then(|a| a.country_code.as_deref()) {
            if !cc.trim().is_empty() {
                *out.entry(cc.to_string()).or_insert(0) += 1;
            }
        }
    }
    out
}

/// Top `n` of a group-by, count descending then code ascending.
pub fn top_n(counts: &BTreeMap<String, u64>, n: usize) -> Vec<(String, u64)> {
    let mut v: Vec<(String, u64)> = counts.iter().map(|(k, v)| (k.clone(), *v)).collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v.truncate(n);
    v
}

/// z-score of `values[i]` against the `window` values before it, using the
/// population standard deviation.
pub fn z_score(values: &[f64], i: usize, window: usize) -> Option<f64> {
    let base = &values[i - window..i];
    let mean = base.iter().sum::<f64>() / window as f64;
    let std = (base.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / window as f64).sqrt();
    (std > 0.0).then(|| (values[i] - mean) / std)
}
