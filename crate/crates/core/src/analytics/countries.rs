use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::AnalyticsError;
use crate::cameo::CameoTables;
use crate::formats::{ActorSlot, EventRecord};
use crate::store::EventWithContext;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountryCount {
    pub country_code: String,
    pub count: u64,
}

/// Country codes by event count, descending; ties in code order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountryFrequency {
    pub which: ActorSlot,
    pub entries: Vec<CountryCount>,
}

fn country_of(event: &EventRecord, which: ActorSlot) -> Option<&str> {
    event
        .actor(which)
        .and_then(|a| a.country_code.as_deref())
        .map(str::trim)
        .filter(|c| !c.is_empty())
}

fn count_countries<'a>(
    contexts: impl Iterator<Item = &'a EventWithContext>,
    which: ActorSlot,
) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    for ctx in contexts {
        if let Some(code) = country_of(&ctx.event, which) {
            *counts.entry(code.to_string()).or_default() += 1;
        }
    }
    counts
}

/// The `n` most frequent country codes of the chosen actor. Events without
/// a country code for that actor are left out.
pub fn top_country_frequencies(
    contexts: &[EventWithContext],
    n: usize,
    which: ActorSlot,
) -> Result<CountryFrequency, AnalyticsError> {
    if n == 0 {
        return Err(AnalyticsError::InvalidParameter("n must be at least 1".into()));
    }
    let mut entries: Vec<CountryCount> = count_countries(contexts.iter(), which)
        .into_iter()
        .map(|(country_code, count)| CountryCount { country_code, count })
        .collect();
    // The map iterates in code order and the sort is stable.
    entries.sort_by(|a, b| b.count.cmp(&a.count));
    entries.truncate(n);
    Ok(CountryFrequency { which, entries })
}

/// Event root codes to keep. An empty selection means all roots.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootFilter {
    #[default]
    All,
    Only(BTreeSet<String>),
}

impl RootFilter {
    pub fn from_codes<I, S>(codes: I) -> RootFilter
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = codes
            .into_iter()
            .map(Into::into)
            .map(|c| c.trim().to_string())
            .filter(|c| !c.is_empty())
            .collect();
        if set.is_empty() {
            RootFilter::All
        } else {
            RootFilter::Only(set)
        }
    }

    /// Parse a comma-separated list such as `01,14`.
    pub fn parse(raw: &str) -> RootFilter {
        RootFilter::from_codes(raw.split(','))
    }

    pub fn admits(&self, root_code: &str) -> bool {
        match self {
            RootFilter::All => true,
            RootFilter::Only(set) => set.contains(root_code),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tooltip {
    pub country_name: Option<String>,
    pub iso_alpha3: Option<String>,
    pub count: u64,
}

/// Per-country event counts for a choropleth, with tooltip labels and the
/// descriptions of the selected root codes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoroplethCounts {
    pub which: ActorSlot,
    pub roots: RootFilter,
    /// Description of each selected root code (unknown codes map to `null`).
    pub root_descriptions: BTreeMap<String, Option<String>>,
    pub counts: BTreeMap<String, u64>,
    pub tooltips: BTreeMap<String, Tooltip>,
    pub total: u64,
}

pub fn choropleth_counts(
    contexts: &[EventWithContext],
    roots: &RootFilter,
    which: ActorSlot,
    cameo: &CameoTables,
) -> ChoroplethCounts {
    let counts = count_countries(
        contexts.iter().filter(|c| roots.admits(&c.event.event_root_code)),
        which,
    );
    let tooltips = counts
        .iter()
        .map(|(code, &count)| {
            let info = cameo.country(code);
            (
                code.clone(),
                Tooltip {
                    country_name: info.map(|i| i.name.clone()),
                    iso_alpha3: info.and_then(|i| i.iso_alpha3.clone()),
                    count,
                },
            )
        })
        .collect();
    let root_descriptions = match roots {
        RootFilter::All => cameo
            .event_roots()
            .map(|(c, d)| (c.to_string(), Some(d.to_string())))
            .collect(),
        RootFilter::Only(set) => set
            .iter()
            .map(|c| (c.clone(), cameo.describe_event_root(c).map(str::to_string)))
            .collect(),
    };
    ChoroplethCounts {
        which,
        roots: roots.clone(),
        root_descriptions,
        total: counts.values().sum(),
        counts,
        tooltips,
    }
}
