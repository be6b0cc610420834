//! Canned replays of the two monitoring case studies over a store.
//!
//! `kurdi` covers March 2015 to March 2016 with the refugee-actor criteria
//! (volume and tone around the September 2015 surge). `march2021` covers
//! March 2021 with the discrimination-theme criteria (country frequencies and
//! the root-code choropleth).

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::analytics::{
    article_count_timeline, choropleth_counts, detect_spikes, tone_stats, top_country_frequencies, AnalyticsError,
    CountUnit, Granularity, RootFilter, SpikeReport, TimelinePoint, ToCsv, DEFAULT_SPIKE_K, DEFAULT_SPIKE_WINDOW,
};
use crate::cameo::CameoTables;
use crate::formats::ActorSlot;
use crate::query::{criteria1, criteria2, DateRange, QueryCriteria, ThemeMode};
use crate::store::{EventWithContext, Store, StoreError};

pub const TOP_COUNTRIES: usize = 20;

#[derive(Debug, thiserror::Error)]
pub enum CaseStudyError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
    #[error("writing {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("unknown case study {0:?} (expected kurdi or march2021)")]
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseStudy {
    Kurdi,
    March2021,
}

impl CaseStudy {
    pub const ALL: [CaseStudy; 2] = [CaseStudy::Kurdi, CaseStudy::March2021];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseStudy::Kurdi => "kurdi",
            CaseStudy::March2021 => "march2021",
        }
    }

    pub fn date_range(self) -> DateRange {
        let (from, to) = match self {
            CaseStudy::Kurdi => ("2015-03-01", "2016-03-31"),
            CaseStudy::March2021 => ("2021-03-01", "2021-03-31"),
        };
        DateRange::parse(from, to).expect("static range")
    }

    pub fn criteria(self) -> QueryCriteria {
        match self {
            CaseStudy::Kurdi => criteria1(self.date_range()),
            CaseStudy::March2021 => criteria2(self.date_range(), ThemeMode::ExactSet),
        }
    }
}

impl fmt::Display for CaseStudy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseStudy {
    type Err = CaseStudyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "kurdi" => Ok(CaseStudy::Kurdi),
            "march2021" => Ok(CaseStudy::March2021),
            other => Err(CaseStudyError::Unknown(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplaySummary {
    pub case_study: CaseStudy,
    pub criteria: String,
    pub date_range: DateRange,
    pub events: usize,
    pub unit: CountUnit,
    /// Busiest monthly bucket, absent when nothing matched.
    pub peak_month: Option<TimelinePoint>,
    pub spikes_flagged: usize,
    pub files: Vec<String>,
}

struct Output<'a> {
    dir: &'a Path,
    files: Vec<String>,
}

impl Output<'_> {
    fn write(&mut self, name: &str, body: &str) -> Result<(), CaseStudyError> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|source| CaseStudyError::Io { path, source })?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn chart<T: Serialize + ToCsv>(&mut self, stem: &str, value: &T) -> Result<(), CaseStudyError> {
        self.write(&format!("{stem}.json"), &to_json(value))?;
        self.write(&format!("{stem}.csv"), &value.to_csv())
    }
}

/// Pretty JSON with a trailing newline; stable for identical inputs.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("aggregates serialize");
    s.push('\n');
    s
}

fn daily_spikes(contexts: &[EventWithContext], range: &DateRange, unit: CountUnit) -> Result<SpikeReport, AnalyticsError> {
    let daily = article_count_timeline(contexts, range, Granularity::Day, unit);
    detect_spikes(&daily, DEFAULT_SPIKE_WINDOW, DEFAULT_SPIKE_K)
}

/// Run `case` over `store`, writing every chart as JSON and CSV into `out`
/// (created if missing), followed by `summary.json`.
pub fn replay(store: &Store, case: CaseStudy, out: &Path, cameo: &CameoTables) -> Result<ReplaySummary, CaseStudyError> {
    fs::create_dir_all(out).map_err(|source| CaseStudyError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let criteria = case.criteria();
    let range = criteria.date_range;
    let contexts = store.scan(&criteria)?;
    let unit = CountUnit::default_for(&contexts);
    let mut output = Output { dir: out, files: Vec::new() };

    let monthly = article_count_timeline(&contexts, &range, Granularity::Month, unit);
    output.chart("timeline", &monthly)?;
    let spikes = daily_spikes(&contexts, &range, unit)?;
    output.chart("spikes", &spikes)?;

    match case {
        CaseStudy::Kurdi => {
            output.chart("timeline_daily", &article_count_timeline(&contexts, &range, Granularity::Day, unit))?;
            output.chart("tone", &tone_stats(&contexts, Granularity::Month))?;
            output.chart("tone_daily", &tone_stats(&contexts, Granularity::Day))?;
        }
        CaseStudy::March2021 => {
            output.chart("timeline_daily", &article_count_timeline(&contexts, &range, Granularity::Day, unit))?;
            output.chart("tone", &tone_stats(&contexts, Granularity::Day))?;
            output.chart("countries", &top_country_frequencies(&contexts, TOP_COUNTRIES, ActorSlot::Actor1)?)?;
            output.chart(
                "countries_actor2",
                &top_country_frequencies(&contexts, TOP_COUNTRIES, ActorSlot::Actor2)?,
            )?;
            output.chart(
                "choropleth",
                &choropleth_counts(&contexts, &RootFilter::All, ActorSlot::Actor1, cameo),
            )?;
        }
    }

    let peak_month = monthly.peak().filter(|p| p.count > 0);
    let mut summary = ReplaySummary {
        case_study: case,
        criteria: criteria.to_query_string(),
        date_range: range,
        events: contexts.len(),
        unit,
        peak_month,
        spikes_flagged: spikes.flagged.len(),
        files: output.files.clone(),
    };
    summary.files.push("summary.json".into());
    output.write("summary.json", &to_json(&summary))?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for case in CaseStudy::ALL {
            assert_eq!(case.as_str().parse::<CaseStudy>().unwrap(), case);
        }
        assert!("kobani".parse::<CaseStudy>().is_err());
    }

    #[test]
    fn march2021_uses_the_theme_clause() {
        assert!(CaseStudy::March2021.criteria().themes.is_some());
        assert!(CaseStudy::Kurdi.criteria().themes.is_none());
    }

    #[test]
    fn empty_store_writes_valid_outputs() {
        let store = Store::open_in_memory().unwrap();
        let dir = tempfile::tempdir().unwrap();
        for case in CaseStudy::ALL {
            let out = dir.path().join(case.as_str());
            let summary = replay(&store, case, &out, CameoTables::bundled()).unwrap();
            assert_eq!(summary.events, 0);
            assert!(summary.peak_month.is_none());
            for f in &summary.files {
                let body = fs::read_to_string(out.join(f)).unwrap();
                if f.ends_with(".json") {
                    serde_json::from_str::<serde_json::Value>(&body).unwrap();
                }
            }
        }
    }
}
