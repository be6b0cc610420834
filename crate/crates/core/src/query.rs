//! Event selection criteria.
//!
//! Two presets mirror the refugee data sets:
//!
//! * [`criteria1`]: events whose `Actor2Code` is `REF`;
//! * [`criteria2`]: the same, restricted to events with at least one linked
//!   GKG document carrying a refugee-discrimination theme.
//!
//! Further clauses (event root codes, Actor1 countries) compose by
//! conjunction. Criteria have a JSON form (serde) and a query-string form
//! used by the HTTP API and the CLI.

use std::collections::BTreeSet;
use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::cameo::{is_refugee_actor, RefugeeMode};
use crate::store::EventWithContext;

/// The eight refugee-discrimination GKG themes of the second data set.
pub const GKG_THEMES_REF: [&str; 8] = [
    "DISCRIMINATION_IMMIGRATION_XENOPHOBIA",
    "DISCRIMINATION_IMMIGRATION_ANTIIMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_OPPOSED_TO_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_AGAINST_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_ATTACKS_ON_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_ATTACKS_AGAINST_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_XENOPHOBE",
    "DISCRIMINATION_IMMIGRATION_XENOPHOBES",
];

/// Shared prefix of [`GKG_THEMES_REF`], used by [`ThemeMode::Prefix`].
pub const GKG_THEMES_REF_PREFIX: &str = "DISCRIMINATION_IMMIGRATION";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CriteriaError {
    #[error("missing required parameter `{0}`")]
    Missing(&'static str),
    #[error("`{field}`: {value:?} is not a YYYY-MM-DD date")]
    InvalidDate { field: &'static str, value: String },
    #[error("date range start {start} is after end {end}")]
    InvertedRange { start: NaiveDate, end: NaiveDate },
    #[error("{0}")]
    Invalid(String),
}

impl CriteriaError {
    /// Whether the error concerns the date range rather than the criteria shape.
    pub fn is_date_error(&self) -> bool {
        matches!(self, CriteriaError::InvalidDate { .. } | CriteriaError::InvertedRange { .. })
    }
}

/// Inclusive calendar date range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDateRange")]
pub struct DateRange {
    start: NaiveDate,
    end: NaiveDate,
}

#[derive(Deserialize)]
struct RawDateRange {
    start: NaiveDate,
    end: NaiveDate,
}

impl TryFrom<RawDateRange> for DateRange {
    type Error = CriteriaError;

    fn try_from(raw: RawDateRange) -> Result<Self, Self::Error> {
        DateRange::new(raw.start, raw.end)
    }
}

impl DateRange {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Result<Self, CriteriaError> {
        if start > end {
            return Err(CriteriaError::InvertedRange { start, end });
        }
        Ok(Self { start, end })
    }

    pub fn parse(start: &str, end: &str) -> Result<Self, CriteriaError> {
        DateRange::new(parse_date("from", start)?, parse_date("to", end)?)
    }

    pub fn start(&self) -> NaiveDate {
        self.start
    }

    pub fn end(&self) -> NaiveDate {
        self.end
    }

    pub fn contains(&self, day: NaiveDate) -> bool {
        self.start <= day && day <= self.end
    }
}

impl fmt::Display for DateRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..={}", self.start, self.end)
    }
}

pub fn parse_date(field: &'static str, value: &str) -> Result<NaiveDate, CriteriaError> {
    NaiveDate::parse_from_str(value.trim(), "%Y-%m-%d").map_err(|_| CriteriaError::InvalidDate {
        field,
        value: value.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThemeMode {
    /// Token equality against the set.
    #[default]
    ExactSet,
    /// The theme starts with one of the tokens.
    Prefix,
}

impl ThemeMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ThemeMode::ExactSet => "exact",
            ThemeMode::Prefix => "prefix",
        }
    }
}

impl std::str::FromStr for ThemeMode {
    type Err = CriteriaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" | "exact-set" => Ok(ThemeMode::ExactSet),
            "prefix" => Ok(ThemeMode::Prefix),
            other => Err(CriteriaError::Invalid(format!(
                "unknown theme mode {other:?} (expected exact or prefix)"
            ))),
        }
    }
}

/// Matches GKG `V2Themes` tokens. Case-sensitive; never matches inside a token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawThemeMatcher")]
pub struct ThemeMatcher {
    mode: ThemeMode,
    tokens: BTreeSet<String>,
}

#[derive(Deserialize)]
struct RawThemeMatcher {
    mode: ThemeMode,
    tokens: BTreeSet<String>,
}

impl TryFrom<RawThemeMatcher> for ThemeMatcher {
    type Error = CriteriaError;

    fn try_from(raw: RawThemeMatcher) -> Result<Self, Self::Error> {
        ThemeMatcher::new(raw.mode, raw.tokens)
    }
}

impl ThemeMatcher {
    pub fn new<I, S>(mode: ThemeMode, tokens: I) -> Result<Self, CriteriaError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: BTreeSet<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return Err(CriteriaError::Invalid("theme matcher needs at least one token".into()));
        }
        if let Some(bad) = tokens
            .iter()
            .find(|t| t.is_empty() || t.chars().any(|c| c.is_lowercase() || c == ',' || c == ';'))
        {
            return Err(CriteriaError::Invalid(format!(
                "theme token {bad:?} must be non-empty uppercase without ',' or ';'"
            )));
        }
        Ok(Self { mode, tokens })
    }

    /// The eight refugee themes, or their common prefix in prefix mode.
    pub fn gkg_themes_ref(mode: ThemeMode) -> Self {
        let tokens: Vec<&str> = match mode {
            ThemeMode::ExactSet => GKG_THEMES_REF.to_vec(),
            ThemeMode::Prefix => vec![GKG_THEMES_REF_PREFIX],
        };
        ThemeMatcher::new(mode, tokens).expect("static theme list is valid")
    }

    pub fn mode(&self) -> ThemeMode {
        self.mode
    }

    pub fn tokens(&self) -> &BTreeSet<String> {
        &self.tokens
    }

    pub fn matches_theme(&self, theme: &str) -> bool {
        match self.mode {
            ThemeMode::ExactSet => self.tokens.contains(theme),
            ThemeMode::Prefix => self.tokens.iter().any(|t| theme.starts_with(t.as_str())),
        }
    }
}

/// A conjunction of clauses over an event and its linked mentions/documents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryCriteria {
    /// Require Actor2 to be a refugee actor.
    pub actor2_refugee: bool,
    #[serde(default)]
    pub refugee_mode: RefugeeMode,
    /// Require some linked document to carry a matching theme.
    #[serde(default)]
    pub themes: Option<ThemeMatcher>,
    /// Inclusive, on the event day.
    pub date_range: DateRange,
    /// Restrict to these 2-character event root codes.
    #[serde(default)]
    pub event_root_codes: Option<BTreeSet<String>>,
    /// Restrict to these Actor1 country codes.
    #[serde(default)]
    pub actor1_country: Option<BTreeSet<String>>,
}

/// Events whose Actor2 code is `REF`.
pub fn criteria1(date_range: DateRange) -> QueryCriteria {
    QueryCriteria {
        actor2_refugee: true,
        refugee_mode: RefugeeMode::Exact,
        themes: None,
        date_range,
        event_root_codes: None,
        actor1_country: None,
    }
}

/// [`criteria1`] plus the refugee-discrimination theme clause.
pub fn criteria2(date_range: DateRange, theme_mode: ThemeMode) -> QueryCriteria {
    QueryCriteria {
        themes: Some(ThemeMatcher::gkg_themes_ref(theme_mode)),
        ..criteria1(date_range)
    }
}

/// Evaluate every present clause of `criteria` against one joined event.
pub fn matches(criteria: &QueryCriteria, ctx: &EventWithContext) -> bool {
    let event = &ctx.event;
    if !criteria.date_range.contains(event.day) {
        return false;
    }
    if criteria.actor2_refugee && !is_refugee_actor(event.actor2.as_ref(), criteria.refugee_mode) {
        return false;
    }
    if let Some(roots) = &criteria.event_root_codes {
        if !roots.contains(&event.event_root_code) {
            return false;
        }
    }
    if let Some(countries) = &criteria.actor1_country {
        let code = event.actor1.as_ref().and_then(|a| a.country_code.as_ref());
        if !code.is_some_and(|c| countries.contains(c)) {
            return false;
        }
    }
    if let Some(matcher) = &criteria.themes {
        let any_theme = ctx
            .documents
            .iter()
            .any(|doc| doc.themes.iter().any(|hit| matcher.matches_theme(&hit.theme)));
        if !any_theme {
            return false;
        }
    }
    true
}

/// Parse the JSON form, reporting date-range problems as date errors.
fn criteria_from_json(json: &str) -> Result<QueryCriteria, CriteriaError> {
    let value: serde_json::Value =
        serde_json::from_str(json).map_err(|e| CriteriaError::Invalid(format!("invalid criteria JSON: {e}")))?;
    let range = &value["date_range"];
    if let (Some(start), Some(end)) = (range["start"].as_str(), range["end"].as_str()) {
        DateRange::new(parse_date("date_range.start", start)?, parse_date("date_range.end", end)?)?;
    }
    serde_json::from_value(value).map_err(|e| CriteriaError::Invalid(format!("invalid criteria JSON: {e}")))
}

fn code_set(raw: &str, field: &str, len: usize) -> Result<Option<BTreeSet<String>>, CriteriaError> {
    let set: BTreeSet<String> = raw
        .split(',')
        .map(str::trim)
        .filter(|c| !c.is_empty())
        .map(str::to_string)
        .collect();
    if let Some(bad) = set.iter().find(|c| c.chars().count() != len) {
        return Err(CriteriaError::Invalid(format!("{field}: {bad:?} is not a {len}-character code")));
    }
    Ok((!set.is_empty()).then_some(set))
}

fn join(set: &BTreeSet<String>) -> String {
    set.iter().map(String::as_str).collect::<Vec<_>>().join(",")
}

/// Query-string keys understood by [`QueryCriteria::from_query_pairs`].
pub const QUERY_KEYS: [&str; 9] = [
    "criteria",
    "from",
    "to",
    "actor2_refugee",
    "refugee_mode",
    "theme_mode",
    "themes",
    "event_roots",
    "actor1_country",
];

impl QueryCriteria {
    /// Explicit, lossless query-string pairs (no presets).
    pub fn to_query_pairs(&self) -> Vec<(&'static str, String)> {
        let mut pairs = vec![
            ("from", self.date_range.start.to_string()),
            ("to", self.date_range.end.to_string()),
            ("actor2_refugee", self.actor2_refugee.to_string()),
            ("refugee_mode", self.refugee_mode.as_str().to_string()),
        ];
        if let Some(m) = &self.themes {
            pairs.push(("theme_mode", m.mode.as_str().to_string()));
            pairs.push(("themes", join(&m.tokens)));
        }
        if let Some(roots) = &self.event_root_codes {
            pairs.push(("event_roots", join(roots)));
        }
        if let Some(countries) = &self.actor1_country {
            pairs.push(("actor1_country", join(countries)));
        }
        pairs
    }

    pub fn to_query_string(&self) -> String {
        form_urlencoded::Serializer::new(String::new())
            .extend_pairs(self.to_query_pairs())
            .finish()
    }

    pub fn from_query_string(query: &str) -> Result<Self, CriteriaError> {
        Self::from_query_pairs(form_urlencoded::parse(query.as_bytes()))
    }

    /// Build criteria from query-string pairs. Keys outside [`QUERY_KEYS`]
    /// are ignored so callers can pass a whole request query.
    ///
    /// `criteria` selects a starting point: `1`, `2`, or an inline JSON
    /// object. Without it the start is "all events in range". The remaining
    /// keys override that starting point; `from`/`to` are required unless
    /// the JSON form supplies the range.
    pub fn from_query_pairs<I, K, V>(pairs: I) -> Result<Self, CriteriaError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut get = std::collections::HashMap::new();
        for (k, v) in pairs {
            let key = k.as_ref();
            if QUERY_KEYS.contains(&key) {
                get.insert(key.to_string(), v.as_ref().to_string());
            }
        }
        let value = |key: &str| get.get(key).map(String::as_str);

        let theme_mode: Option<ThemeMode> = value("theme_mode").map(str::parse).transpose()?;
        let range = match (value("from"), value("to")) {
            (Some(from), Some(to)) => Some(DateRange::parse(from, to)?),
            (None, None) => None,
            (None, Some(_)) => return Err(CriteriaError::Missing("from")),
            (Some(_), None) => return Err(CriteriaError::Missing("to")),
        };

        let mut criteria = match value("criteria").map(str::trim) {
            Some(json) if json.starts_with('{') => {
                let mut c = criteria_from_json(json)?;
                if let Some(range) = range {
                    c.date_range = range;
                }
                c
            }
            preset => {
                let range = range.ok_or(CriteriaError::Missing("from"))?;
                match preset {
                    Some("1") => criteria1(range),
                    Some("2") => criteria2(range, theme_mode.unwrap_or_default()),
                    None | Some("") | Some("all") => QueryCriteria {
                        actor2_refugee: false,
                        ..criteria1(range)
                    },
                    Some(other) => {
                        return Err(CriteriaError::Invalid(format!(
                            "criteria must be 1, 2, all or a JSON object, got {other:?}"
                        )))
                    }
                }
            }
        };

        if let Some(flag) = value("actor2_refugee") {
            criteria.actor2_refugee = match flag {
                "true" | "1" => true,
                "false" | "0" => false,
                other => return Err(CriteriaError::Invalid(format!("actor2_refugee: {other:?} is not a boolean"))),
            };
        }
        if let Some(mode) = value("refugee_mode") {
            criteria.refugee_mode = mode.parse().map_err(CriteriaError::Invalid)?;
        }
        if let Some(themes) = value("themes") {
            let tokens: Vec<&str> = themes.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
            criteria.themes = if tokens.is_empty() {
                None
            } else {
                Some(ThemeMatcher::new(theme_mode.unwrap_or_default(), tokens)?)
            };
        } else if let Some(mode) = theme_mode {
            match &criteria.themes {
                Some(current) if current.mode != mode => {
                    let is_ref_set = *current == ThemeMatcher::gkg_themes_ref(current.mode);
                    criteria.themes = Some(if is_ref_set {
                        ThemeMatcher::gkg_themes_ref(mode)
                    } else {
                        ThemeMatcher::new(mode, current.tokens.clone())?
                    });
                }
                Some(_) => {}
                None => {
                    return Err(CriteriaError::Invalid(
                        "theme_mode needs criteria=2 or an explicit themes list".into(),
                    ))
                }
            }
        }
        if let Some(roots) = value("event_roots") {
            criteria.event_root_codes = code_set(roots, "event_roots", 2)?;
        }
        if let Some(countries) = value("actor1_country") {
            criteria.actor1_country = code_set(countries, "actor1_country", 3)?;
        }
        criteria.normalize();
        Ok(criteria)
    }

    /// Empty code sets mean "no restriction".
    fn normalize(&mut self) {
        if self.event_root_codes.as_ref().is_some_and(BTreeSet::is_empty) {
            self.event_root_codes = None;
        }
        if self.actor1_country.as_ref().is_some_and(BTreeSet::is_empty) {
            self.actor1_country = None;
        }
    }
}

#[cfg(test)]
mod tests {
    use chrono::NaiveDateTime;
    use proptest::prelude::*;

    use super::*;
    use crate::formats::{ActorRef, EventRecord, GkgRecord, ThemeHit};

    fn d(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
    }

    fn range() -> DateRange {
        DateRange::new(d("2021-03-01"), d("2021-03-31")).unwrap()
    }

    fn actor(code: &str, country: Option<&str>) -> ActorRef {
        ActorRef {
            code: code.into(),
            name: None,
            country_code: country.map(str::to_string),
            type_codes: vec![],
        }
    }

    fn event(id: i64, day: &str, actor2: Option<&str>, root: &str) -> EventRecord {
        EventRecord {
            global_event_id: id,
            day: d(day),
            actor1: Some(actor("ESPGOV", Some("ESP"))),
            actor2: actor2.map(|c| actor(c, None)),
            is_root_event: true,
            event_code: format!("{root}0"),
            event_base_code: format!("{root}0"),
            event_root_code: root.into(),
            quad_class: 1,
            goldstein_scale: 0.0,
            num_mentions: 1,
            num_sources: 1,
            num_articles: 1,
            avg_tone: -1.0,
            action_geo: None,
            date_added: NaiveDateTime::parse_from_str("20210301000000", "%Y%m%d%H%M%S").unwrap(),
            source_url: String::new(),
        }
    }

    fn doc(themes: &[&str]) -> GkgRecord {
        GkgRecord {
            gkg_record_id: "g".into(),
            date: NaiveDateTime::parse_from_str("20210301000000", "%Y%m%d%H%M%S").unwrap(),
            document_identifier: "u".into(),
            themes: themes.iter().map(|t| ThemeHit::new(*t, 1)).collect(),
            v2_tone: None,
            locations_raw: String::new(),
            gcam_raw: String::new(),
        }
    }

    fn ctx(event: EventRecord, docs: Vec<GkgRecord>) -> EventWithContext {
        EventWithContext {
            event,
            mentions: vec![],
            documents: docs,
        }
    }

    #[test]
    fn criteria1_requires_actor2_ref() {
        let c = criteria1(range());
        assert!(matches(&c, &ctx(event(1, "2021-03-05", Some("REF"), "01"), vec![])));
        assert!(!matches(&c, &ctx(event(2, "2021-03-05", None, "01"), vec![])));
        assert!(!matches(&c, &ctx(event(3, "2021-03-05", Some("GOV"), "01"), vec![])));
    }

    #[test]
    fn criteria2_theme_modes() {
        let xeno = ctx(
            event(1, "2021-03-05", Some("REF"), "01"),
            vec![doc(&["TAX_ETHNICITY", "DISCRIMINATION_IMMIGRATION_XENOPHOBIA"])],
        );
        let other = ctx(
            event(2, "2021-03-05", Some("REF"), "01"),
            vec![doc(&["DISCRIMINATION_IMMIGRATION_SOMETHINGELSE"])],
        );
        let bare = ctx(event(3, "2021-03-05", Some("REF"), "01"), vec![]);
        let exact = criteria2(range(), ThemeMode::ExactSet);
        let prefix = criteria2(range(), ThemeMode::Prefix);
        assert!(matches(&exact, &xeno) && matches(&prefix, &xeno));
        assert!(!matches(&exact, &other) && matches(&prefix, &other));
        assert!(!matches(&exact, &bare) && matches(&criteria1(range()), &bare));
    }

    #[test]
    fn theme_match_never_looks_inside_a_token() {
        let m = ThemeMatcher::gkg_themes_ref(ThemeMode::Prefix);
        assert!(!m.matches_theme("TAX_DISCRIMINATION_IMMIGRATION_XENOPHOBIA"));
        assert!(!m.matches_theme("discrimination_immigration_xenophobia"));
        let m = ThemeMatcher::gkg_themes_ref(ThemeMode::ExactSet);
        assert!(!m.matches_theme("DISCRIMINATION_IMMIGRATION_XENOPHOBIAS"));
    }

    #[test]
    fn date_range_is_inclusive() {
        let c = criteria1(range());
        assert!(matches(&c, &ctx(event(1, "2021-03-31", Some("REF"), "01"), vec![])));
        assert!(matches(&c, &ctx(event(1, "2021-03-01", Some("REF"), "01"), vec![])));
        assert!(!matches(&c, &ctx(event(1, "2021-04-01", Some("REF"), "01"), vec![])));
    }

    #[test]
    fn root_and_country_clauses() {
        let mut c = criteria1(range());
        c.event_root_codes = Some(["01".to_string()].into());
        assert!(matches(&c, &ctx(event(1, "2021-03-05", Some("REF"), "01"), vec![])));
        assert!(!matches(&c, &ctx(event(2, "2021-03-05", Some("REF"), "14"), vec![])));
        c.actor1_country = Some(["USA".to_string()].into());
        assert!(!matches(&c, &ctx(event(1, "2021-03-05", Some("REF"), "01"), vec![])));
    }

    #[test]
    fn inverted_and_malformed_ranges() {
        assert!(matches!(
            DateRange::parse("2021-03-31", "2021-03-01"),
            Err(CriteriaError::InvertedRange { .. })
        ));
        let err = DateRange::parse("2021-13-01", "2021-03-01").unwrap_err();
        assert!(err.is_date_error());
        assert!(serde_json::from_str::<DateRange>(r#"{"start":"2021-03-02","end":"2021-03-01"}"#).is_err());
    }

    #[test]
    fn theme_tokens_are_validated() {
        assert!(ThemeMatcher::new(ThemeMode::ExactSet, Vec::<String>::new()).is_err());
        assert!(ThemeMatcher::new(ThemeMode::ExactSet, ["lower"]).is_err());
        assert!(ThemeMatcher::new(ThemeMode::ExactSet, ["A,B"]).is_err());
    }

    #[test]
    fn query_string_presets() {
        let c = QueryCriteria::from_query_string("criteria=1&from=2015-03-01&to=2016-03-31").unwrap();
        assert_eq!(c, criteria1(DateRange::parse("2015-03-01", "2016-03-31").unwrap()));
        let c = QueryCriteria::from_query_string("criteria=2&theme_mode=prefix&from=2021-03-01&to=2021-03-31").unwrap();
        assert_eq!(c, criteria2(range(), ThemeMode::Prefix));
        let c = QueryCriteria::from_query_string("from=2021-03-01&to=2021-03-31&granularity=day").unwrap();
        assert!(!c.actor2_refugee);
        assert!(QueryCriteria::from_query_string("criteria=1").unwrap_err() == CriteriaError::Missing("from"));
        assert!(QueryCriteria::from_query_string("criteria=3&from=2021-03-01&to=2021-03-31").is_err());
        assert!(QueryCriteria::from_query_string("criteria=1&from=2021-03-31&to=2021-03-01")
            .unwrap_err()
            .is_date_error());
        assert!(QueryCriteria::from_query_string("theme_mode=prefix&from=2021-03-01&to=2021-03-31").is_err());
        assert!(QueryCriteria::from_query_string("event_roots=011&from=2021-03-01&to=2021-03-31").is_err());
    }

    #[test]
    fn query_string_accepts_inline_json() {
        let c = criteria2(range(), ThemeMode::ExactSet);
        let json = serde_json::to_string(&c).unwrap();
        let qs = form_urlencoded::Serializer::new(String::new())
            .append_pair("criteria", &json)
            .finish();
        assert_eq!(QueryCriteria::from_query_string(&qs).unwrap(), c);
    }

    fn arb_criteria() -> impl Strategy<Value = QueryCriteria> {
        (
            any::<bool>(),
            any::<bool>(),
            prop::option::of((any::<bool>(), prop::collection::btree_set("[A-Z][A-Z_]{0,12}", 1..4))),
            0i64..3000,
            0i64..400,
            prop::option::of(prop::collection::btree_set("[0-2][0-9]", 0..4)),
            prop::option::of(prop::collection::btree_set("[A-Z]{3}", 0..4)),
        )
            .prop_map(|(refugee, contains, themes, start, len, roots, countries)| {
                let start = d("2015-01-01") + chrono::Days::new(start as u64);
                let mut c = QueryCriteria {
                    actor2_refugee: refugee,
                    refugee_mode: if contains { RefugeeMode::ContainsType } else { RefugeeMode::Exact },
                    themes: themes.map(|(prefix, tokens)| {
                        let mode = if prefix { ThemeMode::Prefix } else { ThemeMode::ExactSet };
                        ThemeMatcher::new(mode, tokens).unwrap()
                    }),
                    date_range: DateRange::new(start, start + chrono::Days::new(len as u64)).unwrap(),
                    event_root_codes: roots,
                    actor1_country: countries,
                };
                c.normalize();
                c
            })
    }

    proptest! {
        #[test]
        fn query_string_and_json_forms_round_trip(c in arb_criteria()) {
            prop_assert_eq!(&QueryCriteria::from_query_string(&c.to_query_string()).unwrap(), &c);
            let json = serde_json::to_string(&c).unwrap();
            prop_assert_eq!(&serde_json::from_str::<QueryCriteria>(&json).unwrap(), &c);
        }
    }
}
