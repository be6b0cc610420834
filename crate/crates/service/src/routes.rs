use axum::extract::{Path, RawQuery, State};
use axum::http::StatusCode;
use axum::routing::get;
use axum::{Json, Router};
use refwatch_core::analytics::{
    article_count_timeline, choropleth_counts, detect_spikes, tone_stats, top_country_frequencies, volume_timeline,
    ChoroplethCounts, CountUnit, CountryFrequency, Granularity, RootFilter, SpikeReport, TimelineSeries, ToneSeries,
    DEFAULT_SPIKE_K, DEFAULT_SPIKE_WINDOW,
};
use refwatch_core::cameo::CountryInfo;
use refwatch_core::formats::ActorSlot;
use refwatch_core::query::{DateRange, QueryCriteria, GKG_THEMES_REF};
use refwatch_core::store::{EventWithContext, IngestStatus, Store};
use refwatch_ingest::DocApiQuery;
use serde::{Deserialize, Serialize};

use crate::params::Params;
use crate::{ApiError, AppState};

pub const DEFAULT_PAGE_SIZE: usize = 100;
pub const MAX_PAGE_SIZE: usize = 1000;

type ApiResult<T> = Result<Json<T>, ApiError>;

pub(crate) fn api() -> Router<AppState> {
    Router::new()
        .route("/timeline", get(timeline))
        .route("/tone", get(tone))
        .route("/countries", get(countries))
        .route("/choropleth", get(choropleth))
        .route("/spikes", get(spikes))
        .route("/volume", get(volume))
        .route("/events", get(events))
        .route("/events/{id}", get(event))
        .route("/ingest/status", get(ingest_status))
        .route("/cameo/roots", get(cameo_roots))
        .route("/cameo/countries", get(cameo_countries))
        .route("/cameo/actor-types", get(cameo_actor_types))
        .fallback(|| async { ApiError::not_found("no such endpoint") })
}

/// Run a store read off the async workers.
async fn with_store<T, F>(state: &AppState, f: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce(&Store) -> Result<T, ApiError> + Send + 'static,
{
    let store = state.store.clone();
    tokio::task::spawn_blocking(move || f(&store))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal_error", e.to_string()))?
}

async fn scan(state: &AppState, criteria: QueryCriteria) -> Result<Vec<EventWithContext>, ApiError> {
    with_store(state, move |store| Ok(store.scan(&criteria)?)).await
}

fn series_params(p: &Params, contexts: &[EventWithContext]) -> Result<(Granularity, CountUnit), ApiError> {
    let granularity = p.parsed_or("granularity", Granularity::Day)?;
    let unit = p.parsed_or("unit", CountUnit::default_for(contexts))?;
    Ok((granularity, unit))
}

async fn timeline(State(state): State<AppState>, RawQuery(q): RawQuery) -> ApiResult<TimelineSeries> {
    let p = Params::parse(q.as_deref());
    let criteria = p.criteria()?;
    let contexts = scan(&state, criteria.clone()).await?;
    let (granularity, unit) = series_params(&p, &contexts)?;
    Ok(Json(article_count_timeline(&contexts, &criteria.date_range, granularity, unit)))
}

async fn tone(State(state): State<AppState>, RawQuery(q): RawQuery) -> ApiResult<ToneSeries> {
    let p = Params::parse(q.as_deref());
    let criteria = p.criteria()?;
    let granularity = p.parsed_or("granularity", Granularity::Day)?;
    let contexts = scan(&state, criteria).await?;
    Ok(Json(tone_stats(&contexts, granularity)))
}

async fn countries(State(state): State<AppState>, RawQuery(q): RawQuery) -> ApiResult<CountryFrequency> {
    let p = Params::parse(q.as_deref());
    let criteria = p.criteria()?;
    let n: usize = p.parsed_or("n", 20)?;
    if n == 0 {
        return Err(ApiError::bad_parameter("n must be at least 1"));
    }
    let which = p.parsed_or("which", ActorSlot::Actor1)?;
    let contexts = scan(&state, criteria).await?;
    Ok(Json(top_country_frequencies(&contexts, n, which)?))
}

async fn choropleth(State(state): State<AppState>, RawQuery(q): RawQuery) -> ApiResult<ChoroplethCounts> {
    let p = Params::parse(q.as_deref());
    let criteria = p.criteria()?;
    let roots = RootFilter::parse(p.get("roots").unwrap_or(""));
    let which = p.parsed_or("which", ActorSlot::Actor1)?;
    let contexts = scan(&state, criteria).await?;
    Ok(Json(choropleth_counts(&contexts, &roots, which, state.cameo)))
}

async fn spikes(State(state): State<AppState>, RawQuery(q): RawQuery) -> ApiResult<SpikeReport> {
    let p = Params::parse(q.as_deref());
    let criteria = p.criteria()?;
    let window = p.parsed_or("window", DEFAULT_SPIKE_WINDOW)?;
    let k = p.parsed_or("k", DEFAULT_SPIKE_K)?;
    let contexts = scan(&state, criteria.clone()).await?;
    let (granularity, unit) = series_params(&p, &contexts)?;
    let series = article_count_timeline(&contexts, &criteria.date_range, granularity, unit);
    Ok(Json(detect_spikes(&series, window, k)?))
}

/// DOC API matched volume as a percent of all monitored articles.
async fn volume(State(state): State<AppState>, RawQuery(q): RawQuery) -> ApiResult<TimelineSeries> {
    let p = Params::parse(q.as_deref());
    let (Some(from), Some(to)) = (p.get("from"), p.get("to")) else {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, "invalid_criteria", "from and to are required"));
    };
    let range = DateRange::parse(from, to)?;
    let granularity = p.parsed_or("granularity", Granularity::Day)?;
    let themes: Vec<String> = match p.get("themes") {
        Some(list) => list.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect(),
        None => GKG_THEMES_REF.iter().map(|t| t.to_string()).collect(),
    };
    let query = DocApiQuery::themes(&themes, range.start(), range.end());
    query.validate()?;
    let Some(client) = state.doc_api.clone() else {
        return Err(ApiError::new(
            StatusCode::SERVICE_UNAVAILABLE,
            "doc_api_disabled",
            "this server was started without a DOC API endpoint",
        ));
    };
    let points = client.timeline(&query).await?;
    Ok(Json(volume_timeline(&points, &range, granularity)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventPage {
    pub total: usize,
    pub offset: usize,
    pub limit: usize,
    pub events: Vec<EventWithContext>,
}

async fn events(State(state): State<AppState>, RawQuery(q): RawQuery) -> ApiResult<EventPage> {
    let p = Params::parse(q.as_deref());
    let criteria = p.criteria()?;
    let offset: usize = p.parsed_or("offset", 0)?;
    let limit: usize = p.parsed_or("limit", DEFAULT_PAGE_SIZE)?;
    if limit == 0 || limit > MAX_PAGE_SIZE {
        return Err(ApiError::bad_parameter(format!("limit must be between 1 and {MAX_PAGE_SIZE}")));
    }
    let contexts = scan(&state, criteria).await?;
    Ok(Json(EventPage {
        total: contexts.len(),
        offset,
        limit,
        events: contexts.into_iter().skip(offset).take(limit).collect(),
    }))
}

async fn event(State(state): State<AppState>, Path(raw): Path<String>) -> ApiResult<EventWithContext> {
    let id: i64 = raw
        .parse()
        .map_err(|_| ApiError::bad_parameter(format!("event id must be an integer, got {raw:?}")))?;
    let found = with_store(&state, move |store| Ok(store.get_event_with_context(id)?)).await?;
    found
        .map(Json)
        .ok_or_else(|| ApiError::not_found(format!("no event with id {id}")))
}

async fn ingest_status(State(state): State<AppState>) -> ApiResult<IngestStatus> {
    Ok(Json(with_store(&state, |store| Ok(store.ingest_status()?)).await?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDescription {
    pub code: String,
    pub description: String,
}

fn pairs<'a>(it: impl Iterator<Item = (&'a str, &'a str)>) -> Vec<CodeDescription> {
    it.map(|(code, description)| CodeDescription {
        code: code.to_string(),
        description: description.to_string(),
    })
    .collect()
}

async fn cameo_roots(State(state): State<AppState>) -> Json<Vec<CodeDescription>> {
    Json(pairs(state.cameo.event_roots()))
}

async fn cameo_actor_types(State(state): State<AppState>) -> Json<Vec<CodeDescription>> {
    Json(pairs(state.cameo.actor_types()))
}

async fn cameo_countries(State(state): State<AppState>) -> Json<Vec<CountryInfo>> {
    Json(state.cameo.countries().cloned().collect())
}
