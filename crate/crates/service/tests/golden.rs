//! Each endpoint's body must equal the serialized library result on the
//! frozen fixture store, and the committed golden file.
//!
//! Set `REFWATCH_UPDATE_GOLDEN=1` to rewrite the golden files.

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use refwatch_core::analytics::*;
use refwatch_core::cameo::CameoTables;
use refwatch_core::formats::ActorSlot;
use refwatch_core::query::{criteria1, criteria2, DateRange, QueryCriteria, ThemeMode};
use refwatch_core::store::Store;
use refwatch_core::testkit;
use refwatch_service::{router, AppState, EventPage, ServiceConfig};
use serde::Serialize;
use tower::ServiceExt;

fn frozen_store() -> Arc<Store> {
    let store = Store::open_in_memory().unwrap();
    testkit::frozen_corpus().load_into(&store).unwrap();
    Arc::new(store)
}

async fn get(store: Arc<Store>, uri: &str) -> (StatusCode, Vec<u8>) {
    let app = router(AppState::new(store), &ServiceConfig::default());
    let response = app
        .oneshot(Request::builder().uri(uri).body(Body::empty()).unwrap())
        .await
        .unwrap();
    let status = response.status();
    (status, response.into_body().collect().await.unwrap().to_bytes().to_vec())
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

async fn check<T: Serialize>(store: &Arc<Store>, name: &str, uri: &str, expected: &T) {
    let (status, body) = get(store.clone(), uri).await;
    assert_eq!(status, StatusCode::OK, "{uri}: {}", String::from_utf8_lossy(&body));
    assert_eq!(body, serde_json::to_vec(expected).unwrap(), "{uri} differs from the library result");
    let path = golden_path(name);
    if std::env::var_os("REFWATCH_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &body).unwrap();
    }
    let golden = std::fs::read(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(body, golden, "{uri} differs from {}", path.display());
}

fn march() -> DateRange {
    DateRange::parse("2021-03-01", "2021-03-31").unwrap()
}

fn scan(store: &Store, c: &QueryCriteria) -> Vec<refwatch_core::store::EventWithContext> {
    store.scan(c).unwrap()
}

#[tokio::test]
async fn aggregate_endpoints_match_library() {
    let store = frozen_store();
    let c1 = scan(&store, &criteria1(march()));
    let c2 = scan(&store, &criteria2(march(), ThemeMode::ExactSet));
    assert!(!c2.is_empty() && c2.len() < c1.len());
    let q1 = "criteria=1&from=2021-03-01&to=2021-03-31";
    let q2 = "criteria=2&from=2021-03-01&to=2021-03-31";

    check(
        &store,
        "timeline_c1_day",
        &format!("/api/timeline?{q1}"),
        &article_count_timeline(&c1, &march(), Granularity::Day, CountUnit::default_for(&c1)),
    )
    .await;
    check(
        &store,
        "timeline_c2_month_events",
        &format!("/api/timeline?{q2}&granularity=month&unit=events"),
        &article_count_timeline(&c2, &march(), Granularity::Month, CountUnit::Events),
    )
    .await;
    check(&store, "tone_c1_day", &format!("/api/tone?{q1}"), &tone_stats(&c1, Granularity::Day)).await;
    check(
        &store,
        "countries_c2_actor1",
        &format!("/api/countries?{q2}&n=20&which=actor1"),
        &top_country_frequencies(&c2, 20, ActorSlot::Actor1).unwrap(),
    )
    .await;
    check(
        &store,
        "countries_c1_actor2",
        &format!("/api/countries?{q1}&n=5&which=actor2"),
        &top_country_frequencies(&c1, 5, ActorSlot::Actor2).unwrap(),
    )
    .await;
    let cameo = CameoTables::bundled();
    check(
        &store,
        "choropleth_c2_all",
        &format!("/api/choropleth?{q2}"),
        &choropleth_counts(&c2, &RootFilter::All, ActorSlot::Actor1, cameo),
    )
    .await;
    check(
        &store,
        "choropleth_c1_roots_01",
        &format!("/api/choropleth?{q1}&roots=01"),
        &choropleth_counts(&c1, &RootFilter::parse("01"), ActorSlot::Actor1, cameo),
    )
    .await;
    let daily = article_count_timeline(&c1, &march(), Granularity::Day, CountUnit::default_for(&c1));
    check(
        &store,
        "spikes_c1_day",
        &format!("/api/spikes?{q1}&window=8&k=3"),
        &detect_spikes(&daily, 8, 3.0).unwrap(),
    )
    .await;
}

#[tokio::test]
async fn record_endpoints_match_library() {
    let store = frozen_store();
    let c1 = scan(&store, &criteria1(march()));
    let page = EventPage {
        total: c1.len(),
        offset: 10,
        limit: 5,
        events: c1.iter().skip(10).take(5).cloned().collect(),
    };
    check(&store, "events_c1_page", "/api/events?criteria=1&from=2021-03-01&to=2021-03-31&offset=10&limit=5", &page).await;
    let id = c1[0].event.global_event_id;
    check(&store, "event_by_id", &format!("/api/events/{id}"), &store.get_event_with_context(id).unwrap().unwrap()).await;
    check(&store, "ingest_status", "/api/ingest/status", &store.ingest_status().unwrap()).await;

    let (status, body) = get(store.clone(), "/api/events?criteria=all&from=2021-03-01&to=2021-03-31").await;
    assert_eq!(status, StatusCode::OK);
    let page: EventPage = serde_json::from_slice(&body).unwrap();
    assert_eq!(page.limit, 100);
    assert_eq!(page.events.len(), 100.min(page.total));
}

#[tokio::test]
async fn cameo_endpoints() {
    let store = frozen_store();
    let (status, body) = get(store.clone(), "/api/cameo/roots").await;
    assert_eq!(status, StatusCode::OK);
    let roots: serde_json::Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(roots[0]["code"], "01");
    assert_eq!(roots[0]["description"], "Make Public Statement");
    let (_, body) = get(store.clone(), "/api/cameo/countries").await;
    let countries: serde_json::Value = serde_json::from_slice(&body).unwrap();
    let spain = countries.as_array().unwrap().iter().find(|c| c["code"] == "ESP").unwrap();
    assert_eq!(spain["name"], "Spain");
}

#[tokio::test]
async fn empty_store_gives_zero_filled_timeline() {
    let store = Arc::new(Store::open_in_memory().unwrap());
    let (status, body) = get(store, "/api/timeline?criteria=1&from=2021-03-01&to=2021-03-31").await;
    assert_eq!(status, StatusCode::OK);
    let series: TimelineSeries = serde_json::from_slice(&body).unwrap();
    assert_eq!(series.points.len(), 31);
    assert!(series.points.iter().all(|p| p.count == 0));
}
