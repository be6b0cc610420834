//! Core of the refugee/xenophobia event monitor: GDELT 2.0 parsers, CAMEO
//! lookups, the joined event store, filtering criteria and chart aggregations.

pub mod formats;
pub mod cameo;
pub mod query;
pub mod store;
pub mod analytics;
pub mod casestudy;

#[cfg(any(test, feature = "testkit"))]
pub mod testkit;
