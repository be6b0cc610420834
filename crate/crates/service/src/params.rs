use std::collections::HashMap;
use std::str::FromStr;

use refwatch_core::query::QueryCriteria;

use crate::ApiError;

/// The raw query string split into pairs, with typed accessors.
pub struct Params {
    pairs: Vec<(String, String)>,
    map: HashMap<String, String>,
}

impl Params {
    pub fn parse(raw: Option<&str>) -> Self {
        let pairs: Vec<(String, String)> = form_urlencoded::parse(raw.unwrap_or("").as_bytes())
            .map(|(k, v)| (k.into_owned(), v.into_owned()))
            .collect();
        let map = pairs.iter().cloned().collect();
        Params { pairs, map }
    }

    pub fn criteria(&self) -> Result<QueryCriteria, ApiError> {
        Ok(QueryCriteria::from_query_pairs(self.pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())))?)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str).filter(|v| !v.is_empty())
    }

    pub fn parsed<T>(&self, key: &str) -> Result<Option<T>, ApiError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|e| ApiError::bad_parameter(format!("{key}: {e}"))))
            .transpose()
    }

    pub fn parsed_or<T>(&self, key: &str, default: T) -> Result<T, ApiError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        Ok(self.parsed(key)?.unwrap_or(default))
    }
}
