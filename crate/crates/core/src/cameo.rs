//! CAMEO lookup tables: event codes, country codes and actor type codes.
//!
//! The tables ship with the crate under `data/cameo/` as tab-delimited
//! `code<TAB>description` files (the country file carries two extra ISO
//! columns). Lookups never fail: an unknown code yields `None`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::formats::ActorRef;

const EVENT_CODES: &str = include_str!("../data/cameo/event_codes.tsv");
const COUNTRIES: &str = include_str!("../data/cameo/countries.tsv");
const ACTOR_TYPES: &str = include_str!("../data/cameo/actor_types.tsv");

/// CAMEO type code for refugees.
pub const REFUGEE_CODE: &str = "REF";

#[derive(Debug, thiserror::Error)]
pub enum CameoError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{table} line {line}: {reason}")]
    Malformed {
        table: &'static str,
        line: usize,
        reason: String,
    },
    #[error("{table} table is empty")]
    Empty { table: &'static str },
    #[error("event code {0} has no root entry {1}")]
    MissingRoot(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountryInfo {
    pub code: String,
    pub name: String,
    pub iso_alpha2: Option<String>,
    pub iso_alpha3: Option<String>,
}

#[derive(Debug, Clone)]
pub struct CameoTables {
    event_descriptions: BTreeMap<String, String>,
    countries: BTreeMap<String, CountryInfo>,
    actor_types: BTreeMap<String, String>,
}

/// How an actor is recognised as a refugee actor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefugeeMode {
    /// The actor code is exactly `REF`.
    #[default]
    Exact,
    /// The actor code is `REF` or any of its type codes is `REF`
    /// (catches composites such as `SYRREF`).
    ContainsType,
}

impl RefugeeMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RefugeeMode::Exact => "exact",
            RefugeeMode::ContainsType => "contains-type",
        }
    }
}

impl std::str::FromStr for RefugeeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(RefugeeMode::Exact),
            "contains-type" => Ok(RefugeeMode::ContainsType),
            other => Err(format!("unknown refugee mode {other:?} (expected exact or contains-type)")),
        }
    }
}

pub fn is_refugee_actor(actor: Option<&ActorRef>, mode: RefugeeMode) -> bool {
    let Some(actor) = actor else { return false };
    match mode {
        RefugeeMode::Exact => actor.code == REFUGEE_CODE,
        RefugeeMode::ContainsType => {
            actor.code == REFUGEE_CODE || actor.type_codes.iter().any(|t| t == REFUGEE_CODE)
        }
    }
}

fn rows<'a>(table: &'static str, text: &'a str, min_columns: usize) -> Result<Vec<(usize, Vec<&'a str>)>, CameoError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = line.split('\t').map(str::trim).collect();
        if cells.len() < min_columns || cells[0].is_empty() || cells[1].is_empty() {
            return Err(CameoError::Malformed {
                table,
                line: i + 1,
                reason: format!("expected at least {min_columns} non-empty columns"),
            });
        }
        out.push((i + 1, cells));
    }
    if out.is_empty() {
        return Err(CameoError::Empty { table });
    }
    Ok(out)
}

fn simple_map(table: &'static str, text: &str) -> Result<BTreeMap<String, String>, CameoError> {
    Ok(rows(table, text, 2)?
        .into_iter()
        .map(|(_, c)| (c[0].to_string(), c[1].to_string()))
        .collect())
}

fn non_empty(cell: Option<&&str>) -> Option<String> {
    cell.filter(|c| !c.is_empty()).map(|c| c.to_string())
}

impl CameoTables {
    /// The tables compiled into the crate.
    pub fn bundled() -> &'static CameoTables {
        static TABLES: OnceLock<CameoTables> = OnceLock::new();
        TABLES.get_or_init(|| {
            CameoTables::from_sources(EVENT_CODES, COUNTRIES, ACTOR_TYPES).expect("bundled CAMEO tables are valid")
        })
    }

    /// Load `event_codes.tsv`, `countries.tsv` and `actor_types.tsv` from `dir`.
    pub fn load_dir(dir: &Path) -> Result<CameoTables, CameoError> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path).map_err(|source| CameoError::Io {
                path: path.display().to_string(),
                source,
            })
        };
        CameoTables::from_sources(&read("event_codes.tsv")?, &read("countries.tsv")?, &read("actor_types.tsv")?)
    }

    pub fn from_sources(event_codes: &str, countries: &str, actor_types: &str) -> Result<CameoTables, CameoError> {
        let event_descriptions = simple_map("event_codes", event_codes)?;
        for code in event_descriptions.keys() {
            let root = code.get(..2).unwrap_or(code);
            if !event_descriptions.contains_key(root) {
                return Err(CameoError::MissingRoot(code.clone(), root.to_string()));
            }
        }
        let countries = rows("countries", countries, 2)?
            .into_iter()
            .map(|(_, c)| {
                let info = CountryInfo {
                    code: c[0].to_string(),
                    name: c[1].to_string(),
                    iso_alpha2: non_empty(c.get(2)),
                    iso_alpha3: non_empty(c.get(3)),
                };
                (info.code.clone(), info)
            })
            .collect();
        Ok(CameoTables {
            event_descriptions,
            countries,
            actor_types: simple_map("actor_types", actor_types)?,
        })
    }

    /// Description of any CAMEO event code (root, base or full).
    pub fn describe_event(&self, code: &str) -> Option<&str> {
        self.event_descriptions.get(code).map(String::as_str)
    }

    /// Description of a 2-character event root code, e.g. `01`.
    pub fn describe_event_root(&self, code: &str) -> Option<&str> {
        if code.len() != 2 {
            return None;
        }
        self.describe_event(code)
    }

    pub fn country(&self, code: &str) -> Option<&CountryInfo> {
        self.countries.get(code)
    }

    pub fn country_name(&self, code: &str) -> Option<&str> {
        self.country(code).map(|c| c.name.as_str())
    }

    pub fn actor_type(&self, code: &str) -> Option<&str> {
        self.actor_types.get(code).map(String::as_str)
    }

    /// All root codes with their descriptions, in code order.
    pub fn event_roots(&self) -> impl Iterator<Item = (&str, &str)> {
        self.event_descriptions
            .iter()
            .filter(|(code, _)| code.len() == 2)
            .map(|(c, d)| (c.as_str(), d.as_str()))
    }

    pub fn event_codes(&self) -> impl Iterator<Item = (&str, &str)> {
        self.event_descriptions.iter().map(|(c, d)| (c.as_str(), d.as_str()))
    }

    pub fn countries(&self) -> impl Iterator<Item = &CountryInfo> {
        self.countries.values()
    }

    pub fn actor_types(&self) -> impl Iterator<Item = (&str, &str)> {
        self.actor_types.iter().map(|(c, d)| (c.as_str(), d.as_str()))
    }
}
