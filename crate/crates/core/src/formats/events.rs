use std::io::Read;

use chrono::Datelike;

use super::layout::events as col;
use super::{
    cell_text, day, finite, fmt_day, fmt_timestamp, num, opt, opt_num, parse_rows, req, timestamp,
    ActorRef, EventRecord, FormatError, GeoPoint, Parsed, TableKind,
};

/// Parse a GDELT 2.0 Event export (`*.export.CSV`).
pub fn parse_events_file<R: Read>(input: R) -> Result<Parsed<EventRecord>, FormatError> {
    parse_rows(input, TableKind::Events, col::WIDTH, parse_event_row)
}

struct ActorColumns {
    code: usize,
    name: usize,
    country: usize,
    types: [usize; 3],
}

const ACTOR1: ActorColumns = ActorColumns {
    code: col::Actor1Code,
    name: col::Actor1Name,
    country: col::Actor1CountryCode,
    types: [col::Actor1Type1Code, col::Actor1Type2Code, col::Actor1Type3Code],
};

const ACTOR2: ActorColumns = ActorColumns {
    code: col::Actor2Code,
    name: col::Actor2Name,
    country: col::Actor2CountryCode,
    types: [col::Actor2Type1Code, col::Actor2Type2Code, col::Actor2Type3Code],
};

fn parse_actor(cells: &[&str], columns: &ActorColumns) -> Result<Option<ActorRef>, String> {
    let Some(code) = opt(cells[columns.code]) else {
        return Ok(None);
    };
    if !code.bytes().all(|b| b.is_ascii_uppercase() || b.is_ascii_digit()) {
        return Err(format!(
            "{}: actor code {code:?} is not uppercase alphanumeric",
            col::NAMES[columns.code]
        ));
    }
    Ok(Some(ActorRef {
        code,
        name: opt(cells[columns.name]),
        country_code: opt(cells[columns.country]),
        type_codes: columns.types.iter().filter_map(|&i| opt(cells[i])).collect(),
    }))
}

fn parse_action_geo(cells: &[&str]) -> Result<Option<GeoPoint>, String> {
    let lat: Option<f64> = opt_num(cells[col::ActionGeo_Lat], "ActionGeo_Lat")?;
    let long: Option<f64> = opt_num(cells[col::ActionGeo_Long], "ActionGeo_Long")?;
    let (Some(latitude), Some(longitude)) = (lat, long) else {
        return Ok(None);
    };
    if !(-90.0..=90.0).contains(&latitude) {
        return Err(format!("ActionGeo_Lat: {latitude} out of range"));
    }
    if !(-180.0..=180.0).contains(&longitude) {
        return Err(format!("ActionGeo_Long: {longitude} out of range"));
    }
    Ok(Some(GeoPoint {
        latitude,
        longitude,
        country_code: opt(cells[col::ActionGeo_CountryCode]),
        full_name: opt(cells[col::ActionGeo_FullName]),
    }))
}

fn parse_event_row(cells: &[&str]) -> Result<EventRecord, String> {
    let event_code = req(cells[col::EventCode], "EventCode")?.to_string();
    if !(3..=4).contains(&event_code.len()) {
        return Err(format!("EventCode: {event_code:?} is not a 3-4 character CAMEO code"));
    }
    let event_root_code = req(cells[col::EventRootCode], "EventRootCode")?.to_string();
    if event_code.get(..2) != Some(event_root_code.as_str()) {
        return Err(format!(
            "EventRootCode: {event_root_code:?} is not the prefix of EventCode {event_code:?}"
        ));
    }

    let is_root_event = match cells[col::IsRootEvent].trim() {
        "1" => true,
        "0" => false,
        other => return Err(format!("IsRootEvent: expected 0 or 1, got {other:?}")),
    };
    let quad_class: u8 = num(cells[col::QuadClass], "QuadClass")?;
    if !(1..=4).contains(&quad_class) {
        return Err(format!("QuadClass: {quad_class} outside 1-4"));
    }
    let goldstein_scale = finite(num(cells[col::GoldsteinScale], "GoldsteinScale")?, "GoldsteinScale")?;
    if !(-10.0..=10.0).contains(&goldstein_scale) {
        return Err(format!("GoldsteinScale: {goldstein_scale} outside [-10, 10]"));
    }

    Ok(EventRecord {
        global_event_id: num(cells[col::GLOBALEVENTID], "GLOBALEVENTID")?,
        day: day(cells[col::SQLDATE], "SQLDATE")?,
        actor1: parse_actor(cells, &ACTOR1)?,
        actor2: parse_actor(cells, &ACTOR2)?,
        is_root_event,
        event_code,
        event_base_code: req(cells[col::EventBaseCode], "EventBaseCode")?.to_string(),
        event_root_code,
        quad_class,
        goldstein_scale,
        num_mentions: num(cells[col::NumMentions], "NumMentions")?,
        num_sources: num(cells[col::NumSources], "NumSources")?,
        num_articles: num(cells[col::NumArticles], "NumArticles")?,
        avg_tone: finite(num(cells[col::AvgTone], "AvgTone")?, "AvgTone")?,
        action_geo: parse_action_geo(cells)?,
        date_added: timestamp(cells[col::DATEADDED], "DATEADDED")?,
        source_url: cells[col::SOURCEURL].trim().to_string(),
    })
}

fn fill_actor(row: &mut [String], columns: &ActorColumns, actor: &Option<ActorRef>) {
    let Some(actor) = actor else { return };
    row[columns.code] = actor.code.clone();
    row[columns.name] = cell_text(&actor.name).to_string();
    row[columns.country] = cell_text(&actor.country_code).to_string();
    for (slot, code) in columns.types.iter().zip(&actor.type_codes) {
        row[*slot] = code.clone();
    }
}

/// Render a record as one Event-table line (no trailing newline).
///
/// Columns the parser does not retain are written empty, except the
/// date-derived `MonthYear`, `Year` and `FractionDate`.
pub fn render_event_row(event: &EventRecord) -> String {
    let mut row = vec![String::new(); col::WIDTH];
    row[col::GLOBALEVENTID] = event.global_event_id.to_string();
    row[col::SQLDATE] = fmt_day(event.day);
    row[col::MonthYear] = event.day.format("%Y%m").to_string();
    row[col::Year] = event.day.year().to_string();
    row[col::FractionDate] = format!(
        "{:.4}",
        event.day.year() as f64 + f64::from(event.day.ordinal0()) / 365.0
    );
    fill_actor(&mut row, &ACTOR1, &event.actor1);
    fill_actor(&mut row, &ACTOR2, &event.actor2);
    row[col::IsRootEvent] = u8::from(event.is_root_event).to_string();
    row[col::EventCode] = event.event_code.clone();
    row[col::EventBaseCode] = event.event_base_code.clone();
    row[col::EventRootCode] = event.event_root_code.clone();
    row[col::QuadClass] = event.quad_class.to_string();
    row[col::GoldsteinScale] = event.goldstein_scale.to_string();
    row[col::NumMentions] = event.num_mentions.to_string();
    row[col::NumSources] = event.num_sources.to_string();
    row[col::NumArticles] = event.num_articles.to_string();
    row[col::AvgTone] = event.avg_tone.to_string();
    if let Some(geo) = &event.action_geo {
        row[col::ActionGeo_FullName] = cell_text(&geo.full_name).to_string();
        row[col::ActionGeo_CountryCode] = cell_text(&geo.country_code).to_string();
        row[col::ActionGeo_Lat] = geo.latitude.to_string();
        row[col::ActionGeo_Long] = geo.longitude.to_string();
    }
    row[col::DATEADDED] = fmt_timestamp(event.date_added);
    row[col::SOURCEURL] = event.source_url.clone();
    row.join("\t")
}

#[cfg(test)]
mod tests {
    use chrono::NaiveDate;

    use super::*;
    use crate::formats::FormatError;

    /// A row built column by column from the Event codebook: event 0871
    /// ("Declare truce, ceasefire") by Spanish government on refugees.
    fn codebook_row() -> String {
        let mut cells = vec![""; col::WIDTH];
        cells[col::GLOBALEVENTID] = "410412347";
        cells[col::SQLDATE] = "20150902";
        cells[col::MonthYear] = "201509";
        cells[col::Year] = "2015";
        cells[col::FractionDate] = "2015.6658";
        cells[col::Actor1Code] = "ESPGOV";
        cells[col::Actor1Name] = "SPAIN";
        cells[col::Actor1CountryCode] = "ESP";
        cells[col::Actor1Type1Code] = "GOV";
        cells[col::Actor2Code] = "REF";
        cells[col::Actor2Name] = "REFUGEE";
        cells[col::Actor2Type1Code] = "REF";
        cells[col::IsRootEvent] = "1";
        cells[col::EventCode] = "0871";
        cells[col::EventBaseCode] = "087";
        cells[col::EventRootCode] = "08";
        cells[col::QuadClass] = "2";
        cells[col::GoldsteinScale] = "9";
        cells[col::NumMentions] = "10";
        cells[col::NumSources] = "2";
        cells[col::NumArticles] = "10";
        cells[col::AvgTone] = "-4.25";
        cells[col::ActionGeo_Type] = "1";
        cells[col::ActionGeo_FullName] = "Spain";
        cells[col::ActionGeo_CountryCode] = "SP";
        cells[col::ActionGeo_Lat] = "40";
        cells[col::ActionGeo_Long] = "-4";
        cells[col::ActionGeo_FeatureID] = "SP";
        cells[col::DATEADDED] = "20150902154500";
        cells[col::SOURCEURL] = "http://example.org/story";
        cells.join("\t")
    }

    #[test]
    fn codebook_row_reads_back_field_by_field() {
        let (events, diag) = parse_events_file(codebook_row().as_bytes()).unwrap();
        assert_eq!(diag.rows_ok, 1);
        let e = &events[0];
        assert_eq!(e.global_event_id, 410412347);
        assert_eq!(e.day, NaiveDate::from_ymd_opt(2015, 9, 2).unwrap());
        assert_eq!(e.event_code, "0871");
        assert_eq!(e.event_base_code, "087");
        assert_eq!(e.event_root_code, "08");
        assert_eq!(e.avg_tone, -4.25);
        assert_eq!(e.quad_class, 2);
        assert_eq!(e.goldstein_scale, 9.0);
        assert!(e.is_root_event);
        let a1 = e.actor1.as_ref().unwrap();
        assert_eq!(a1.code, "ESPGOV");
        assert_eq!(a1.country_code.as_deref(), Some("ESP"));
        assert_eq!(a1.type_codes, vec!["GOV"]);
        let a2 = e.actor2.as_ref().unwrap();
        assert_eq!(a2.code, "REF");
        assert_eq!(a2.country_code, None);
        let geo = e.action_geo.as_ref().unwrap();
        assert_eq!((geo.latitude, geo.longitude), (40.0, -4.0));
        assert_eq!(geo.country_code.as_deref(), Some("SP"));
        assert_eq!(e.date_added.to_string(), "2015-09-02 15:45:00");
        assert_eq!(e.source_url, "http://example.org/story");
    }

    #[test]
    fn empty_actor2_columns_mean_no_actor2() {
        let mut cells: Vec<String> = codebook_row().split('\t').map(str::to_string).collect();
        for i in col::Actor2Code..=col::Actor2Type3Code {
            cells[i].clear();
        }
        let (events, _) = parse_events_file(cells.join("\t").as_bytes()).unwrap();
        assert!(events[0].actor2.is_none());
        assert!(events[0].actor1.is_some());
    }

    #[test]
    fn short_rows_are_skipped_and_counted() {
        let input = format!("{}\na\tb\tc\n{}\n", codebook_row(), codebook_row());
        let (events, diag) = parse_events_file(input.as_bytes()).unwrap();
        assert_eq!(events.len(), 2);
        assert_eq!(diag.rows_total, 3);
        assert_eq!(diag.rows_skipped, 1);
        assert_eq!(diag.first_errors[0].0, 2);
    }

    #[test]
    fn unparseable_numbers_skip_the_row() {
        let bad = codebook_row().replace("-4.25", "n/a");
        let input = format!("{}\n{bad}\n", codebook_row());
        let (events, diag) = parse_events_file(input.as_bytes()).unwrap();
        assert_eq!(events.len(), 1);
        assert!(diag.first_errors[0].1.contains("AvgTone"));
    }

    #[test]
    fn mismatched_root_code_is_rejected() {
        let mut cells: Vec<String> = codebook_row().split('\t').map(str::to_string).collect();
        cells[col::EventRootCode] = "14".into();
        let input = format!("{}\n{}", codebook_row(), cells.join("\t"));
        let (_, diag) = parse_events_file(input.as_bytes()).unwrap();
        assert_eq!(diag.rows_skipped, 1);
    }

    #[test]
    fn only_malformed_rows_is_a_format_error() {
        let err = parse_events_file("a\tb\tc\n".as_bytes()).unwrap_err();
        match err {
            FormatError::NoValidRows { kind, diagnostics } => {
                assert_eq!(kind, TableKind::Events);
                assert_eq!(diagnostics.rows_skipped, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_empty_output() {
        let (events, diag) = parse_events_file(&b""[..]).unwrap();
        assert!(events.is_empty());
        assert_eq!(diag.rows_total, 0);
    }

    #[test]
    fn invalid_utf8_is_replaced_not_fatal() {
        let mut bytes = codebook_row().into_bytes();
        let pos = bytes.len() - 5;
        bytes[pos] = 0xff;
        let (events, _) = parse_events_file(&bytes[..]).unwrap();
        assert!(events[0].source_url.contains('\u{fffd}'));
    }

    #[test]
    fn crlf_line_endings_are_accepted() {
        let input = format!("{}\r\n{}\r\n", codebook_row(), codebook_row());
        let (events, diag) = parse_events_file(input.as_bytes()).unwrap();
        assert_eq!(events.len(), 2);
        assert_eq!(diag.rows_skipped, 0);
    }

    #[test]
    fn render_then_parse_is_identity() {
        let (events, _) = parse_events_file(codebook_row().as_bytes()).unwrap();
        let line = render_event_row(&events[0]);
        let (again, _) = parse_events_file(line.as_bytes()).unwrap();
        assert_eq!(events, again);
    }
}
