use std::io::Read;

use super::layout::mentions as col;
use super::{finite, fmt_timestamp, num, parse_rows, req, timestamp, FormatError, MentionRecord, Parsed, TableKind};

/// Parse a GDELT 2.0 Mentions export (`*.mentions.CSV`).
pub fn parse_mentions_file<R: Read>(input: R) -> Result<Parsed<MentionRecord>, FormatError> {
    parse_rows(input, TableKind::Mentions, col::WIDTH, parse_mention_row)
}

fn parse_mention_row(cells: &[&str]) -> Result<MentionRecord, String> {
    let confidence: u8 = num(cells[col::Confidence], "Confidence")?;
    if confidence > 100 {
        return Err(format!("Confidence: {confidence} outside 0-100"));
    }
    Ok(MentionRecord {
        global_event_id: num(cells[col::GLOBALEVENTID], "GLOBALEVENTID")?,
        event_time: timestamp(cells[col::EventTimeDate], "EventTimeDate")?,
        mention_time: timestamp(cells[col::MentionTimeDate], "MentionTimeDate")?,
        mention_type: num(cells[col::MentionType], "MentionType")?,
        mention_source_name: cells[col::MentionSourceName].trim().to_string(),
        mention_identifier: req(cells[col::MentionIdentifier], "MentionIdentifier")?.to_string(),
        sentence_id: num(cells[col::SentenceID], "SentenceID")?,
        confidence,
        mention_doc_tone: finite(num(cells[col::MentionDocTone], "MentionDocTone")?, "MentionDocTone")?,
    })
}

/// Render a record as one Mentions-table line (no trailing newline).
pub fn render_mention_row(mention: &MentionRecord) -> String {
    let mut row = vec![String::new(); col::WIDTH];
    row[col::GLOBALEVENTID] = mention.global_event_id.to_string();
    row[col::EventTimeDate] = fmt_timestamp(mention.event_time);
    row[col::MentionTimeDate] = fmt_timestamp(mention.mention_time);
    row[col::MentionType] = mention.mention_type.to_string();
    row[col::MentionSourceName] = mention.mention_source_name.clone();
    row[col::MentionIdentifier] = mention.mention_identifier.clone();
    row[col::SentenceID] = mention.sentence_id.to_string();
    row[col::InRawText] = "1".to_string();
    row[col::Confidence] = mention.confidence.to_string();
    row[col::MentionDocTone] = mention.mention_doc_tone.to_string();
    row.join("\t")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn codebook_row(event_id: &str, identifier: &str) -> String {
        let mut cells = vec![""; col::WIDTH];
        cells[col::GLOBALEVENTID] = event_id;
        cells[col::EventTimeDate] = "20210326120000";
        cells[col::MentionTimeDate] = "20210326134500";
        cells[col::MentionType] = "1";
        cells[col::MentionSourceName] = "ex.org";
        cells[col::MentionIdentifier] = identifier;
        cells[col::SentenceID] = "3";
        cells[col::Actor1CharOffset] = "-1";
        cells[col::Actor2CharOffset] = "120";
        cells[col::ActionCharOffset] = "98";
        cells[col::InRawText] = "1";
        cells[col::Confidence] = "50";
        cells[col::MentionDocLen] = "2345";
        cells[col::MentionDocTone] = "-6.1";
        cells.join("\t")
    }

    #[test]
    fn codebook_row_reads_back() {
        let (mentions, diag) = parse_mentions_file(codebook_row("42", "http://ex.org/a").as_bytes()).unwrap();
        assert_eq!(diag.rows_ok, 1);
        let m = &mentions[0];
        assert_eq!(m.global_event_id, 42);
        assert_eq!(m.mention_identifier, "http://ex.org/a");
        assert_eq!(m.mention_source_name, "ex.org");
        assert_eq!(m.sentence_id, 3);
        assert_eq!(m.confidence, 50);
        assert_eq!(m.mention_doc_tone, -6.1);
        assert_eq!(m.mention_time.to_string(), "2021-03-26 13:45:00");
    }

    #[test]
    fn empty_file_gives_no_rows() {
        let (mentions, diag) = parse_mentions_file(&b""[..]).unwrap();
        assert!(mentions.is_empty());
        assert_eq!(diag.rows_total, 0);
    }

    #[test]
    fn non_numeric_event_id_is_skipped_with_diagnostic() {
        let input = format!(
            "{}\n{}\n",
            codebook_row("42", "http://ex.org/a"),
            codebook_row("forty-two", "http://ex.org/b")
        );
        let (mentions, diag) = parse_mentions_file(input.as_bytes()).unwrap();
        assert_eq!(mentions.len(), 1);
        assert_eq!(diag.rows_skipped, 1);
        assert_eq!(diag.first_errors[0].0, 2);
        assert!(diag.first_errors[0].1.contains("GLOBALEVENTID"));
    }

    #[test]
    fn empty_identifier_and_bad_confidence_are_rejected() {
        let input = format!(
            "{}\n{}\n{}\n",
            codebook_row("1", "http://ex.org/a"),
            codebook_row("2", ""),
            codebook_row("3", "http://ex.org/c").replace("\t50\t", "\t150\t"),
        );
        let (mentions, diag) = parse_mentions_file(input.as_bytes()).unwrap();
        assert_eq!(mentions.len(), 1);
        assert_eq!(diag.rows_skipped, 2);
    }

    #[test]
    fn render_then_parse_is_identity() {
        let (mentions, _) = parse_mentions_file(codebook_row("7", "doc-7").as_bytes()).unwrap();
        let (again, _) = parse_mentions_file(render_mention_row(&mentions[0]).as_bytes()).unwrap();
        assert_eq!(mentions, again);
    }
}
