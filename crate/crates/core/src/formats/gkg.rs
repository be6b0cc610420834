use std::io::Read;

use super::layout::gkg as col;
use super::{fmt_timestamp, parse_rows, req, timestamp, FormatError, GkgRecord, Parsed, TableKind, ThemeHit, ToneTuple};

/// Parse a GKG 2.1 export (`*.gkg.csv`).
pub fn parse_gkg_file<R: Read>(input: R) -> Result<Parsed<GkgRecord>, FormatError> {
    parse_rows(input, TableKind::Gkg, col::WIDTH, parse_gkg_row)
}

/// Parse a `V2EnhancedThemes` cell: `THEME,offset` entries separated by `;`.
///
/// Order is preserved. Entries without a comma (or with a non-numeric
/// offset) keep their theme with offset 0; empty entries are dropped.
pub fn parse_v2themes(raw: &str) -> Vec<ThemeHit> {
    raw.split(';')
        .filter_map(|entry| {
            let entry = entry.trim();
            let (theme, offset) = match entry.split_once(',') {
                Some((theme, offset)) => (theme.trim(), offset.trim().parse().unwrap_or(0)),
                None => (entry, 0),
            };
            (!theme.is_empty()).then(|| ThemeHit::new(theme, offset))
        })
        .collect()
}

/// Inverse of [`parse_v2themes`] for theme names free of `;` and `,`.
pub fn render_v2themes(hits: &[ThemeHit]) -> String {
    hits.iter()
        .map(|hit| format!("{},{}", hit.theme, hit.char_offset))
        .collect::<Vec<_>>()
        .join(";")
}

fn parse_tone(raw: &str) -> Result<Option<ToneTuple>, String> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(None);
    }
    let values = raw
        .split(',')
        .map(|v| v.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| format!("V1_5Tone: {raw:?} is not a list of numbers"))?;
    match values[..] {
        [tone, positive, negative, polarity, ..] => Ok(Some(ToneTuple {
            tone,
            positive,
            negative,
            polarity,
        })),
        _ => Err(format!("V1_5Tone: expected at least 4 values, found {}", values.len())),
    }
}

fn parse_gkg_row(cells: &[&str]) -> Result<GkgRecord, String> {
    Ok(GkgRecord {
        gkg_record_id: req(cells[col::GKGRECORDID], "GKGRECORDID")?.to_string(),
        date: timestamp(cells[col::V2_1DATE], "V2_1DATE")?,
        document_identifier: req(cells[col::V2DocumentIdentifier], "V2DocumentIdentifier")?.to_string(),
        themes: parse_v2themes(cells[col::V2EnhancedThemes]),
        v2_tone: parse_tone(cells[col::V1_5Tone])?,
        locations_raw: cells[col::V2EnhancedLocations].to_string(),
        gcam_raw: cells[col::V2GCAM].to_string(),
    })
}

/// Render a record as one GKG line (no trailing newline).
pub fn render_gkg_row(record: &GkgRecord) -> String {
    let mut row = vec![String::new(); col::WIDTH];
    row[col::GKGRECORDID] = record.gkg_record_id.clone();
    row[col::V2_1DATE] = fmt_timestamp(record.date);
    row[col::V2SourceCollectionIdentifier] = "1".to_string();
    row[col::V2DocumentIdentifier] = record.document_identifier.clone();
    row[col::V2EnhancedThemes] = render_v2themes(&record.themes);
    if let Some(t) = record.v2_tone {
        row[col::V1_5Tone] = format!("{},{},{},{}", t.tone, t.positive, t.negative, t.polarity);
    }
    row[col::V2EnhancedLocations] = record.locations_raw.clone();
    row[col::V2GCAM] = record.gcam_raw.clone();
    row.join("\t")
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn codebook_row(themes: &str, tone: &str) -> String {
        let mut cells = vec![""; col::WIDTH];
        cells[col::GKGRECORDID] = "20210326134500-17";
        cells[col::V2_1DATE] = "20210326134500";
        cells[col::V2SourceCollectionIdentifier] = "1";
        cells[col::V2SourceCommonName] = "ex.org";
        cells[col::V2DocumentIdentifier] = "http://ex.org/a";
        cells[col::V1Themes] = "TAX_ETHNICITY;";
        cells[col::V2EnhancedThemes] = themes;
        cells[col::V2EnhancedLocations] = "1#Spain#SP#SP##40#-4#SP#120";
        cells[col::V1_5Tone] = tone;
        cells[col::V2GCAM] = "wc:245,c1.2:3,c12.1:14";
        cells.join("\t")
    }

    #[test]
    fn v2themes_cell_is_split_into_hits() {
        let row = codebook_row(
            "DISCRIMINATION_IMMIGRATION_XENOPHOBIA,215;TAX_ETHNICITY,90",
            "-3.5,2.1,5.6,7.7",
        );
        let (records, _) = parse_gkg_file(row.as_bytes()).unwrap();
        let r = &records[0];
        assert_eq!(
            r.themes,
            vec![
                ThemeHit::new("DISCRIMINATION_IMMIGRATION_XENOPHOBIA", 215),
                ThemeHit::new("TAX_ETHNICITY", 90)
            ]
        );
        assert_eq!(r.document_identifier, "http://ex.org/a");
        assert_eq!(r.gcam_raw, "wc:245,c1.2:3,c12.1:14");
        assert_eq!(r.locations_raw, "1#Spain#SP#SP##40#-4#SP#120");
    }

    #[test]
    fn tone_cell_gives_four_values() {
        let (records, _) = parse_gkg_file(codebook_row("", "-3.5,2.1,5.6,7.7").as_bytes()).unwrap();
        assert_eq!(
            records[0].v2_tone,
            Some(ToneTuple {
                tone: -3.5,
                positive: 2.1,
                negative: 5.6,
                polarity: 7.7
            })
        );
        assert!(records[0].themes.is_empty());
    }

    #[test]
    fn seven_value_tone_cell_keeps_the_first_four() {
        let (records, _) =
            parse_gkg_file(codebook_row("", "-1,2,3,5,21.2,0.5,340").as_bytes()).unwrap();
        assert_eq!(records[0].v2_tone.unwrap().polarity, 5.0);
    }

    #[test]
    fn short_or_garbled_tone_skips_the_row() {
        let input = format!(
            "{}\n{}\n{}\n",
            codebook_row("", "1,2,3,4"),
            codebook_row("", "1,2"),
            codebook_row("", "a,b,c,d")
        );
        let (records, diag) = parse_gkg_file(input.as_bytes()).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(diag.rows_skipped, 2);
    }

    #[test]
    fn v2themes_grammar() {
        assert_eq!(parse_v2themes(""), vec![]);
        assert_eq!(
            parse_v2themes("A,1;B,2"),
            vec![ThemeHit::new("A", 1), ThemeHit::new("B", 2)]
        );
        assert_eq!(
            parse_v2themes("DISCRIMINATION_IMMIGRATION_XENOPHOBES,10"),
            vec![ThemeHit::new("DISCRIMINATION_IMMIGRATION_XENOPHOBES", 10)]
        );
        assert_eq!(parse_v2themes("NOCOMMA;B,2;"), vec![ThemeHit::new("NOCOMMA", 0), ThemeHit::new("B", 2)]);
    }

    proptest! {
        #[test]
        fn v2themes_render_parse_round_trip(
            hits in prop::collection::vec(("[A-Z][A-Z0-9_]{0,40}", 0u64..1_000_000), 0..20)
        ) {
            let hits: Vec<ThemeHit> = hits.into_iter().map(|(t, o)| ThemeHit::new(t, o)).collect();
            prop_assert_eq!(parse_v2themes(&render_v2themes(&hits)), hits);
        }
    }
}
