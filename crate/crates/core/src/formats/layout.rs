//! Column layouts of the GDELT 2.0 tab-delimited exports.
//!
//! Every parser addresses cells through these tables. Each `layout!` block is
//! the column list of one codebook in file order; the index constants and the
//! `WIDTH`/`NAMES` tables are generated from it, so a codebook revision only
//! touches the list.

macro_rules! layout {
    ($(#[$meta:meta])* $module:ident { $($column:ident),+ $(,)? }) => {
        $(#[$meta])*
        #[allow(non_upper_case_globals, dead_code)]
        pub mod $module {
            #[allow(non_camel_case_types, clippy::upper_case_acronyms)]
            enum Column {
                $($column,)+
                __Width,
            }

            $(pub const $column: usize = Column::$column as usize;)+

            /// Number of columns in a well-formed row.
            pub const WIDTH: usize = Column::__Width as usize;

            /// Codebook column names, in file order.
            pub const NAMES: [&str; WIDTH] = [$(stringify!($column)),+];
        }
    };
}

layout! {
    /// GDELT 2.0 Event table (`*.export.CSV`), 61 columns.
    events {
        GLOBALEVENTID,
        SQLDATE,
        MonthYear,
        Year,
        FractionDate,
        Actor1Code,
        Actor1Name,
        Actor1CountryCode,
        Actor1KnownGroupCode,
        Actor1EthnicCode,
        Actor1Religion1Code,
        Actor1Religion2Code,
        Actor1Type1Code,
        Actor1Type2Code,
        Actor1Type3Code,
        Actor2Code,
        Actor2Name,
        Actor2CountryCode,
        Actor2KnownGroupCode,
        Actor2EthnicCode,
        Actor2Religion1Code,
        Actor2Religion2Code,
        Actor2Type1Code,
        Actor2Type2Code,
        Actor2Type3Code,
        IsRootEvent,
        EventCode,
        EventBaseCode,
        EventRootCode,
        QuadClass,
        GoldsteinScale,
        NumMentions,
        NumSources,
        NumArticles,
        AvgTone,
        Actor1Geo_Type,
        Actor1Geo_FullName,
        Actor1Geo_CountryCode,
        Actor1Geo_ADM1Code,
        Actor1Geo_ADM2Code,
        Actor1Geo_Lat,
        Actor1Geo_Long,
        Actor1Geo_FeatureID,
        Actor2Geo_Type,
        Actor2Geo_FullName,
        Actor2Geo_CountryCode,
        Actor2Geo_ADM1Code,
        Actor2Geo_ADM2Code,
        Actor2Geo_Lat,
        Actor2Geo_Long,
        Actor2Geo_FeatureID,
        ActionGeo_Type,
        ActionGeo_FullName,
        ActionGeo_CountryCode,
        ActionGeo_ADM1Code,
        ActionGeo_ADM2Code,
        ActionGeo_Lat,
        ActionGeo_Long,
        ActionGeo_FeatureID,
        DATEADDED,
        SOURCEURL,
    }
}

layout! {
    /// GDELT 2.0 Mentions table (`*.mentions.CSV`), 16 columns.
    mentions {
        GLOBALEVENTID,
        EventTimeDate,
        MentionTimeDate,
        MentionType,
        MentionSourceName,
        MentionIdentifier,
        SentenceID,
        Actor1CharOffset,
        Actor2CharOffset,
        ActionCharOffset,
        InRawText,
        Confidence,
        MentionDocLen,
        MentionDocTone,
        MentionDocTranslationInfo,
        Extras,
    }
}

layout! {
    /// GKG 2.1 table (`*.gkg.csv`), 27 columns.
    gkg {
        GKGRECORDID,
        V2_1DATE,
        V2SourceCollectionIdentifier,
        V2SourceCommonName,
        V2DocumentIdentifier,
        V1Counts,
        V2_1Counts,
        V1Themes,
        V2EnhancedThemes,
        V1Locations,
        V2EnhancedLocations,
        V1Persons,
        V2EnhancedPersons,
        V1Organizations,
        V2EnhancedOrganizations,
        V1_5Tone,
        V2_1EnhancedDates,
        V2GCAM,
        V2_1SharingImage,
        V2_1RelatedImages,
        V2_1SocialImageEmbeds,
        V2_1SocialVideoEmbeds,
        V2_1Quotations,
        V2_1AllNames,
        V2_1Amounts,
        V2_1TranslationInfo,
        V2ExtrasXML,
    }
}
