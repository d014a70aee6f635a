//! Stack Overflow data-dump ingestion: streaming `Posts.xml` and
//! `PostLinks.xml` parsers, an in-memory post store, annotation-unit
//! extraction and contrastive triplet mining.

mod rows;
mod store;
mod triplets;
mod units;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use rows::{parse_postlinks, parse_posts, LinkStats, PostLinksParser, PostStats, PostsParser};
pub use store::PostStore;
pub use triplets::{build_contrastive_triplets, write_triplets_jsonl, NegativePool, TripletStats};
pub use units::{extract_annotation_units, ExtractionStats, MAX_UNIT_ANSWERS, MIN_UNIT_ANSWERS};

/// `LinkTypeId` of duplicate links in the public dump.
pub const DUPLICATE_LINK_TYPE: u32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum DumpError {
    #[error("malformed XML at byte {offset}: {message}")]
    Xml { offset: u64, message: String },
    #[error("row at byte {offset}: missing attribute {attribute}")]
    MissingAttribute { offset: u64, attribute: &'static str },
    #[error("row at byte {offset}: invalid {attribute} {value:?}")]
    InvalidAttribute { offset: u64, attribute: &'static str, value: String },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl DumpError {
    /// Byte offset in the input stream, when the error has one.
    pub fn offset(&self) -> Option<u64> {
        match self {
            DumpError::Xml { offset, .. }
            | DumpError::MissingAttribute { offset, .. }
            | DumpError::InvalidAttribute { offset, .. } => Some(*offset),
            DumpError::Io(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PostType {
    Question,
    Answer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostRecord {
    pub post_id: u64,
    pub post_type: PostType,
    /// Set for answers.
    pub parent_id: Option<u64>,
    /// Set for questions.
    pub title: Option<String>,
    pub body_html: String,
    pub tags: BTreeSet<String>,
    pub score: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DuplicateLink {
    pub duplicate_post_id: u64,
    pub original_post_id: u64,
}

/// `(anchor, positive, negative)` question titles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceTriplet {
    pub anchor: String,
    pub positive: String,
    pub negative: String,
}

/// Parses the dump's tag encoding, `<java><spring>` or `|java|spring|`.
pub fn parse_tags(raw: &str) -> BTreeSet<String> {
    raw.split(['<', '>', '|']).map(str::trim).filter(|t| !t.is_empty()).map(str::to_lowercase).collect()
}
