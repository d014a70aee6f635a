//! Queries, answers, sentences and benchmark data.

mod benchmark;
mod html;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use benchmark::{
    load_benchmark, load_units, parse_benchmark, save_benchmark, save_units, to_benchmark_json, BenchmarkEntry,
    BenchmarkStats, ReferenceSummary, UnitsFile, REFERENCE_SENTENCES,
};
pub use html::{
    clean_sentence, has_text_content, split_sentences, CODE_PLACEHOLDER, FIGURE_PLACEHOLDER, LINK_PLACEHOLDER,
    TABLE_PLACEHOLDER,
};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("query text is empty")]
    EmptyQuery,
    #[error("annotation unit has no answers")]
    NoAnswers,
    #[error("answer index {0} appears more than once")]
    DuplicateAnswerIndex(u32),
    #[error("invalid sentence id {0:?}, expected \"#AA_SS\"")]
    InvalidSentenceId(String),
    #[error("duplicate sentence id {0}")]
    DuplicateSentenceId(SentenceId),
    #[error("sentence {0} has empty text")]
    EmptySentence(SentenceId),
    #[error("stored sentences do not match the cleaned answers")]
    SentenceMismatch,
    #[error("benchmark entry {index}: {message}")]
    InvalidEntry { index: usize, message: String },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A technical question: the title of the original question plus its tags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawQuery")]
pub struct TechnicalQuery {
    text: String,
    tags: BTreeSet<String>,
}

#[derive(Deserialize)]
struct RawQuery {
    text: String,
    #[serde(default)]
    tags: BTreeSet<String>,
}

impl TryFrom<RawQuery> for TechnicalQuery {
    type Error = CorpusError;

    fn try_from(raw: RawQuery) -> Result<Self, Self::Error> {
        TechnicalQuery::new(raw.text, raw.tags)
    }
}

impl TechnicalQuery {
    pub fn new(
        text: impl Into<String>,
        tags: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Self, CorpusError> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(CorpusError::EmptyQuery);
        }
        Ok(Self { text, tags: tags.into_iter().map(Into::into).collect() })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn tags(&self) -> &BTreeSet<String> {
        &self.tags
    }
}

/// Position of a sentence inside an annotation unit, rendered `#AA_SS`.
///
/// Ordering is numeric on (answer, sentence), which is also the tie-break
/// order used by every ranking stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SentenceId {
    pub answer: u32,
    pub sentence: u32,
}

impl SentenceId {
    pub fn new(answer: u32, sentence: u32) -> Self {
        Self { answer, sentence }
    }
}

impl fmt::Display for SentenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:02}_{:02}", self.answer, self.sentence)
    }
}

impl FromStr for SentenceId {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CorpusError::InvalidSentenceId(s.to_string());
        let (a, b) = s.strip_prefix('#').and_then(|r| r.split_once('_')).ok_or_else(bad)?;
        let digits = |p: &str| p.len() >= 2 && p.bytes().all(|b| b.is_ascii_digit());
        if !digits(a) || !digits(b) {
            return Err(bad());
        }
        Ok(Self { answer: a.parse().map_err(|_| bad())?, sentence: b.parse().map_err(|_| bad())? })
    }
}

impl Serialize for SentenceId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SentenceId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One answer of an annotation unit, as found in the dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    pub answer_index: u32,
    pub body_html: String,
    pub vote_score: i64,
    pub source_post_id: u64,
}

/// A cleaned answer sentence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSentence")]
pub struct AnswerSentence {
    id: SentenceId,
    text: String,
}

#[derive(Deserialize)]
struct RawSentence {
    id: SentenceId,
    text: String,
}

impl TryFrom<RawSentence> for AnswerSentence {
    type Error = CorpusError;

    fn try_from(raw: RawSentence) -> Result<Self, Self::Error> {
        AnswerSentence::new(raw.id, raw.text)
    }
}

impl AnswerSentence {
    pub fn new(id: SentenceId, text: impl Into<String>) -> Result<Self, CorpusError> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(CorpusError::EmptySentence(id));
        }
        Ok(Self { id, text })
    }

    pub fn id(&self) -> SentenceId {
        self.id
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn answer_index(&self) -> u32 {
        self.id.answer
    }

    pub fn sentence_index(&self) -> u32 {
        self.id.sentence
    }
}

/// A sentence with the score some ranking stage gave it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoredSentence {
    pub sentence: AnswerSentence,
    pub score: f64,
}

/// Sorts by score descending, ties by ascending sentence id.
pub(crate) fn rank_descending(items: &mut [ScoredSentence]) {
    items.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.sentence.id.cmp(&b.sentence.id)));
}

/// A technical query with the pooled answers of its question and duplicates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawUnit")]
pub struct AnnotationUnit {
    query: TechnicalQuery,
    answers: Vec<Answer>,
    sentences: Vec<AnswerSentence>,
}

#[derive(Deserialize)]
struct RawUnit {
    query: TechnicalQuery,
    answers: Vec<Answer>,
    #[serde(default)]
    sentences: Option<Vec<AnswerSentence>>,
}

impl TryFrom<RawUnit> for AnnotationUnit {
    type Error = CorpusError;

    fn try_from(raw: RawUnit) -> Result<Self, Self::Error> {
        let unit = build_unit(raw.query, raw.answers)?;
        match raw.sentences {
            Some(stored) if stored != unit.sentences => Err(CorpusError::SentenceMismatch),
            _ => Ok(unit),
        }
    }
}

impl AnnotationUnit {
    pub fn query(&self) -> &TechnicalQuery {
        &self.query
    }

    pub fn answers(&self) -> &[Answer] {
        &self.answers
    }

    pub fn sentences(&self) -> &[AnswerSentence] {
        &self.sentences
    }
}

/// Cleaned sentences of one answer body: split, cleaned, and stripped of
/// sentences that are only links or only placeholders.
pub fn answer_sentences(body_html: &str) -> Vec<String> {
    split_sentences(body_html).iter().filter_map(|raw| clean_sentence(raw)).filter(|s| has_text_content(s)).collect()
}

/// Builds an annotation unit, assigning `#AA_SS` ids where `AA` is the answer
/// index and `SS` the 1-based position among the answer's surviving
/// sentences.
pub fn build_unit(query: TechnicalQuery, answers: Vec<Answer>) -> Result<AnnotationUnit, CorpusError> {
    if answers.is_empty() {
        return Err(CorpusError::NoAnswers);
    }
    let mut seen = HashSet::new();
    let mut sentences = Vec::new();
    for answer in &answers {
        if !seen.insert(answer.answer_index) {
            return Err(CorpusError::DuplicateAnswerIndex(answer.answer_index));
        }
        for (pos, text) in answer_sentences(&answer.body_html).into_iter().enumerate() {
            let id = SentenceId::new(answer.answer_index, pos as u32 + 1);
            sentences.push(AnswerSentence::new(id, text)?);
        }
    }
    Ok(AnnotationUnit { query, answers, sentences })
}
