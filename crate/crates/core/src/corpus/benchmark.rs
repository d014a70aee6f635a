use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AnnotationUnit, AnswerSentence, CorpusError, TechnicalQuery};

/// Every reference summary holds exactly this many sentences.
pub const REFERENCE_SENTENCES: usize = 5;

/// One human-written summary: its sentences, in order.
pub type ReferenceSummary = Vec<String>;

/// A query, its candidate sentences and one or more reference summaries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEntry")]
pub struct BenchmarkEntry {
    query: TechnicalQuery,
    candidates: Vec<AnswerSentence>,
    references: Vec<ReferenceSummary>,
}

#[derive(Deserialize)]
struct RawEntry {
    query: TechnicalQuery,
    candidates: Vec<AnswerSentence>,
    references: Vec<ReferenceSummary>,
}

impl TryFrom<RawEntry> for BenchmarkEntry {
    type Error = String;

    fn try_from(raw: RawEntry) -> Result<Self, Self::Error> {
        BenchmarkEntry::new(raw.query, raw.candidates, raw.references)
    }
}

impl BenchmarkEntry {
    pub fn new(
        query: TechnicalQuery,
        candidates: Vec<AnswerSentence>,
        references: Vec<ReferenceSummary>,
    ) -> Result<Self, String> {
        if references.is_empty() {
            return Err("entry has no reference summaries".into());
        }
        for (i, reference) in references.iter().enumerate() {
            if reference.len() != REFERENCE_SENTENCES {
                return Err(format!("reference {i} has {} sentences, expected {REFERENCE_SENTENCES}", reference.len()));
            }
        }
        let mut ids = HashSet::new();
        for c in &candidates {
            if !ids.insert(c.id()) {
                return Err(format!("duplicate candidate id {}", c.id()));
            }
        }
        Ok(Self { query, candidates, references })
    }

    pub fn query(&self) -> &TechnicalQuery {
        &self.query
    }

    pub fn candidates(&self) -> &[AnswerSentence] {
        &self.candidates
    }

    pub fn references(&self) -> &[ReferenceSummary] {
        &self.references
    }
}

#[derive(Deserialize)]
struct RawBenchmark {
    entries: Vec<serde_json::Value>,
}

#[derive(Serialize)]
struct BenchmarkOut<'a> {
    entries: &'a [BenchmarkEntry],
}

/// Parses a benchmark document, naming the first offending entry on error.
pub fn parse_benchmark(json: &str) -> Result<Vec<BenchmarkEntry>, CorpusError> {
    let raw: RawBenchmark = serde_json::from_str(json)?;
    raw.entries
        .into_iter()
        .enumerate()
        .map(|(index, value)| {
            serde_json::from_value(value).map_err(|e| CorpusError::InvalidEntry { index, message: e.to_string() })
        })
        .collect()
}

pub fn load_benchmark(path: impl AsRef<Path>) -> Result<Vec<BenchmarkEntry>, CorpusError> {
    parse_benchmark(&read(path.as_ref())?)
}

pub fn to_benchmark_json(entries: &[BenchmarkEntry]) -> String {
    serde_json::to_string_pretty(&BenchmarkOut { entries }).expect("benchmark serializes")
}

pub fn save_benchmark(path: impl AsRef<Path>, entries: &[BenchmarkEntry]) -> Result<(), CorpusError> {
    write(path.as_ref(), &to_benchmark_json(entries))
}

/// Size statistics of a benchmark.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchmarkStats {
    pub entries: usize,
    pub references: usize,
    /// Mean whitespace-delimited word count of a whole reference summary.
    pub mean_reference_words: f64,
}

impl BenchmarkStats {
    pub fn of(entries: &[BenchmarkEntry]) -> Self {
        let words: Vec<usize> = entries
            .iter()
            .flat_map(|e| e.references.iter())
            .map(|r| r.iter().map(|s| crate::text::word_count(s)).sum())
            .collect();
        let mean = if words.is_empty() { 0.0 } else { words.iter().sum::<usize>() as f64 / words.len() as f64 };
        Self { entries: entries.len(), references: words.len(), mean_reference_words: mean }
    }
}

/// A file of annotation units, as written by unit extraction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitsFile {
    pub units: Vec<AnnotationUnit>,
}

/// Loads units from either a `{"units": [...]}` document or a single unit
/// object.
pub fn load_units(path: impl AsRef<Path>) -> Result<Vec<AnnotationUnit>, CorpusError> {
    let text = read(path.as_ref())?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("units").is_some() {
        Ok(serde_json::from_value::<UnitsFile>(value)?.units)
    } else {
        Ok(vec![serde_json::from_value(value)?])
    }
}

pub fn save_units(path: impl AsRef<Path>, units: &[AnnotationUnit]) -> Result<(), CorpusError> {
    let file = UnitsFile { units: units.to_vec() };
    write(path.as_ref(), &serde_json::to_string_pretty(&file)?)
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), CorpusError> {
    fs::write(path, contents).map_err(|source| CorpusError::Io { path: path.display().to_string(), source })
}
