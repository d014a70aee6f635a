//! ROUGE-N and ROUGE-L against multiple references, and benchmark-level
//! aggregation.
//!
//! Each metric is computed against every reference separately and the
//! recall, precision and F1 are then averaged over references. Texts are
//! tokenized with [`crate::text::rouge_tokenize`] (lowercase alphanumeric
//! runs, no stemming). ROUGE-L uses the LCS of the whole token sequences.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::corpus::{BenchmarkEntry, SentenceId};
use crate::pipeline::{ConfigEcho, SummaryResult};
use crate::text::rouge_tokenize;
use crate::Execution;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RougeError {
    #[error("n must be at least 1")]
    ZeroN,
    #[error("at least one reference is required")]
    NoReferences,
    #[error("{results} results for {entries} benchmark entries")]
    Misaligned { results: usize, entries: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RougeScore {
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

impl RougeScore {
    /// Score from overlap counts; empty denominators give 0.
    fn from_counts(overlap: usize, reference_total: usize, candidate_total: usize) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let recall = ratio(overlap, reference_total);
        let precision = ratio(overlap, candidate_total);
        let f1 = if recall + precision == 0.0 { 0.0 } else { 2.0 * recall * precision / (recall + precision) };
        Self { recall, precision, f1 }
    }

    fn mean(scores: &[RougeScore]) -> Self {
        if scores.is_empty() {
            return Self::default();
        }
        let n = scores.len() as f64;
        Self {
            recall: scores.iter().map(|s| s.recall).sum::<f64>() / n,
            precision: scores.iter().map(|s| s.precision).sum::<f64>() / n,
            f1: scores.iter().map(|s| s.f1).sum::<f64>() / n,
        }
    }
}

fn ngram_counts<T: Hash + Eq>(tokens: &[T], n: usize) -> HashMap<&[T], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_default() += 1;
        }
    }
    counts
}

/// ROUGE-N with clipped n-gram counts, averaged over references.
pub fn rouge_n<T: Hash + Eq>(candidate: &[T], references: &[Vec<T>], n: usize) -> Result<RougeScore, RougeError> {
    if n == 0 {
        return Err(RougeError::ZeroN);
    }
    if references.is_empty() {
        return Err(RougeError::NoReferences);
    }
    let cand = ngram_counts(candidate, n);
    let cand_total = candidate.len().saturating_sub(n - 1);
    let per_reference: Vec<RougeScore> = references
        .iter()
        .map(|reference| {
            let refs = ngram_counts(reference, n);
            let overlap: usize = refs.iter().map(|(g, &c)| c.min(cand.get(g).copied().unwrap_or(0))).sum();
            RougeScore::from_counts(overlap, reference.len().saturating_sub(n - 1), cand_total)
        })
        .collect();
    Ok(RougeScore::mean(&per_reference))
}

/// Length of the longest common subsequence.
pub fn lcs_len<T: Eq>(a: &[T], b: &[T]) -> usize {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut prev = vec![0usize; short.len() + 1];
    let mut row = vec![0usize; short.len() + 1];
    for x in long {
        for (j, y) in short.iter().enumerate() {
            row[j + 1] = if x == y { prev[j] + 1 } else { row[j].max(prev[j + 1]) };
        }
        std::mem::swap(&mut prev, &mut row);
    }
    prev[short.len()]
}

/// ROUGE-L over whole token sequences, averaged over references.
pub fn rouge_l<T: Eq>(candidate: &[T], references: &[Vec<T>]) -> Result<RougeScore, RougeError> {
    if references.is_empty() {
        return Err(RougeError::NoReferences);
    }
    let per_reference: Vec<RougeScore> =
        references.iter().map(|r| RougeScore::from_counts(lcs_len(candidate, r), r.len(), candidate.len())).collect();
    Ok(RougeScore::mean(&per_reference))
}

/// ROUGE-1, ROUGE-2 and ROUGE-L for one candidate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RougeTriple {
    pub rouge1: RougeScore,
    pub rouge2: RougeScore,
    #[serde(rename = "rougeL")]
    pub rouge_l: RougeScore,
}

impl RougeTriple {
    /// Scores a candidate text against reference texts.
    pub fn of_texts(candidate: &str, references: &[String]) -> Result<Self, RougeError> {
        let cand = rouge_tokenize(candidate);
        let refs: Vec<Vec<String>> = references.iter().map(|r| rouge_tokenize(r)).collect();
        Ok(Self {
            rouge1: rouge_n(&cand, &refs, 1)?,
            rouge2: rouge_n(&cand, &refs, 2)?,
            rouge_l: rouge_l(&cand, &refs)?,
        })
    }

    fn mean(triples: &[RougeTriple]) -> Self {
        let pick = |f: fn(&RougeTriple) -> RougeScore| RougeScore::mean(&triples.iter().map(f).collect::<Vec<_>>());
        Self { rouge1: pick(|t| t.rouge1), rouge2: pick(|t| t.rouge2), rouge_l: pick(|t| t.rouge_l) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryScores {
    pub query_id: String,
    pub query: String,
    /// Ids of the summary sentences that were scored.
    pub summary: Vec<SentenceId>,
    #[serde(flatten)]
    pub scores: RougeTriple,
}

/// Per-query and mean ROUGE for one system over a benchmark.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RougeReport {
    pub system: String,
    pub per_query: Vec<QueryScores>,
    /// Arithmetic mean of `per_query`.
    pub aggregate: RougeTriple,
    /// Entries that produced no summary and are excluded from the mean.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failed: Vec<String>,
    pub config_echo: Option<ConfigEcho>,
    pub tokenization: String,
    pub rouge_l_variant: String,
}

impl RougeReport {
    /// Plain-text table: one row per reported measure, one column per metric.
    pub fn to_table(&self) -> String {
        let rows = [
            ("R", self.aggregate.rouge1.recall, self.aggregate.rouge2.recall, self.aggregate.rouge_l.recall),
            ("P", self.aggregate.rouge1.precision, self.aggregate.rouge2.precision, self.aggregate.rouge_l.precision),
            ("F1", self.aggregate.rouge1.f1, self.aggregate.rouge2.f1, self.aggregate.rouge_l.f1),
        ];
        let labels: Vec<String> = rows.iter().map(|r| format!("{} ({})", self.system, r.0)).collect();
        let width = labels.iter().map(String::len).max().unwrap_or(0).max("System".len());
        let mut out = String::new();
        let _ = writeln!(out, "{:<width$} | {:>7} | {:>7} | {:>7}", "System", "ROUGE-1", "ROUGE-2", "ROUGE-L");
        let _ = writeln!(out, "{}-+-{}-+-{}-+-{}", "-".repeat(width), "-".repeat(7), "-".repeat(7), "-".repeat(7));
        for (label, (_, r1, r2, rl)) in labels.iter().zip(rows) {
            let _ = writeln!(out, "{label:<width$} | {r1:>7.3} | {r2:>7.3} | {rl:>7.3}");
        }
        out
    }
}

/// Query ids are the 0-based entry position, zero-padded.
pub fn query_id(index: usize) -> String {
    format!("q{index:03}")
}

/// Scores aligned results against their entries. A summary is its sentences
/// joined by spaces; a reference likewise.
pub fn evaluate_benchmark(
    results: &[SummaryResult],
    entries: &[BenchmarkEntry],
    exec: Execution,
) -> Result<RougeReport, RougeError> {
    if results.len() != entries.len() {
        return Err(RougeError::Misaligned { results: results.len(), entries: entries.len() });
    }
    let items: Vec<(usize, &SummaryResult, &BenchmarkEntry)> =
        results.iter().zip(entries).enumerate().map(|(i, (r, e))| (i, r, e)).collect();
    evaluate_items(&items, exec, results.first().map(|r| r.config.clone()))
}

/// Like [`evaluate_benchmark`] but tolerates failed entries, which are listed
/// in [`RougeReport::failed`] and left out of the mean.
pub fn evaluate_outcomes<E>(
    outcomes: &[Result<SummaryResult, E>],
    entries: &[BenchmarkEntry],
    exec: Execution,
) -> Result<RougeReport, RougeError> {
    if outcomes.len() != entries.len() {
        return Err(RougeError::Misaligned { results: outcomes.len(), entries: entries.len() });
    }
    let mut items = Vec::new();
    let mut failed = Vec::new();
    for (i, (outcome, entry)) in outcomes.iter().zip(entries).enumerate() {
        match outcome {
            Ok(r) => items.push((i, r, entry)),
            Err(_) => failed.push(query_id(i)),
        }
    }
    let echo = items.first().map(|(_, r, _)| r.config.clone());
    let mut report = evaluate_items(&items, exec, echo)?;
    report.failed = failed;
    Ok(report)
}

fn evaluate_items(
    items: &[(usize, &SummaryResult, &BenchmarkEntry)],
    exec: Execution,
    config_echo: Option<ConfigEcho>,
) -> Result<RougeReport, RougeError> {
    let scored = exec.map(items, |(i, result, entry)| {
        let candidate = result.summary_text();
        let references: Vec<String> = entry.references().iter().map(|r| r.join(" ")).collect();
        RougeTriple::of_texts(&candidate, &references).map(|scores| QueryScores {
            query_id: query_id(*i),
            query: entry.query().text().to_string(),
            summary: result.ids(),
            scores,
        })
    });
    let per_query = scored.into_iter().collect::<Result<Vec<_>, _>>()?;
    let aggregate = RougeTriple::mean(&per_query.iter().map(|q| q.scores).collect::<Vec<_>>());
    let system = config_echo.as_ref().map_or_else(|| "system".to_string(), ConfigEcho::system_name);
    Ok(RougeReport {
        system,
        per_query,
        aggregate,
        failed: Vec::new(),
        config_echo,
        tokenization: "lowercase alphanumeric runs; no stemming; no stopword removal".into(),
        rouge_l_variant: "whole-sequence LCS".into(),
    })
}
