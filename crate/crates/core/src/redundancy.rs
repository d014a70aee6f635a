//! Greedy redundancy removal over a centrality ranking.

use serde::{Deserialize, Serialize};

use crate::corpus::AnswerSentence;
use crate::scoring::{cosine_similarity, ScoringError, SentenceEmbedding};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RedundancyConfig {
    /// Candidates more similar than this to any selected sentence are dropped.
    pub threshold: f64,
    /// Maximum summary length in sentences.
    pub budget: usize,
}

impl Default for RedundancyConfig {
    fn default() -> Self {
        Self { threshold: 0.8, budget: 5 }
    }
}

impl RedundancyConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return Err(format!("threshold {} not in (0, 1]", self.threshold));
        }
        if self.budget == 0 {
            return Err("budget must be at least 1".into());
        }
        Ok(())
    }
}

/// The most similar already-selected sentence, if any.
fn most_similar(
    candidate: &SentenceEmbedding,
    selected: &[&SentenceEmbedding],
) -> Result<Option<(usize, f64)>, ScoringError> {
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in selected.iter().enumerate() {
        let sim = cosine_similarity(candidate, s)?;
        if best.is_none_or(|(_, b)| sim > b) {
            best = Some((i, sim));
        }
    }
    Ok(best)
}

/// True iff the candidate's maximum cosine similarity to `selected` is
/// strictly above `threshold`.
pub fn is_redundant(
    candidate: &SentenceEmbedding,
    selected: &[&SentenceEmbedding],
    threshold: f64,
) -> Result<bool, ScoringError> {
    Ok(most_similar(candidate, selected)?.is_some_and(|(_, sim)| sim > threshold))
}

/// What greedy selection did with one ranked sentence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SelectionDecision {
    /// In the summary, at this 0-based position.
    Selected { position: usize },
    /// Too similar to the earlier-ranked sentence at `conflicts_with` (an
    /// index into the ranked input).
    Redundant { conflicts_with: usize, similarity: f64 },
    /// Not redundant, but the budget was already filled.
    OverBudget,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GreedySelection {
    pub summary: Vec<AnswerSentence>,
    /// One decision per ranked input, in input order.
    pub decisions: Vec<SelectionDecision>,
    /// Highest similarity to an earlier kept sentence, per input (`None` for
    /// the first).
    pub max_similarity: Vec<Option<f64>>,
}

/// Scans the ranking in order and keeps every sentence that is not redundant
/// with those kept before it; the summary is the first `budget` kept.
///
/// The top-ranked sentence is always kept. Every pair in the summary has
/// cosine similarity at most `threshold`.
pub fn greedy_select(
    ranked: &[(AnswerSentence, SentenceEmbedding)],
    config: &RedundancyConfig,
) -> Result<GreedySelection, ScoringError> {
    let mut kept: Vec<usize> = Vec::new();
    let mut decisions = Vec::with_capacity(ranked.len());
    let mut max_similarity = Vec::with_capacity(ranked.len());
    for (i, (_, embedding)) in ranked.iter().enumerate() {
        let selected: Vec<&SentenceEmbedding> = kept.iter().map(|&k| &ranked[k].1).collect();
        let best = most_similar(embedding, &selected)?;
        max_similarity.push(best.map(|(_, s)| s));
        match best {
            Some((at, similarity)) if similarity > config.threshold => {
                decisions.push(SelectionDecision::Redundant { conflicts_with: kept[at], similarity });
            }
            _ => {
                decisions.push(if kept.len() < config.budget {
                    SelectionDecision::Selected { position: kept.len() }
                } else {
                    SelectionDecision::OverBudget
                });
                kept.push(i);
            }
        }
    }
    let summary = kept.iter().take(config.budget).map(|&k| ranked[k].0.clone()).collect();
    Ok(GreedySelection { summary, decisions, max_similarity })
}
