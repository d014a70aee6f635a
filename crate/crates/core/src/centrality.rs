//! Sentence centrality via weighted TextRank.
//!
//! Sentences are nodes of an undirected graph whose edge weights measure word
//! overlap. Scores follow the weighted PageRank recursion
//!
//! ```text
//! R(i) <- (1 - d) + d * sum_j  w(i, j) / W(j) * R(j),    W(j) = sum_k w(j, k)
//! ```
//!
//! started from `R = 1` and iterated until no score moves by more than the
//! convergence threshold.

use serde::{Deserialize, Serialize};

use crate::corpus::{rank_descending, AnswerSentence, ScoredSentence};
use crate::text::tokenize;
use crate::Execution;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CentralityError {
    #[error("sentence graph needs at least one node")]
    EmptyGraph,
    #[error("invalid TextRank config: {0}")]
    InvalidConfig(String),
    #[error("invalid weight matrix: {0}")]
    InvalidWeights(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TextRankConfig {
    pub damping: f64,
    pub convergence_threshold: f64,
    pub max_iterations: usize,
}

impl Default for TextRankConfig {
    fn default() -> Self {
        Self { damping: 0.85, convergence_threshold: 1e-4, max_iterations: 1000 }
    }
}

impl TextRankConfig {
    pub fn validate(&self) -> Result<(), CentralityError> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(CentralityError::InvalidConfig(format!("damping {} not in (0, 1)", self.damping)));
        }
        if self.convergence_threshold.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
            || !self.convergence_threshold.is_finite()
        {
            return Err(CentralityError::InvalidConfig(format!(
                "convergence threshold {} must be positive",
                self.convergence_threshold
            )));
        }
        if self.max_iterations == 0 {
            return Err(CentralityError::InvalidConfig("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Overlap weight between two tokenized sentences: distinct shared tokens over
/// `ln|a| + ln|b|`, or 0 when that denominator is not positive.
pub fn edge_weight(a: &[String], b: &[String]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let denominator = (a.len() as f64).ln() + (b.len() as f64).ln();
    if denominator <= 0.0 {
        return 0.0;
    }
    let mut shared: Vec<&String> = a.iter().filter(|t| b.contains(t)).collect();
    shared.sort_unstable();
    shared.dedup();
    shared.len() as f64 / denominator
}

/// Token count plus the sorted distinct tokens, so overlap is a linear merge.
struct TokenBag {
    len: usize,
    distinct: Vec<String>,
}

impl TokenBag {
    fn new(mut tokens: Vec<String>) -> Self {
        let len = tokens.len();
        tokens.sort_unstable();
        tokens.dedup();
        Self { len, distinct: tokens }
    }

    /// Same value as [`edge_weight`] on the original token lists.
    fn weight(&self, other: &TokenBag) -> f64 {
        if self.len == 0 || other.len == 0 {
            return 0.0;
        }
        let denominator = (self.len as f64).ln() + (other.len as f64).ln();
        if denominator <= 0.0 {
            return 0.0;
        }
        let (mut i, mut j, mut shared) = (0, 0, 0usize);
        while i < self.distinct.len() && j < other.distinct.len() {
            match self.distinct[i].cmp(&other.distinct[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    shared += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        shared as f64 / denominator
    }
}

/// Undirected sentence graph with a dense symmetric weight matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SentenceGraph {
    nodes: Vec<AnswerSentence>,
    weights: Vec<f64>,
}

impl SentenceGraph {
    /// Builds a graph from explicit row-major weights, checking symmetry, a
    /// zero diagonal and finite non-negative entries.
    pub fn from_weights(nodes: Vec<AnswerSentence>, weights: Vec<f64>) -> Result<Self, CentralityError> {
        let n = nodes.len();
        if n == 0 {
            return Err(CentralityError::EmptyGraph);
        }
        if weights.len() != n * n {
            return Err(CentralityError::InvalidWeights(format!("{} entries for {n} nodes", weights.len())));
        }
        for i in 0..n {
            if weights[i * n + i] != 0.0 {
                return Err(CentralityError::InvalidWeights(format!("non-zero diagonal at {i}")));
            }
            for j in 0..n {
                let w = weights[i * n + j];
                if !w.is_finite() || w < 0.0 {
                    return Err(CentralityError::InvalidWeights(format!("entry ({i}, {j}) = {w}")));
                }
                if w != weights[j * n + i] {
                    return Err(CentralityError::InvalidWeights(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[AnswerSentence] {
        &self.nodes
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.len() + j]
    }

    /// The same graph with every weight multiplied by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Self {
        Self { nodes: self.nodes.clone(), weights: self.weights.iter().map(|w| w * factor).collect() }
    }
}

/// Builds the word-overlap graph. Nodes are put in id order so that the graph,
/// and everything computed from it, does not depend on input order.
pub fn build_graph(sentences: &[AnswerSentence], exec: Execution) -> Result<SentenceGraph, CentralityError> {
    if sentences.is_empty() {
        return Err(CentralityError::EmptyGraph);
    }
    let mut nodes = sentences.to_vec();
    nodes.sort_by_key(AnswerSentence::id);
    let bags: Vec<TokenBag> = nodes.iter().map(|s| TokenBag::new(tokenize(s.text()))).collect();
    let n = nodes.len();
    // upper triangle only, mirrored below
    let upper = exec.map_range(n, |i| (i + 1..n).map(|j| bags[i].weight(&bags[j])).collect::<Vec<f64>>());
    let mut weights = vec![0.0; n * n];
    for (i, row) in upper.iter().enumerate() {
        for (offset, &w) in row.iter().enumerate() {
            let j = i + 1 + offset;
            weights[i * n + j] = w;
            weights[j * n + i] = w;
        }
    }
    Ok(SentenceGraph { nodes, weights })
}

/// Result of running TextRank over a graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TextRankOutcome {
    /// Sentences by score descending, ties by ascending id.
    pub ranked: Vec<ScoredSentence>,
    pub iterations: usize,
    pub converged: bool,
    /// Largest per-node change in the last iteration.
    pub final_delta: f64,
}

/// Raw TextRank scores in node order, with iteration count, convergence flag
/// and final delta.
pub fn textrank_scores(
    graph: &SentenceGraph,
    config: &TextRankConfig,
    exec: Execution,
) -> Result<(Vec<f64>, usize, bool, f64), CentralityError> {
    config.validate()?;
    let n = graph.len();
    if n == 0 {
        return Err(CentralityError::EmptyGraph);
    }
    let out_weight: Vec<f64> = (0..n).map(|j| (0..n).map(|k| graph.weight(j, k)).sum()).collect();
    let base = 1.0 - config.damping;
    let mut scores = vec![1.0; n];
    let mut delta = f64::INFINITY;
    for iteration in 1..=config.max_iterations {
        let next = exec.map_range(n, |i| {
            let mut inflow = 0.0;
            for j in 0..n {
                let w = graph.weight(i, j);
                if w > 0.0 {
                    inflow += w / out_weight[j] * scores[j];
                }
            }
            base + config.damping * inflow
        });
        delta = next.iter().zip(&scores).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        scores = next;
        if delta < config.convergence_threshold {
            return Ok((scores, iteration, true, delta));
        }
    }
    Ok((scores, config.max_iterations, false, delta))
}

/// Runs TextRank and ranks the graph's sentences by final score. A run that
/// hits `max_iterations` still returns its current ranking, flagged
/// `converged: false`.
pub fn textrank(
    graph: &SentenceGraph,
    config: &TextRankConfig,
    exec: Execution,
) -> Result<TextRankOutcome, CentralityError> {
    let (scores, iterations, converged, final_delta) = textrank_scores(graph, config, exec)?;
    let mut ranked: Vec<ScoredSentence> = graph
        .nodes
        .iter()
        .zip(scores)
        .map(|(sentence, score)| ScoredSentence { sentence: sentence.clone(), score })
        .collect();
    rank_descending(&mut ranked);
    Ok(TextRankOutcome { ranked, iterations, converged, final_delta })
}

pub fn rank_by_centrality(
    sentences: &[AnswerSentence],
    config: &TextRankConfig,
    exec: Execution,
) -> Result<TextRankOutcome, CentralityError> {
    config.validate()?;
    textrank(&build_graph(sentences, exec)?, config, exec)
}
