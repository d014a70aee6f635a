//! The three-stage summarizer: usefulness pre-selection, centrality ranking,
//! and greedy redundancy removal.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::centrality::{rank_by_centrality, CentralityError, TextRankConfig};
use crate::corpus::{
    rank_descending, AnnotationUnit, AnswerSentence, BenchmarkEntry, ScoredSentence, SentenceId, TechnicalQuery,
};
use crate::redundancy::{greedy_select, RedundancyConfig, SelectionDecision};
use crate::scoring::{ScoringError, SentenceEmbedder, TfIdfEmbedder, UsefulnessScorer};
use crate::Execution;

/// Which stages contribute to the final ranking.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AblationMode {
    /// Top sentences by usefulness.
    #[serde(rename = "stage1")]
    UsefulnessOnly,
    /// Usefulness pre-selection re-ranked by centrality.
    #[serde(rename = "stage12")]
    UsefulnessCentrality,
    /// All three stages.
    #[default]
    #[serde(rename = "full")]
    Full,
}

impl AblationMode {
    pub fn name(self) -> &'static str {
        match self {
            AblationMode::UsefulnessOnly => "stage1",
            AblationMode::UsefulnessCentrality => "stage12",
            AblationMode::Full => "full",
        }
    }
}

impl fmt::Display for AblationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for AblationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "stage1" => Ok(AblationMode::UsefulnessOnly),
            "stage12" => Ok(AblationMode::UsefulnessCentrality),
            "full" => Ok(AblationMode::Full),
            other => Err(format!("unknown ablation mode {other:?} (expected stage1, stage12 or full)")),
        }
    }
}

/// Where stage-3 embeddings come from.
#[derive(Clone)]
pub enum EmbedderSource {
    /// A TF-IDF model fitted on each unit's own sentences.
    TfIdfPerUnit,
    Shared(Arc<dyn SentenceEmbedder>),
}

impl EmbedderSource {
    pub fn name(&self) -> &str {
        match self {
            EmbedderSource::TfIdfPerUnit => "tfidf",
            EmbedderSource::Shared(e) => e.name(),
        }
    }
}

#[derive(Clone)]
pub struct PipelineConfig {
    /// Number of sentences kept by usefulness pre-selection.
    pub top_k: usize,
    pub textrank: TextRankConfig,
    pub redundancy: RedundancyConfig,
    pub mode: AblationMode,
    pub scorer: Arc<dyn UsefulnessScorer>,
    pub embedder: EmbedderSource,
    pub execution: Execution,
}

pub const DEFAULT_TOP_K: usize = 30;

impl PipelineConfig {
    /// Default hyperparameters with the given scorer and a per-unit TF-IDF
    /// embedder.
    pub fn new(scorer: Arc<dyn UsefulnessScorer>) -> Self {
        Self {
            top_k: DEFAULT_TOP_K,
            textrank: TextRankConfig::default(),
            redundancy: RedundancyConfig::default(),
            mode: AblationMode::Full,
            scorer,
            embedder: EmbedderSource::TfIdfPerUnit,
            execution: Execution::default(),
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        self.redundancy.validate().map_err(PipelineError::Config)?;
        self.textrank.validate().map_err(|e| PipelineError::Config(e.to_string()))?;
        if self.top_k < self.redundancy.budget {
            return Err(PipelineError::Config(format!(
                "top_k {} is smaller than the budget {}",
                self.top_k, self.redundancy.budget
            )));
        }
        Ok(())
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            scorer: self.scorer.name().to_string(),
            embedder: self.embedder.name().to_string(),
            mode: self.mode,
            top_k: self.top_k,
            textrank: self.textrank,
            redundancy: self.redundancy,
        }
    }
}

impl fmt::Debug for PipelineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PipelineConfig")
            .field("top_k", &self.top_k)
            .field("textrank", &self.textrank)
            .field("redundancy", &self.redundancy)
            .field("mode", &self.mode)
            .field("scorer", &self.scorer.name())
            .field("embedder", &self.embedder.name())
            .field("execution", &self.execution)
            .finish()
    }
}

/// The serializable part of a [`PipelineConfig`], recorded with every result
/// and report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub scorer: String,
    pub embedder: String,
    pub mode: AblationMode,
    pub top_k: usize,
    pub textrank: TextRankConfig,
    pub redundancy: RedundancyConfig,
}

impl ConfigEcho {
    pub fn system_name(&self) -> String {
        format!("{}/{}", self.scorer, self.mode)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("invalid pipeline config: {0}")]
    Config(String),
    #[error("no candidate sentences to summarize")]
    NoSentences,
    #[error("usefulness stage: {0}")]
    Usefulness(#[source] ScoringError),
    #[error("centrality stage: {0}")]
    Centrality(#[source] CentralityError),
    #[error("redundancy stage: {0}")]
    Redundancy(#[source] ScoringError),
}

impl PipelineError {
    pub fn stage(&self) -> &'static str {
        match self {
            PipelineError::Config(_) | PipelineError::NoSentences => "input",
            PipelineError::Usefulness(_) => "usefulness",
            PipelineError::Centrality(_) => "centrality",
            PipelineError::Redundancy(_) => "redundancy",
        }
    }

    /// The error came from a remote scorer or embedder.
    pub fn is_remote(&self) -> bool {
        match self {
            PipelineError::Usefulness(e) | PipelineError::Redundancy(e) => e.is_remote(),
            _ => false,
        }
    }
}

/// Why a sentence did or did not make it into the summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceDecision {
    Selected {
        position: usize,
    },
    /// Not among the `top_k` most useful sentences.
    BelowTopK,
    Redundant {
        with: SentenceId,
        similarity: f64,
    },
    OverBudget,
}

/// Everything the pipeline computed for one candidate sentence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub id: SentenceId,
    pub usefulness: f64,
    /// 1-based rank among all candidates.
    pub usefulness_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub centrality: Option<f64>,
    /// 1-based rank among the pre-selected sentences.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub centrality_rank: Option<usize>,
    /// Highest cosine similarity to a sentence kept before this one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_similarity: Option<f64>,
    pub decision: TraceDecision,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralityInfo {
    pub iterations: usize,
    pub converged: bool,
    pub final_delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryResult {
    pub query: TechnicalQuery,
    pub config: ConfigEcho,
    pub sentences: Vec<AnswerSentence>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub centrality: Option<CentralityInfo>,
    /// One record per candidate, in usefulness-rank order.
    pub stage_trace: Vec<TraceRecord>,
}

impl SummaryResult {
    /// Summary sentences joined by single spaces.
    pub fn summary_text(&self) -> String {
        self.sentences.iter().map(AnswerSentence::text).collect::<Vec<_>>().join(" ")
    }

    pub fn ids(&self) -> Vec<SentenceId> {
        self.sentences.iter().map(AnswerSentence::id).collect()
    }

    /// The ranking handed to the final stage: pre-selected sentences in
    /// centrality order, or in usefulness order for `stage1`.
    pub fn final_stage_ranking(&self) -> Vec<SentenceId> {
        let mut pre: Vec<&TraceRecord> =
            self.stage_trace.iter().filter(|r| r.decision != TraceDecision::BelowTopK).collect();
        if self.config.mode != AblationMode::UsefulnessOnly {
            pre.sort_by_key(|r| r.centrality_rank);
        }
        pre.iter().map(|r| r.id).collect()
    }

    /// Recomputes the summary ids from the recorded scores alone, applying
    /// the same ordering, tie-break, threshold and budget rules.
    pub fn replay(&self) -> Vec<SentenceId> {
        let by_score = |key: fn(&TraceRecord) -> Option<f64>, records: &mut Vec<&TraceRecord>| {
            records.sort_by(|a, b| {
                key(b)
                    .unwrap_or(f64::NEG_INFINITY)
                    .total_cmp(&key(a).unwrap_or(f64::NEG_INFINITY))
                    .then(a.id.cmp(&b.id))
            });
        };
        let mut records: Vec<&TraceRecord> = self.stage_trace.iter().collect();
        by_score(|r| Some(r.usefulness), &mut records);
        records.truncate(self.config.top_k);
        if self.config.mode != AblationMode::UsefulnessOnly {
            by_score(|r| r.centrality, &mut records);
        }
        let budget = self.config.redundancy.budget;
        if self.config.mode != AblationMode::Full {
            return records.iter().take(budget).map(|r| r.id).collect();
        }
        records
            .iter()
            .filter(|r| r.max_similarity.is_none_or(|s| s <= self.config.redundancy.threshold))
            .take(budget)
            .map(|r| r.id)
            .collect()
    }
}

/// Summarizes a unit's sentences for `query`.
pub fn summarize(
    query: &TechnicalQuery,
    unit: &AnnotationUnit,
    config: &PipelineConfig,
) -> Result<SummaryResult, PipelineError> {
    summarize_sentences(query, unit.sentences(), config)
}

/// Summarizes an arbitrary candidate pool.
pub fn summarize_sentences(
    query: &TechnicalQuery,
    candidates: &[AnswerSentence],
    config: &PipelineConfig,
) -> Result<SummaryResult, PipelineError> {
    config.validate()?;
    if candidates.is_empty() {
        return Err(PipelineError::NoSentences);
    }
    let mut pool = candidates.to_vec();
    pool.sort_by_key(AnswerSentence::id);
    let texts: Vec<&str> = pool.iter().map(AnswerSentence::text).collect();

    // Stage 1: usefulness pre-selection.
    let scores = config.scorer.score(query.text(), &texts).map_err(PipelineError::Usefulness)?;
    if scores.len() != pool.len() {
        return Err(PipelineError::Usefulness(ScoringError::Protocol {
            endpoint: config.scorer.name().to_string(),
            message: format!("{} scores for {} sentences", scores.len(), pool.len()),
        }));
    }
    let mut useful: Vec<ScoredSentence> = pool
        .iter()
        .zip(&scores)
        .map(|(s, score)| ScoredSentence { sentence: s.clone(), score: score.value() })
        .collect();
    rank_descending(&mut useful);
    let mut trace: Vec<TraceRecord> = useful
        .iter()
        .enumerate()
        .map(|(i, s)| TraceRecord {
            id: s.sentence.id(),
            usefulness: s.score,
            usefulness_rank: i + 1,
            centrality: None,
            centrality_rank: None,
            max_similarity: None,
            decision: if i < config.top_k { TraceDecision::OverBudget } else { TraceDecision::BelowTopK },
        })
        .collect();
    let kept = useful.len().min(config.top_k);
    let preselected: Vec<AnswerSentence> = useful[..kept].iter().map(|s| s.sentence.clone()).collect();

    let mut result = SummaryResult {
        query: query.clone(),
        config: config.echo(),
        sentences: Vec::new(),
        centrality: None,
        stage_trace: Vec::new(),
    };

    if config.mode == AblationMode::UsefulnessOnly {
        let summary: Vec<AnswerSentence> = preselected.into_iter().take(config.redundancy.budget).collect();
        for (position, record) in trace.iter_mut().take(summary.len()).enumerate() {
            record.decision = TraceDecision::Selected { position };
        }
        result.sentences = summary;
        result.stage_trace = trace;
        return Ok(result);
    }

    // Stage 2: centrality ranking of the pre-selected sentences.
    let outcome =
        rank_by_centrality(&preselected, &config.textrank, config.execution).map_err(PipelineError::Centrality)?;
    result.centrality = Some(CentralityInfo {
        iterations: outcome.iterations,
        converged: outcome.converged,
        final_delta: outcome.final_delta,
    });
    // trace is in usefulness order, and its first `kept` entries are exactly
    // the pre-selected sentences
    let slot = |id: SentenceId| trace[..kept].iter().position(|r| r.id == id).expect("pre-selected id in trace");
    let slots: Vec<usize> = outcome.ranked.iter().map(|s| slot(s.sentence.id())).collect();
    for (rank, (scored, &at)) in outcome.ranked.iter().zip(&slots).enumerate() {
        trace[at].centrality = Some(scored.score);
        trace[at].centrality_rank = Some(rank + 1);
    }
    let ranked: Vec<AnswerSentence> = outcome.ranked.into_iter().map(|s| s.sentence).collect();

    if config.mode == AblationMode::UsefulnessCentrality {
        let budget = config.redundancy.budget;
        for (position, &at) in slots.iter().take(budget).enumerate() {
            trace[at].decision = TraceDecision::Selected { position };
        }
        result.sentences = ranked.into_iter().take(budget).collect();
        result.stage_trace = trace;
        return Ok(result);
    }

    // Stage 3: redundancy removal over the centrality ranking.
    let ranked_texts: Vec<&str> = ranked.iter().map(AnswerSentence::text).collect();
    let embeddings = match &config.embedder {
        EmbedderSource::TfIdfPerUnit => TfIdfEmbedder::fit(&texts).embed(&ranked_texts),
        EmbedderSource::Shared(embedder) => embedder.embed(&ranked_texts),
    }
    .map_err(PipelineError::Redundancy)?;
    if embeddings.len() != ranked.len() {
        return Err(PipelineError::Redundancy(ScoringError::Protocol {
            endpoint: config.embedder.name().to_string(),
            message: format!("{} embeddings for {} sentences", embeddings.len(), ranked.len()),
        }));
    }
    let pairs: Vec<(AnswerSentence, _)> = ranked.iter().cloned().zip(embeddings).collect();
    let selection = greedy_select(&pairs, &config.redundancy).map_err(PipelineError::Redundancy)?;
    for (i, &at) in slots.iter().enumerate() {
        trace[at].max_similarity = selection.max_similarity[i];
        trace[at].decision = match &selection.decisions[i] {
            SelectionDecision::Selected { position } => TraceDecision::Selected { position: *position },
            SelectionDecision::Redundant { conflicts_with, similarity } => {
                TraceDecision::Redundant { with: ranked[*conflicts_with].id(), similarity: *similarity }
            }
            SelectionDecision::OverBudget => TraceDecision::OverBudget,
        };
    }
    result.sentences = selection.summary;
    result.stage_trace = trace;
    Ok(result)
}

/// Summarizes every entry's candidate pool. Results are aligned with
/// `entries`; one entry failing does not affect the others.
pub fn summarize_benchmark(
    entries: &[BenchmarkEntry],
    config: &PipelineConfig,
) -> Vec<Result<SummaryResult, PipelineError>> {
    config.execution.map(entries, |entry| summarize_sentences(entry.query(), entry.candidates(), config))
}
