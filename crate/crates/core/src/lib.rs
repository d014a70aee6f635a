//! Query-focused extractive summarization for multi-answer technical Q&A threads.
//!
//! The summarizer runs three stages over the sentences of an annotation unit
//! (a question plus the pooled answers of the question and its duplicates):
//!
//! 1. **Usefulness ranking**: a [`scoring::UsefulnessScorer`] scores every
//!    sentence against the query and the top `k` survive.
//! 2. **Centrality estimation**: weighted TextRank over a word-overlap sentence
//!    graph ([`centrality`]).
//! 3. **Redundancy removal**: greedy selection in centrality order, dropping any
//!    sentence whose embedding is too close to one already selected
//!    ([`redundancy`]).
//!
//! Around the pipeline sit a multi-reference ROUGE harness ([`rouge`]) and
//! streaming parsers for the Stack Overflow data dump ([`dump`]) that mine
//! annotation units and contrastive title triplets.
//!
//! Data-parallel loops go through [`Execution`]; with the `parallel` feature
//! (on by default) they run on rayon, otherwise sequentially.

pub mod centrality;
pub mod corpus;
pub mod dump;
mod par;
pub mod pipeline;
pub mod redundancy;
pub mod rouge;
pub mod scoring;
pub mod text;

pub use centrality::{rank_by_centrality, textrank, SentenceGraph, TextRankConfig, TextRankOutcome};
pub use corpus::{
    AnnotationUnit, Answer, AnswerSentence, BenchmarkEntry, CorpusError, ScoredSentence, SentenceId, TechnicalQuery,
};
pub use par::Execution;
pub use pipeline::{
    summarize, summarize_benchmark, AblationMode, EmbedderSource, PipelineConfig, PipelineError, SummaryResult,
};
pub use redundancy::{greedy_select, is_redundant, RedundancyConfig};
pub use rouge::{evaluate_benchmark, rouge_l, rouge_n, RougeReport, RougeScore};
pub use scoring::{
    cosine_similarity, ScoringError, SentenceEmbedder, SentenceEmbedding, UsefulnessScore, UsefulnessScorer,
};
