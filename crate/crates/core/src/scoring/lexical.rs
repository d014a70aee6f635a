use std::collections::HashSet;

use super::{ScoringError, UsefulnessScore, UsefulnessScorer};
use crate::text::tokenize;

/// Fraction of the query's distinct tokens that also occur in each sentence.
pub fn lexical_usefulness(query: &str, sentences: &[&str]) -> Result<Vec<UsefulnessScore>, ScoringError> {
    let query_tokens: HashSet<String> = tokenize(query).into_iter().collect();
    if query_tokens.is_empty() {
        return Err(ScoringError::EmptyQuery);
    }
    sentences
        .iter()
        .map(|s| {
            let tokens: HashSet<String> = tokenize(s).into_iter().collect();
            let shared = query_tokens.intersection(&tokens).count();
            UsefulnessScore::new(shared as f64 / query_tokens.len() as f64)
        })
        .collect()
}

/// [`lexical_usefulness`] behind the scorer contract.
#[derive(Clone, Copy, Debug, Default)]
pub struct LexicalScorer;

impl UsefulnessScorer for LexicalScorer {
    fn name(&self) -> &str {
        "lexical"
    }

    fn score(&self, query: &str, sentences: &[&str]) -> Result<Vec<UsefulnessScore>, ScoringError> {
        lexical_usefulness(query, sentences)
    }
}
