//! Scorer contracts, deterministic baselines, and the remote scorer client.

mod lexical;
mod remote;
pub mod stub;
mod tfidf;

use serde::{Deserialize, Serialize};

pub use lexical::{lexical_usefulness, LexicalScorer};
pub use remote::{Health, RemoteClient, DEFAULT_BATCH_SIZE};
pub use tfidf::{tfidf_embed, TfIdfEmbedder, TfIdfScorer};

#[derive(Debug, thiserror::Error)]
pub enum ScoringError {
    #[error("query is empty")]
    EmptyQuery,
    #[error("usefulness score {0} outside [0, 1]")]
    ScoreOutOfRange(f64),
    #[error("embedding is empty or has non-finite components")]
    InvalidEmbedding,
    #[error("embedding dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("invalid scorer endpoint {0:?}")]
    InvalidEndpoint(String),
    /// Network-level failure or a 5xx answer; worth retrying.
    #[error("transport error talking to {endpoint}: {message}")]
    Transport { endpoint: String, message: String },
    /// The service answered, but not according to the wire protocol.
    #[error("protocol error from {endpoint}: {message}")]
    Protocol { endpoint: String, message: String },
}

impl ScoringError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, ScoringError::Transport { .. })
    }

    /// Whether the failure came from talking to a remote scorer.
    pub fn is_remote(&self) -> bool {
        matches!(self, ScoringError::Transport { .. } | ScoringError::Protocol { .. })
    }
}

/// Probability-like usefulness of a sentence for a query.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct UsefulnessScore(f64);

impl UsefulnessScore {
    pub fn new(value: f64) -> Result<Self, ScoringError> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(ScoringError::ScoreOutOfRange(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for UsefulnessScore {
    type Error = ScoringError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl From<UsefulnessScore> for f64 {
    fn from(score: UsefulnessScore) -> f64 {
        score.0
    }
}

/// A finite, non-empty sentence vector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SentenceEmbedding(Vec<f64>);

impl SentenceEmbedding {
    pub fn new(values: Vec<f64>) -> Result<Self, ScoringError> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(ScoringError::InvalidEmbedding);
        }
        Ok(Self(values))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Scores sentences for usefulness with respect to a query.
///
/// Implementations return one score per sentence, in input order, and are
/// deterministic for fixed inputs.
pub trait UsefulnessScorer: Send + Sync {
    fn name(&self) -> &str;

    fn score(&self, query: &str, sentences: &[&str]) -> Result<Vec<UsefulnessScore>, ScoringError>;
}

/// Maps sentences to fixed-dimension embeddings, one per input, in order.
pub trait SentenceEmbedder: Send + Sync {
    fn name(&self) -> &str;

    fn embed(&self, sentences: &[&str]) -> Result<Vec<SentenceEmbedding>, ScoringError>;
}

/// Cosine similarity; zero when either vector has zero norm.
pub fn cosine_similarity(a: &SentenceEmbedding, b: &SentenceEmbedding) -> Result<f64, ScoringError> {
    if a.dim() != b.dim() {
        return Err(ScoringError::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    let dot: f64 = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum();
    Ok((dot / (na * nb)).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn emb(v: &[f64]) -> SentenceEmbedding {
        SentenceEmbedding::new(v.to_vec()).unwrap()
    }

    #[test]
    fn cosine_basics() {
        let v = emb(&[0.3, -2.0, 5.0]);
        assert!((cosine_similarity(&v, &v).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(cosine_similarity(&emb(&[1.0, 0.0]), &emb(&[0.0, 1.0])).unwrap(), 0.0);
        let s = cosine_similarity(&emb(&[1.0, 1.0, 0.0]), &emb(&[1.0, 0.0, 0.0])).unwrap();
        assert!((s - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((s - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn cosine_zero_vector_is_zero() {
        assert_eq!(cosine_similarity(&emb(&[0.0, 0.0]), &emb(&[1.0, 2.0])).unwrap(), 0.0);
        assert_eq!(cosine_similarity(&emb(&[0.0, 0.0]), &emb(&[0.0, 0.0])).unwrap(), 0.0);
    }

    #[test]
    fn cosine_dimension_mismatch() {
        assert!(matches!(
            cosine_similarity(&emb(&[1.0]), &emb(&[1.0, 0.0])),
            Err(ScoringError::DimensionMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn invariants_on_construction() {
        assert!(UsefulnessScore::new(1.2).is_err());
        assert!(UsefulnessScore::new(-0.0).is_ok());
        assert!(SentenceEmbedding::new(vec![]).is_err());
        assert!(SentenceEmbedding::new(vec![f64::NAN]).is_err());
        assert!(SentenceEmbedding::new(vec![f64::INFINITY]).is_err());
    }

    fn vector(dim: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-100.0f64..100.0, dim)
    }

    proptest! {
        #[test]
        fn cosine_symmetric_and_scale_invariant(
            (a, b) in (1usize..12).prop_flat_map(|d| (vector(d), vector(d))),
            alpha in 0.001f64..1000.0,
        ) {
            let (ea, eb) = (emb(&a), emb(&b));
            let ab = cosine_similarity(&ea, &eb).unwrap();
            prop_assert_eq!(ab, cosine_similarity(&eb, &ea).unwrap());
            prop_assert!((-1.0..=1.0).contains(&ab));
            let scaled = emb(&a.iter().map(|x| x * alpha).collect::<Vec<_>>());
            if ea.norm() > 1e-6 && eb.norm() > 1e-6 {
                prop_assert!((cosine_similarity(&scaled, &eb).unwrap() - ab).abs() < 1e-9);
            }
        }
    }
}
