use std::collections::{BTreeMap, HashMap};

use super::{cosine_similarity, ScoringError, SentenceEmbedder, SentenceEmbedding, UsefulnessScore, UsefulnessScorer};
use crate::text::tokenize;

/// TF-IDF vectors over the vocabulary of a fitted corpus.
///
/// Term frequency is the raw count; inverse document frequency is the
/// smoothed `ln((1 + n) / (1 + df)) + 1`, so terms present in every document
/// still carry weight. Vectors are L2-normalized; text sharing no term with the
/// corpus maps to the zero vector.
#[derive(Clone, Debug)]
pub struct TfIdfEmbedder {
    vocabulary: BTreeMap<String, usize>,
    idf: Vec<f64>,
}

/// Fits a [`TfIdfEmbedder`] on `corpus`.
pub fn tfidf_embed(corpus: &[&str]) -> TfIdfEmbedder {
    TfIdfEmbedder::fit(corpus)
}

impl TfIdfEmbedder {
    pub fn fit(corpus: &[&str]) -> Self {
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for doc in corpus {
            let mut terms = tokenize(doc);
            terms.sort_unstable();
            terms.dedup();
            for t in terms {
                *df.entry(t).or_default() += 1;
            }
        }
        let n = corpus.len() as f64;
        let idf = df.values().map(|&d| ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0).collect();
        let vocabulary = df.into_keys().enumerate().map(|(i, t)| (t, i)).collect();
        Self { vocabulary, idf }
    }

    /// Vocabulary size, which is also the embedding dimension. Never zero: an
    /// empty vocabulary is padded to one always-zero dimension.
    pub fn dim(&self) -> usize {
        self.idf.len().max(1)
    }

    pub fn vector(&self, text: &str) -> Vec<f64> {
        let mut counts: HashMap<usize, f64> = HashMap::new();
        for t in tokenize(text) {
            if let Some(&i) = self.vocabulary.get(&t) {
                *counts.entry(i).or_default() += 1.0;
            }
        }
        let mut v = vec![0.0; self.dim()];
        for (i, c) in counts {
            v[i] = c * self.idf[i];
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }
}

impl SentenceEmbedder for TfIdfEmbedder {
    fn name(&self) -> &str {
        "tfidf"
    }

    fn embed(&self, sentences: &[&str]) -> Result<Vec<SentenceEmbedding>, ScoringError> {
        sentences.iter().map(|s| SentenceEmbedding::new(self.vector(s))).collect()
    }
}

/// Usefulness as the TF-IDF cosine between query and sentence, with the
/// vocabulary fitted on the sentences being scored.
#[derive(Clone, Copy, Debug, Default)]
pub struct TfIdfScorer;

impl UsefulnessScorer for TfIdfScorer {
    fn name(&self) -> &str {
        "tfidf"
    }

    fn score(&self, query: &str, sentences: &[&str]) -> Result<Vec<UsefulnessScore>, ScoringError> {
        if tokenize(query).is_empty() {
            return Err(ScoringError::EmptyQuery);
        }
        let model = TfIdfEmbedder::fit(sentences);
        let q = SentenceEmbedding::new(model.vector(query))?;
        model
            .embed(sentences)?
            .iter()
            .map(|s| UsefulnessScore::new(cosine_similarity(&q, s)?.clamp(0.0, 1.0)))
            .collect()
    }
}
