use std::time::Duration;

use serde::{Deserialize, Serialize};
use ureq::Agent;

use super::{ScoringError, SentenceEmbedder, SentenceEmbedding, UsefulnessScore, UsefulnessScorer};

/// Sentences sent per `/score` or `/embed` request unless configured otherwise.
pub const DEFAULT_BATCH_SIZE: usize = 64;

#[derive(Serialize)]
struct ScoreRequest<'a> {
    query: &'a str,
    sentences: &'a [&'a str],
}

#[derive(Deserialize)]
struct ScoreResponse {
    scores: Vec<f64>,
}

#[derive(Serialize)]
struct EmbedRequest<'a> {
    sentences: &'a [&'a str],
}

#[derive(Deserialize)]
struct EmbedResponse {
    vectors: Vec<Vec<f64>>,
}

/// `GET /health` payload.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub embed_dim: usize,
}

/// Client for a scorer service speaking the JSON wire protocol:
///
/// * `POST /score` `{"query", "sentences"}` → `{"scores": [float]}`
/// * `POST /embed` `{"sentences"}` → `{"vectors": [[float]]}`
/// * `GET /health` → `{"status": "ok", "embed_dim": int}`
///
/// Responses are validated (alignment, score range, uniform finite vectors)
/// and rejected with [`ScoringError::Protocol`] rather than passed on. The
/// client is `Sync`; concurrent calls share one connection pool.
#[derive(Clone, Debug)]
pub struct RemoteClient {
    endpoint: String,
    batch_size: usize,
    agent: Agent,
}

impl RemoteClient {
    /// `endpoint` is the service base URL, e.g. `http://127.0.0.1:8080`.
    pub fn new(endpoint: &str) -> Result<Self, ScoringError> {
        let endpoint = endpoint.trim_end_matches('/').to_string();
        let valid = endpoint
            .strip_prefix("http://")
            .is_some_and(|rest| !rest.is_empty() && !rest.contains(char::is_whitespace));
        if !valid {
            return Err(ScoringError::InvalidEndpoint(endpoint));
        }
        let agent = Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(60)))
            .http_status_as_error(false)
            .build()
            .into();
        Ok(Self { endpoint, batch_size: DEFAULT_BATCH_SIZE, agent })
    }

    pub fn with_batch_size(mut self, batch_size: usize) -> Self {
        self.batch_size = batch_size.max(1);
        self
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    pub fn health(&self) -> Result<Health, ScoringError> {
        let url = format!("{}/health", self.endpoint);
        let result = self.agent.get(&url).call();
        let health: Health = self.decode(result)?;
        if health.status != "ok" {
            return Err(self.protocol(format!("health status {:?}", health.status)));
        }
        Ok(health)
    }

    /// Scores sentences through `POST /score`, one request per batch.
    pub fn score(&self, query: &str, sentences: &[&str]) -> Result<Vec<UsefulnessScore>, ScoringError> {
        let url = format!("{}/score", self.endpoint);
        let mut out = Vec::with_capacity(sentences.len());
        for batch in sentences.chunks(self.batch_size) {
            let result = self.agent.post(&url).send_json(&ScoreRequest { query, sentences: batch });
            let response: ScoreResponse = self.decode(result)?;
            if response.scores.len() != batch.len() {
                return Err(self.protocol(format!("{} scores for {} sentences", response.scores.len(), batch.len())));
            }
            for s in response.scores {
                out.push(UsefulnessScore::new(s).map_err(|e| self.protocol(e.to_string()))?);
            }
        }
        Ok(out)
    }

    /// Embeds sentences through `POST /embed`, enforcing one dimension across
    /// every batch.
    pub fn embed(&self, sentences: &[&str]) -> Result<Vec<SentenceEmbedding>, ScoringError> {
        let url = format!("{}/embed", self.endpoint);
        let mut out: Vec<SentenceEmbedding> = Vec::with_capacity(sentences.len());
        for batch in sentences.chunks(self.batch_size) {
            let result = self.agent.post(&url).send_json(&EmbedRequest { sentences: batch });
            let response: EmbedResponse = self.decode(result)?;
            if response.vectors.len() != batch.len() {
                return Err(self.protocol(format!("{} vectors for {} sentences", response.vectors.len(), batch.len())));
            }
            for v in response.vectors {
                let e = SentenceEmbedding::new(v).map_err(|e| self.protocol(e.to_string()))?;
                if let Some(first) = out.first() {
                    if first.dim() != e.dim() {
                        return Err(self.protocol(format!("mixed dimensions {} and {}", first.dim(), e.dim())));
                    }
                }
                out.push(e);
            }
        }
        Ok(out)
    }

    fn decode<T: serde::de::DeserializeOwned>(
        &self,
        result: Result<ureq::http::Response<ureq::Body>, ureq::Error>,
    ) -> Result<T, ScoringError> {
        let mut response = result.map_err(|e| self.transport(e.to_string()))?;
        let status = response.status().as_u16();
        let body = response.body_mut().read_to_string().map_err(|e| self.transport(e.to_string()))?;
        match status {
            200..=299 => serde_json::from_str(&body).map_err(|e| self.protocol(format!("bad response body: {e}"))),
            500..=599 => Err(self.transport(format!("HTTP {status}"))),
            _ => Err(self.protocol(format!("HTTP {status}: {}", body.chars().take(200).collect::<String>()))),
        }
    }

    fn transport(&self, message: String) -> ScoringError {
        ScoringError::Transport { endpoint: self.endpoint.clone(), message }
    }

    fn protocol(&self, message: String) -> ScoringError {
        ScoringError::Protocol { endpoint: self.endpoint.clone(), message }
    }
}

impl UsefulnessScorer for RemoteClient {
    fn name(&self) -> &str {
        "remote"
    }

    fn score(&self, query: &str, sentences: &[&str]) -> Result<Vec<UsefulnessScore>, ScoringError> {
        RemoteClient::score(self, query, sentences)
    }
}

impl SentenceEmbedder for RemoteClient {
    fn name(&self) -> &str {
        "remote"
    }

    fn embed(&self, sentences: &[&str]) -> Result<Vec<SentenceEmbedding>, ScoringError> {
        RemoteClient::embed(self, sentences)
    }
}
