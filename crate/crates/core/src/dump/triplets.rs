use std::collections::BTreeSet;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{DuplicateLink, PostRecord, PostStore, SentenceTriplet};

/// Random draws tried before falling back to an exact scan of the pool.
const REJECTION_TRIES: usize = 64;

/// Which questions negatives are drawn from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NegativePool {
    /// Questions tagged with one of the requested languages.
    #[default]
    Languages,
    /// Every question in the store.
    All,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TripletStats {
    pub pairs: u64,
    pub missing_posts: u64,
    /// Pairs where either question lacks a requested language tag.
    pub wrong_language: u64,
    /// Pairs skipped because no tag-disjoint negative exists.
    pub no_negative: u64,
    pub emitted: u64,
}

/// One triplet per duplicate pair: the original's title as anchor, the
/// duplicate's title as positive, and the title of a question sharing no tag
/// with the original as negative, drawn uniformly with a ChaCha8 stream
/// seeded from `seed`.
///
/// Pairs are deduplicated and visited in (original, duplicate) id order, so
/// the output depends only on the seed and the set of links.
pub fn build_contrastive_triplets(
    links: impl IntoIterator<Item = DuplicateLink>,
    store: &PostStore,
    languages: &BTreeSet<String>,
    seed: u64,
    pool: NegativePool,
) -> (Vec<SentenceTriplet>, TripletStats) {
    let languages: BTreeSet<String> = languages.iter().map(|l| l.to_lowercase()).collect();
    let in_language = |q: &PostRecord| !q.tags.is_disjoint(&languages);
    let candidates: Vec<&PostRecord> =
        store.questions().filter(|q| pool == NegativePool::All || in_language(q)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = TripletStats::default();
    let mut triplets = Vec::new();
    let pairs: BTreeSet<(u64, u64)> = links.into_iter().map(|l| (l.original_post_id, l.duplicate_post_id)).collect();
    for (original_id, duplicate_id) in pairs {
        stats.pairs += 1;
        let (Some(original), Some(duplicate)) = (store.question(original_id), store.question(duplicate_id)) else {
            stats.missing_posts += 1;
            continue;
        };
        if !in_language(original) || !in_language(duplicate) {
            stats.wrong_language += 1;
            continue;
        }
        let anchor = original.title.clone().unwrap_or_default();
        let valid = |q: &PostRecord| {
            q.post_id != original.post_id
                && q.post_id != duplicate.post_id
                && q.tags.is_disjoint(&original.tags)
                && q.title.as_deref().is_some_and(|t| t != anchor)
        };
        let Some(negative) = sample(&candidates, valid, &mut rng) else {
            stats.no_negative += 1;
            continue;
        };
        stats.emitted += 1;
        triplets.push(SentenceTriplet {
            anchor,
            positive: duplicate.title.clone().unwrap_or_default(),
            negative: negative.title.clone().unwrap_or_default(),
        });
    }
    (triplets, stats)
}

/// Uniform draw among the candidates accepted by `valid`. Rejection sampling
/// is uniform over the accepted set, as is the exact fallback, so the mixture
/// is too.
fn sample<'a>(
    candidates: &[&'a PostRecord],
    valid: impl Fn(&PostRecord) -> bool,
    rng: &mut ChaCha8Rng,
) -> Option<&'a PostRecord> {
    if candidates.is_empty() {
        return None;
    }
    for _ in 0..REJECTION_TRIES {
        let q = candidates[rng.random_range(0..candidates.len())];
        if valid(q) {
            return Some(q);
        }
    }
    let accepted: Vec<&PostRecord> = candidates.iter().copied().filter(|q| valid(q)).collect();
    if accepted.is_empty() {
        return None;
    }
    Some(accepted[rng.random_range(0..accepted.len())])
}

/// Writes one JSON object per line.
pub fn write_triplets_jsonl(mut out: impl Write, triplets: &[SentenceTriplet]) -> std::io::Result<()> {
    for t in triplets {
        serde_json::to_writer(&mut out, t)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}
