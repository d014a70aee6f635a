use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{DuplicateLink, PostRecord, PostStore};
use crate::corpus::{answer_sentences, build_unit, AnnotationUnit, Answer, TechnicalQuery};
use crate::Execution;

pub const MIN_UNIT_ANSWERS: usize = 10;
pub const MAX_UNIT_ANSWERS: usize = 15;

/// What happened to originals and answers during extraction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExtractionStats {
    pub originals: u64,
    /// Originals or duplicates referenced by a link but absent from the store.
    pub missing_posts: u64,
    /// Originals not tagged with a requested language.
    pub wrong_language: u64,
    pub answers_seen: u64,
    /// Answers with a vote score of zero or less.
    pub dropped_no_vote: u64,
    /// Answers with no text sentence left after cleaning.
    pub dropped_no_text: u64,
    pub units_kept: u64,
    pub units_too_few: u64,
    pub units_too_many: u64,
    /// Units the corpus layer refused to build.
    pub units_invalid: u64,
}

impl ExtractionStats {
    fn merge(mut self, other: Self) -> Self {
        self.originals += other.originals;
        self.missing_posts += other.missing_posts;
        self.wrong_language += other.wrong_language;
        self.answers_seen += other.answers_seen;
        self.dropped_no_vote += other.dropped_no_vote;
        self.dropped_no_text += other.dropped_no_text;
        self.units_kept += other.units_kept;
        self.units_too_few += other.units_too_few;
        self.units_too_many += other.units_too_many;
        self.units_invalid += other.units_invalid;
        self
    }
}

/// Builds one annotation unit per original question that is tagged with a
/// requested language and whose pooled answers, after dropping unvoted and
/// code-only ones, number between [`MIN_UNIT_ANSWERS`] and
/// [`MAX_UNIT_ANSWERS`].
///
/// Units come out in ascending original-question id order, whatever the order
/// of `links`. Answers within a unit are ordered by vote score descending, then
/// post id.
pub fn extract_annotation_units(
    links: impl IntoIterator<Item = DuplicateLink>,
    store: &PostStore,
    languages: &BTreeSet<String>,
    exec: Execution,
) -> (Vec<AnnotationUnit>, ExtractionStats) {
    let mut groups: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for link in links {
        groups.entry(link.original_post_id).or_default().insert(link.duplicate_post_id);
    }
    let groups: Vec<(u64, BTreeSet<u64>)> = groups.into_iter().collect();
    let languages: BTreeSet<String> = languages.iter().map(|l| l.to_lowercase()).collect();
    let outcomes = exec.map(&groups, |(original, duplicates)| unit_for(*original, duplicates, store, &languages));
    let mut units = Vec::new();
    let mut stats = ExtractionStats::default();
    for (unit, partial) in outcomes {
        units.extend(unit);
        stats = stats.merge(partial);
    }
    (units, stats)
}

fn unit_for(
    original: u64,
    duplicates: &BTreeSet<u64>,
    store: &PostStore,
    languages: &BTreeSet<String>,
) -> (Option<AnnotationUnit>, ExtractionStats) {
    let mut stats = ExtractionStats { originals: 1, ..Default::default() };
    let Some(question) = store.question(original) else {
        stats.missing_posts += 1;
        return (None, stats);
    };
    if question.tags.is_disjoint(languages) {
        stats.wrong_language += 1;
        return (None, stats);
    }
    let mut pooled: BTreeMap<u64, &PostRecord> = store.answers_of(original).map(|a| (a.post_id, a)).collect();
    for &dup in duplicates {
        if store.question(dup).is_none() {
            stats.missing_posts += 1;
            continue;
        }
        pooled.extend(store.answers_of(dup).map(|a| (a.post_id, a)));
    }
    let mut survivors = Vec::new();
    for answer in pooled.into_values() {
        stats.answers_seen += 1;
        if answer.score <= 0 {
            stats.dropped_no_vote += 1;
        } else if answer_sentences(&answer.body_html).is_empty() {
            stats.dropped_no_text += 1;
        } else {
            survivors.push(answer);
        }
    }
    if survivors.len() < MIN_UNIT_ANSWERS {
        stats.units_too_few += 1;
        return (None, stats);
    }
    if survivors.len() > MAX_UNIT_ANSWERS {
        stats.units_too_many += 1;
        return (None, stats);
    }
    survivors.sort_by(|a, b| b.score.cmp(&a.score).then(a.post_id.cmp(&b.post_id)));
    let answers = survivors
        .iter()
        .enumerate()
        .map(|(i, a)| Answer {
            answer_index: i as u32,
            body_html: a.body_html.clone(),
            vote_score: a.score,
            source_post_id: a.post_id,
        })
        .collect();
    let title = question.title.clone().unwrap_or_default();
    let unit = TechnicalQuery::new(title, question.tags.iter().cloned()).and_then(|q| build_unit(q, answers));
    match unit {
        Ok(unit) => {
            stats.units_kept += 1;
            (Some(unit), stats)
        }
        Err(_) => {
            stats.units_invalid += 1;
            (None, stats)
        }
    }
}
