use std::collections::BTreeMap;

use super::{PostRecord, PostType};

/// Posts indexed by id and answers indexed by parent question. Read-only
/// once built, so it can be shared across worker threads.
#[derive(Clone, Debug, Default)]
pub struct PostStore {
    posts: BTreeMap<u64, PostRecord>,
    answers: BTreeMap<u64, Vec<u64>>,
}

impl PostStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a post; a later record with the same id replaces the earlier one.
    pub fn insert(&mut self, post: PostRecord) {
        if let Some(old) = self.posts.get(&post.post_id) {
            if let Some(parent) = old.parent_id {
                if let Some(ids) = self.answers.get_mut(&parent) {
                    ids.retain(|&id| id != post.post_id);
                }
            }
        }
        if post.post_type == PostType::Answer {
            if let Some(parent) = post.parent_id {
                let ids = self.answers.entry(parent).or_default();
                let at = ids.partition_point(|&id| id < post.post_id);
                ids.insert(at, post.post_id);
            }
        }
        self.posts.insert(post.post_id, post);
    }

    pub fn get(&self, id: u64) -> Option<&PostRecord> {
        self.posts.get(&id)
    }

    /// The question with this id, if present.
    pub fn question(&self, id: u64) -> Option<&PostRecord> {
        self.get(id).filter(|p| p.post_type == PostType::Question)
    }

    /// Answers to a question, in ascending id order.
    pub fn answers_of(&self, question_id: u64) -> impl Iterator<Item = &PostRecord> {
        self.answers.get(&question_id).into_iter().flatten().filter_map(|id| self.posts.get(id))
    }

    /// All questions, in ascending id order.
    pub fn questions(&self) -> impl Iterator<Item = &PostRecord> {
        self.posts.values().filter(|p| p.post_type == PostType::Question)
    }

    pub fn len(&self) -> usize {
        self.posts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.posts.is_empty()
    }
}

impl FromIterator<PostRecord> for PostStore {
    fn from_iter<I: IntoIterator<Item = PostRecord>>(iter: I) -> Self {
        let mut store = PostStore::new();
        for post in iter {
            store.insert(post);
        }
        store
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn post(id: u64, parent: Option<u64>) -> PostRecord {
        PostRecord {
            post_id: id,
            post_type: if parent.is_some() { PostType::Answer } else { PostType::Question },
            parent_id: parent,
            title: parent.is_none().then(|| format!("q{id}")),
            body_html: String::new(),
            tags: Default::default(),
            score: 1,
        }
    }

    #[test]
    fn indexes_answers_by_parent() {
        let store: PostStore =
            [post(1, None), post(9, Some(1)), post(3, Some(1)), post(4, Some(2))].into_iter().collect();
        assert_eq!(store.answers_of(1).map(|p| p.post_id).collect::<Vec<_>>(), [3, 9]);
        assert!(store.question(3).is_none());
        assert_eq!(store.questions().count(), 1);
        assert_eq!(store.answers_of(7).count(), 0);
    }

    #[test]
    fn reinsert_moves_the_answer() {
        let mut store: PostStore = [post(1, None), post(3, Some(1))].into_iter().collect();
        store.insert(post(3, Some(2)));
        assert_eq!(store.answers_of(1).count(), 0);
        assert_eq!(store.answers_of(2).count(), 1);
    }
}
