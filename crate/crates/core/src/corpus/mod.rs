//! Corpus domain model, file formats and tagging schemes.

mod conll;
mod json;
mod tags;
mod validate;

pub use conll::{parse_conll, write_conll, ConllOptions};
pub use json::{
    corpus_from_records, parse_span_json, parse_span_json_records, read_span_json_file,
    records_to_json, to_span_json, SpanJsonEntity, SpanJsonRelation, SpanJsonSentence,
};
pub use tags::{convert_scheme, spans_to_tags, tags_to_spans, Scheme, Strictness, TagSequence};
pub use validate::{validate_corpus, Severity, Violation};

use serde::{Deserialize, Serialize};

/// Which part of an experiment a corpus plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Train,
    Gold,
    Prediction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub doc_id: String,
    pub sent_id: String,
    pub tokens: Vec<String>,
}

/// A typed token span `[start, end)` inside one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Entity {
    pub start: usize,
    pub end: usize,
    #[serde(rename = "type")]
    pub etype: String,
}

impl Entity {
    pub fn new(start: usize, end: usize, etype: impl Into<String>) -> Self {
        Entity {
            start,
            end,
            etype: etype.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn overlaps(&self, other: &Entity) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn same_boundaries(&self, other: &Entity) -> bool {
        self.start == other.start && self.end == other.end
    }
}

/// A directed relation between two entities of the same sentence, referenced
/// by their position in the sentence's entity list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    pub head: usize,
    pub tail: usize,
    pub rtype: String,
}

impl Relation {
    pub fn new(head: usize, tail: usize, rtype: impl Into<String>) -> Self {
        Relation {
            head,
            tail,
            rtype: rtype.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedSentence {
    pub sentence: Sentence,
    pub entities: Vec<Entity>,
    pub relations: Vec<Relation>,
}

impl AnnotatedSentence {
    pub fn id(&self) -> &str {
        &self.sentence.sent_id
    }

    pub fn tokens(&self) -> &[String] {
        &self.sentence.tokens
    }

    /// Tokens covered by `entity`, clamped to the sentence.
    pub fn span_tokens(&self, entity: &Entity) -> &[String] {
        let len = self.sentence.tokens.len();
        let end = entity.end.min(len);
        let start = entity.start.min(end);
        &self.sentence.tokens[start..end]
    }

    /// Space-joined surface form of `entity`.
    pub fn surface(&self, entity: &Entity) -> String {
        self.span_tokens(entity).join(" ")
    }

    /// Resolves a relation into its (head, tail) entities when both indices
    /// are in range.
    pub fn arguments(&self, relation: &Relation) -> Option<(&Entity, &Entity)> {
        Some((
            self.entities.get(relation.head)?,
            self.entities.get(relation.tail)?,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedCorpus {
    pub role: Role,
    pub sentences: Vec<AnnotatedSentence>,
}

impl AnnotatedCorpus {
    pub fn new(role: Role) -> Self {
        AnnotatedCorpus {
            role,
            sentences: Vec::new(),
        }
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn entity_count(&self) -> usize {
        self.sentences.iter().map(|s| s.entities.len()).sum()
    }

    pub fn relation_count(&self) -> usize {
        self.sentences.iter().map(|s| s.relations.len()).sum()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(|s| s.sentence.tokens.len()).sum()
    }

    pub fn find(&self, sent_id: &str) -> Option<&AnnotatedSentence> {
        self.sentences.iter().find(|s| s.id() == sent_id)
    }
}
