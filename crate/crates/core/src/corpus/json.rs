//! Span-JSON interchange format.
//!
//! A corpus is a JSON array of sentence objects:
//!
//! ```json
//! [{"id": "s1", "tokens": ["John", "lives", "here"],
//!   "entities": [{"type": "PER", "start": 0, "end": 1}],
//!   "relations": []}]
//! ```
//!
//! `end` is exclusive and relation `head`/`tail` index the `entities` array.
//! Partition files add parallel `entity_novelty` / `relation_novelty` arrays.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AnnotatedCorpus, AnnotatedSentence, Entity, Relation, Role, Sentence};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanJsonEntity {
    #[serde(rename = "type")]
    pub etype: String,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanJsonRelation {
    #[serde(rename = "type")]
    pub rtype: String,
    pub head: usize,
    pub tail: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanJsonSentence {
    pub id: String,
    pub tokens: Vec<String>,
    pub entities: Vec<SpanJsonEntity>,
    #[serde(default)]
    pub relations: Vec<SpanJsonRelation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entity_novelty: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation_novelty: Option<Vec<String>>,
}

impl From<&AnnotatedSentence> for SpanJsonSentence {
    fn from(s: &AnnotatedSentence) -> Self {
        SpanJsonSentence {
            id: s.sentence.sent_id.clone(),
            tokens: s.sentence.tokens.clone(),
            entities: s
                .entities
                .iter()
                .map(|e| SpanJsonEntity {
                    etype: e.etype.clone(),
                    start: e.start,
                    end: e.end,
                })
                .collect(),
            relations: s
                .relations
                .iter()
                .map(|r| SpanJsonRelation {
                    rtype: r.rtype.clone(),
                    head: r.head,
                    tail: r.tail,
                })
                .collect(),
            entity_novelty: None,
            relation_novelty: None,
        }
    }
}

fn doc_of(id: &str) -> String {
    id.split_once('#').map_or("", |(doc, _)| doc).to_owned()
}

impl SpanJsonSentence {
    fn into_annotated(self) -> Result<AnnotatedSentence> {
        let n = self.tokens.len();
        let out_of_range = |detail: String| Error::IndexOutOfRange {
            sent_id: self.id.clone(),
            detail,
        };
        for (i, e) in self.entities.iter().enumerate() {
            if e.start >= e.end || e.end > n {
                return Err(out_of_range(format!(
                    "entity {i} span ({}, {}) invalid for {n} tokens",
                    e.start, e.end
                )));
            }
        }
        for (i, r) in self.relations.iter().enumerate() {
            if r.head >= self.entities.len() || r.tail >= self.entities.len() {
                return Err(out_of_range(format!(
                    "relation {i} references entity {} -> {} but only {} entities exist",
                    r.head,
                    r.tail,
                    self.entities.len()
                )));
            }
        }
        Ok(AnnotatedSentence {
            entities: self
                .entities
                .into_iter()
                .map(|e| Entity::new(e.start, e.end, e.etype))
                .collect(),
            relations: self
                .relations
                .into_iter()
                .map(|r| Relation::new(r.head, r.tail, r.rtype))
                .collect(),
            sentence: Sentence {
                doc_id: doc_of(&self.id),
                sent_id: self.id,
                tokens: self.tokens,
            },
        })
    }
}

fn schema_error(err: serde_json::Error) -> Error {
    if err.is_io() {
        Error::Json(err)
    } else {
        Error::SchemaViolation(err.to_string())
    }
}

/// Parses the raw sentence records, keeping any novelty annotations.
pub fn parse_span_json_records(bytes: &[u8]) -> Result<Vec<SpanJsonSentence>> {
    serde_json::from_slice(bytes).map_err(schema_error)
}

/// Builds a corpus from sentence records, checking spans, relation indices and
/// id uniqueness.
pub fn corpus_from_records(records: Vec<SpanJsonSentence>, role: Role) -> Result<AnnotatedCorpus> {
    let mut seen = HashSet::new();
    let mut corpus = AnnotatedCorpus::new(role);
    for record in records {
        if !seen.insert(record.id.clone()) {
            return Err(Error::DuplicateSentId(record.id));
        }
        corpus.sentences.push(record.into_annotated()?);
    }
    Ok(corpus)
}

pub fn parse_span_json(bytes: &[u8]) -> Result<AnnotatedCorpus> {
    corpus_from_records(parse_span_json_records(bytes)?, Role::Gold)
}

pub fn read_span_json_file(path: impl AsRef<Path>, role: Role) -> Result<AnnotatedCorpus> {
    let bytes = std::fs::read(path)?;
    Ok(parse_span_json(&bytes)?.with_role(role))
}

pub fn records_to_json(records: &[SpanJsonSentence]) -> String {
    let mut out = serde_json::to_string_pretty(records).expect("records serialize");
    out.push('\n');
    out
}

pub fn to_span_json(corpus: &AnnotatedCorpus) -> String {
    let records: Vec<SpanJsonSentence> = corpus.sentences.iter().map(Into::into).collect();
    records_to_json(&records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_array() {
        let corpus = parse_span_json(b"[]").unwrap();
        assert!(corpus.is_empty());
    }

    #[test]
    fn relation_index_out_of_range() {
        let text = br#"[{"id":"a","tokens":["x","y"],"entities":[{"type":"P","start":0,"end":1},{"type":"P","start":1,"end":2}],"relations":[{"type":"R","head":5,"tail":0}]}]"#;
        assert!(matches!(parse_span_json(text), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn span_out_of_range() {
        let text = br#"[{"id":"a","tokens":["x"],"entities":[{"type":"P","start":0,"end":2}]}]"#;
        assert!(matches!(parse_span_json(text), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn schema_violations() {
        for text in [
            &br#"[{"tokens":["x"],"entities":[]}]"#[..],
            br#"[{"id":3,"tokens":["x"],"entities":[]}]"#,
            br#"[{"id":"a","tokens":["x"],"entities":[{"type":"P","start":-1,"end":1}]}]"#,
            br#"{"id":"a"}"#,
            b"[",
        ] {
            assert!(matches!(parse_span_json(text), Err(Error::SchemaViolation(_))));
        }
    }

    #[test]
    fn duplicate_ids() {
        let text = br#"[{"id":"a","tokens":["x"],"entities":[]},{"id":"a","tokens":["y"],"entities":[]}]"#;
        assert!(matches!(parse_span_json(text), Err(Error::DuplicateSentId(id)) if id == "a"));
    }

    #[test]
    fn round_trips_through_text() {
        let text = br#"[{"id":"d1#0","tokens":["John","met","Mary"],"entities":[{"type":"PER","start":0,"end":1},{"type":"PER","start":2,"end":3}],"relations":[{"type":"Meet","head":0,"tail":1}]}]"#;
        let corpus = parse_span_json(text).unwrap();
        assert_eq!(corpus.sentences[0].sentence.doc_id, "d1");
        let again = parse_span_json(to_span_json(&corpus).as_bytes()).unwrap();
        assert_eq!(again, corpus);
    }
}
