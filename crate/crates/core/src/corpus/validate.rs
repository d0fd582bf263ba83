use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::AnnotatedCorpus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub sent_id: String,
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{level}[{}] {}: {}", self.code, self.sent_id, self.message)
    }
}

/// Checks the structural invariants of a corpus. Overlapping and nested
/// entities are legal in span corpora and only produce warnings.
pub fn validate_corpus(corpus: &AnnotatedCorpus) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut ids = HashSet::new();
    for s in &corpus.sentences {
        let id = s.id();
        let mut push = |severity, code, message: String| {
            out.push(Violation {
                sent_id: id.to_owned(),
                severity,
                code,
                message,
            })
        };
        let n = s.tokens().len();

        if !ids.insert(id) {
            push(Severity::Error, "DUPLICATE_SENT_ID", "sentence id is not unique".into());
        }
        if n == 0 {
            push(Severity::Error, "EMPTY_SENTENCE", "sentence has no tokens".into());
        }
        for (i, t) in s.tokens().iter().enumerate() {
            if t.is_empty() {
                push(Severity::Error, "EMPTY_TOKEN", format!("token {i} is empty"));
            }
        }

        let mut keys = HashSet::new();
        for (i, e) in s.entities.iter().enumerate() {
            if e.start >= e.end || e.end > n {
                push(
                    Severity::Error,
                    "SPAN_RANGE",
                    format!("entity {i} ({}, {}) invalid for {n} tokens", e.start, e.end),
                );
            }
            if !keys.insert((e.start, e.end, e.etype.as_str())) {
                push(
                    Severity::Error,
                    "DUPLICATE_ENTITY",
                    format!("entity {i} ({}, {}, {}) repeats an earlier entity", e.start, e.end, e.etype),
                );
            }
        }

        for (i, a) in s.entities.iter().enumerate() {
            for b in &s.entities[i + 1..] {
                if !a.overlaps(b) || a.same_boundaries(b) {
                    continue;
                }
                let nested = (a.start <= b.start && b.end <= a.end) || (b.start <= a.start && a.end <= b.end);
                let (code, what) = if nested {
                    ("NESTED_SPANS", "nested")
                } else {
                    ("OVERLAPPING_SPANS", "overlapping")
                };
                push(
                    Severity::Warning,
                    code,
                    format!("{what} entities ({}, {}) and ({}, {})", a.start, a.end, b.start, b.end),
                );
            }
        }

        let mut triples = HashSet::new();
        for (i, r) in s.relations.iter().enumerate() {
            if r.head >= s.entities.len() || r.tail >= s.entities.len() {
                push(
                    Severity::Error,
                    "RELATION_RANGE",
                    format!("relation {i} references {} -> {} of {} entities", r.head, r.tail, s.entities.len()),
                );
            } else if r.head == r.tail {
                push(Severity::Error, "SELF_RELATION", format!("relation {i} has head == tail"));
            }
            if !triples.insert((r.head, r.tail, r.rtype.as_str())) {
                push(Severity::Warning, "DUPLICATE_RELATION", format!("relation {i} repeats an earlier relation"));
            }
        }
    }
    out
}
