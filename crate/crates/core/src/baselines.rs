//! Retention heuristic: predict the training mentions and triples that occur
//! verbatim in the evaluation data, with their majority training label.

use crate::corpus::{AnnotatedCorpus, AnnotatedSentence, Entity, Relation, Role};
use crate::overlap::TrainIndex;

/// Tags every occurrence of a training mention surface with its majority
/// type. Overlapping candidates are resolved longest first, then leftmost.
pub fn retention_ner(index: &TrainIndex, corpus: &AnnotatedCorpus) -> AnnotatedCorpus {
    AnnotatedCorpus {
        role: Role::Prediction,
        sentences: corpus
            .sentences
            .iter()
            .map(|s| AnnotatedSentence {
                sentence: s.sentence.clone(),
                entities: retain_mentions(index, s),
                relations: Vec::new(),
            })
            .collect(),
    }
}

fn retain_mentions(index: &TrainIndex, s: &AnnotatedSentence) -> Vec<Entity> {
    let tokens = s.tokens();
    let n = tokens.len();
    let mut candidates = Vec::new();
    for start in 0..n {
        for end in start + 1..=(start + index.max_mention_len).min(n) {
            let surface = index.policy.normalize_surface(&tokens[start..end]);
            if let Some(etype) = index.majority_type(&surface) {
                candidates.push(Entity::new(start, end, etype));
            }
        }
    }
    candidates.sort_by_key(|e| (std::cmp::Reverse(e.len()), e.start));
    let mut kept: Vec<Entity> = Vec::new();
    for c in candidates {
        if !kept.iter().any(|k| k.overlaps(&c)) {
            kept.push(c);
        }
    }
    kept.sort_by_key(|e| (e.start, e.end));
    kept
}

/// Adds, for each ordered pair of mentions whose surfaces were related in
/// training, the majority relation type. Entity types of the mentions are
/// not consulted.
pub fn retention_re(index: &TrainIndex, mentions: &AnnotatedCorpus) -> AnnotatedCorpus {
    let mut out = mentions.clone();
    out.role = Role::Prediction;
    for s in &mut out.sentences {
        let surfaces: Vec<String> = s.entities.iter().map(|e| index.surface_of(s, e)).collect();
        let mut relations = Vec::new();
        for (h, hs) in surfaces.iter().enumerate() {
            for (t, ts) in surfaces.iter().enumerate() {
                if h == t {
                    continue;
                }
                if let Some(rtype) = index.majority_relation(hs, ts) {
                    relations.push(Relation::new(h, t, rtype));
                }
            }
        }
        s.relations = relations;
    }
    out
}

/// Joint heuristic prediction: mentions from [`retention_ner`], relations
/// from [`retention_re`] over those mentions, or over the gold mentions of
/// `corpus` when `gold_mentions` is set.
pub fn retention(index: &TrainIndex, corpus: &AnnotatedCorpus, gold_mentions: bool) -> AnnotatedCorpus {
    if gold_mentions {
        let mut mentions = corpus.clone();
        mentions.sentences.iter_mut().for_each(|s| s.relations.clear());
        retention_re(index, &mentions)
    } else {
        retention_re(index, &retention_ner(index, corpus))
    }
}
