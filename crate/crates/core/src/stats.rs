//! Corpus statistics and the consistency profile of a test set with respect
//! to its training set.
//!
//! Label consistency of a test mention is the share of its training
//! occurrences carrying the same type; it is zero for surfaces never seen in
//! training. The starred variants average only over seen items and the
//! lexical-overlap proportions count them, so `eCon = eCon* × eLex` and
//! `rCon = rCon* × rLex` hold by construction.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::corpus::{AnnotatedCorpus, AnnotatedSentence, Entity, Relation};
use crate::error::{Error, Result};
use crate::overlap::{partition_corpus, ClassCounts, NormalizationPolicy, TrainIndex};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DatasetStats {
    pub sentences: usize,
    pub tokens: usize,
    pub mention_occurrences: usize,
    pub unique_mentions: usize,
    pub relations: usize,
}

pub fn global_stats(corpus: &AnnotatedCorpus, policy: &NormalizationPolicy) -> DatasetStats {
    let mut unique = HashSet::new();
    for s in &corpus.sentences {
        for e in &s.entities {
            unique.insert((policy.normalize_surface(s.span_tokens(e)), e.etype.as_str()));
        }
    }
    DatasetStats {
        sentences: corpus.len(),
        tokens: corpus.token_count(),
        mention_occurrences: corpus.entity_count(),
        unique_mentions: unique.len(),
        relations: corpus.relation_count(),
    }
}

/// Training occurrences of the mention's surface with its type, divided by
/// all training occurrences of the surface.
pub fn entity_consistency(index: &TrainIndex, sentence: &AnnotatedSentence, mention: &Entity) -> f64 {
    let surface = index.surface_of(sentence, mention);
    let any = index.any_type_count(&surface);
    if any == 0 {
        0.0
    } else {
        index.typed_count(&surface, &mention.etype) as f64 / any as f64
    }
}

/// Same as [`entity_consistency`] for a (head, type, tail) triple, relative
/// to all training relations between the two surfaces.
pub fn relation_consistency(index: &TrainIndex, sentence: &AnnotatedSentence, relation: &Relation) -> f64 {
    let Some((head, tail)) = sentence.arguments(relation) else {
        return 0.0;
    };
    let hs = index.surface_of(sentence, head);
    let ts = index.surface_of(sentence, tail);
    let any = index.pair_count(&hs, &ts);
    if any == 0 {
        0.0
    } else {
        index.triple_count(&hs, &relation.rtype, &ts) as f64 / any as f64
    }
}

/// Training relations of this type between mentions with the same
/// (head type, tail type), divided by the number of ordered same-sentence
/// training mention pairs with those types.
pub fn argument_type_consistency(index: &TrainIndex, sentence: &AnnotatedSentence, relation: &Relation) -> f64 {
    let Some((head, tail)) = sentence.arguments(relation) else {
        return 0.0;
    };
    let Some(counts) = index
        .pair_type_relation_counts
        .get(&(head.etype.clone(), tail.etype.clone()))
    else {
        return 0.0;
    };
    if counts.pairs == 0 {
        return 0.0;
    }
    counts.relations.get(&relation.rtype).copied().unwrap_or(0) as f64 / counts.pairs as f64
}

/// Tokens strictly between two spans; zero when they touch or overlap.
pub fn argument_distance(head: &Entity, tail: &Entity) -> usize {
    tail.start.saturating_sub(head.end).max(head.start.saturating_sub(tail.end))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ConsistencyProfile {
    #[serde(rename = "eCon")]
    pub e_con: f64,
    #[serde(rename = "eCon*")]
    pub e_con_star: f64,
    #[serde(rename = "eLex")]
    pub e_lex: f64,
    #[serde(rename = "eLen")]
    pub e_len: f64,
    #[serde(rename = "rCon")]
    pub r_con: f64,
    #[serde(rename = "rCon*")]
    pub r_con_star: f64,
    #[serde(rename = "rLex")]
    pub r_lex: f64,
    #[serde(rename = "aCon")]
    pub a_con: f64,
    #[serde(rename = "aLen")]
    pub a_len: f64,
    #[serde(rename = "aDist")]
    pub a_dist: f64,
    pub vocab_transfer_rate: f64,
}

impl ConsistencyProfile {
    /// Rows in display order with their labels.
    pub fn rows(&self) -> [(&'static str, f64, bool); 11] {
        [
            ("eCon", self.e_con, true),
            ("eCon*", self.e_con_star, true),
            ("eLex", self.e_lex, true),
            ("eLen", self.e_len, false),
            ("rCon", self.r_con, true),
            ("rCon*", self.r_con_star, true),
            ("rLex", self.r_lex, true),
            ("aCon", self.a_con, true),
            ("aLen", self.a_len, false),
            ("aDist", self.a_dist, false),
            ("vocab_transfer_rate", self.vocab_transfer_rate, true),
        ]
    }
}

#[derive(Default)]
struct Mean {
    sum: f64,
    n: usize,
}

impl Mean {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.n += 1;
    }

    fn value(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum / self.n as f64
        }
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Averages of the entity and relation attributes of `eval` against the
/// training index. `train` is only used for the vocabulary transfer rate.
pub fn consistency_profile(
    index: &TrainIndex,
    train: &AnnotatedCorpus,
    eval: &AnnotatedCorpus,
) -> Result<ConsistencyProfile> {
    if eval.is_empty() {
        return Err(Error::EmptyEvalCorpus);
    }
    let (mut e_con, mut e_con_star, mut e_len) = (Mean::default(), Mean::default(), Mean::default());
    let (mut r_con, mut r_con_star) = (Mean::default(), Mean::default());
    let (mut a_con, mut a_len, mut a_dist) = (Mean::default(), Mean::default(), Mean::default());
    let (mut mentions, mut seen_mentions, mut relations, mut seen_triples) = (0, 0, 0, 0);

    for s in &eval.sentences {
        for e in &s.entities {
            let c = entity_consistency(index, s, e);
            mentions += 1;
            e_con.push(c);
            e_len.push(e.len() as f64);
            if index.any_type_count(&index.surface_of(s, e)) > 0 {
                seen_mentions += 1;
                e_con_star.push(c);
            }
        }
        for r in &s.relations {
            let Some((head, tail)) = s.arguments(r) else {
                continue;
            };
            let c = relation_consistency(index, s, r);
            relations += 1;
            r_con.push(c);
            let triple_seen =
                index.triple_count(&index.surface_of(s, head), &r.rtype, &index.surface_of(s, tail)) > 0;
            if triple_seen {
                seen_triples += 1;
                r_con_star.push(c);
            }
            a_con.push(argument_type_consistency(index, s, r));
            a_len.push((head.len() + tail.len()) as f64);
            a_dist.push(argument_distance(head, tail) as f64);
        }
    }

    Ok(ConsistencyProfile {
        e_con: e_con.value(),
        e_con_star: e_con_star.value(),
        e_lex: ratio(seen_mentions, mentions),
        e_len: e_len.value(),
        r_con: r_con.value(),
        r_con_star: r_con_star.value(),
        r_lex: ratio(seen_triples, relations),
        a_con: a_con.value(),
        a_len: a_len.value(),
        a_dist: a_dist.value(),
        vocab_transfer_rate: if eval.token_count() == 0 {
            0.0
        } else {
            vocabulary_transfer_rate(train, eval)?
        },
    })
}

/// Share of distinct evaluation tokens (case-sensitive) that also occur in
/// the training corpus.
pub fn vocabulary_transfer_rate(train: &AnnotatedCorpus, eval: &AnnotatedCorpus) -> Result<f64> {
    let vocab = |c: &AnnotatedCorpus| -> HashSet<String> {
        c.sentences
            .iter()
            .flat_map(|s| s.tokens().iter().cloned())
            .collect()
    };
    let eval_vocab = vocab(eval);
    if eval_vocab.is_empty() {
        return Err(Error::EmptyEvalCorpus);
    }
    let train_vocab = vocab(train);
    let shared = eval_vocab.iter().filter(|t| train_vocab.contains(*t)).count();
    Ok(shared as f64 / eval_vocab.len() as f64)
}

/// Per-type and overall proportions of mention occurrences in each novelty
/// class.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct OverlapTable {
    pub per_type: BTreeMap<String, ClassCounts>,
    pub all: ClassCounts,
}

pub fn overlap_table(index: &TrainIndex, corpus: &AnnotatedCorpus) -> OverlapTable {
    let summary = partition_corpus(index, corpus).summary.entities;
    OverlapTable {
        per_type: summary.per_type,
        all: summary.all,
    }
}

/// Everything the `stats` command reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub train: DatasetStats,
    pub eval: DatasetStats,
    pub profile: ConsistencyProfile,
    pub overlap: OverlapTable,
}

pub fn stats_report(index: &TrainIndex, train: &AnnotatedCorpus, eval: &AnnotatedCorpus) -> Result<StatsReport> {
    Ok(StatsReport {
        train: global_stats(train, &index.policy),
        eval: global_stats(eval, &index.policy),
        profile: consistency_profile(index, train, eval)?,
        overlap: overlap_table(index, eval),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Role, Sentence};
    use crate::overlap::build_train_index;

    fn sentence(tokens: &str, entities: &[(usize, usize, &str)], relations: &[(usize, usize, &str)]) -> AnnotatedSentence {
        AnnotatedSentence {
            sentence: Sentence {
                doc_id: String::new(),
                sent_id: tokens.into(),
                tokens: tokens.split(' ').map(str::to_owned).collect(),
            },
            entities: entities.iter().map(|&(s, e, t)| Entity::new(s, e, t)).collect(),
            relations: relations.iter().map(|&(h, t, r)| Relation::new(h, t, r)).collect(),
        }
    }

    fn corpus(role: Role, sentences: Vec<AnnotatedSentence>) -> AnnotatedCorpus {
        AnnotatedCorpus { role, sentences }
    }

    #[test]
    fn empty_corpus_stats() {
        let s = global_stats(&AnnotatedCorpus::new(Role::Gold), &NormalizationPolicy::default());
        assert_eq!(s, DatasetStats::default());
    }

    #[test]
    fn ambiguous_surface_consistency() {
        let train = corpus(
            Role::Train,
            vec![sentence("Jordan won", &[(0, 1, "PER")], &[]), sentence("Jordan is dry", &[(0, 1, "ORG")], &[])],
        );
        let index = build_train_index(&train, NormalizationPolicy::default());
        let q = sentence("Jordan", &[(0, 1, "PER")], &[]);
        assert_eq!(entity_consistency(&index, &q, &q.entities[0]), 0.5);
        let unseen = sentence("Berlin", &[(0, 1, "LOC")], &[]);
        assert_eq!(entity_consistency(&index, &unseen, &unseen.entities[0]), 0.0);
    }

    #[test]
    fn distances() {
        assert_eq!(argument_distance(&Entity::new(0, 2, "A"), &Entity::new(4, 5, "B")), 2);
        assert_eq!(argument_distance(&Entity::new(4, 5, "A"), &Entity::new(0, 2, "B")), 2);
        assert_eq!(argument_distance(&Entity::new(0, 2, "A"), &Entity::new(2, 3, "B")), 0);
        assert_eq!(argument_distance(&Entity::new(0, 3, "A"), &Entity::new(1, 2, "B")), 0);
    }

    #[test]
    fn vocabulary_edges() {
        let a = corpus(Role::Train, vec![sentence("a b c", &[], &[])]);
        let b = corpus(Role::Gold, vec![sentence("x y", &[], &[])]);
        assert_eq!(vocabulary_transfer_rate(&a, &a).unwrap(), 1.0);
        assert_eq!(vocabulary_transfer_rate(&a, &b).unwrap(), 0.0);
        assert!(matches!(
            vocabulary_transfer_rate(&a, &AnnotatedCorpus::new(Role::Gold)),
            Err(Error::EmptyEvalCorpus)
        ));
    }

    #[test]
    fn argument_type_consistency_counts_unrelated_pairs() {
        // three PER-LOC ordered pairs in training, one of which is LiveIn
        let train = corpus(
            Role::Train,
            vec![
                sentence("A in B", &[(0, 1, "PER"), (2, 3, "LOC")], &[(0, 1, "LiveIn")]),
                sentence("C near D and E", &[(0, 1, "PER"), (2, 3, "LOC"), (4, 5, "LOC")], &[]),
            ],
        );
        let index = build_train_index(&train, NormalizationPolicy::default());
        let q = sentence("X in Y", &[(0, 1, "PER"), (2, 3, "LOC")], &[(0, 1, "LiveIn")]);
        assert!((argument_type_consistency(&index, &q, &q.relations[0]) - 1.0 / 3.0).abs() < 1e-12);
        let other = sentence("X in Y", &[(0, 1, "ORG"), (2, 3, "LOC")], &[(0, 1, "LiveIn")]);
        assert_eq!(argument_type_consistency(&index, &other, &other.relations[0]), 0.0);
    }

    #[test]
    fn empty_eval_profile_errors() {
        let index = build_train_index(&AnnotatedCorpus::new(Role::Train), NormalizationPolicy::default());
        assert!(matches!(
            consistency_profile(&index, &AnnotatedCorpus::new(Role::Train), &AnnotatedCorpus::new(Role::Gold)),
            Err(Error::EmptyEvalCorpus)
        ));
    }
}
