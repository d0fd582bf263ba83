//! Training-set index and lexical-overlap novelty classification.
//!
//! A mention is an exact match when its surface form occurs with the same
//! type among the training mentions, a partial match when one of its
//! non-stopword tokens occurs inside a training mention of the same type, and
//! new otherwise. A relation is an exact match when its (head, type, tail)
//! surface triple occurs in training, a partial match when its head (or tail)
//! surface occurs in the same position of a training relation of the same
//! type, and new otherwise.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{AnnotatedCorpus, AnnotatedSentence, Entity, Relation, Role, SpanJsonSentence};
use crate::error::{Error, Result};

/// Stopwords shipped with the toolkit (version 1).
pub const DEFAULT_STOPWORDS: [&str; 25] = [
    "a", "an", "the", "of", "in", "on", "at", "to", "for", "and", "or", "by", "with", "from", "as",
    "is", "was", "be", "this", "that", "'s", ".", ",", "-", "&",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationPolicy {
    pub case_sensitive: bool,
    pub strip_leading_article: bool,
    pub strip_trailing_possessive: bool,
    /// Lowercased; always matched case-insensitively.
    pub stopwords: BTreeSet<String>,
    pub type_sensitive: bool,
}

impl Default for NormalizationPolicy {
    fn default() -> Self {
        NormalizationPolicy {
            case_sensitive: true,
            strip_leading_article: false,
            strip_trailing_possessive: false,
            stopwords: DEFAULT_STOPWORDS.iter().map(|s| s.to_string()).collect(),
            type_sensitive: true,
        }
    }
}

impl NormalizationPolicy {
    /// Replaces the stopword set with the non-empty lines of `text`.
    pub fn with_stopwords_text(mut self, text: &str) -> Self {
        self.stopwords = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_lowercase)
            .collect();
        self
    }

    pub fn with_stopwords_file(self, path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(self.with_stopwords_text(&text))
    }

    pub fn is_stopword(&self, token: &str) -> bool {
        self.stopwords.contains(&token.to_lowercase())
    }

    fn fold(&self, token: &str) -> String {
        if self.case_sensitive {
            token.to_owned()
        } else {
            token.to_lowercase()
        }
    }

    /// Applies case folding and the optional article / possessive stripping.
    pub fn normalize_tokens(&self, tokens: &[String]) -> Vec<String> {
        let mut out: Vec<String> = tokens.iter().map(|t| self.fold(t)).collect();
        if self.strip_leading_article && out.len() > 1 && out[0].eq_ignore_ascii_case("the") {
            out.remove(0);
        }
        if self.strip_trailing_possessive {
            if let Some(last) = out.last() {
                if out.len() > 1 && matches!(last.as_str(), "'s" | "’s" | "'S" | "’S") {
                    out.pop();
                } else if let Some(stem) = ["'s", "’s", "'S", "’S"]
                    .iter()
                    .find_map(|suffix| last.strip_suffix(suffix))
                    .filter(|stem| !stem.is_empty())
                {
                    let stem = stem.to_owned();
                    *out.last_mut().expect("non-empty") = stem;
                }
            }
        }
        out
    }

    pub fn normalize_surface(&self, tokens: &[String]) -> String {
        self.normalize_tokens(tokens).join(" ")
    }
}

/// Novelty of a mention or relation with respect to the training set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Novelty {
    Exact,
    Partial,
    New,
}

pub type MentionNovelty = Novelty;
pub type RelationNovelty = Novelty;

impl Novelty {
    pub const ALL: [Novelty; 3] = [Novelty::Exact, Novelty::Partial, Novelty::New];

    pub fn as_str(self) -> &'static str {
        match self {
            Novelty::Exact => "exact",
            Novelty::Partial => "partial",
            Novelty::New => "new",
        }
    }
}

impl fmt::Display for Novelty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Novelty {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Novelty::Exact),
            "partial" => Ok(Novelty::Partial),
            "new" => Ok(Novelty::New),
            other => Err(Error::SchemaViolation(format!("unknown novelty class `{other}`"))),
        }
    }
}

/// Relation counts between mentions of a given (head type, tail type) pair,
/// next to the number of ordered same-sentence mention pairs with those types.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairTypeCounts {
    pub relations: BTreeMap<String, usize>,
    pub pairs: usize,
}

/// Lookup structures over a training corpus. All surfaces are stored after
/// normalization under `policy`.
#[derive(Debug, Clone, Default)]
pub struct TrainIndex {
    pub typed_surfaces: HashMap<(String, String), usize>,
    pub surfaces_any_type: HashMap<String, BTreeMap<String, usize>>,
    pub token_types: HashMap<String, BTreeSet<String>>,
    /// (head surface, relation type, tail surface)
    pub triples: HashMap<(String, String, String), usize>,
    /// (head surface, tail surface) -> relation type counts
    pub argument_pairs: HashMap<(String, String), BTreeMap<String, usize>>,
    pub head_args: HashSet<(String, String)>,
    pub tail_args: HashSet<(String, String)>,
    pub pair_type_relation_counts: HashMap<(String, String), PairTypeCounts>,
    pub max_mention_len: usize,
    pub policy: NormalizationPolicy,
}

impl TrainIndex {
    pub fn build(train: &AnnotatedCorpus, policy: NormalizationPolicy) -> Self {
        if train.role != Role::Train {
            log::debug!("indexing a corpus with role {:?} as training data", train.role);
        }
        let mut index = TrainIndex {
            policy,
            ..Default::default()
        };
        for s in &train.sentences {
            index.add_sentence(s);
        }
        index
    }

    fn add_sentence(&mut self, s: &AnnotatedSentence) {
        let surfaces: Vec<String> = s
            .entities
            .iter()
            .map(|e| self.policy.normalize_surface(s.span_tokens(e)))
            .collect();

        for (e, surface) in s.entities.iter().zip(&surfaces) {
            self.max_mention_len = self.max_mention_len.max(e.len());
            *self
                .typed_surfaces
                .entry((surface.clone(), e.etype.clone()))
                .or_default() += 1;
            *self
                .surfaces_any_type
                .entry(surface.clone())
                .or_default()
                .entry(e.etype.clone())
                .or_default() += 1;
            for token in self.policy.normalize_tokens(s.span_tokens(e)) {
                if !self.policy.is_stopword(&token) {
                    self.token_types.entry(token).or_default().insert(e.etype.clone());
                }
            }
        }

        for (i, a) in s.entities.iter().enumerate() {
            for (j, b) in s.entities.iter().enumerate() {
                if i != j {
                    self.pair_type_relation_counts
                        .entry((a.etype.clone(), b.etype.clone()))
                        .or_default()
                        .pairs += 1;
                }
            }
        }

        for r in &s.relations {
            let Some((head, tail)) = s.arguments(r) else {
                continue;
            };
            let hs = surfaces[r.head].clone();
            let ts = surfaces[r.tail].clone();
            *self
                .triples
                .entry((hs.clone(), r.rtype.clone(), ts.clone()))
                .or_default() += 1;
            *self
                .argument_pairs
                .entry((hs.clone(), ts.clone()))
                .or_default()
                .entry(r.rtype.clone())
                .or_default() += 1;
            self.head_args.insert((hs, r.rtype.clone()));
            self.tail_args.insert((ts, r.rtype.clone()));
            *self
                .pair_type_relation_counts
                .entry((head.etype.clone(), tail.etype.clone()))
                .or_default()
                .relations
                .entry(r.rtype.clone())
                .or_default() += 1;
        }
    }

    pub fn surface_of(&self, sentence: &AnnotatedSentence, entity: &Entity) -> String {
        self.policy.normalize_surface(sentence.span_tokens(entity))
    }

    pub fn typed_count(&self, surface: &str, etype: &str) -> usize {
        self.typed_surfaces
            .get(&(surface.to_owned(), etype.to_owned()))
            .copied()
            .unwrap_or(0)
    }

    pub fn any_type_count(&self, surface: &str) -> usize {
        self.surfaces_any_type
            .get(surface)
            .map_or(0, |types| types.values().sum())
    }

    pub fn triple_count(&self, head: &str, rtype: &str, tail: &str) -> usize {
        self.triples
            .get(&(head.to_owned(), rtype.to_owned(), tail.to_owned()))
            .copied()
            .unwrap_or(0)
    }

    pub fn pair_count(&self, head: &str, tail: &str) -> usize {
        self.argument_pairs
            .get(&(head.to_owned(), tail.to_owned()))
            .map_or(0, |types| types.values().sum())
    }

    /// Most frequent training type of a surface; ties go to the
    /// lexicographically smallest label.
    pub fn majority_type(&self, surface: &str) -> Option<&str> {
        majority(self.surfaces_any_type.get(surface)?)
    }

    /// Most frequent relation type between two argument surfaces.
    pub fn majority_relation(&self, head: &str, tail: &str) -> Option<&str> {
        majority(self.argument_pairs.get(&(head.to_owned(), tail.to_owned()))?)
    }

    pub fn classify_mention(&self, sentence: &AnnotatedSentence, entity: &Entity) -> Novelty {
        let tokens = self.policy.normalize_tokens(sentence.span_tokens(entity));
        let surface = tokens.join(" ");
        let exact = if self.policy.type_sensitive {
            self.typed_count(&surface, &entity.etype) > 0
        } else {
            self.surfaces_any_type.contains_key(&surface)
        };
        if exact {
            return Novelty::Exact;
        }
        let partial = tokens
            .iter()
            .filter(|t| !self.policy.is_stopword(t))
            .filter_map(|t| self.token_types.get(t))
            .any(|types| !self.policy.type_sensitive || types.contains(&entity.etype));
        if partial {
            Novelty::Partial
        } else {
            Novelty::New
        }
    }

    pub fn classify_relation(&self, sentence: &AnnotatedSentence, relation: &Relation) -> Novelty {
        let Some((head, tail)) = sentence.arguments(relation) else {
            return Novelty::New;
        };
        let hs = self.surface_of(sentence, head);
        let ts = self.surface_of(sentence, tail);
        if self.triple_count(&hs, &relation.rtype, &ts) > 0 {
            Novelty::Exact
        } else if self.head_args.contains(&(hs, relation.rtype.clone()))
            || self.tail_args.contains(&(ts, relation.rtype.clone()))
        {
            Novelty::Partial
        } else {
            Novelty::New
        }
    }
}

fn majority(counts: &BTreeMap<String, usize>) -> Option<&str> {
    // BTreeMap iterates in label order, so the first maximum wins ties
    let mut best: Option<(&str, usize)> = None;
    for (label, &count) in counts {
        if best.is_none_or(|(_, c)| count > c) {
            best = Some((label, count));
        }
    }
    best.map(|(label, _)| label)
}

pub fn build_train_index(train: &AnnotatedCorpus, policy: NormalizationPolicy) -> TrainIndex {
    TrainIndex::build(train, policy)
}

/// Novelty labels for every mention and relation of a corpus, parallel to its
/// sentence, entity and relation lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusNovelty {
    pub entities: Vec<Vec<Novelty>>,
    pub relations: Vec<Vec<Novelty>>,
}

impl CorpusNovelty {
    pub fn classify(index: &TrainIndex, corpus: &AnnotatedCorpus) -> Self {
        let mut out = CorpusNovelty::default();
        for s in &corpus.sentences {
            out.entities
                .push(s.entities.iter().map(|e| index.classify_mention(s, e)).collect());
            out.relations
                .push(s.relations.iter().map(|r| index.classify_relation(s, r)).collect());
        }
        out
    }

    /// Reads the novelty arrays of a partition file, checking they line up
    /// with `corpus`.
    pub fn from_records(records: &[SpanJsonSentence], corpus: &AnnotatedCorpus) -> Result<Self> {
        if records.len() != corpus.len() {
            return Err(Error::SchemaViolation(format!(
                "partition file has {} sentences, corpus has {}",
                records.len(),
                corpus.len()
            )));
        }
        let mut out = CorpusNovelty::default();
        for (record, s) in records.iter().zip(&corpus.sentences) {
            if record.id != s.id() {
                return Err(Error::SentenceMismatch {
                    sent_id: s.id().to_owned(),
                    detail: format!("partition file has `{}` at this position", record.id),
                });
            }
            let parse = |labels: &Option<Vec<String>>, expected: usize, what: &str| -> Result<Vec<Novelty>> {
                let labels = labels.as_ref().ok_or_else(|| {
                    Error::SchemaViolation(format!("sentence `{}` lacks {what}", record.id))
                })?;
                if labels.len() != expected {
                    return Err(Error::SchemaViolation(format!(
                        "sentence `{}`: {what} has {} labels for {expected} items",
                        record.id,
                        labels.len()
                    )));
                }
                labels.iter().map(|l| l.parse()).collect()
            };
            out.entities
                .push(parse(&record.entity_novelty, s.entities.len(), "entity_novelty")?);
            out.relations
                .push(parse(&record.relation_novelty, s.relations.len(), "relation_novelty")?);
        }
        Ok(out)
    }

    pub fn to_records(&self, corpus: &AnnotatedCorpus) -> Vec<SpanJsonSentence> {
        corpus
            .sentences
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut record = SpanJsonSentence::from(s);
                let names = |v: &[Novelty]| v.iter().map(|n| n.as_str().to_owned()).collect();
                record.entity_novelty = Some(names(&self.entities[i]));
                record.relation_novelty = Some(names(&self.relations[i]));
                record
            })
            .collect()
    }
}

/// Counts per novelty class, with proportions (zero when there is nothing to
/// count).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ClassCounts {
    pub exact: usize,
    pub partial: usize,
    pub new: usize,
    pub total: usize,
    pub exact_proportion: f64,
    pub partial_proportion: f64,
    pub new_proportion: f64,
}

impl ClassCounts {
    fn add(&mut self, novelty: Novelty) {
        match novelty {
            Novelty::Exact => self.exact += 1,
            Novelty::Partial => self.partial += 1,
            Novelty::New => self.new += 1,
        }
        self.total += 1;
    }

    fn finish(&mut self) {
        let ratio = |n: usize| if self.total == 0 { 0.0 } else { n as f64 / self.total as f64 };
        self.exact_proportion = ratio(self.exact);
        self.partial_proportion = ratio(self.partial);
        self.new_proportion = ratio(self.new);
    }

    pub fn get(&self, novelty: Novelty) -> usize {
        match novelty {
            Novelty::Exact => self.exact,
            Novelty::Partial => self.partial,
            Novelty::New => self.new,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct KindSummary {
    pub all: ClassCounts,
    pub per_type: BTreeMap<String, ClassCounts>,
}

impl KindSummary {
    fn add(&mut self, label: &str, novelty: Novelty) {
        self.all.add(novelty);
        self.per_type.entry(label.to_owned()).or_default().add(novelty);
    }

    fn finish(&mut self) {
        self.all.finish();
        self.per_type.values_mut().for_each(ClassCounts::finish);
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PartitionSummary {
    pub entities: KindSummary,
    pub relations: KindSummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub novelty: CorpusNovelty,
    pub summary: PartitionSummary,
}

impl PartitionSummary {
    pub fn from_novelty(corpus: &AnnotatedCorpus, novelty: &CorpusNovelty) -> Self {
        let mut summary = PartitionSummary::default();
        for (i, s) in corpus.sentences.iter().enumerate() {
            for (e, &n) in s.entities.iter().zip(&novelty.entities[i]) {
                summary.entities.add(&e.etype, n);
            }
            for (r, &n) in s.relations.iter().zip(&novelty.relations[i]) {
                summary.relations.add(&r.rtype, n);
            }
        }
        summary.entities.finish();
        summary.relations.finish();
        summary
    }
}

pub fn partition_corpus(index: &TrainIndex, corpus: &AnnotatedCorpus) -> Partition {
    let novelty = CorpusNovelty::classify(index, corpus);
    let summary = PartitionSummary::from_novelty(corpus, &novelty);
    Partition { novelty, summary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Sentence, Role};

    fn sentence(id: &str, tokens: &str, entities: &[(usize, usize, &str)], relations: &[(usize, usize, &str)]) -> AnnotatedSentence {
        AnnotatedSentence {
            sentence: Sentence {
                doc_id: String::new(),
                sent_id: id.into(),
                tokens: tokens.split(' ').map(str::to_owned).collect(),
            },
            entities: entities.iter().map(|&(s, e, t)| Entity::new(s, e, t)).collect(),
            relations: relations.iter().map(|&(h, t, r)| Relation::new(h, t, r)).collect(),
        }
    }

    fn train() -> AnnotatedCorpus {
        AnnotatedCorpus {
            role: Role::Train,
            sentences: vec![
                sentence("T1", "John Smith lives in Paris .", &[(0, 2, "PER"), (4, 5, "LOC")], &[(0, 1, "LiveIn")]),
                sentence("T2", "Smith visited Paris .", &[(0, 1, "PER"), (2, 3, "LOC")], &[]),
                sentence("T3", "Acme Corp hired John Smith .", &[(0, 2, "ORG"), (3, 5, "PER")], &[(1, 0, "WorkFor")]),
            ],
        }
    }

    #[test]
    fn index_counts() {
        let index = build_train_index(&train(), NormalizationPolicy::default());
        assert_eq!(index.typed_count("John Smith", "PER"), 2);
        assert_eq!(index.typed_count("Paris", "LOC"), 2);
        assert_eq!(index.typed_count("Smith", "PER"), 1);
        assert_eq!(index.typed_count("Acme Corp", "ORG"), 1);
        assert_eq!(index.typed_surfaces.len(), 4);
        assert_eq!(index.triple_count("John Smith", "LiveIn", "Paris"), 1);
        assert_eq!(index.triple_count("John Smith", "WorkFor", "Acme Corp"), 1);
        let per_loc = &index.pair_type_relation_counts[&("PER".to_owned(), "LOC".to_owned())];
        assert_eq!(per_loc.pairs, 2);
        assert_eq!(per_loc.relations["LiveIn"], 1);
        assert_eq!(index.max_mention_len, 2);
    }

    #[test]
    fn empty_index() {
        let index = build_train_index(&AnnotatedCorpus::new(Role::Train), NormalizationPolicy::default());
        assert!(index.typed_surfaces.is_empty());
        assert!(index.surfaces_any_type.is_empty());
        assert!(index.token_types.is_empty());
        assert!(index.triples.is_empty());
        assert!(index.pair_type_relation_counts.is_empty());
    }

    #[test]
    fn mention_classes() {
        let index = build_train_index(&train(), NormalizationPolicy::default());
        let e1 = sentence("E1", "John Smith moved to Berlin .", &[(0, 2, "PER"), (4, 5, "LOC")], &[(0, 1, "LiveIn")]);
        let e2 = sentence("E2", "Mary Smith works for Acme Corp .", &[(0, 2, "PER"), (4, 6, "ORG")], &[]);
        assert_eq!(index.classify_mention(&e1, &e1.entities[0]), Novelty::Exact);
        assert_eq!(index.classify_mention(&e1, &e1.entities[1]), Novelty::New);
        assert_eq!(index.classify_mention(&e2, &e2.entities[0]), Novelty::Partial);
        // a known surface with a different type is not an exact match
        let wrong = Entity::new(0, 2, "ORG");
        assert_eq!(index.classify_mention(&e1, &wrong), Novelty::New);
        let relaxed = NormalizationPolicy {
            type_sensitive: false,
            ..Default::default()
        };
        let any = build_train_index(&train(), relaxed);
        assert_eq!(any.classify_mention(&e1, &wrong), Novelty::Exact);
    }

    #[test]
    fn stopword_only_mention_is_new() {
        let t = AnnotatedCorpus {
            role: Role::Train,
            sentences: vec![sentence("t", "the Lab", &[(0, 2, "ORG")], &[])],
        };
        let index = build_train_index(&t, NormalizationPolicy::default());
        let s = sentence("e", "The of", &[(0, 2, "ORG")], &[]);
        assert_eq!(index.classify_mention(&s, &s.entities[0]), Novelty::New);
        let s = sentence("e", "the Lab", &[(0, 2, "ORG")], &[]);
        assert_eq!(index.classify_mention(&s, &s.entities[0]), Novelty::Exact);
    }

    #[test]
    fn relation_classes() {
        let index = build_train_index(&train(), NormalizationPolicy::default());
        let e1 = sentence("E1", "John Smith moved to Berlin .", &[(0, 2, "PER"), (4, 5, "LOC")], &[(0, 1, "LiveIn")]);
        assert_eq!(index.classify_relation(&e1, &e1.relations[0]), Novelty::Partial);
        let seen = sentence("x", "John Smith in Paris", &[(0, 2, "PER"), (3, 4, "LOC")], &[(0, 1, "LiveIn")]);
        assert_eq!(index.classify_relation(&seen, &seen.relations[0]), Novelty::Exact);
        let unseen = sentence("y", "Berlin near Tokyo", &[(0, 1, "LOC"), (2, 3, "LOC")], &[(0, 1, "LiveIn")]);
        assert_eq!(index.classify_relation(&unseen, &unseen.relations[0]), Novelty::New);
        // right argument, wrong position
        let flipped = sentence("z", "Paris has Bob", &[(0, 1, "LOC"), (2, 3, "PER")], &[(1, 0, "LiveIn")]);
        assert_eq!(index.classify_relation(&flipped, &flipped.relations[0]), Novelty::Partial);
        let flipped = sentence("z", "Paris has Bob", &[(0, 1, "LOC"), (2, 3, "PER")], &[(0, 1, "LiveIn")]);
        assert_eq!(index.classify_relation(&flipped, &flipped.relations[0]), Novelty::New);
    }

    #[test]
    fn normalization_options() {
        let policy = NormalizationPolicy {
            case_sensitive: false,
            strip_leading_article: true,
            strip_trailing_possessive: true,
            ..Default::default()
        };
        let toks = |s: &str| s.split(' ').map(str::to_owned).collect::<Vec<_>>();
        assert_eq!(policy.normalize_surface(&toks("The White House 's")), "white house");
        assert_eq!(policy.normalize_surface(&toks("the Pentagon's")), "pentagon");
        assert_eq!(policy.normalize_surface(&toks("The")), "the");
        assert!(policy.is_stopword("The"));
        let default = NormalizationPolicy::default();
        assert_eq!(default.normalize_surface(&toks("The White House 's")), "The White House 's");
        assert_eq!(default.stopwords.len(), 25);
    }

    #[test]
    fn stopword_override() {
        let policy = NormalizationPolicy::default().with_stopwords_text("Foo\n\n bar \n");
        assert_eq!(policy.stopwords.len(), 2);
        assert!(policy.is_stopword("FOO"));
        assert!(!policy.is_stopword("the"));
    }

    #[test]
    fn majority_ties_break_lexicographically() {
        let t = AnnotatedCorpus {
            role: Role::Train,
            sentences: vec![
                sentence("a", "Jordan", &[(0, 1, "PER")], &[]),
                sentence("b", "Jordan", &[(0, 1, "LOC")], &[]),
                sentence("c", "Jordan", &[(0, 1, "PER")], &[]),
                sentence("d", "Obama", &[(0, 1, "PER")], &[]),
                sentence("e", "Obama", &[(0, 1, "LOC")], &[]),
            ],
        };
        let index = build_train_index(&t, NormalizationPolicy::default());
        assert_eq!(index.majority_type("Jordan"), Some("PER"));
        assert_eq!(index.majority_type("Obama"), Some("LOC"));
        assert_eq!(index.majority_type("Nobody"), None);
    }

    #[test]
    fn empty_partition_reports_zero_proportions() {
        let index = build_train_index(&train(), NormalizationPolicy::default());
        let p = partition_corpus(&index, &AnnotatedCorpus::new(Role::Gold));
        assert!(p.novelty.entities.is_empty());
        assert_eq!(p.summary.entities.all.total, 0);
        assert_eq!(p.summary.entities.all.exact_proportion, 0.0);
    }

    #[test]
    fn records_round_trip() {
        let corpus = train();
        let index = build_train_index(&corpus, NormalizationPolicy::default());
        let p = partition_corpus(&index, &corpus);
        let records = p.novelty.to_records(&corpus);
        assert_eq!(CorpusNovelty::from_records(&records, &corpus).unwrap(), p.novelty);
        let mut broken = records.clone();
        broken[0].entity_novelty = Some(vec!["exact".into()]);
        assert!(CorpusNovelty::from_records(&broken, &corpus).is_err());
    }
}
