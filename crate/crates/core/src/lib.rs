//! Overlap-aware evaluation for named entity recognition and end-to-end
//! relation extraction.
//!
//! The crate is organised around a span-JSON corpus model ([`corpus`]).
//! Training corpora are indexed ([`overlap::TrainIndex`]) so evaluation
//! mentions and relations can be bucketed by lexical novelty, scored under
//! several correctness criteria ([`metrics`]), compared against a
//! memorization baseline ([`baselines`]), stress-tested by swapping relation
//! arguments ([`behavior`]) and summarised with corpus statistics ([`stats`]).

pub mod baselines;
pub mod behavior;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod metrics;
pub mod overlap;
pub mod report;
pub mod stats;

pub use corpus::{AnnotatedCorpus, AnnotatedSentence, Entity, Relation, Role, Sentence};
pub use error::{Error, Result};
pub use metrics::{ConfusionCounts, Criterion, Prf};
pub use overlap::{NormalizationPolicy, Novelty, TrainIndex};
