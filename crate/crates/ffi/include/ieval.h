#ifndef IEVAL_H
#define IEVAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum IevalStatus {
  IEVAL_STATUS_OK = 0,
  IEVAL_STATUS_NULL_POINTER = 1,
  IEVAL_STATUS_INVALID_UTF8 = 2,
  IEVAL_STATUS_INVALID_ARGUMENT = 3,
  // Malformed input: bad JSON, bad CoNLL columns, unknown tags.
  IEVAL_STATUS_PARSE_ERROR = 4,
  // Well-formed input that violates a corpus invariant or does not line up
  // with another corpus.
  IEVAL_STATUS_VALIDATION_ERROR = 5,
  IEVAL_STATUS_IO_ERROR = 6,
  IEVAL_STATUS_PANIC = 7,
} IevalStatus;

// An annotated corpus.
typedef struct IevalCorpus IevalCorpus;

// Training-set index used for overlap classification and the baselines.
typedef struct IevalIndex IevalIndex;

// Surface normalization settings for `ieval_index_build`.
typedef struct IevalPolicy {
  bool case_sensitive;
  bool strip_leading_article;
  bool strip_trailing_possessive;
  bool type_sensitive;
  // Newline-separated stopwords replacing the default list, or NULL.
  const char *stopwords;
} IevalPolicy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until the
// next call into the library from the same thread.
const char *ieval_last_error(void);

// Library version as a static NUL-terminated string.
const char *ieval_version(void);

void ieval_string_free(char *s);

// Harmonic mean of precision and recall; 0 when both are 0.
double ieval_harmonic_f1(double p, double r);

// Parses a span-JSON corpus.
enum IevalStatus ieval_corpus_from_json(const char *json, struct IevalCorpus **out);

// Parses CoNLL text with the token in column 0 and the tag in column 1.
// `scheme` is "iob1", "iob2" or "iobes"; `strict` rejects ill-formed tags.
enum IevalStatus ieval_corpus_from_conll(const char *text,
                                         const char *scheme,
                                         bool strict,
                                         struct IevalCorpus **out);

void ieval_corpus_free(struct IevalCorpus *corpus);

size_t ieval_corpus_sentence_count(const struct IevalCorpus *corpus);

size_t ieval_corpus_entity_count(const struct IevalCorpus *corpus);

size_t ieval_corpus_relation_count(const struct IevalCorpus *corpus);

// Serializes a corpus as span-JSON.
enum IevalStatus ieval_corpus_to_json(const struct IevalCorpus *corpus, char **out);

// Structural problems of a corpus as a JSON array (empty when clean).
enum IevalStatus ieval_corpus_validate(const struct IevalCorpus *corpus, char **out);

// Builds a training index. A NULL `policy` selects the defaults.
enum IevalStatus ieval_index_build(const struct IevalCorpus *train,
                                   const struct IevalPolicy *policy,
                                   struct IevalIndex **out);

// The default normalization policy, for callers that want to tweak it.
struct IevalPolicy ieval_policy_default(void);

void ieval_index_free(struct IevalIndex *index);

// Partition file: span-JSON with per-item novelty labels.
enum IevalStatus ieval_partition_json(const struct IevalIndex *index,
                                      const struct IevalCorpus *corpus,
                                      char **out);

// Exact / partial / new counts and proportions as JSON.
enum IevalStatus ieval_partition_summary_json(const struct IevalIndex *index,
                                              const struct IevalCorpus *corpus,
                                              char **out);

// Scores `pred` against `gold` and writes the report as JSON.
//
// `index` may be NULL to skip per-novelty scores. `extra_criterion` may be
// NULL or "relaxed" (Strict and Boundaries are always reported).
enum IevalStatus ieval_score_json(const struct IevalCorpus *gold,
                                  const struct IevalCorpus *pred,
                                  const struct IevalIndex *index,
                                  const char *extra_criterion,
                                  bool macro_average,
                                  char **out);

// Dataset statistics and consistency attributes as JSON.
enum IevalStatus ieval_stats_json(const struct IevalIndex *index,
                                  const struct IevalCorpus *train,
                                  const struct IevalCorpus *eval,
                                  char **out);

// Retention baseline predictions. With `gold_mentions`, relations are
// predicted over the corpus's own mentions.
enum IevalStatus ieval_retention(const struct IevalIndex *index,
                                 const struct IevalCorpus *corpus,
                                 bool gold_mentions,
                                 struct IevalCorpus **out);

// Head/tail-swapped corpus for `relation`. `skipped`, when not NULL,
// receives the skip report as JSON.
enum IevalStatus ieval_swap(const struct IevalCorpus *corpus,
                            const char *relation,
                            bool require_same_etype,
                            struct IevalCorpus **out,
                            char **skipped);

// NER, RE and revRE scores of predictions on a swapped corpus, as JSON.
enum IevalStatus ieval_swap_eval_json(const struct IevalCorpus *swapped_gold,
                                      const struct IevalCorpus *pred,
                                      const char *relation,
                                      char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IEVAL_H */
