#include <stdio.h>
#include <string.h>

#include "ieval.h"

#define CHECK(call)                                                     \
    do {                                                                \
        IevalStatus s_ = (call);                                        \
        if (s_ != IEVAL_STATUS_OK) {                                    \
            fprintf(stderr, "%s -> %d: %s\n", #call, (int)s_,           \
                    ieval_last_error() ? ieval_last_error() : "?");     \
            return 1;                                                   \
        }                                                               \
    } while (0)

static const char *TRAIN =
    "[{\"id\":\"T1\",\"tokens\":[\"John\",\"Smith\",\"lives\",\"in\",\"Paris\",\".\"],"
    "\"entities\":[{\"type\":\"PER\",\"start\":0,\"end\":2},{\"type\":\"LOC\",\"start\":4,\"end\":5}],"
    "\"relations\":[{\"type\":\"LiveIn\",\"head\":0,\"tail\":1}]}]";

int main(void) {
    IevalCorpus *train = NULL, *pred = NULL, *bad = NULL;
    IevalIndex *index = NULL;
    char *report = NULL;

    CHECK(ieval_corpus_from_json(TRAIN, &train));
    if (ieval_corpus_entity_count(train) != 2) return 2;

    IevalPolicy policy = ieval_policy_default();
    policy.case_sensitive = false;
    CHECK(ieval_index_build(train, &policy, &index));
    CHECK(ieval_retention(index, train, false, &pred));
    CHECK(ieval_score_json(train, pred, index, NULL, false, &report));
    if (strstr(report, "\"f1\": 1.0") == NULL) return 3;
    ieval_string_free(report);

    if (ieval_corpus_from_json("[{\"id\": 3}]", &bad) != IEVAL_STATUS_PARSE_ERROR) return 4;
    if (ieval_last_error() == NULL) return 5;

    ieval_corpus_free(pred);
    ieval_index_free(index);
    ieval_corpus_free(train);
    printf("ok %s\n", ieval_version());
    return 0;
}
