#pragma once

/**
 * Hits@1 and macro F1 scoring of predicted answer sets against gold
 * answers, with per-hop and per-answer-count breakdown buckets:
 * hops {1, 2, >= 3} and answer counts {1, 2-4, 5-9, >= 10}.
 *
 * All comparisons happen on normalized answers (trim, lowercase,
 * collapse whitespace), shared with the reasoning module, so duplicate
 * predictions and gold order never affect scores.
 */

#include <map>
#include <span>
#include <string>
#include <vector>

#include "kgr/datasets.hpp"

namespace kgr {

// 1 iff the first predicted answer is in the gold set; empty -> 0.
int hits_at_1(std::span<const std::string> predicted_ordered,
              std::span<const std::string> gold);

struct F1Score {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Set precision/recall/F1 after normalization. Empty prediction scores
// (0, 0, 0); an empty gold set is a scoring error.
F1Score f1_set(std::span<const std::string> predicted, std::span<const std::string> gold);

struct QuestionScore {
    std::string id;
    bool hit = false;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct BucketMetrics {
    std::size_t count = 0;
    double hits_at_1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct EvalReport {
    double hits_at_1 = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    std::vector<QuestionScore> per_question;      // gold order
    std::map<std::string, BucketMetrics> answer_buckets;
    std::map<std::string, BucketMetrics> hop_buckets;  // empty without labels
};

// Bucket labels, exposed for tests and table rendering.
std::string answer_count_bucket(std::size_t gold_answers);
std::string hop_bucket(int hops);

// Macro averages over all gold examples; questions without a prediction
// count as empty predictions. Prediction ids unknown to `gold` raise an
// Error listing every offender.
EvalReport evaluate_run(
    const std::map<std::string, std::vector<std::string>>& predictions,
    std::span<const QAExample> gold,
    const std::map<std::string, int>* hop_labels = nullptr);

std::string report_json(const EvalReport& report);   // machine-readable
std::string report_table(const EvalReport& report);  // aligned for terminals

}  // namespace kgr
