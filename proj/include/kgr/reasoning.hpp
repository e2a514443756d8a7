#pragma once

/**
 * Answer generation from retrieved reasoning paths.
 *
 * Three reasoners: every terminal entity scored by occurrence count
 * (all), the top-n of that ranking (vote, paper default n = 5), and a
 * prompted LLM. Answer texts are normalized (trim, lowercase, collapse
 * whitespace) before deduplication so free-text LLM answers and KG
 * entity names compare consistently.
 *
 * The reasoning objective follows the FiD factorization: each plan
 * contributes log P(answer | question, plan, graph) independently, so
 * the total is an exact sum over plans. The default scorer realizes the
 * per-plan probability as the smoothed relative frequency of the answer
 * among that plan's terminal entities.
 */

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgr/graph.hpp"
#include "kgr/llm.hpp"
#include "kgr/paths.hpp"
#include "kgr/retrieval.hpp"

namespace kgr {

enum class AnswerSource { all, vote, llm };

std::string_view to_string(AnswerSource source);

struct ScoredAnswer {
    std::string text;
    double score;
};

struct AnswerSet {
    AnswerSource source = AnswerSource::all;
    std::vector<ScoredAnswer> answers;  // scores non-increasing, texts distinct
};

// Distinct terminal entities of all paths, score = occurrence count,
// ordered by (count desc, entity id asc).
AnswerSet answers_all(const KnowledgeGraph& g, std::span<const RetrievalResult> results);

// Top-n of answers_all under the same ordering.
AnswerSet answers_vote(const KnowledgeGraph& g, std::span<const RetrievalResult> results,
                       std::size_t n = 5);

// Serialized path text, one line per path, results in order.
std::vector<std::string> reasoning_path_lines(const KnowledgeGraph& g,
                                              std::span<const RetrievalResult> results);

// Splits a completion into answers: lines, then commas, list markers
// ("-", "*", "1.", "2)") stripped, deduplicated after normalization.
std::vector<std::string> parse_answer_list(std::string_view completion);

AnswerSet llm_reason(GenerationClient& client, const std::string& question,
                     std::span<const std::string> path_lines);
AnswerSet llm_reason(GenerationClient& client, const KnowledgeGraph& g,
                     const std::string& question,
                     std::span<const RetrievalResult> results);

// Explanation prompt with the few-shot examples slot.
std::string explanation_prompt(const KnowledgeGraph& g, const std::string& question,
                               std::span<const RetrievalResult> results,
                               std::string_view examples_block);

class PathAnswerScorer {
public:
    virtual ~PathAnswerScorer() = default;

    // log P(answer | question, plan grounded by paths); finite for all
    // inputs.
    virtual double answer_logprob(const std::string& question, const RelationPath& plan,
                                  std::span<const ReasoningPath> paths,
                                  const std::string& answer) const = 0;
};

// Smoothed relative frequency of the answer among a plan's terminal
// entities: (count + alpha) / (paths + alpha * distinct terminals).
class FrequencyAnswerScorer final : public PathAnswerScorer {
public:
    explicit FrequencyAnswerScorer(const KnowledgeGraph& g, double alpha = 0.1)
        : graph_(g), alpha_(alpha) {}

    double answer_logprob(const std::string& question, const RelationPath& plan,
                          std::span<const ReasoningPath> paths,
                          const std::string& answer) const override;

private:
    const KnowledgeGraph& graph_;
    double alpha_;
};

// Sum over plans of the scorer's per-plan answer log-probability;
// additive over plan partitions by construction. Throws
// PreconditionError on an empty plan list.
double reasoning_loss(const PathAnswerScorer& scorer, const std::string& question,
                      const std::string& answer,
                      std::span<const RetrievalResult> plan_results);

// Final objective: reasoning log-likelihood minus the planning loss.
double combined_objective(double planning_loss_value, double reasoning_log_likelihood);

}  // namespace kgr
