#pragma once

/**
 * Plan generation: a planner contract over relation-level steps, a
 * trainable count-based model, beam-search decoding of top-K plans, and
 * the planning loss (negative mean log-likelihood of the mined shortest
 * plans under the planner).
 *
 * A planner's step distribution ranges over every relation id plus a
 * terminal STOP symbol; a plan's probability is the product of its step
 * probabilities times the STOP probability after the final step, so the
 * distribution over plans of length <= max_len is a proper
 * subdistribution and every plan is scored the same way everywhere.
 */

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "kgr/graph.hpp"
#include "kgr/llm.hpp"
#include "kgr/mining.hpp"
#include "kgr/paths.hpp"

namespace kgr {

class PlannerModel {
public:
    virtual ~PlannerModel() = default;

    virtual std::size_t relation_count() const = 0;

    // log P(next | question, prefix). Entry r in [0, relation_count())
    // is relation r; the final entry (index relation_count()) is STOP.
    // exp of the entries sums to 1 within 1e-9.
    virtual std::vector<double> next_step_logprobs(const std::string& question,
                                                   const RelationPath& prefix) const = 0;
};

// Index of STOP in a step-logprob vector.
inline std::size_t stop_index(const PlannerModel& model) { return model.relation_count(); }

// Sum of step log-probabilities plus the terminal STOP log-probability.
double plan_log_prob(const PlannerModel& model, const std::string& question,
                     const RelationPath& plan);

struct BeamConfig {
    std::size_t beam_width = 10;
    std::size_t k = 3;        // plans returned; the paper setting
    std::size_t max_len = 4;

    void validate() const;    // throws ConfigError unless k <= beam_width, all positive
};

struct ScoredPlan {
    RelationPath plan;
    double log_prob;
};

// Top-k plans by log probability, ties broken lexicographically by
// relation-id sequence. With beam_width at least the candidate count
// this equals exhaustive scoring.
std::vector<ScoredPlan> generate_plans(const PlannerModel& model,
                                       const std::string& question,
                                       const BeamConfig& config);

// Drops plans that are strict prefixes of a higher-ranked plan. A strict
// prefix terminates at intermediate entities of the plan the model
// prefers, so its terminals are noise for count-based reasoners.
std::vector<ScoredPlan> drop_prefix_plans(std::vector<ScoredPlan> plans);

// -(1/|Z*|) * sum of plan log-probabilities; nonnegative. Throws
// PreconditionError when `mined` has no plans.
double planning_loss(const PlannerModel& model, const std::string& question,
                     const MinedPlans& mined);

struct CountPlannerConfig {
    double alpha = 0.1;       // add-alpha smoothing; keeps every plan finite-loss
    std::size_t max_len = 4;
};

// Count-based sequence model over (question word, plan prefix, next step)
// transitions with add-alpha smoothing. Backoff: word-conditioned counts,
// then prefix-only counts, then uniform.
class CountPlanner final : public PlannerModel {
public:
    std::size_t relation_count() const override { return relation_names_.size(); }

    std::vector<double> next_step_logprobs(const std::string& question,
                                           const RelationPath& prefix) const override;

    const CountPlannerConfig& config() const { return config_; }

private:
    friend CountPlanner fit_count_planner(
        std::span<const std::pair<std::string, RelationPath>> pairs,
        const Vocabulary& vocab, CountPlannerConfig config);
    friend void save_count_planner(const CountPlanner& planner, std::ostream& out);
    friend CountPlanner load_count_planner(std::istream& in, const Vocabulary& vocab);

    // Key: (feature word or "" for the prefix-only table,
    //        prefix as comma-joined relation ids, next symbol).
    using Key = std::tuple<std::string, std::string, std::uint32_t>;

    CountPlannerConfig config_;
    std::vector<std::string> relation_names_;
    std::map<Key, std::uint64_t> counts_;
};

// Throws ConfigError on an empty training set or non-positive alpha.
CountPlanner fit_count_planner(std::span<const std::pair<std::string, RelationPath>> pairs,
                               const Vocabulary& vocab, CountPlannerConfig config = {});

// Versioned line-based text dump; byte-stable across runs. Loading
// resolves relation names against the given vocabulary.
void save_count_planner(const CountPlanner& planner, std::ostream& out);
CountPlanner load_count_planner(std::istream& in, const Vocabulary& vocab);

// Prompts the generation client for k plan completions, parses each,
// drops unparseable ones and deduplicates preserving order.
std::vector<RelationPath> llm_generate_plans(GenerationClient& client,
                                             const Vocabulary& vocab,
                                             const std::string& question,
                                             std::size_t k);

}  // namespace kgr
