#pragma once

/**
 * Shortest-path supervision mining.
 *
 * For a question's topic entities and gold answers, finds the minimal
 * directed hop distance d over all (topic, answer) pairs and collects
 * every distinct relation sequence realized by a length-d walk from a
 * topic to an answer. The result carries the uniform posterior weight
 * 1/|plans|. Topic and answer sets intersecting is the degenerate d = 0
 * case, whose single plan is the empty relation path.
 *
 * The search never enumerates entity walks: a multi-source BFS finds d,
 * then a depth-first sweep over relation choices advances whole entity
 * frontiers, so cost is bounded by the number of realizable relation
 * prefixes rather than walks.
 */

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kgr/graph.hpp"
#include "kgr/paths.hpp"

namespace kgr {

struct MinedPlans {
    std::vector<RelationPath> plans;  // distinct, lexicographic by relation ids
    std::size_t hop_count = 0;        // common length of all plans
    double posterior_weight = 0.0;    // 1 / |plans|
};

// Empty optional when no topic-to-answer connection exists within max_hops.
std::optional<MinedPlans> mine_shortest_relation_paths(
    const KnowledgeGraph& g,
    std::span<const EntityId> topic_entities,
    std::span<const EntityId> answer_entities,
    std::size_t max_hops);

// One (question, serialized plan) pair per mined plan; empty when mining
// finds nothing. Entity names that do not resolve raise LookupError.
std::vector<std::pair<std::string, std::string>> planning_targets(
    const KnowledgeGraph& g,
    const std::string& question,
    std::span<const std::string> topic_names,
    std::span<const std::string> answer_names,
    std::size_t max_hops);

}  // namespace kgr
