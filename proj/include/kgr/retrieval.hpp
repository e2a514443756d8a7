#pragma once

/**
 * Constrained breadth-first grounding of relation-path plans.
 *
 * A plan z is grounded into every reasoning path that starts at one of
 * the topic entities and whose i-th hop follows relation z[i]. The
 * search queue is seeded with the topic entities (ascending by id) and
 * expands neighbors in ascending id order, so the result order is the
 * deterministic BFS discovery order. Cycles within a path are allowed:
 * path length is bounded by the plan length, so no visited set is kept.
 */

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kgr/graph.hpp"
#include "kgr/paths.hpp"

namespace kgr {

struct RetrievalResult {
    RelationPath plan;
    std::vector<ReasoningPath> paths;  // BFS discovery order, no duplicates
    bool truncated = false;            // true iff a cap cut results
    std::chrono::nanoseconds elapsed{0};
    std::uint64_t expanded_nodes = 0;  // queue pops
};

// All reasoning paths grounding `plan` from `topic_entities`, up to `cap`.
// An empty plan yields one zero-hop path per topic entity. Throws
// PreconditionError on empty topics and LookupError on unresolvable ids.
RetrievalResult retrieve_paths(const KnowledgeGraph& g,
                               std::span<const EntityId> topic_entities,
                               const RelationPath& plan,
                               std::optional<std::size_t> cap = std::nullopt);

// One result per plan, in plan order.
std::vector<RetrievalResult> retrieve_for_plans(const KnowledgeGraph& g,
                                                std::span<const EntityId> topic_entities,
                                                std::span<const RelationPath> plans,
                                                std::optional<std::size_t> cap = std::nullopt);

}  // namespace kgr
