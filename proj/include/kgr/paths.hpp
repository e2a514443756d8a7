#pragma once

/**
 * Relation paths (plans) and reasoning paths, with their canonical text
 * forms:
 *
 *   plan:            <PATH> r1 <SEP> r2 <SEP> ... <SEP> rl </PATH>
 *   reasoning path:  e0 -> r1 -> e1 -> ... -> rl -> el
 *
 * The empty plan serializes as `<PATH> </PATH>`; a zero-hop reasoning
 * path is the bare entity name. Parsing is strict: unknown relation
 * names are rejected rather than skipped, since an ungrounded plan
 * retrieves nothing and silent repair would mask planner errors.
 * Round-trips are identities at the id level provided names contain no
 * whitespace (entity names may contain spaces but not " -> ").
 */

#include <string>
#include <string_view>
#include <vector>

#include "kgr/graph.hpp"

namespace kgr {

inline constexpr std::string_view kPlanStart = "<PATH>";
inline constexpr std::string_view kPlanSep = "<SEP>";
inline constexpr std::string_view kPlanEnd = "</PATH>";
inline constexpr std::string_view kPathArrow = " -> ";

// Ordered relation sequence; the abstract plan. May be empty.
struct RelationPath {
    std::vector<RelationId> relations;

    std::size_t length() const { return relations.size(); }
    bool empty() const { return relations.empty(); }

    friend auto operator<=>(const RelationPath&, const RelationPath&) = default;
};

// Entity-grounded instance of a relation path: l+1 entities, l relations,
// each hop an edge of the graph that produced it.
struct ReasoningPath {
    std::vector<EntityId> entities;
    std::vector<RelationId> relations;

    std::size_t length() const { return relations.size(); }
    EntityId terminal() const { return entities.back(); }

    friend auto operator<=>(const ReasoningPath&, const ReasoningPath&) = default;
};

std::string serialize_plan(const RelationPath& plan, const Vocabulary& vocab);
RelationPath parse_plan(std::string_view text, const Vocabulary& vocab);

std::string serialize_reasoning_path(const ReasoningPath& path, const Vocabulary& vocab);
ReasoningPath parse_reasoning_path(std::string_view text, const Vocabulary& vocab);

}  // namespace kgr
