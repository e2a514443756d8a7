#include "kgr/mining.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

#include "kgr/errors.hpp"

namespace kgr {

namespace {

constexpr std::uint32_t kUnvisited = UINT32_MAX;

std::vector<EntityId> sorted_unique(std::span<const EntityId> ids) {
    std::vector<EntityId> out(ids.begin(), ids.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool intersects(const std::vector<EntityId>& sorted, const std::vector<bool>& member) {
    for (EntityId e : sorted)
        if (member[e]) return true;
    return false;
}

// Minimal BFS level (<= max_hops) at which an answer entity appears,
// starting from all topics at level 0.
std::optional<std::size_t> min_distance(const KnowledgeGraph& g,
                                        const std::vector<EntityId>& topics,
                                        const std::vector<bool>& is_answer,
                                        std::size_t max_hops) {
    std::vector<std::uint32_t> dist(g.vocab().entity_count(), kUnvisited);
    std::vector<EntityId> frontier;
    for (EntityId e : topics) {
        dist[e] = 0;
        frontier.push_back(e);
    }
    if (intersects(topics, is_answer)) return 0;

    for (std::size_t level = 1; level <= max_hops && !frontier.empty(); ++level) {
        std::vector<EntityId> next;
        bool hit = false;
        for (EntityId e : frontier) {
            auto edges = g.out_edges(e);
            for (EntityId t : edges.objects) {
                if (dist[t] != kUnvisited) continue;
                dist[t] = static_cast<std::uint32_t>(level);
                next.push_back(t);
                if (is_answer[t]) hit = true;
            }
        }
        if (hit) return level;
        frontier = std::move(next);
    }
    return std::nullopt;
}

// Depth-first sweep over relation choices. `frontier` holds every entity
// reachable from the topics via the current relation prefix; a sequence
// is kept when its final frontier contains an answer. Recursing over
// relations in ascending id order yields lexicographic plan order.
void collect_sequences(const KnowledgeGraph& g,
                       const std::vector<EntityId>& frontier,
                       const std::vector<bool>& is_answer,
                       std::size_t remaining,
                       std::vector<RelationId>& prefix,
                       std::vector<RelationPath>& out) {
    if (remaining == 0) {
        if (intersects(frontier, is_answer)) out.push_back(RelationPath{prefix});
        return;
    }
    std::map<RelationId, std::vector<EntityId>> next_by_relation;
    for (EntityId e : frontier) {
        auto edges = g.out_edges(e);
        for (std::size_t i = 0; i < edges.relations.size(); ++i)
            next_by_relation[edges.relations[i]].push_back(edges.objects[i]);
    }
    for (auto& [r, next] : next_by_relation) {
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        prefix.push_back(r);
        collect_sequences(g, next, is_answer, remaining - 1, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

std::optional<MinedPlans> mine_shortest_relation_paths(
    const KnowledgeGraph& g,
    std::span<const EntityId> topic_entities,
    std::span<const EntityId> answer_entities,
    std::size_t max_hops) {
    if (topic_entities.empty())
        throw PreconditionError("mining: topic entity set is empty");
    for (EntityId e : topic_entities) g.check_entity(e);
    for (EntityId e : answer_entities) g.check_entity(e);
    if (answer_entities.empty()) return std::nullopt;

    auto topics = sorted_unique(topic_entities);
    std::vector<bool> is_answer(g.vocab().entity_count(), false);
    for (EntityId e : answer_entities) is_answer[e] = true;

    auto d = min_distance(g, topics, is_answer, max_hops);
    if (!d) return std::nullopt;

    MinedPlans mined;
    mined.hop_count = *d;
    if (*d == 0) {
        mined.plans.push_back(RelationPath{});
    } else {
        std::vector<RelationId> prefix;
        collect_sequences(g, topics, is_answer, *d, prefix, mined.plans);
    }
    mined.posterior_weight = 1.0 / static_cast<double>(mined.plans.size());
    return mined;
}

std::vector<std::pair<std::string, std::string>> planning_targets(
    const KnowledgeGraph& g,
    const std::string& question,
    std::span<const std::string> topic_names,
    std::span<const std::string> answer_names,
    std::size_t max_hops) {
    std::vector<EntityId> topics;
    for (const auto& name : topic_names) {
        auto id = g.vocab().entity_id(name);
        if (!id) throw LookupError("unknown topic entity '" + name + "'");
        topics.push_back(*id);
    }
    std::vector<EntityId> answers;
    for (const auto& name : answer_names) {
        auto id = g.vocab().entity_id(name);
        if (!id) throw LookupError("unknown answer entity '" + name + "'");
        answers.push_back(*id);
    }

    std::vector<std::pair<std::string, std::string>> targets;
    auto mined = mine_shortest_relation_paths(g, topics, answers, max_hops);
    if (!mined) return targets;
    targets.reserve(mined->plans.size());
    for (const RelationPath& plan : mined->plans)
        targets.emplace_back(question, serialize_plan(plan, g.vocab()));
    return targets;
}

}  // namespace kgr
