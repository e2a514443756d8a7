#include "kgr/retrieval.hpp"

#include <algorithm>

#include "kgr/errors.hpp"

namespace kgr {

RetrievalResult retrieve_paths(const KnowledgeGraph& g,
                               std::span<const EntityId> topic_entities,
                               const RelationPath& plan,
                               std::optional<std::size_t> cap) {
    if (topic_entities.empty())
        throw PreconditionError("retrieve_paths: topic entity set is empty");
    for (EntityId e : topic_entities) g.check_entity(e);
    for (RelationId r : plan.relations) g.check_relation(r);

    const auto start = std::chrono::steady_clock::now();

    RetrievalResult result;
    result.plan = plan;

    // Seeds ascending and deduplicated; expansions are ascending because
    // neighbor spans are sorted, so discovery order is deterministic.
    std::vector<EntityId> seeds(topic_entities.begin(), topic_entities.end());
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

    const std::size_t hops = plan.length();
    std::vector<std::vector<EntityId>> queue;
    queue.reserve(seeds.size());
    for (EntityId e : seeds) queue.push_back({e});

    std::size_t head = 0;
    while (head < queue.size()) {
        std::vector<EntityId> current = std::move(queue[head]);
        ++head;
        ++result.expanded_nodes;

        const std::size_t depth = current.size() - 1;
        if (depth == hops) {
            if (cap && result.paths.size() >= *cap) {
                result.truncated = true;
                break;
            }
            ReasoningPath path;
            path.entities = std::move(current);
            path.relations = plan.relations;
            result.paths.push_back(std::move(path));
            continue;
        }

        const RelationId r = plan.relations[depth];
        for (EntityId t : g.neighbors(current.back(), r)) {
            std::vector<EntityId> next = current;
            next.push_back(t);
            queue.push_back(std::move(next));
        }
    }

    result.elapsed = std::chrono::steady_clock::now() - start;
    return result;
}

std::vector<RetrievalResult> retrieve_for_plans(const KnowledgeGraph& g,
                                                std::span<const EntityId> topic_entities,
                                                std::span<const RelationPath> plans,
                                                std::optional<std::size_t> cap) {
    std::vector<RetrievalResult> results;
    results.reserve(plans.size());
    for (const RelationPath& plan : plans)
        results.push_back(retrieve_paths(g, topic_entities, plan, cap));
    return results;
}

}  // namespace kgr
