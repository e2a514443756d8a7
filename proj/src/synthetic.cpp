#include "kgr/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <unordered_set>

#include "kgr/errors.hpp"

namespace kgr {

namespace {

// Visits exactly config.triples distinct (subject, relation, object) id
// triples, deterministically for a given seed.
template <typename Visit>
void generate(const SyntheticGraphConfig& config, Visit&& visit) {
    if (config.entities == 0 || config.relations == 0)
        throw ConfigError("synthetic graph: entities and relations must be positive");
    const double capacity = static_cast<double>(config.entities) *
                            static_cast<double>(config.entities) *
                            static_cast<double>(config.relations);
    if (static_cast<double>(config.triples) > capacity)
        throw ConfigError("synthetic graph: more triples requested than distinct triples exist");

    // Inverse-CDF sampling keeps relation draws deterministic across
    // standard libraries.
    std::vector<double> cdf(config.relations);
    double total = 0.0;
    for (std::size_t k = 0; k < config.relations; ++k) {
        total += 1.0 / std::pow(static_cast<double>(k + 1), config.zipf_exponent);
        cdf[k] = total;
    }
    for (double& c : cdf) c /= total;

    std::mt19937_64 rng(config.seed);
    auto uniform01 = [&] {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };

    std::unordered_set<std::uint64_t> seen;
    seen.reserve(config.triples * 2);
    std::size_t produced = 0;
    std::size_t attempts = 0;
    const std::size_t max_attempts = 64 * config.triples + 1024;
    while (produced < config.triples) {
        if (++attempts > max_attempts)
            throw Error("synthetic graph: rejection sampling exceeded attempt budget");
        const auto s = static_cast<std::uint32_t>(rng() % config.entities);
        const auto o = static_cast<std::uint32_t>(rng() % config.entities);
        const auto r = static_cast<std::uint32_t>(
            std::lower_bound(cdf.begin(), cdf.end(), uniform01()) - cdf.begin());
        const std::uint64_t key =
            (static_cast<std::uint64_t>(s) * config.relations + r) * config.entities + o;
        if (!seen.insert(key).second) continue;
        visit(s, r, o);
        ++produced;
    }
}

std::string entity_name(std::uint32_t id) { return "e" + std::to_string(id); }
std::string relation_name(std::uint32_t id) { return "r" + std::to_string(id); }

}  // namespace

std::vector<std::array<std::string, 3>> synthetic_triples(const SyntheticGraphConfig& config) {
    std::vector<std::array<std::string, 3>> out;
    out.reserve(config.triples);
    generate(config, [&](std::uint32_t s, std::uint32_t r, std::uint32_t o) {
        out.push_back({entity_name(s), relation_name(r), entity_name(o)});
    });
    return out;
}

KnowledgeGraph synthetic_graph(const SyntheticGraphConfig& config) {
    GraphBuilder builder;
    generate(config, [&](std::uint32_t s, std::uint32_t r, std::uint32_t o) {
        builder.add(entity_name(s), relation_name(r), entity_name(o));
    });
    return builder.finish();
}

void write_synthetic_tsv(const SyntheticGraphConfig& config, std::ostream& out) {
    generate(config, [&](std::uint32_t s, std::uint32_t r, std::uint32_t o) {
        out << entity_name(s) << '\t' << relation_name(r) << '\t' << entity_name(o) << '\n';
    });
}

}  // namespace kgr
