#pragma once

/**
 * Seeded synthetic graph generation for benchmarks and fixtures.
 * Relations follow a Zipf distribution (exponent 0 = uniform); subjects
 * and objects are uniform. Exactly `triples` distinct triples are
 * produced, deterministically for a given seed.
 */

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kgr/graph.hpp"

namespace kgr {

struct SyntheticGraphConfig {
    std::size_t entities = 1000;
    std::size_t relations = 10;
    std::size_t triples = 5000;
    double zipf_exponent = 1.1;
    std::uint64_t seed = 0;
};

std::vector<std::array<std::string, 3>> synthetic_triples(const SyntheticGraphConfig& config);

KnowledgeGraph synthetic_graph(const SyntheticGraphConfig& config);

void write_synthetic_tsv(const SyntheticGraphConfig& config, std::ostream& out);

}  // namespace kgr
