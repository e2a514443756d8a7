#include <random>
#include <sstream>

#include "doctest.h"

#include "kgr/errors.hpp"
#include "kgr/graph.hpp"
#include "support/oracles.hpp"

using namespace kgr;

namespace {

KnowledgeGraph example2_graph() {
    GraphBuilder builder;
    builder.add("Alice", "marry_to", "Bob");
    builder.add("Bob", "father_of", "Charlie");
    return builder.finish();
}

// Canonical name-level triple set, for comparing graphs with unequal ids.
std::set<std::array<std::string, 3>> name_triples(const KnowledgeGraph& g) {
    std::set<std::array<std::string, 3>> out;
    for (std::size_t i = 0; i < g.triple_count(); ++i) {
        Triple t = g.triple(i);
        out.insert({g.vocab().entity_name(t.subject), g.vocab().relation_name(t.relation),
                    g.vocab().entity_name(t.object)});
    }
    return out;
}

}  // namespace

TEST_CASE("example graph interns entities and collapses duplicates") {
    GraphBuilder builder;
    builder.add("Alice", "marry_to", "Bob");
    builder.add("Bob", "father_of", "Charlie");
    builder.add("Alice", "marry_to", "Bob");  // duplicate stored once
    KnowledgeGraph g = builder.finish();

    auto stats = g.stats();
    CHECK(stats.entities == 3);
    CHECK(stats.relations == 2);
    CHECK(stats.triples == 2);

    auto alice = *g.vocab().entity_id("Alice");
    auto marry_to = *g.vocab().relation_id("marry_to");
    auto bob = *g.vocab().entity_id("Bob");
    auto ns = g.neighbors(alice, marry_to);
    REQUIRE(ns.size() == 1);
    CHECK(ns[0] == bob);
}

TEST_CASE("empty input yields an empty graph") {
    std::istringstream empty;
    KnowledgeGraph g = build_graph_from_tsv(empty);
    CHECK(g.stats() == GraphStats{0, 0, 0});
}

TEST_CASE("vocabulary interning is a dense bijection") {
    Vocabulary vocab;
    std::mt19937_64 rng(7);
    std::vector<std::string> names;
    for (int i = 0; i < 200; ++i) names.push_back("entity_" + std::to_string(rng() % 120));
    for (const auto& name : names) vocab.intern_entity(name);

    std::set<std::string> distinct(names.begin(), names.end());
    CHECK(vocab.entity_count() == distinct.size());
    for (const auto& name : distinct) {
        auto id = vocab.entity_id(name);
        REQUIRE(id.has_value());
        CHECK(vocab.entity_name(*id) == name);
        CHECK(*id < vocab.entity_count());
    }
    CHECK_FALSE(vocab.entity_id("never_seen").has_value());
    CHECK_THROWS_AS((void)vocab.entity_name(static_cast<EntityId>(vocab.entity_count())),
                    LookupError);
}

TEST_CASE("tsv parsing reports line numbers and skips comments") {
    SUBCASE("wrong field count") {
        std::istringstream in("a\tr\tb\na\tr\n");
        GraphBuilder builder;
        CHECK_THROWS_WITH_AS(read_triples_tsv(in, builder),
                             doctest::Contains("line 2"), ParseError);
    }
    SUBCASE("too many fields") {
        std::istringstream in("a\tr\tb\tc\n");
        GraphBuilder builder;
        CHECK_THROWS_AS(read_triples_tsv(in, builder), ParseError);
    }
    SUBCASE("empty field") {
        std::istringstream in("a\t\tb\n");
        GraphBuilder builder;
        CHECK_THROWS_AS(read_triples_tsv(in, builder), ParseError);
    }
    SUBCASE("comments and CRLF") {
        std::istringstream in("# header comment\r\nAlice\tmarry_to\tBob\r\n");
        KnowledgeGraph g = build_graph_from_tsv(in);
        CHECK(g.stats().triples == 1);
        CHECK(g.vocab().entity_id("Bob").has_value());
    }
}

TEST_CASE("neighbors matches the worked example") {
    KnowledgeGraph g = example2_graph();
    auto alice = *g.vocab().entity_id("Alice");
    auto charlie = *g.vocab().entity_id("Charlie");
    auto marry_to = *g.vocab().relation_id("marry_to");

    auto ns = g.neighbors(alice, marry_to);
    REQUIRE(ns.size() == 1);
    CHECK(g.vocab().entity_name(ns[0]) == "Bob");
    CHECK(g.neighbors(charlie, marry_to).empty());

    CHECK_THROWS_AS((void)g.neighbors(99, marry_to), LookupError);
    CHECK_THROWS_AS((void)g.neighbors(alice, 99), LookupError);
}

TEST_CASE("neighbors equals a linear scan of the triple list") {
    std::mt19937_64 rng(2024);
    KnowledgeGraph g = testing::random_graph(11);
    for (int q = 0; q < 1000; ++q) {
        auto e = static_cast<EntityId>(rng() % g.vocab().entity_count());
        auto r = static_cast<RelationId>(rng() % g.vocab().relation_count());
        auto fast = g.neighbors(e, r);
        auto slow = testing::scan_neighbors(g, e, r);
        REQUIRE(std::vector<EntityId>(fast.begin(), fast.end()) == slow);
    }
}

TEST_CASE("adjacency lists are strictly ascending and relation counts sum") {
    KnowledgeGraph g = testing::random_graph(12);
    std::uint64_t by_relation = 0;
    for (std::size_t r = 0; r < g.vocab().relation_count(); ++r)
        by_relation += g.relation_triple_count(static_cast<RelationId>(r));
    CHECK(by_relation == g.triple_count());

    for (std::size_t e = 0; e < g.vocab().entity_count(); ++e) {
        for (std::size_t r = 0; r < g.vocab().relation_count(); ++r) {
            auto ns = g.neighbors(static_cast<EntityId>(e), static_cast<RelationId>(r));
            for (std::size_t i = 1; i < ns.size(); ++i) REQUIRE(ns[i - 1] < ns[i]);
        }
    }
}

TEST_CASE("triple conservation through tsv round-trip") {
    KnowledgeGraph g = testing::random_graph(13);
    std::ostringstream tsv;
    write_triples_tsv(g, tsv);
    std::istringstream in(tsv.str());
    KnowledgeGraph rebuilt = build_graph_from_tsv(in);

    CHECK(rebuilt.stats() == g.stats());
    CHECK(name_triples(rebuilt) == name_triples(g));
}

TEST_CASE("snapshot round-trip preserves ids, stats and adjacency") {
    KnowledgeGraph g = testing::random_graph(14);
    std::ostringstream out(std::ios::binary);
    save_graph(g, out);
    std::istringstream in(out.str(), std::ios::binary);
    KnowledgeGraph loaded = load_graph(in);

    CHECK(loaded.stats() == g.stats());
    for (std::size_t i = 0; i < g.vocab().entity_count(); ++i)
        CHECK(loaded.vocab().entity_name(static_cast<EntityId>(i)) ==
              g.vocab().entity_name(static_cast<EntityId>(i)));
    for (std::size_t i = 0; i < g.triple_count(); ++i) CHECK(loaded.triple(i) == g.triple(i));

    SUBCASE("corrupt snapshot is rejected") {
        std::istringstream bad("NOPE", std::ios::binary);
        CHECK_THROWS_AS((void)load_graph(bad), ParseError);
    }
}

TEST_CASE("inverse augmentation adds reversed edges") {
    GraphBuilder builder(/*add_inverse=*/true);
    builder.add("Alice", "marry_to", "Bob");
    KnowledgeGraph g = builder.finish();

    CHECK(g.stats().triples == 2);
    auto bob = *g.vocab().entity_id("Bob");
    auto inv = g.vocab().relation_id("marry_to_inv");
    REQUIRE(inv.has_value());
    auto ns = g.neighbors(bob, *inv);
    REQUIRE(ns.size() == 1);
    CHECK(g.vocab().entity_name(ns[0]) == "Alice");
}
