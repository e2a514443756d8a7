#include <random>
#include <set>

#include "doctest.h"

#include "kgr/errors.hpp"
#include "kgr/mining.hpp"
#include "kgr/retrieval.hpp"
#include "support/oracles.hpp"

using namespace kgr;

namespace {

KnowledgeGraph example2_graph() {
    GraphBuilder builder;
    builder.add("Alice", "marry_to", "Bob");
    builder.add("Bob", "father_of", "Charlie");
    return builder.finish();
}

std::set<std::vector<RelationId>> plan_set(const MinedPlans& mined) {
    std::set<std::vector<RelationId>> out;
    for (const auto& plan : mined.plans) out.insert(plan.relations);
    return out;
}

}  // namespace

TEST_CASE("mines the worked example plan") {
    KnowledgeGraph g = example2_graph();
    auto alice = *g.vocab().entity_id("Alice");
    auto charlie = *g.vocab().entity_id("Charlie");

    auto mined = mine_shortest_relation_paths(g, std::vector<EntityId>{alice},
                                              std::vector<EntityId>{charlie}, 4);
    REQUIRE(mined.has_value());
    CHECK(mined->hop_count == 2);
    CHECK(mined->posterior_weight == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(mined->plans.size() == 1);
    CHECK(serialize_plan(mined->plans[0], g.vocab()) ==
          "<PATH> marry_to <SEP> father_of </PATH>");
}

TEST_CASE("topic intersecting answers is the zero-distance case") {
    KnowledgeGraph g = example2_graph();
    auto alice = *g.vocab().entity_id("Alice");
    auto mined = mine_shortest_relation_paths(g, std::vector<EntityId>{alice},
                                              std::vector<EntityId>{alice}, 4);
    REQUIRE(mined.has_value());
    CHECK(mined->hop_count == 0);
    REQUIRE(mined->plans.size() == 1);
    CHECK(mined->plans[0].empty());
}

TEST_CASE("diamond graph yields two equally weighted plans in lexicographic order") {
    GraphBuilder builder;
    builder.add("Alice", "r1", "X");
    builder.add("Alice", "r2", "Y");
    builder.add("X", "r3", "Z");
    builder.add("Y", "r4", "Z");
    KnowledgeGraph g = builder.finish();
    auto alice = *g.vocab().entity_id("Alice");
    auto z = *g.vocab().entity_id("Z");

    auto mined = mine_shortest_relation_paths(g, std::vector<EntityId>{alice},
                                              std::vector<EntityId>{z}, 4);
    REQUIRE(mined.has_value());
    CHECK(mined->hop_count == 2);
    REQUIRE(mined->plans.size() == 2);
    CHECK(mined->posterior_weight == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mined->posterior_weight * static_cast<double>(mined->plans.size()) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(serialize_plan(mined->plans[0], g.vocab()) == "<PATH> r1 <SEP> r3 </PATH>");
    CHECK(serialize_plan(mined->plans[1], g.vocab()) == "<PATH> r2 <SEP> r4 </PATH>");
}

TEST_CASE("disconnected pairs mine nothing") {
    GraphBuilder builder;
    builder.add("a", "r", "b");
    builder.add("c", "r", "d");
    KnowledgeGraph g = builder.finish();
    auto a = *g.vocab().entity_id("a");
    auto c = *g.vocab().entity_id("c");

    CHECK_FALSE(mine_shortest_relation_paths(g, std::vector<EntityId>{a},
                                             std::vector<EntityId>{c}, 4)
                    .has_value());
}

TEST_CASE("max_hops bounds the search") {
    GraphBuilder builder;
    builder.add("n0", "r", "n1");
    builder.add("n1", "r", "n2");
    builder.add("n2", "r", "n3");
    builder.add("n3", "r", "n4");
    builder.add("n4", "r", "n5");
    KnowledgeGraph g = builder.finish();
    auto n0 = *g.vocab().entity_id("n0");
    auto n5 = *g.vocab().entity_id("n5");

    CHECK_FALSE(mine_shortest_relation_paths(g, std::vector<EntityId>{n0},
                                             std::vector<EntityId>{n5}, 4)
                    .has_value());
    auto mined = mine_shortest_relation_paths(g, std::vector<EntityId>{n0},
                                              std::vector<EntityId>{n5}, 5);
    REQUIRE(mined.has_value());
    CHECK(mined->hop_count == 5);
}

TEST_CASE("validates ids") {
    KnowledgeGraph g = example2_graph();
    CHECK_THROWS_AS((void)mine_shortest_relation_paths(g, std::vector<EntityId>{99},
                                                       std::vector<EntityId>{0}, 4),
                    LookupError);
    CHECK_THROWS_AS((void)mine_shortest_relation_paths(g, std::vector<EntityId>{},
                                                       std::vector<EntityId>{0}, 4),
                    PreconditionError);
}

TEST_CASE("matches the exhaustive oracle and stays faithful on random graphs") {
    std::mt19937_64 rng(41);
    for (int gi = 0; gi < 30; ++gi) {
        KnowledgeGraph g = testing::random_graph(2000 + gi);
        auto topics = testing::random_entities(g, rng, 1 + rng() % 3);
        auto answers = testing::random_entities(g, rng, 1 + rng() % 3);

        auto mined = mine_shortest_relation_paths(g, topics, answers, 4);
        auto oracle = testing::oracle_shortest_sequences(g, topics, answers, 4);

        REQUIRE(mined.has_value() == oracle.has_value());
        if (!mined) continue;

        CHECK(mined->hop_count == oracle->first);
        REQUIRE(plan_set(*mined) == oracle->second);
        CHECK(mined->posterior_weight ==
              doctest::Approx(1.0 / static_cast<double>(mined->plans.size())).epsilon(1e-12));

        // Faithfulness: every mined plan grounds to at least one answer.
        std::set<EntityId> answer_set(answers.begin(), answers.end());
        for (const auto& plan : mined->plans) {
            auto result = retrieve_paths(g, topics, plan);
            bool covers = false;
            for (const auto& path : result.paths)
                if (answer_set.count(path.terminal())) covers = true;
            REQUIRE(covers);
        }

        // Minimality: no shorter connecting walk exists.
        if (mined->hop_count > 0) {
            auto shorter = testing::oracle_shortest_sequences(g, topics, answers,
                                                              mined->hop_count - 1);
            REQUIRE_FALSE(shorter.has_value());
        }
    }
}

TEST_CASE("planning_targets serializes mined plans per question") {
    KnowledgeGraph g = example2_graph();
    std::vector<std::string> topics{"Alice"};
    std::vector<std::string> answers{"Charlie"};

    auto targets = planning_targets(g, "Who is the child of Alice", topics, answers, 4);
    REQUIRE(targets.size() == 1);
    CHECK(targets[0].first == "Who is the child of Alice");
    CHECK(targets[0].second == "<PATH> marry_to <SEP> father_of </PATH>");

    SUBCASE("unknown entity raises LookupError") {
        std::vector<std::string> bad{"Nobody"};
        CHECK_THROWS_AS((void)planning_targets(g, "q", bad, answers, 4), LookupError);
    }
    SUBCASE("disconnected example yields no targets") {
        std::vector<std::string> t{"Charlie"};
        std::vector<std::string> a{"Alice"};
        CHECK(planning_targets(g, "q", t, a, 4).empty());
    }
    SUBCASE("diamond yields two pairs in deterministic order") {
        GraphBuilder builder;
        builder.add("Alice", "r1", "X");
        builder.add("Alice", "r2", "Y");
        builder.add("X", "r3", "Z");
        builder.add("Y", "r4", "Z");
        KnowledgeGraph dg = builder.finish();
        std::vector<std::string> t{"Alice"};
        std::vector<std::string> a{"Z"};
        auto pairs = planning_targets(dg, "q", t, a, 4);
        REQUIRE(pairs.size() == 2);
        CHECK(pairs[0].second == "<PATH> r1 <SEP> r3 </PATH>");
        CHECK(pairs[1].second == "<PATH> r2 <SEP> r4 </PATH>");
    }
}
