#include <cmath>

#include "doctest.h"
#include "json.hpp"

#include "kgr/errors.hpp"
#include "kgr/eval.hpp"

using namespace kgr;

namespace {

QAExample gold(const std::string& id, std::vector<std::string> answers) {
    return {id, "question " + id, {"topic"}, std::move(answers)};
}

using Predictions = std::map<std::string, std::vector<std::string>>;

}  // namespace

TEST_CASE("hits_at_1 checks the literal first prediction") {
    std::vector<std::string> gold_answers{"Charlie", "Dee"};
    CHECK(hits_at_1(std::vector<std::string>{"charlie", "x"}, gold_answers) == 1);
    CHECK(hits_at_1(std::vector<std::string>{"x", "Charlie"}, gold_answers) == 0);
    CHECK(hits_at_1(std::vector<std::string>{}, gold_answers) == 0);
    CHECK(hits_at_1(std::vector<std::string>{"  CHARLIE  "}, gold_answers) == 1);
}

TEST_CASE("f1_set matches the worked fixtures") {
    SUBCASE("perfect prediction") {
        std::vector<std::string> p{"a", "b"};
        std::vector<std::string> g{"b", "a"};
        auto s = f1_set(p, g);
        CHECK(s.precision == 1.0);
        CHECK(s.recall == 1.0);
        CHECK(s.f1 == 1.0);
    }
    SUBCASE("partial overlap is 4/7") {
        std::vector<std::string> p{"a", "b", "c"};
        std::vector<std::string> g{"a", "b", "d", "e"};
        auto s = f1_set(p, g);
        CHECK(s.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(s.recall == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(s.f1 == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
    }
    SUBCASE("empty prediction") {
        std::vector<std::string> p;
        std::vector<std::string> g{"a"};
        auto s = f1_set(p, g);
        CHECK(s.precision == 0.0);
        CHECK(s.recall == 0.0);
        CHECK(s.f1 == 0.0);
    }
    SUBCASE("empty gold is a scoring error") {
        std::vector<std::string> p{"a"};
        std::vector<std::string> g;
        CHECK_THROWS_AS((void)f1_set(p, g), PreconditionError);
    }
    SUBCASE("duplicates and order do not matter") {
        std::vector<std::string> p{"a", "A ", "b", "a"};
        std::vector<std::string> g{"b", "a", "a"};
        auto s = f1_set(p, g);
        CHECK(s.f1 == 1.0);
    }
}

TEST_CASE("evaluate_run macro averages and batch hits") {
    std::vector<QAExample> examples{gold("q1", {"a"}), gold("q2", {"b"}), gold("q3", {"c"}),
                                    gold("q4", {"d"})};
    Predictions predictions{{"q1", {"a"}}, {"q2", {"b"}}, {"q3", {"c"}}, {"q4", {"x"}}};

    auto report = evaluate_run(predictions, examples);
    CHECK(report.hits_at_1 == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(report.per_question.size() == 4);

    SUBCASE("single perfect question scores all ones") {
        std::vector<QAExample> one{gold("q1", {"a"})};
        Predictions p{{"q1", {"a"}}};
        auto r = evaluate_run(p, one);
        CHECK(r.hits_at_1 == 1.0);
        CHECK(r.macro_precision == 1.0);
        CHECK(r.macro_recall == 1.0);
        CHECK(r.macro_f1 == 1.0);
    }
    SUBCASE("missing predictions count as empty") {
        Predictions partial{{"q1", {"a"}}};
        auto r = evaluate_run(partial, examples);
        CHECK(r.hits_at_1 == doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("unknown prediction ids are rejected with offenders listed") {
        Predictions bad{{"q1", {"a"}}, {"zz", {"a"}}, {"yy", {"a"}}};
        CHECK_THROWS_WITH_AS((void)evaluate_run(bad, examples),
                             doctest::Contains("yy, zz"), Error);
    }
}

TEST_CASE("macro f1 lies between the per-question extremes") {
    std::vector<QAExample> examples{gold("q1", {"a", "b"}), gold("q2", {"c"}),
                                    gold("q3", {"d"})};
    Predictions predictions{{"q1", {"a"}}, {"q2", {"c"}}, {"q3", {"x"}}};
    auto report = evaluate_run(predictions, examples);
    double lo = 1.0, hi = 0.0;
    for (const auto& q : report.per_question) {
        lo = std::min(lo, q.f1);
        hi = std::max(hi, q.f1);
    }
    CHECK(report.macro_f1 >= lo);
    CHECK(report.macro_f1 <= hi);
}

TEST_CASE("union of two disjoint runs equals the size-weighted mean") {
    std::vector<QAExample> run_a{gold("a1", {"x"}), gold("a2", {"y"})};
    std::vector<QAExample> run_b{gold("b1", {"z"}), gold("b2", {"w"}), gold("b3", {"v"})};
    Predictions pred_a{{"a1", {"x"}}, {"a2", {"nope"}}};
    Predictions pred_b{{"b1", {"z"}}, {"b2", {"w"}}, {"b3", {"nope"}}};

    std::vector<QAExample> all(run_a);
    all.insert(all.end(), run_b.begin(), run_b.end());
    Predictions pred_all(pred_a);
    pred_all.insert(pred_b.begin(), pred_b.end());

    auto ra = evaluate_run(pred_a, run_a);
    auto rb = evaluate_run(pred_b, run_b);
    auto rall = evaluate_run(pred_all, all);

    const double na = 2.0, nb = 3.0;
    CHECK(rall.macro_f1 ==
          doctest::Approx((ra.macro_f1 * na + rb.macro_f1 * nb) / (na + nb)).epsilon(1e-12));
    CHECK(rall.hits_at_1 ==
          doctest::Approx((ra.hits_at_1 * na + rb.hits_at_1 * nb) / (na + nb)).epsilon(1e-12));
}

TEST_CASE("bucket labels partition counts and hops as in the breakdown tables") {
    CHECK(answer_count_bucket(1) == "#Ans = 1");
    CHECK(answer_count_bucket(2) == "2 <= #Ans <= 4");
    CHECK(answer_count_bucket(4) == "2 <= #Ans <= 4");
    CHECK(answer_count_bucket(5) == "5 <= #Ans <= 9");
    CHECK(answer_count_bucket(9) == "5 <= #Ans <= 9");
    CHECK(answer_count_bucket(10) == "#Ans >= 10");
    CHECK(answer_count_bucket(42) == "#Ans >= 10");
    CHECK(hop_bucket(1) == "1 hop");
    CHECK(hop_bucket(2) == "2 hop");
    CHECK(hop_bucket(3) == ">= 3 hop");
    CHECK(hop_bucket(7) == ">= 3 hop");
}

TEST_CASE("crafted 12-question fixture lands in the right buckets") {
    auto answers_of_size = [](std::size_t n) {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back("ans" + std::to_string(i));
        return out;
    };
    std::vector<QAExample> examples;
    std::map<std::string, int> hops;
    Predictions predictions;
    // Answer-count buckets: sizes 1,1,1,2,4,4,5,9,9,10,12,30.
    const std::vector<std::size_t> sizes{1, 1, 1, 2, 4, 4, 5, 9, 9, 10, 12, 30};
    // Hop labels: 1,1,1,1,2,2,2,2,3,4,5,9.
    const std::vector<int> hop_values{1, 1, 1, 1, 2, 2, 2, 2, 3, 4, 5, 9};
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        std::string id = "q" + std::to_string(i);
        examples.push_back(gold(id, answers_of_size(sizes[i])));
        hops[id] = hop_values[i];
        predictions[id] = {"ans0"};
    }

    auto report = evaluate_run(predictions, examples, &hops);

    REQUIRE(report.answer_buckets.size() == 4);
    CHECK(report.answer_buckets.at("#Ans = 1").count == 3);
    CHECK(report.answer_buckets.at("2 <= #Ans <= 4").count == 3);
    CHECK(report.answer_buckets.at("5 <= #Ans <= 9").count == 3);
    CHECK(report.answer_buckets.at("#Ans >= 10").count == 3);

    REQUIRE(report.hop_buckets.size() == 3);
    CHECK(report.hop_buckets.at("1 hop").count == 4);
    CHECK(report.hop_buckets.at("2 hop").count == 4);
    CHECK(report.hop_buckets.at(">= 3 hop").count == 4);

    CHECK(report.hits_at_1 == 1.0);
    CHECK(report.answer_buckets.at("#Ans = 1").f1 == 1.0);

    SUBCASE("report json carries the breakdowns") {
        auto parsed = nlohmann::json::parse(report_json(report));
        CHECK(parsed.at("breakdowns").at("answers").size() == 4);
        CHECK(parsed.at("breakdowns").at("hops").size() == 3);
        CHECK(parsed.at("hits_at_1") == 1.0);
    }
    SUBCASE("table rendering includes every bucket row") {
        auto table = report_table(report);
        CHECK(table.find("#Ans = 1") != std::string::npos);
        CHECK(table.find(">= 3 hop") != std::string::npos);
    }
}
