#include "kgr/eval.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"

#include "kgr/errors.hpp"
#include "kgr/text.hpp"

namespace kgr {

namespace {

std::set<std::string> normalized_set(std::span<const std::string> items) {
    std::set<std::string> out;
    for (const std::string& item : items) {
        std::string n = normalize_answer(item);
        if (!n.empty()) out.insert(std::move(n));
    }
    return out;
}

BucketMetrics finalize(const std::vector<const QuestionScore*>& members) {
    BucketMetrics m;
    m.count = members.size();
    if (members.empty()) return m;
    for (const QuestionScore* q : members) {
        m.hits_at_1 += q->hit ? 1.0 : 0.0;
        m.precision += q->precision;
        m.recall += q->recall;
        m.f1 += q->f1;
    }
    const auto n = static_cast<double>(members.size());
    m.hits_at_1 /= n;
    m.precision /= n;
    m.recall /= n;
    m.f1 /= n;
    return m;
}

nlohmann::json bucket_json(const std::map<std::string, BucketMetrics>& buckets) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [label, m] : buckets) {
        out[label] = {{"count", m.count},
                      {"hits_at_1", m.hits_at_1},
                      {"precision", m.precision},
                      {"recall", m.recall},
                      {"f1", m.f1}};
    }
    return out;
}

}  // namespace

int hits_at_1(std::span<const std::string> predicted_ordered,
              std::span<const std::string> gold) {
    if (predicted_ordered.empty()) return 0;
    auto gold_set = normalized_set(gold);
    return gold_set.count(normalize_answer(predicted_ordered.front())) ? 1 : 0;
}

F1Score f1_set(std::span<const std::string> predicted, std::span<const std::string> gold) {
    auto gold_set = normalized_set(gold);
    if (gold_set.empty())
        throw PreconditionError("f1_set: gold answer set is empty");
    auto pred_set = normalized_set(predicted);

    F1Score score;
    if (pred_set.empty()) return score;

    std::size_t overlap = 0;
    for (const std::string& p : pred_set) overlap += gold_set.count(p);

    score.precision = static_cast<double>(overlap) / static_cast<double>(pred_set.size());
    score.recall = static_cast<double>(overlap) / static_cast<double>(gold_set.size());
    if (score.precision + score.recall > 0.0)
        score.f1 = 2.0 * score.precision * score.recall / (score.precision + score.recall);
    return score;
}

std::string answer_count_bucket(std::size_t gold_answers) {
    if (gold_answers <= 1) return "#Ans = 1";
    if (gold_answers <= 4) return "2 <= #Ans <= 4";
    if (gold_answers <= 9) return "5 <= #Ans <= 9";
    return "#Ans >= 10";
}

std::string hop_bucket(int hops) {
    if (hops <= 1) return "1 hop";
    if (hops == 2) return "2 hop";
    return ">= 3 hop";
}

EvalReport evaluate_run(const std::map<std::string, std::vector<std::string>>& predictions,
                        std::span<const QAExample> gold,
                        const std::map<std::string, int>* hop_labels) {
    std::set<std::string> gold_ids;
    for (const QAExample& example : gold) gold_ids.insert(example.id);
    std::string offenders;
    for (const auto& [id, answers] : predictions) {
        if (gold_ids.count(id)) continue;
        if (!offenders.empty()) offenders += ", ";
        offenders += id;
    }
    if (!offenders.empty())
        throw Error("evaluate_run: prediction ids not present in gold: " + offenders);

    EvalReport report;
    static const std::vector<std::string> kEmpty;
    for (const QAExample& example : gold) {
        auto it = predictions.find(example.id);
        const std::vector<std::string>& predicted =
            it == predictions.end() ? kEmpty : it->second;

        QuestionScore q;
        q.id = example.id;
        q.hit = hits_at_1(predicted, example.answers) == 1;
        F1Score f1 = f1_set(predicted, example.answers);
        q.precision = f1.precision;
        q.recall = f1.recall;
        q.f1 = f1.f1;
        report.per_question.push_back(std::move(q));
    }

    const auto n = static_cast<double>(report.per_question.size());
    if (n > 0) {
        for (const QuestionScore& q : report.per_question) {
            report.hits_at_1 += q.hit ? 1.0 : 0.0;
            report.macro_precision += q.precision;
            report.macro_recall += q.recall;
            report.macro_f1 += q.f1;
        }
        report.hits_at_1 /= n;
        report.macro_precision /= n;
        report.macro_recall /= n;
        report.macro_f1 /= n;
    }

    std::map<std::string, std::vector<const QuestionScore*>> by_answer_bucket;
    std::map<std::string, std::vector<const QuestionScore*>> by_hop_bucket;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const QuestionScore& q = report.per_question[i];
        by_answer_bucket[answer_count_bucket(normalized_set(gold[i].answers).size())]
            .push_back(&q);
        if (hop_labels) {
            auto it = hop_labels->find(gold[i].id);
            if (it != hop_labels->end()) by_hop_bucket[hop_bucket(it->second)].push_back(&q);
        }
    }
    for (const auto& [label, members] : by_answer_bucket)
        report.answer_buckets[label] = finalize(members);
    for (const auto& [label, members] : by_hop_bucket)
        report.hop_buckets[label] = finalize(members);

    return report;
}

std::string report_json(const EvalReport& report) {
    nlohmann::json per_question = nlohmann::json::array();
    for (const QuestionScore& q : report.per_question) {
        per_question.push_back({{"id", q.id},
                                {"hit", q.hit ? 1 : 0},
                                {"precision", q.precision},
                                {"recall", q.recall},
                                {"f1", q.f1}});
    }
    nlohmann::json j = {{"hits_at_1", report.hits_at_1},
                        {"macro_precision", report.macro_precision},
                        {"macro_recall", report.macro_recall},
                        {"macro_f1", report.macro_f1},
                        {"per_question", per_question},
                        {"breakdowns",
                         {{"answers", bucket_json(report.answer_buckets)},
                          {"hops", bucket_json(report.hop_buckets)}}}};
    return j.dump();
}

std::string report_table(const EvalReport& report) {
    std::ostringstream out;
    auto row = [&](const std::string& label, std::size_t count, double hits, double p,
                   double r, double f1) {
        out << label;
        out << std::string(label.size() < 18 ? 18 - label.size() : 1, ' ');
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%8zu %9.4f %9.4f %9.4f %9.4f\n", count, hits, p, r,
                      f1);
        out << buf;
    };
    out << "bucket                 count    hits@1 precision    recall        f1\n";
    row("all", report.per_question.size(), report.hits_at_1, report.macro_precision,
        report.macro_recall, report.macro_f1);
    for (const auto& [label, m] : report.answer_buckets)
        row(label, m.count, m.hits_at_1, m.precision, m.recall, m.f1);
    for (const auto& [label, m] : report.hop_buckets)
        row(label, m.count, m.hits_at_1, m.precision, m.recall, m.f1);
    return out.str();
}

}  // namespace kgr
