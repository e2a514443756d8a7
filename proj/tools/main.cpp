/**
 * kgr — pipeline driver for knowledge-graph reasoning.
 *
 * Every stage is a subcommand reading and writing plain files, so a run
 * can be inspected, resumed, and re-executed stage by stage. Outputs are
 * byte-deterministic for identical inputs; wall-clock timings go to
 * stderr only. Each command ends with one machine-readable JSON summary
 * line on stdout.
 *
 * Exit codes: 0 success, 2 usage/config, 3 input data, 4 transport,
 * 70 internal.
 */

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kgr/datasets.hpp"
#include "kgr/errors.hpp"
#include "kgr/eval.hpp"
#include "kgr/graph.hpp"
#include "kgr/http_client.hpp"
#include "kgr/mining.hpp"
#include "kgr/paths.hpp"
#include "kgr/planner.hpp"
#include "kgr/prompts.hpp"
#include "kgr/reasoning.hpp"
#include "kgr/retrieval.hpp"
#include "kgr/synthetic.hpp"

#include "../src/parallel.hpp"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitTransport = 4;
constexpr int kExitInternal = 70;

void print_summary(const json& summary) { std::cout << summary.dump() << std::endl; }

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw kgr::Error("cannot open output file: " + path);
    return out;
}

std::vector<json> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw kgr::Error("cannot open file: " + path);
    std::vector<json> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            records.push_back(json::parse(line));
        } catch (const json::exception& e) {
            throw kgr::ParseError(path + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

unsigned default_jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// Plan texts for one question, prefix-redundant plans already dropped.
struct QuestionPlans {
    std::string id;
    std::vector<std::string> plans;
};

std::vector<QuestionPlans> read_plans_file(const std::string& path) {
    std::vector<QuestionPlans> out;
    for (const json& record : read_jsonl(path)) {
        QuestionPlans qp;
        qp.id = record.at("id").get<std::string>();
        for (const auto& plan : record.at("plans")) qp.plans.push_back(plan.get<std::string>());
        out.push_back(std::move(qp));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_index(const std::string& triples_path, const std::string& out_path, bool inverse) {
    std::ifstream in(triples_path, std::ios::binary);
    if (!in) throw kgr::Error("cannot open triple file: " + triples_path);
    kgr::KnowledgeGraph g = kgr::build_graph_from_tsv(in, inverse);

    auto out = open_output(out_path);
    kgr::save_graph(g, out);
    out.close();

    auto stats = g.stats();
    print_summary({{"command", "index"},
                   {"entities", stats.entities},
                   {"relations", stats.relations},
                   {"triples", stats.triples},
                   {"snapshot", out_path}});
    return 0;
}

int cmd_gen_graph(const kgr::SyntheticGraphConfig& config, const std::string& out_path) {
    auto out = open_output(out_path);
    kgr::write_synthetic_tsv(config, out);
    print_summary({{"command", "gen-graph"},
                   {"entities", config.entities},
                   {"relations", config.relations},
                   {"triples", config.triples},
                   {"seed", config.seed},
                   {"out", out_path}});
    return 0;
}

int cmd_mine(const std::string& graph_path, const std::string& qa_path, std::size_t max_hops,
             unsigned jobs, const std::string& out_path) {
    auto g = kgr::load_graph_file(graph_path);
    auto examples = kgr::load_qa_file(qa_path);

    struct Slot {
        std::optional<std::string> record;
        bool unresolved = false;
        bool unconnected = false;
    };
    std::vector<Slot> slots(examples.size());
    kgr::parallel_for_index(examples.size(), jobs, [&](std::size_t i) {
        const kgr::QAExample& example = examples[i];
        std::vector<kgr::EntityId> topics, answers;
        try {
            for (const auto& name : example.topic_entities) {
                auto id = g.vocab().entity_id(name);
                if (!id) throw kgr::LookupError("unknown entity '" + name + "'");
                topics.push_back(*id);
            }
            for (const auto& name : example.answers) {
                auto id = g.vocab().entity_id(name);
                if (!id) throw kgr::LookupError("unknown entity '" + name + "'");
                answers.push_back(*id);
            }
        } catch (const kgr::LookupError&) {
            slots[i].unresolved = true;
            return;
        }
        auto mined = kgr::mine_shortest_relation_paths(g, topics, answers, max_hops);
        if (!mined) {
            slots[i].unconnected = true;
            return;
        }
        json plans = json::array();
        for (const auto& plan : mined->plans)
            plans.push_back(kgr::serialize_plan(plan, g.vocab()));
        json record = {{"id", example.id},
                       {"question", example.question},
                       {"hop_count", mined->hop_count},
                       {"posterior_weight", mined->posterior_weight},
                       {"plans", plans}};
        slots[i].record = record.dump();
    });

    auto out = open_output(out_path);
    std::size_t mined_count = 0, unresolved = 0, unconnected = 0;
    for (const Slot& slot : slots) {
        if (slot.record) {
            out << *slot.record << '\n';
            ++mined_count;
        }
        unresolved += slot.unresolved ? 1 : 0;
        unconnected += slot.unconnected ? 1 : 0;
    }
    print_summary({{"command", "mine"},
                   {"examples", examples.size()},
                   {"mined", mined_count},
                   {"skipped_unresolved", unresolved},
                   {"skipped_no_connection", unconnected},
                   {"out", out_path}});
    return 0;
}

int cmd_build_dataset(const std::string& graph_path, const std::string& qa_path,
                      const std::string& kind, std::size_t max_hops,
                      std::optional<std::size_t> cap, unsigned jobs,
                      const std::string& out_path) {
    auto g = kgr::load_graph_file(graph_path);
    auto examples = kgr::load_qa_file(qa_path);

    kgr::DatasetBuildReport report;
    std::vector<kgr::InstructionRecord> records;
    if (kind == "planning") {
        records = kgr::build_planning_dataset(examples, g, max_hops, jobs, &report);
    } else if (kind == "reasoning") {
        records = kgr::build_reasoning_dataset(examples, g, max_hops, cap, jobs, &report);
    } else {
        throw kgr::ConfigError("unknown dataset kind: " + kind);
    }

    auto out = open_output(out_path);
    kgr::write_instruction_jsonl(records, out);
    print_summary({{"command", "build-dataset"},
                   {"kind", kind},
                   {"examples", report.examples},
                   {"records", report.records},
                   {"skipped_unresolved", report.skipped_unresolved},
                   {"skipped_no_mining", report.skipped_no_mining},
                   {"skipped_no_paths", report.skipped_no_paths},
                   {"out", out_path}});
    return 0;
}

int cmd_train_planner(const std::string& graph_path, const std::string& mined_path,
                      const std::string& qa_path, std::size_t max_hops, double alpha,
                      std::size_t max_len, unsigned jobs, const std::string& out_path) {
    auto g = kgr::load_graph_file(graph_path);

    std::vector<std::pair<std::string, kgr::RelationPath>> pairs;
    std::size_t questions = 0;
    if (!mined_path.empty()) {
        for (const json& record : read_jsonl(mined_path)) {
            const auto question = record.at("question").get<std::string>();
            ++questions;
            for (const auto& plan_text : record.at("plans"))
                pairs.emplace_back(question,
                                   kgr::parse_plan(plan_text.get<std::string>(), g.vocab()));
        }
    } else if (!qa_path.empty()) {
        auto examples = kgr::load_qa_file(qa_path);
        std::vector<std::vector<std::pair<std::string, std::string>>> slots(examples.size());
        kgr::parallel_for_index(examples.size(), jobs, [&](std::size_t i) {
            try {
                slots[i] = kgr::planning_targets(g, examples[i].question,
                                                 examples[i].topic_entities,
                                                 examples[i].answers, max_hops);
            } catch (const kgr::LookupError&) {
                // unresolved entities: no supervision from this example
            }
        });
        for (const auto& targets : slots) {
            if (!targets.empty()) ++questions;
            for (const auto& [question, plan_text] : targets)
                pairs.emplace_back(question, kgr::parse_plan(plan_text, g.vocab()));
        }
    } else {
        throw kgr::ConfigError("train-planner needs --mined or --qa");
    }

    kgr::CountPlannerConfig config{alpha, max_len};
    kgr::CountPlanner planner = kgr::fit_count_planner(pairs, g.vocab(), config);
    auto out = open_output(out_path);
    kgr::save_count_planner(planner, out);
    print_summary({{"command", "train-planner"},
                   {"questions", questions},
                   {"pairs", pairs.size()},
                   {"relations", g.vocab().relation_count()},
                   {"out", out_path}});
    return 0;
}

kgr::CountPlanner load_planner_file(const std::string& path, const kgr::Vocabulary& vocab) {
    std::ifstream in(path);
    if (!in) throw kgr::Error("cannot open planner file: " + path);
    return kgr::load_count_planner(in, vocab);
}

int cmd_plan(const std::string& graph_path, const std::string& planner_path,
             const std::string& qa_path, const std::string& mode, std::size_t k,
             std::size_t beam_width, std::optional<std::size_t> max_len,
             bool keep_prefix_plans, const std::string& out_path) {
    auto g = kgr::load_graph_file(graph_path);
    auto examples = kgr::load_qa_file(qa_path);

    auto out = open_output(out_path);
    std::size_t plans_written = 0;

    if (mode == "count") {
        if (planner_path.empty()) throw kgr::ConfigError("count mode needs --planner");
        kgr::CountPlanner planner = load_planner_file(planner_path, g.vocab());
        kgr::BeamConfig beam;
        beam.k = k;
        beam.beam_width = std::max(beam_width, k);
        beam.max_len = max_len.value_or(planner.config().max_len);

        for (const kgr::QAExample& example : examples) {
            auto plans = kgr::generate_plans(planner, example.question, beam);
            if (!keep_prefix_plans) plans = kgr::drop_prefix_plans(std::move(plans));
            json plan_texts = json::array();
            json log_probs = json::array();
            for (const auto& scored : plans) {
                plan_texts.push_back(kgr::serialize_plan(scored.plan, g.vocab()));
                log_probs.push_back(scored.log_prob);
            }
            plans_written += plans.size();
            out << json{{"id", example.id}, {"plans", plan_texts}, {"log_probs", log_probs}}
                       .dump()
                << '\n';
        }
    } else if (mode == "llm") {
        kgr::HttpGenerationClient client(kgr::HttpClientConfig::from_env());
        for (const kgr::QAExample& example : examples) {
            auto plans = kgr::llm_generate_plans(client, g.vocab(), example.question, k);
            std::vector<kgr::ScoredPlan> scored;
            for (auto& plan : plans) scored.push_back({std::move(plan), 0.0});
            if (!keep_prefix_plans) scored = kgr::drop_prefix_plans(std::move(scored));
            json plan_texts = json::array();
            for (const auto& s : scored)
                plan_texts.push_back(kgr::serialize_plan(s.plan, g.vocab()));
            plans_written += scored.size();
            out << json{{"id", example.id}, {"plans", plan_texts}}.dump() << '\n';
        }
    } else {
        throw kgr::ConfigError("unknown planner mode: " + mode);
    }

    print_summary({{"command", "plan"},
                   {"mode", mode},
                   {"questions", examples.size()},
                   {"plans_written", plans_written},
                   {"out", out_path}});
    return 0;
}

int cmd_retrieve(const std::string& graph_path, const std::string& qa_path,
                 const std::string& plans_path, std::optional<std::size_t> cap, unsigned jobs,
                 const std::string& out_path) {
    auto g = kgr::load_graph_file(graph_path);
    auto examples = kgr::load_qa_file(qa_path);
    auto question_plans = read_plans_file(plans_path);

    std::map<std::string, const kgr::QAExample*> by_id;
    for (const kgr::QAExample& example : examples) by_id[example.id] = &example;

    struct Slot {
        std::optional<std::string> record;
        bool unresolved = false;
        std::size_t unparseable_plans = 0;
        std::size_t paths = 0;
        std::size_t plans = 0;
        std::size_t truncated = 0;
        std::chrono::nanoseconds elapsed{0};
    };
    std::vector<Slot> slots(question_plans.size());

    kgr::parallel_for_index(question_plans.size(), jobs, [&](std::size_t i) {
        const QuestionPlans& qp = question_plans[i];
        Slot& slot = slots[i];
        auto it = by_id.find(qp.id);
        if (it == by_id.end())
            throw kgr::Error("plans file id '" + qp.id + "' not present in qa file");

        std::vector<kgr::EntityId> topics;
        for (const auto& name : it->second->topic_entities) {
            auto id = g.vocab().entity_id(name);
            if (!id) {
                slot.unresolved = true;
                return;
            }
            topics.push_back(*id);
        }

        json results = json::array();
        for (const std::string& plan_text : qp.plans) {
            kgr::RelationPath plan;
            try {
                plan = kgr::parse_plan(plan_text, g.vocab());
            } catch (const kgr::ParseError&) {
                ++slot.unparseable_plans;
                continue;
            }
            kgr::RetrievalResult result = kgr::retrieve_paths(g, topics, plan, cap);
            json paths = json::array();
            for (const auto& path : result.paths)
                paths.push_back(kgr::serialize_reasoning_path(path, g.vocab()));
            results.push_back({{"plan", plan_text},
                               {"paths", paths},
                               {"truncated", result.truncated},
                               {"expanded", result.expanded_nodes}});
            slot.paths += result.paths.size();
            slot.plans += 1;
            slot.truncated += result.truncated ? 1 : 0;
            slot.elapsed += result.elapsed;
        }
        slot.record = json{{"id", qp.id}, {"results", results}}.dump();
    });

    auto out = open_output(out_path);
    std::size_t total_paths = 0, total_plans = 0, truncated = 0, unresolved = 0,
                unparseable = 0;
    std::chrono::nanoseconds total_elapsed{0};
    for (const Slot& slot : slots) {
        if (slot.record) out << *slot.record << '\n';
        total_paths += slot.paths;
        total_plans += slot.plans;
        truncated += slot.truncated;
        unresolved += slot.unresolved ? 1 : 0;
        unparseable += slot.unparseable_plans;
        total_elapsed += slot.elapsed;
    }
    std::cerr << "retrieve: " << total_paths << " paths in "
              << std::chrono::duration<double, std::milli>(total_elapsed).count() << " ms\n";
    print_summary({{"command", "retrieve"},
                   {"questions", question_plans.size()},
                   {"plans", total_plans},
                   {"paths", total_paths},
                   {"truncated_plans", truncated},
                   {"skipped_unresolved", unresolved},
                   {"unparseable_plans", unparseable},
                   {"out", out_path}});
    return 0;
}

int cmd_answer(const std::string& graph_path, const std::string& paths_path,
               const std::string& qa_path, const std::string& mode, std::size_t vote_n,
               unsigned jobs, const std::string& out_path) {
    auto g = kgr::load_graph_file(graph_path);
    auto records = read_jsonl(paths_path);

    std::map<std::string, std::string> questions;
    if (!qa_path.empty())
        for (const auto& example : kgr::load_qa_file(qa_path))
            questions[example.id] = example.question;

    std::unique_ptr<kgr::GenerationClient> client;
    if (mode == "llm") {
        if (qa_path.empty()) throw kgr::ConfigError("llm mode needs --qa for question text");
        client = std::make_unique<kgr::HttpGenerationClient>(kgr::HttpClientConfig::from_env());
    } else if (mode != "all" && mode != "vote") {
        throw kgr::ConfigError("unknown reasoner mode: " + mode);
    }

    std::vector<std::string> outputs(records.size());
    kgr::parallel_for_index(records.size(), mode == "llm" ? 1 : jobs, [&](std::size_t i) {
        const json& record = records[i];
        const auto id = record.at("id").get<std::string>();

        kgr::AnswerSet answers;
        if (mode == "llm") {
            std::vector<std::string> lines;
            for (const auto& result : record.at("results"))
                for (const auto& path_text : result.at("paths"))
                    lines.push_back(path_text.get<std::string>());
            auto it = questions.find(id);
            if (it == questions.end())
                throw kgr::Error("paths file id '" + id + "' not present in qa file");
            answers = kgr::llm_reason(*client, it->second, lines);
        } else {
            std::vector<kgr::RetrievalResult> results;
            for (const auto& result : record.at("results")) {
                kgr::RetrievalResult r;
                r.plan = kgr::parse_plan(result.at("plan").get<std::string>(), g.vocab());
                for (const auto& path_text : result.at("paths"))
                    r.paths.push_back(
                        kgr::parse_reasoning_path(path_text.get<std::string>(), g.vocab()));
                results.push_back(std::move(r));
            }
            answers = mode == "all" ? kgr::answers_all(g, results)
                                    : kgr::answers_vote(g, results, vote_n);
        }

        json answer_list = json::array();
        for (const auto& answer : answers.answers)
            answer_list.push_back({{"text", answer.text}, {"score", answer.score}});
        outputs[i] = json{{"id", id},
                          {"source", std::string(kgr::to_string(answers.source))},
                          {"answers", answer_list}}
                         .dump();
    });

    auto out = open_output(out_path);
    for (const std::string& line : outputs) out << line << '\n';
    print_summary({{"command", "answer"},
                   {"mode", mode},
                   {"questions", records.size()},
                   {"out", out_path}});
    return 0;
}

int cmd_eval(const std::string& qa_path, const std::string& pred_path,
             const std::string& hops_path, const std::string& out_path) {
    auto gold = kgr::load_qa_file(qa_path);

    std::map<std::string, std::vector<std::string>> predictions;
    for (const json& record : read_jsonl(pred_path)) {
        std::vector<std::string> texts;
        for (const auto& answer : record.at("answers"))
            texts.push_back(answer.at("text").get<std::string>());
        predictions[record.at("id").get<std::string>()] = std::move(texts);
    }

    std::map<std::string, int> hops;
    if (!hops_path.empty())
        for (const json& record : read_jsonl(hops_path))
            hops[record.at("id").get<std::string>()] = record.at("hops").get<int>();

    kgr::EvalReport report =
        kgr::evaluate_run(predictions, gold, hops_path.empty() ? nullptr : &hops);

    if (!out_path.empty()) {
        auto out = open_output(out_path);
        out << kgr::report_json(report) << '\n';
    }
    std::cout << kgr::report_table(report);
    print_summary({{"command", "eval"},
                   {"questions", gold.size()},
                   {"hits_at_1", report.hits_at_1},
                   {"macro_precision", report.macro_precision},
                   {"macro_recall", report.macro_recall},
                   {"macro_f1", report.macro_f1},
                   {"report", out_path}});
    return 0;
}

int cmd_retrieval_stats(const std::string& graph_path, const std::string& qa_path,
                        const std::string& planner_path, std::size_t k_max,
                        std::size_t beam_width, std::optional<std::size_t> cap,
                        std::size_t limit, unsigned jobs, const std::string& out_path) {
    auto g = kgr::load_graph_file(graph_path);
    auto examples = kgr::load_qa_file(qa_path);
    if (limit > 0 && examples.size() > limit) examples.resize(limit);
    kgr::CountPlanner planner = load_planner_file(planner_path, g.vocab());

    // One beam per question at k_max; the top-K list for K <= k_max is its
    // prefix, so per-question path counts are non-decreasing in K.
    kgr::BeamConfig beam;
    beam.k = k_max;
    beam.beam_width = std::max(beam_width, k_max);
    beam.max_len = planner.config().max_len;

    std::vector<std::vector<kgr::ScoredPlan>> ranked(examples.size());
    std::vector<std::vector<kgr::EntityId>> topics(examples.size());
    std::vector<bool> usable(examples.size(), false);
    kgr::parallel_for_index(examples.size(), jobs, [&](std::size_t i) {
        bool ok = true;
        for (const auto& name : examples[i].topic_entities) {
            auto id = g.vocab().entity_id(name);
            if (!id) {
                ok = false;
                break;
            }
            topics[i].push_back(*id);
        }
        if (!ok) return;
        ranked[i] = kgr::generate_plans(planner, examples[i].question, beam);
        usable[i] = true;
    });

    json rows = json::array();
    std::string table = "    k     plans     paths  mean_paths  mean_ms\n";
    for (std::size_t k = 1; k <= k_max; ++k) {
        std::atomic<std::size_t> total_paths{0}, total_plans{0};
        std::atomic<std::int64_t> total_ns{0};
        std::size_t asked = 0;
        for (std::size_t i = 0; i < examples.size(); ++i) asked += usable[i] ? 1 : 0;
        kgr::parallel_for_index(examples.size(), jobs, [&](std::size_t i) {
            if (!usable[i]) return;
            std::vector<kgr::ScoredPlan> top(ranked[i].begin(),
                                             ranked[i].begin() +
                                                 std::min(k, ranked[i].size()));
            top = kgr::drop_prefix_plans(std::move(top));
            std::vector<kgr::RelationPath> plans;
            for (auto& scored : top) plans.push_back(std::move(scored.plan));
            auto results = kgr::retrieve_for_plans(g, topics[i], plans, cap);
            std::size_t paths = 0;
            std::int64_t ns = 0;
            for (const auto& result : results) {
                paths += result.paths.size();
                ns += result.elapsed.count();
            }
            total_paths += paths;
            total_plans += plans.size();
            total_ns += ns;
        });
        const double mean_paths =
            asked == 0 ? 0.0 : static_cast<double>(total_paths) / static_cast<double>(asked);
        const double mean_ms = asked == 0 ? 0.0
                                          : static_cast<double>(total_ns) / 1e6 /
                                                static_cast<double>(asked);
        rows.push_back({{"k", k},
                        {"plans", total_plans.load()},
                        {"total_paths", total_paths.load()},
                        {"mean_paths", mean_paths},
                        {"mean_elapsed_ms", mean_ms}});
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%5zu %9zu %9zu %11.2f %8.3f\n", k,
                      total_plans.load(), total_paths.load(), mean_paths, mean_ms);
        table += buf;
    }

    if (!out_path.empty()) {
        auto out = open_output(out_path);
        out << json{{"rows", rows}}.dump() << '\n';
    }
    std::cerr << table;
    print_summary({{"command", "retrieval-stats"}, {"questions", examples.size()},
                   {"rows", rows}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knowledge-graph reasoning pipeline"};
    app.require_subcommand(1);
    app.set_config("--config");

    unsigned jobs = default_jobs();
    app.add_option("--jobs", jobs, "worker threads for per-question stages")
        ->capture_default_str();

    // index
    auto* index = app.add_subcommand("index", "build a graph snapshot from a triple file");
    std::string index_triples, index_out;
    bool index_inverse = false;
    index->add_option("--triples", index_triples, "triple TSV file")->required();
    index->add_option("--out", index_out, "snapshot output path")->required();
    index->add_flag("--inverse", index_inverse, "add inverse edges (relation + \"_inv\")");

    // gen-graph
    auto* gen = app.add_subcommand("gen-graph", "generate a synthetic triple file");
    kgr::SyntheticGraphConfig gen_config;
    std::string gen_out;
    gen->add_option("--entities", gen_config.entities)->capture_default_str();
    gen->add_option("--relations", gen_config.relations)->capture_default_str();
    gen->add_option("--triples", gen_config.triples)->capture_default_str();
    gen->add_option("--zipf", gen_config.zipf_exponent, "relation Zipf exponent")
        ->capture_default_str();
    gen->add_option("--seed", gen_config.seed)->capture_default_str();
    gen->add_option("--out", gen_out)->required();

    // mine
    auto* mine = app.add_subcommand("mine", "mine shortest relation-path supervision");
    std::string mine_graph, mine_qa, mine_out;
    std::size_t mine_max_hops = 4;
    mine->add_option("--graph", mine_graph)->required();
    mine->add_option("--qa", mine_qa)->required();
    mine->add_option("--max-hops", mine_max_hops)->capture_default_str();
    mine->add_option("--out", mine_out)->required();

    // build-dataset
    auto* build = app.add_subcommand("build-dataset", "build instruction-tuning datasets");
    std::string build_graph_path, build_qa, build_kind, build_out;
    std::size_t build_max_hops = 4;
    std::size_t build_cap = 3000;
    build->add_option("--graph", build_graph_path)->required();
    build->add_option("--qa", build_qa)->required();
    build->add_option("--kind", build_kind, "planning or reasoning")->required();
    build->add_option("--max-hops", build_max_hops)->capture_default_str();
    build->add_option("--cap", build_cap, "max paths per plan, 0 = unlimited")
        ->capture_default_str();
    build->add_option("--out", build_out)->required();

    // train-planner
    auto* train = app.add_subcommand("train-planner", "fit the count planner");
    std::string train_graph, train_mined, train_qa, train_out;
    std::size_t train_max_hops = 4, train_max_len = 4;
    double train_alpha = 0.1;
    train->add_option("--graph", train_graph)->required();
    train->add_option("--mined", train_mined, "mined plans from `mine`");
    train->add_option("--qa", train_qa, "qa file (mines internally)");
    train->add_option("--max-hops", train_max_hops)->capture_default_str();
    train->add_option("--alpha", train_alpha, "add-alpha smoothing")->capture_default_str();
    train->add_option("--max-len", train_max_len)->capture_default_str();
    train->add_option("--out", train_out)->required();

    // plan
    auto* plan = app.add_subcommand("plan", "generate top-k plans per question");
    std::string plan_graph, plan_planner, plan_qa, plan_out, plan_mode = "count";
    std::size_t plan_k = 3, plan_beam_width = 10;
    std::optional<std::size_t> plan_max_len;
    bool plan_keep_prefix = false;
    plan->add_option("--graph", plan_graph)->required();
    plan->add_option("--planner", plan_planner, "planner file (count mode)");
    plan->add_option("--qa", plan_qa)->required();
    plan->add_option("--mode", plan_mode, "count or llm")->capture_default_str();
    plan->add_option("--k", plan_k)->capture_default_str();
    plan->add_option("--beam-width", plan_beam_width)->capture_default_str();
    plan->add_option("--max-len", plan_max_len, "defaults to the planner's max_len");
    plan->add_flag("--keep-prefix-plans", plan_keep_prefix,
                   "keep plans that are strict prefixes of higher-ranked plans");
    plan->add_option("--out", plan_out)->required();

    // retrieve
    auto* retrieve = app.add_subcommand("retrieve", "ground plans into reasoning paths");
    std::string retrieve_graph, retrieve_qa, retrieve_plans, retrieve_out;
    std::size_t retrieve_cap = 3000;
    retrieve->add_option("--graph", retrieve_graph)->required();
    retrieve->add_option("--qa", retrieve_qa)->required();
    retrieve->add_option("--plans", retrieve_plans)->required();
    retrieve->add_option("--cap", retrieve_cap, "max paths per plan, 0 = unlimited")
        ->capture_default_str();
    retrieve->add_option("--out", retrieve_out)->required();

    // answer
    auto* answer = app.add_subcommand("answer", "turn retrieved paths into answers");
    std::string answer_graph, answer_paths, answer_qa, answer_out, answer_mode = "vote";
    std::size_t answer_vote_n = 5;
    answer->add_option("--graph", answer_graph)->required();
    answer->add_option("--paths", answer_paths)->required();
    answer->add_option("--qa", answer_qa, "qa file (required for llm mode)");
    answer->add_option("--mode", answer_mode, "all, vote, or llm")->capture_default_str();
    answer->add_option("--vote-n", answer_vote_n)->capture_default_str();
    answer->add_option("--out", answer_out)->required();

    // eval
    auto* eval = app.add_subcommand("eval", "score predictions against gold answers");
    std::string eval_qa, eval_pred, eval_hops, eval_out;
    eval->add_option("--qa", eval_qa)->required();
    eval->add_option("--pred", eval_pred)->required();
    eval->add_option("--hops", eval_hops, "optional JSONL {id, hops} labels");
    eval->add_option("--out", eval_out, "JSON report path");

    // retrieval-stats
    auto* stats = app.add_subcommand("retrieval-stats", "sweep top-K and report costs");
    std::string stats_graph, stats_qa, stats_planner, stats_out;
    std::size_t stats_k_max = 5, stats_beam_width = 10, stats_limit = 0;
    std::size_t stats_cap = 3000;
    stats->add_option("--graph", stats_graph)->required();
    stats->add_option("--qa", stats_qa)->required();
    stats->add_option("--planner", stats_planner)->required();
    stats->add_option("--k-max", stats_k_max)->capture_default_str();
    stats->add_option("--beam-width", stats_beam_width)->capture_default_str();
    stats->add_option("--cap", stats_cap, "max paths per plan, 0 = unlimited")
        ->capture_default_str();
    stats->add_option("--limit", stats_limit, "use only the first N questions, 0 = all")
        ->capture_default_str();
    stats->add_option("--out", stats_out, "JSON rows output path");

    CLI11_PARSE(app, argc, argv);

    auto cap_of = [](std::size_t cap) -> std::optional<std::size_t> {
        if (cap == 0) return std::nullopt;
        return cap;
    };

    try {
        if (*index) return cmd_index(index_triples, index_out, index_inverse);
        if (*gen) return cmd_gen_graph(gen_config, gen_out);
        if (*mine) return cmd_mine(mine_graph, mine_qa, mine_max_hops, jobs, mine_out);
        if (*build)
            return cmd_build_dataset(build_graph_path, build_qa, build_kind, build_max_hops,
                                     cap_of(build_cap), jobs, build_out);
        if (*train)
            return cmd_train_planner(train_graph, train_mined, train_qa, train_max_hops,
                                     train_alpha, train_max_len, jobs, train_out);
        if (*plan)
            return cmd_plan(plan_graph, plan_planner, plan_qa, plan_mode, plan_k,
                            plan_beam_width, plan_max_len, plan_keep_prefix, plan_out);
        if (*retrieve)
            return cmd_retrieve(retrieve_graph, retrieve_qa, retrieve_plans,
                                cap_of(retrieve_cap), jobs, retrieve_out);
        if (*answer)
            return cmd_answer(answer_graph, answer_paths, answer_qa, answer_mode,
                              answer_vote_n, jobs, answer_out);
        if (*eval) return cmd_eval(eval_qa, eval_pred, eval_hops, eval_out);
        if (*stats)
            return cmd_retrieval_stats(stats_graph, stats_qa, stats_planner, stats_k_max,
                                       stats_beam_width, cap_of(stats_cap), stats_limit, jobs,
                                       stats_out);
    } catch (const kgr::ConfigError& e) {
        std::cerr << "error(config): " << e.what() << '\n';
        return kExitConfig;
    } catch (const kgr::TransportError& e) {
        std::cerr << "error(transport): " << e.what() << '\n';
        return kExitTransport;
    } catch (const kgr::MockExhaustedError& e) {
        std::cerr << "error(transport): " << e.what() << '\n';
        return kExitTransport;
    } catch (const kgr::Error& e) {
        std::cerr << "error(data): " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error(internal): " << e.what() << '\n';
        return kExitInternal;
    }
    return 0;
}
