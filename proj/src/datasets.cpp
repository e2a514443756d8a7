#include "kgr/datasets.hpp"

#include <atomic>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "json.hpp"

#include "kgr/errors.hpp"
#include "kgr/mining.hpp"
#include "kgr/prompts.hpp"
#include "kgr/retrieval.hpp"
#include "parallel.hpp"

namespace kgr {

namespace {

using nlohmann::json;

std::vector<std::string> string_array(const json& j, const char* field,
                                      std::size_t line_no) {
    if (!j.contains(field) || !j.at(field).is_array())
        throw ParseError("qa file line " + std::to_string(line_no) + ": missing array field '" +
                         field + "'");
    std::vector<std::string> out;
    for (const auto& item : j.at(field)) {
        if (!item.is_string())
            throw ParseError("qa file line " + std::to_string(line_no) + ": field '" + field +
                             "' must contain strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::string string_field(const json& j, const char* field, std::size_t line_no) {
    if (!j.contains(field) || !j.at(field).is_string())
        throw ParseError("qa file line " + std::to_string(line_no) +
                         ": missing string field '" + field + "'");
    return j.at(field).get<std::string>();
}

struct PerExample {
    std::vector<InstructionRecord> records;
    bool unresolved = false;
    bool no_mining = false;
    bool no_paths = false;
};

std::vector<InstructionRecord> assemble(std::span<const QAExample> examples,
                                        std::vector<PerExample>&& slots,
                                        DatasetBuildReport* report) {
    DatasetBuildReport local;
    local.examples = examples.size();
    std::vector<InstructionRecord> records;
    for (PerExample& slot : slots) {
        local.skipped_unresolved += slot.unresolved ? 1 : 0;
        local.skipped_no_mining += slot.no_mining ? 1 : 0;
        local.skipped_no_paths += slot.no_paths ? 1 : 0;
        for (InstructionRecord& r : slot.records) records.push_back(std::move(r));
    }
    local.records = records.size();
    if (report) *report = local;
    return records;
}

}  // namespace

std::vector<QAExample> load_qa(std::istream& in) {
    std::vector<QAExample> examples;
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError("qa file line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!j.is_object())
            throw ParseError("qa file line " + std::to_string(line_no) + ": not a JSON object");

        QAExample example;
        example.id = string_field(j, "id", line_no);
        if (example.id.empty())
            throw ParseError("qa file line " + std::to_string(line_no) + ": empty id");
        if (!seen_ids.insert(example.id).second)
            throw ParseError("qa file line " + std::to_string(line_no) + ": duplicate id '" +
                             example.id + "'");
        example.question = string_field(j, "question", line_no);
        example.topic_entities = string_array(j, "q_entities", line_no);
        if (example.topic_entities.empty())
            throw ParseError("qa file line " + std::to_string(line_no) +
                             ": q_entities must be non-empty");
        example.answers = string_array(j, "answers", line_no);
        examples.push_back(std::move(example));
    }
    return examples;
}

std::vector<QAExample> load_qa_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open qa file: " + path);
    return load_qa(in);
}

std::vector<InstructionRecord> build_planning_dataset(std::span<const QAExample> examples,
                                                      const KnowledgeGraph& g,
                                                      std::size_t max_hops, unsigned jobs,
                                                      DatasetBuildReport* report) {
    std::vector<PerExample> slots(examples.size());
    parallel_for_index(examples.size(), jobs, [&](std::size_t i) {
        const QAExample& example = examples[i];
        PerExample& slot = slots[i];
        std::vector<std::pair<std::string, std::string>> targets;
        try {
            targets = planning_targets(g, example.question, example.topic_entities,
                                       example.answers, max_hops);
        } catch (const LookupError&) {
            slot.unresolved = true;
            return;
        }
        if (targets.empty()) {
            slot.no_mining = true;
            return;
        }
        for (auto& [question, plan_text] : targets)
            slot.records.push_back({"planning", planning_prompt(question), plan_text});
    });
    return assemble(examples, std::move(slots), report);
}

std::vector<InstructionRecord> build_reasoning_dataset(std::span<const QAExample> examples,
                                                       const KnowledgeGraph& g,
                                                       std::size_t max_hops,
                                                       std::optional<std::size_t> cap,
                                                       unsigned jobs,
                                                       DatasetBuildReport* report) {
    std::vector<PerExample> slots(examples.size());
    parallel_for_index(examples.size(), jobs, [&](std::size_t i) {
        const QAExample& example = examples[i];
        PerExample& slot = slots[i];

        std::vector<EntityId> topics;
        std::vector<EntityId> answers;
        try {
            for (const auto& name : example.topic_entities) {
                auto id = g.vocab().entity_id(name);
                if (!id) throw LookupError("unknown topic entity '" + name + "'");
                topics.push_back(*id);
            }
            for (const auto& name : example.answers) {
                auto id = g.vocab().entity_id(name);
                if (!id) throw LookupError("unknown answer entity '" + name + "'");
                answers.push_back(*id);
            }
        } catch (const LookupError&) {
            slot.unresolved = true;
            return;
        }

        auto mined = mine_shortest_relation_paths(g, topics, answers, max_hops);
        if (!mined) {
            slot.no_mining = true;
            return;
        }

        std::vector<std::string> lines;
        for (const RelationPath& plan : mined->plans) {
            RetrievalResult result = retrieve_paths(g, topics, plan, cap);
            for (const ReasoningPath& path : result.paths)
                lines.push_back(serialize_reasoning_path(path, g.vocab()));
        }
        if (lines.empty()) {
            slot.no_paths = true;
            return;
        }

        std::string target;
        for (std::size_t a = 0; a < example.answers.size(); ++a) {
            if (a > 0) target += '\n';
            target += example.answers[a];
        }
        slot.records.push_back(
            {"reasoning", reasoning_prompt(example.question, lines), std::move(target)});
    });
    return assemble(examples, std::move(slots), report);
}

std::string to_jsonl(const InstructionRecord& record) {
    json j = {{"kind", record.kind}, {"input", record.input}, {"target", record.target}};
    return j.dump();
}

void write_instruction_jsonl(std::span<const InstructionRecord> records, std::ostream& out) {
    for (const InstructionRecord& record : records) out << to_jsonl(record) << '\n';
}

}  // namespace kgr
