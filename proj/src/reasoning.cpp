#include "kgr/reasoning.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iostream>
#include <map>
#include <set>
#include <unordered_map>

#include "kgr/errors.hpp"
#include "kgr/prompts.hpp"
#include "kgr/text.hpp"

namespace kgr {

namespace {

// Tally of one normalized answer: summed occurrence count plus the
// smallest contributing entity id, which breaks score ties.
struct Tally {
    double score = 0.0;
    EntityId rep_id = 0;
    std::string text;
};

std::string strip_list_markers(std::string_view piece) {
    std::string_view s = trim_view(piece);
    while (true) {
        if (s.size() >= 2 && (s[0] == '-' || s[0] == '*') && s[1] == ' ') {
            s = trim_view(s.substr(2));
            continue;
        }
        std::size_t i = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')') && i + 1 < s.size() &&
            s[i + 1] == ' ') {
            s = trim_view(s.substr(i + 2));
            continue;
        }
        break;
    }
    return std::string(s);
}

}  // namespace

std::string_view to_string(AnswerSource source) {
    switch (source) {
        case AnswerSource::all: return "all";
        case AnswerSource::vote: return "vote";
        case AnswerSource::llm: return "llm";
    }
    return "all";
}

AnswerSet answers_all(const KnowledgeGraph& g, std::span<const RetrievalResult> results) {
    std::unordered_map<EntityId, std::uint64_t> counts;
    for (const RetrievalResult& result : results)
        for (const ReasoningPath& path : result.paths) counts[path.terminal()]++;

    std::vector<std::pair<EntityId, std::uint64_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    // Entity names that collide after normalization merge their counts.
    std::map<std::string, Tally> merged;
    std::vector<std::string> order;
    for (const auto& [id, count] : ranked) {
        const std::string& name = g.vocab().entity_name(id);
        std::string key = normalize_answer(name);
        auto it = merged.find(key);
        if (it == merged.end()) {
            merged.emplace(key, Tally{static_cast<double>(count), id, name});
            order.push_back(std::move(key));
        } else {
            it->second.score += static_cast<double>(count);
            it->second.rep_id = std::min(it->second.rep_id, id);
        }
    }

    std::vector<const Tally*> tallies;
    tallies.reserve(order.size());
    for (const std::string& key : order) tallies.push_back(&merged.at(key));
    std::sort(tallies.begin(), tallies.end(), [](const Tally* a, const Tally* b) {
        if (a->score != b->score) return a->score > b->score;
        return a->rep_id < b->rep_id;
    });

    AnswerSet answers;
    answers.source = AnswerSource::all;
    answers.answers.reserve(tallies.size());
    for (const Tally* t : tallies) answers.answers.push_back({t->text, t->score});
    return answers;
}

AnswerSet answers_vote(const KnowledgeGraph& g, std::span<const RetrievalResult> results,
                       std::size_t n) {
    if (n == 0) throw PreconditionError("answers_vote: n must be >= 1");
    AnswerSet answers = answers_all(g, results);
    answers.source = AnswerSource::vote;
    if (answers.answers.size() > n) answers.answers.resize(n);
    return answers;
}

std::vector<std::string> reasoning_path_lines(const KnowledgeGraph& g,
                                              std::span<const RetrievalResult> results) {
    std::vector<std::string> lines;
    for (const RetrievalResult& result : results)
        for (const ReasoningPath& path : result.paths)
            lines.push_back(serialize_reasoning_path(path, g.vocab()));
    return lines;
}

std::vector<std::string> parse_answer_list(std::string_view completion) {
    std::vector<std::string> answers;
    std::set<std::string> seen;
    std::size_t line_start = 0;
    while (line_start <= completion.size()) {
        auto line_end = completion.find('\n', line_start);
        std::string_view line = completion.substr(
            line_start, line_end == std::string_view::npos ? std::string_view::npos
                                                           : line_end - line_start);
        std::size_t piece_start = 0;
        while (piece_start <= line.size()) {
            auto comma = line.find(',', piece_start);
            std::string_view piece = line.substr(
                piece_start,
                comma == std::string_view::npos ? std::string_view::npos : comma - piece_start);
            std::string answer = strip_list_markers(piece);
            if (!answer.empty() && seen.insert(normalize_answer(answer)).second)
                answers.push_back(std::move(answer));
            if (comma == std::string_view::npos) break;
            piece_start = comma + 1;
        }
        if (line_end == std::string_view::npos) break;
        line_start = line_end + 1;
    }
    return answers;
}

AnswerSet llm_reason(GenerationClient& client, const std::string& question,
                     std::span<const std::string> path_lines) {
    GenerationRequest request;
    request.prompt = reasoning_prompt(question, path_lines);
    request.num_completions = 1;
    request.max_new_tokens = 256;
    request.temperature = 0.0;

    AnswerSet answers;
    answers.source = AnswerSource::llm;
    auto completions = client.generate(request);
    if (completions.empty()) {
        std::cerr << "llm_reason: empty completion list from generation client\n";
        return answers;
    }
    auto parsed = parse_answer_list(completions.front());
    if (parsed.empty()) {
        std::cerr << "llm_reason: could not parse any answer from completion\n";
        return answers;
    }
    answers.answers.reserve(parsed.size());
    for (std::string& text : parsed) answers.answers.push_back({std::move(text), 1.0});
    return answers;
}

AnswerSet llm_reason(GenerationClient& client, const KnowledgeGraph& g,
                     const std::string& question,
                     std::span<const RetrievalResult> results) {
    auto lines = reasoning_path_lines(g, results);
    return llm_reason(client, question, lines);
}

std::string explanation_prompt(const KnowledgeGraph& g, const std::string& question,
                               std::span<const RetrievalResult> results,
                               std::string_view examples_block) {
    auto lines = reasoning_path_lines(g, results);
    return explanation_prompt(question, lines, examples_block);
}

double FrequencyAnswerScorer::answer_logprob(const std::string& /*question*/,
                                             const RelationPath& /*plan*/,
                                             std::span<const ReasoningPath> paths,
                                             const std::string& answer) const {
    const std::string target = normalize_answer(answer);
    std::set<std::string> distinct;
    std::size_t matches = 0;
    for (const ReasoningPath& path : paths) {
        std::string terminal = normalize_answer(graph_.vocab().entity_name(path.terminal()));
        if (terminal == target) ++matches;
        distinct.insert(std::move(terminal));
    }
    const double support = static_cast<double>(std::max<std::size_t>(distinct.size(), 1));
    const double p = (static_cast<double>(matches) + alpha_) /
                     (static_cast<double>(paths.size()) + alpha_ * support);
    return std::log(p);
}

double reasoning_loss(const PathAnswerScorer& scorer, const std::string& question,
                      const std::string& answer,
                      std::span<const RetrievalResult> plan_results) {
    if (plan_results.empty())
        throw PreconditionError("reasoning_loss: at least one plan is required");
    double total = 0.0;
    for (const RetrievalResult& result : plan_results)
        total += scorer.answer_logprob(question, result.plan, result.paths, answer);
    return total;
}

double combined_objective(double planning_loss_value, double reasoning_log_likelihood) {
    return reasoning_log_likelihood - planning_loss_value;
}

}  // namespace kgr
