#include "kgr/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "kgr/errors.hpp"
#include "kgr/prompts.hpp"
#include "kgr/text.hpp"

namespace kgr {

namespace {

std::string prefix_key(std::span<const RelationId> prefix) {
    std::string key;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (i > 0) key += ',';
        key += std::to_string(prefix[i]);
    }
    return key;
}

// Ties in score are broken lexicographically by relation-id sequence.
bool scored_before(const ScoredPlan& a, const ScoredPlan& b) {
    if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
    return a.plan.relations < b.plan.relations;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double plan_log_prob(const PlannerModel& model, const std::string& question,
                     const RelationPath& plan) {
    const std::size_t stop = stop_index(model);
    double total = 0.0;
    RelationPath prefix;
    for (RelationId r : plan.relations) {
        auto lp = model.next_step_logprobs(question, prefix);
        total += lp.at(r);
        prefix.relations.push_back(r);
    }
    total += model.next_step_logprobs(question, prefix).at(stop);
    return total;
}

void BeamConfig::validate() const {
    if (beam_width == 0 || k == 0)
        throw ConfigError("beam config: beam_width and k must be positive");
    if (k > beam_width)
        throw ConfigError("beam config: k must not exceed beam_width");
}

std::vector<ScoredPlan> generate_plans(const PlannerModel& model,
                                       const std::string& question,
                                       const BeamConfig& config) {
    config.validate();

    std::vector<ScoredPlan> alive;         // open prefixes, score without STOP
    alive.push_back({RelationPath{}, 0.0});
    std::vector<ScoredPlan> finished;      // closed plans, score includes STOP

    const std::size_t relations = model.relation_count();
    const std::size_t stop = stop_index(model);

    for (std::size_t depth = 0; depth <= config.max_len && !alive.empty(); ++depth) {
        std::vector<ScoredPlan> next_alive;
        for (const ScoredPlan& beam : alive) {
            auto lp = model.next_step_logprobs(question, beam.plan);
            finished.push_back({beam.plan, beam.log_prob + lp[stop]});
            if (depth == config.max_len) continue;  // forced stop at max length
            for (RelationId r = 0; r < relations; ++r) {
                RelationPath extended = beam.plan;
                extended.relations.push_back(r);
                next_alive.push_back({std::move(extended), beam.log_prob + lp[r]});
            }
        }
        std::sort(next_alive.begin(), next_alive.end(), scored_before);
        if (next_alive.size() > config.beam_width) next_alive.resize(config.beam_width);
        alive = std::move(next_alive);
    }

    std::sort(finished.begin(), finished.end(), scored_before);
    if (finished.size() > config.k) finished.resize(config.k);
    return finished;
}

std::vector<ScoredPlan> drop_prefix_plans(std::vector<ScoredPlan> plans) {
    std::vector<ScoredPlan> kept;
    for (std::size_t i = 0; i < plans.size(); ++i) {
        const auto& cur = plans[i].plan.relations;
        bool is_prefix_of_better = false;
        for (std::size_t j = 0; j < i && !is_prefix_of_better; ++j) {
            const auto& better = plans[j].plan.relations;
            is_prefix_of_better =
                cur.size() < better.size() &&
                std::equal(cur.begin(), cur.end(), better.begin());
        }
        if (!is_prefix_of_better) kept.push_back(std::move(plans[i]));
    }
    return kept;
}

double planning_loss(const PlannerModel& model, const std::string& question,
                     const MinedPlans& mined) {
    if (mined.plans.empty())
        throw PreconditionError("planning_loss: mined plan set is empty");
    double total = 0.0;
    for (const RelationPath& plan : mined.plans)
        total += plan_log_prob(model, question, plan);
    return -total / static_cast<double>(mined.plans.size());
}

// ---------------------------------------------------------------------------
// CountPlanner

std::vector<double> CountPlanner::next_step_logprobs(const std::string& question,
                                                     const RelationPath& prefix) const {
    const std::size_t support = relation_names_.size() + 1;  // relations + STOP
    const std::string pk = prefix_key(prefix.relations);

    // Accumulate counts for one feature key over the full support.
    auto accumulate = [&](const std::string& word, std::vector<std::uint64_t>& acc) {
        auto lo = counts_.lower_bound(Key{word, pk, 0});
        for (auto it = lo; it != counts_.end(); ++it) {
            const auto& [w, p, sym] = it->first;
            if (w != word || p != pk) break;
            acc[sym] += it->second;
        }
    };

    std::vector<std::uint64_t> acc(support, 0);
    for (const std::string& word : question_words(question)) accumulate(word, acc);
    std::uint64_t total = 0;
    for (auto c : acc) total += c;
    if (total == 0) {
        std::fill(acc.begin(), acc.end(), 0);
        accumulate(std::string(), acc);  // prefix-only backoff
        total = 0;
        for (auto c : acc) total += c;
    }

    std::vector<double> logprobs(support);
    if (total == 0) {
        const double uniform = -std::log(static_cast<double>(support));
        std::fill(logprobs.begin(), logprobs.end(), uniform);
        return logprobs;
    }
    const double denom = static_cast<double>(total) +
                         config_.alpha * static_cast<double>(support);
    for (std::size_t i = 0; i < support; ++i)
        logprobs[i] = std::log((static_cast<double>(acc[i]) + config_.alpha) / denom);
    return logprobs;
}

CountPlanner fit_count_planner(std::span<const std::pair<std::string, RelationPath>> pairs,
                               const Vocabulary& vocab, CountPlannerConfig config) {
    if (pairs.empty())
        throw ConfigError("fit_count_planner: empty training set");
    if (config.alpha <= 0.0)
        throw ConfigError("fit_count_planner: alpha must be positive");

    CountPlanner planner;
    planner.config_ = config;
    planner.relation_names_.reserve(vocab.relation_count());
    for (std::size_t i = 0; i < vocab.relation_count(); ++i)
        planner.relation_names_.push_back(vocab.relation_name(static_cast<RelationId>(i)));

    const auto stop = static_cast<std::uint32_t>(vocab.relation_count());
    for (const auto& [question, plan] : pairs) {
        for (RelationId r : plan.relations)
            if (r >= stop)
                throw LookupError("fit_count_planner: relation id " + std::to_string(r) +
                                  " out of range");
        auto words = question_words(question);
        RelationPath prefix;
        for (std::size_t step = 0; step <= plan.relations.size(); ++step) {
            const std::uint32_t sym =
                step < plan.relations.size() ? plan.relations[step] : stop;
            const std::string pk = prefix_key(prefix.relations);
            for (const std::string& word : words)
                planner.counts_[CountPlanner::Key{word, pk, sym}]++;
            planner.counts_[CountPlanner::Key{std::string(), pk, sym}]++;
            if (step < plan.relations.size()) prefix.relations.push_back(sym);
        }
    }
    return planner;
}

// Dump format, line-based and sorted, so identical planners produce
// identical bytes:
//   kgr.count_planner v1
//   alpha <%.17g>
//   max_len <n>
//   relations <n>
//   relation <id> <name>          x n
//   counts <n>
//   count <word|-> <prefix|-> <next id|STOP> <n>   x n
void save_count_planner(const CountPlanner& planner, std::ostream& out) {
    out << "kgr.count_planner v1\n";
    out << "alpha " << format_double(planner.config_.alpha) << '\n';
    out << "max_len " << planner.config_.max_len << '\n';
    out << "relations " << planner.relation_names_.size() << '\n';
    for (std::size_t i = 0; i < planner.relation_names_.size(); ++i)
        out << "relation " << i << ' ' << planner.relation_names_[i] << '\n';
    out << "counts " << planner.counts_.size() << '\n';
    const auto stop = static_cast<std::uint32_t>(planner.relation_names_.size());
    for (const auto& [key, count] : planner.counts_) {
        const auto& [word, prefix, sym] = key;
        out << "count " << (word.empty() ? "-" : word) << ' '
            << (prefix.empty() ? "-" : prefix) << ' ';
        if (sym == stop)
            out << "STOP";
        else
            out << sym;
        out << ' ' << count << '\n';
    }
}

CountPlanner load_count_planner(std::istream& in, const Vocabulary& vocab) {
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> std::string& {
        if (!std::getline(in, line))
            throw ParseError("planner file: unexpected end of file at line " +
                             std::to_string(line_no + 1));
        ++line_no;
        return line;
    };
    auto fail = [&](const std::string& what) -> ParseError {
        return ParseError("planner file line " + std::to_string(line_no) + ": " + what);
    };

    if (next_line() != "kgr.count_planner v1")
        throw fail("bad header");

    CountPlanner planner;
    {
        std::istringstream ss(next_line());
        std::string tag;
        if (!(ss >> tag >> planner.config_.alpha) || tag != "alpha")
            throw fail("expected alpha");
    }
    {
        std::istringstream ss(next_line());
        std::string tag;
        if (!(ss >> tag >> planner.config_.max_len) || tag != "max_len")
            throw fail("expected max_len");
    }

    std::size_t n_relations = 0;
    {
        std::istringstream ss(next_line());
        std::string tag;
        if (!(ss >> tag >> n_relations) || tag != "relations")
            throw fail("expected relations");
    }
    // Training-time ids are remapped through names onto the current vocab.
    std::vector<RelationId> remap(n_relations);
    for (std::size_t i = 0; i < n_relations; ++i) {
        std::istringstream ss(next_line());
        std::string tag, name;
        std::size_t id = 0;
        if (!(ss >> tag >> id >> name) || tag != "relation" || id != i)
            throw fail("expected relation row " + std::to_string(i));
        auto vocab_id = vocab.relation_id(name);
        if (!vocab_id)
            throw LookupError("planner file: relation '" + name +
                              "' not present in vocabulary");
        remap[i] = *vocab_id;
    }
    planner.relation_names_.reserve(vocab.relation_count());
    for (std::size_t i = 0; i < vocab.relation_count(); ++i)
        planner.relation_names_.push_back(vocab.relation_name(static_cast<RelationId>(i)));
    const auto stop = static_cast<std::uint32_t>(vocab.relation_count());

    std::size_t n_counts = 0;
    {
        std::istringstream ss(next_line());
        std::string tag;
        if (!(ss >> tag >> n_counts) || tag != "counts")
            throw fail("expected counts");
    }
    auto remap_prefix = [&](const std::string& prefix) {
        if (prefix == "-") return std::string();
        std::string out;
        std::size_t pos = 0;
        while (pos <= prefix.size()) {
            auto comma = prefix.find(',', pos);
            auto token = prefix.substr(pos, comma == std::string::npos ? std::string::npos
                                                                       : comma - pos);
            std::size_t old_id = std::stoul(token);
            if (old_id >= remap.size()) throw fail("prefix id out of range");
            if (!out.empty()) out += ',';
            out += std::to_string(remap[old_id]);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return out;
    };
    for (std::size_t i = 0; i < n_counts; ++i) {
        std::istringstream ss(next_line());
        std::string tag, word, prefix, sym_text;
        std::uint64_t count = 0;
        if (!(ss >> tag >> word >> prefix >> sym_text >> count) || tag != "count")
            throw fail("expected count row");
        std::uint32_t sym;
        if (sym_text == "STOP") {
            sym = stop;
        } else {
            std::size_t old_id = std::stoul(sym_text);
            if (old_id >= remap.size()) throw fail("next-step id out of range");
            sym = remap[old_id];
        }
        planner.counts_[CountPlanner::Key{word == "-" ? std::string() : word,
                                          remap_prefix(prefix), sym}] += count;
    }
    return planner;
}

std::vector<RelationPath> llm_generate_plans(GenerationClient& client,
                                             const Vocabulary& vocab,
                                             const std::string& question,
                                             std::size_t k) {
    GenerationRequest request;
    request.prompt = planning_prompt(question);
    request.num_completions = static_cast<int>(k);
    request.max_new_tokens = 128;
    request.temperature = 0.0;

    std::vector<RelationPath> plans;
    std::set<std::vector<RelationId>> seen;
    for (const std::string& completion : client.generate(request)) {
        RelationPath plan;
        try {
            plan = parse_plan(trim_view(completion), vocab);
        } catch (const ParseError&) {
            continue;  // unparseable completions are dropped
        }
        if (seen.insert(plan.relations).second) plans.push_back(std::move(plan));
    }
    return plans;
}

}  // namespace kgr
