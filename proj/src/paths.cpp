#include "kgr/paths.hpp"

#include "kgr/errors.hpp"

namespace kgr {

namespace {

std::vector<std::string_view> split(std::string_view text, std::string_view sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        auto next = text.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(text.substr(pos));
            return out;
        }
        out.push_back(text.substr(pos, next - pos));
        pos = next + sep.size();
    }
}

}  // namespace

std::string serialize_plan(const RelationPath& plan, const Vocabulary& vocab) {
    std::string out(kPlanStart);
    for (std::size_t i = 0; i < plan.relations.size(); ++i) {
        if (i > 0) {
            out += ' ';
            out += kPlanSep;
        }
        out += ' ';
        out += vocab.relation_name(plan.relations[i]);
    }
    out += ' ';
    out += kPlanEnd;
    return out;
}

RelationPath parse_plan(std::string_view text, const Vocabulary& vocab) {
    auto tokens = split(text, " ");
    if (tokens.size() < 2 || tokens.front() != kPlanStart)
        throw ParseError("plan: missing " + std::string(kPlanStart) + " sentinel");
    if (tokens.back() != kPlanEnd)
        throw ParseError("plan: missing " + std::string(kPlanEnd) + " sentinel");

    RelationPath plan;
    const std::size_t inner = tokens.size() - 2;
    if (inner == 0) return plan;  // `<PATH> </PATH>`
    if (inner % 2 == 0) throw ParseError("plan: dangling separator");

    for (std::size_t i = 1; i + 1 < tokens.size(); ++i) {
        const bool expect_name = (i % 2) == 1;
        std::string_view tok = tokens[i];
        if (expect_name) {
            if (tok.empty() || tok == kPlanSep)
                throw ParseError("plan: empty segment between separators");
            auto id = vocab.relation_id(tok);
            if (!id) throw ParseError("plan: unknown relation '" + std::string(tok) + "'");
            plan.relations.push_back(*id);
        } else if (tok != kPlanSep) {
            throw ParseError("plan: expected " + std::string(kPlanSep) + ", got '" +
                             std::string(tok) + "'");
        }
    }
    return plan;
}

std::string serialize_reasoning_path(const ReasoningPath& path, const Vocabulary& vocab) {
    std::string out = vocab.entity_name(path.entities.at(0));
    for (std::size_t i = 0; i < path.relations.size(); ++i) {
        out += kPathArrow;
        out += vocab.relation_name(path.relations[i]);
        out += kPathArrow;
        out += vocab.entity_name(path.entities[i + 1]);
    }
    return out;
}

ReasoningPath parse_reasoning_path(std::string_view text, const Vocabulary& vocab) {
    auto tokens = split(text, kPathArrow);
    if (tokens.size() % 2 == 0)
        throw ParseError("reasoning path: expected alternating entity/relation tokens");

    ReasoningPath path;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string_view tok = tokens[i];
        if (i % 2 == 0) {
            auto id = vocab.entity_id(tok);
            if (!id)
                throw ParseError("reasoning path: unknown entity '" + std::string(tok) + "'");
            path.entities.push_back(*id);
        } else {
            auto id = vocab.relation_id(tok);
            if (!id)
                throw ParseError("reasoning path: unknown relation '" + std::string(tok) + "'");
            path.relations.push_back(*id);
        }
    }
    return path;
}

}  // namespace kgr
