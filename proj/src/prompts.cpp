#include "kgr/prompts.hpp"

namespace kgr {

namespace {

constexpr std::string_view kPlanningInstruction =
    "Please generate a valid relation path that can be helpful for answering "
    "the following question: ";

constexpr std::string_view kReasoningInstruction =
    "Based on the reasoning paths, please answer the given question. Please "
    "keep the answer as simple as possible and return all the possible "
    "answers as a list.";

constexpr std::string_view kExplanationInstruction =
    "Based on the reasoning paths, please answer the given question and "
    "explain why.";

void append_block(std::string& out, std::string_view header, std::string_view body) {
    out += "\n\n";
    out += header;
    if (!body.empty()) {
        out += '\n';
        out += body;
    }
}

std::string join_lines(std::span<const std::string> lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i > 0) out += '\n';
        out += lines[i];
    }
    return out;
}

}  // namespace

std::string planning_prompt(std::string_view question) {
    std::string out(kPlanningInstruction);
    out += question;
    return out;
}

std::string reasoning_prompt(std::string_view question,
                             std::span<const std::string> reasoning_paths) {
    std::string out(kReasoningInstruction);
    append_block(out, "Reasoning Paths:", join_lines(reasoning_paths));
    append_block(out, "Question:", question);
    return out;
}

std::string explanation_prompt(std::string_view question,
                               std::span<const std::string> reasoning_paths,
                               std::string_view examples_block) {
    std::string out(kExplanationInstruction);
    append_block(out, "Here are some examples:", examples_block);
    append_block(out, "Reasoning Paths:", join_lines(reasoning_paths));
    append_block(out, "Question:", question);
    return out;
}

}  // namespace kgr
