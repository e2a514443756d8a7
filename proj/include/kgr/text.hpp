#pragma once

#include <set>
#include <string>
#include <string_view>

namespace kgr {

// Trim, lowercase, collapse internal whitespace runs to single spaces.
// Shared by the reasoners and the evaluator so both agree on answer equality.
std::string normalize_answer(std::string_view text);

// Lowercase alphanumeric words of a question minus a fixed stop-word list.
// Feature set for the count planner.
std::set<std::string> question_words(std::string_view question);

std::string_view trim_view(std::string_view s);

}  // namespace kgr
