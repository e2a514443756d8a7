#include "kgr/text.hpp"

#include <array>
#include <cctype>

namespace kgr {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

char to_lower(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

bool is_alnum(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

constexpr std::array kStopWords = {
    "a",     "an",   "and",  "are",  "as",    "at",   "be",    "been",
    "being", "by",   "did",  "do",   "does",  "for",  "from",  "how",
    "in",    "is",   "it",   "its",  "of",    "on",   "or",    "s",
    "that",  "the",  "these", "this", "those", "to",   "was",   "were",
    "what",  "when", "where", "which", "who",  "whom", "whose", "why",
    "with",
};

bool is_stop_word(const std::string& w) {
    for (const char* s : kStopWords) {
        if (w == s) return true;
    }
    return false;
}

}  // namespace

std::string_view trim_view(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::string normalize_answer(std::string_view text) {
    std::string_view t = trim_view(text);
    std::string out;
    out.reserve(t.size());
    bool pending_space = false;
    for (char c : t) {
        if (is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        out.push_back(to_lower(c));
    }
    return out;
}

std::set<std::string> question_words(std::string_view question) {
    std::set<std::string> words;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty() && !is_stop_word(cur)) words.insert(cur);
        cur.clear();
    };
    for (char c : question) {
        if (is_alnum(c)) {
            cur.push_back(to_lower(c));
        } else {
            flush();
        }
    }
    flush();
    return words;
}

}  // namespace kgr
