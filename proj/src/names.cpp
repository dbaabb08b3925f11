#include "kgcraft/names.hpp"

#include <algorithm>
#include <cctype>

namespace kgcraft {

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

char lower(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

}  // namespace

std::string canonical_name(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_sep = false;
    for (char c : raw) {
        if (c == '_' || std::isspace(static_cast<unsigned char>(c))) {
            pending_sep = !out.empty();
            continue;
        }
        if (pending_sep) {
            out.push_back(' ');
            pending_sep = false;
        }
        out.push_back(lower(c));
    }
    return out;
}

std::string name_token(std::string_view canonical) {
    std::string out(canonical);
    std::replace(out.begin(), out.end(), ' ', '_');
    return out;
}

std::string icon_base_name(std::string_view label) {
    std::string name = canonical_name(label);
    static constexpr std::string_view kSuffix = " icon";
    if (name.size() > kSuffix.size() &&
        name.compare(name.size() - kSuffix.size(), kSuffix.size(), kSuffix) == 0) {
        name.erase(name.size() - kSuffix.size());
    }
    return name;
}

std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        if (is_word_char(c)) {
            cur.push_back(lower(c));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::string strip_plural(std::string_view word) {
    std::string out(word);
    if (out.size() > 3 && out.back() == 's' && out[out.size() - 2] != 's') {
        out.pop_back();
    }
    return out;
}

}  // namespace kgcraft
