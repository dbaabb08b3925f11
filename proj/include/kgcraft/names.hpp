#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kgcraft {

// Canonical entity name: lowercase, underscores folded to single spaces,
// leading/trailing whitespace trimmed ("Iron_Ingot " -> "iron ingot").
std::string canonical_name(std::string_view raw);

// File-token form of a canonical name (spaces become underscores).
std::string name_token(std::string_view canonical);

// Maps a detector label to its base entity name: canonicalize, then strip a
// trailing " icon" ("log_icon" -> "log"). Non-icon labels pass through.
std::string icon_base_name(std::string_view label);

// Lowercased word tokens of a text, split on anything non-alphanumeric.
std::vector<std::string> word_tokens(std::string_view text);

// Naive singular form used by whole-phrase matching: drops one trailing 's'
// from words longer than three letters unless they end in "ss".
std::string strip_plural(std::string_view word);

}  // namespace kgcraft
