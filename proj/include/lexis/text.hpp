#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lexis::text {

// Lowercases ASCII, Latin-1, Latin Extended-A, basic Greek and Cyrillic.
// Everything else passes through unchanged.
std::string to_lower(std::string_view utf8);

// True when the token contains at least one digit and otherwise only digits and
// the group/decimal separators '.' and ','.
bool is_numeric(std::string_view token);

// True when the token contains no letter and no digit.
bool is_punctuation(std::string_view token);

// Word-boundary segmentation for raw text. Letter/digit runs form words,
// digit groups keep inner '.' and ',', an apostrophe between two letters ends
// the left word (Italian elision: "l'economia" -> "l'", "economia"), and every
// other non-space code point is a token of its own. Sentences end after
// '.', '!', '?', '…' and at blank lines.
std::vector<std::vector<std::string>> segment(std::string_view utf8);

}  // namespace lexis::text
