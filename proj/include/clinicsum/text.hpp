#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace clinicsum {

// Lowercased alphanumeric word tokens; runs of non-alphanumerics separate
// tokens. Shared by BM25 indexing, ROUGE scoring, and the test embedder so
// all three see the same vocabulary.
std::vector<std::string> word_tokens(std::string_view text);

// Whitespace-separated tokens, punctuation kept attached.
std::vector<std::string> whitespace_tokens(std::string_view text);

std::string trim(std::string_view text);
std::string to_lower(std::string_view text);

// Turn texts joined with single spaces.
std::string join_with_spaces(const std::vector<std::string>& parts);

} // namespace clinicsum
