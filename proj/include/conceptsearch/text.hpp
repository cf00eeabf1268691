#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace conceptsearch {

// Lowercase, Unicode NFC, trimmed. Returns an empty string for blank input.
std::string normalize_tag(std::string_view raw);

// Splits free text (titles, descriptions) into normalized word tokens.
// Word characters are ASCII alphanumerics and any non-ASCII code point.
std::vector<std::string> tokenize_text(std::string_view text);

// Splits a query string on whitespace and normalizes each token as a tag.
std::vector<std::string> tokenize_query(std::string_view query);

}  // namespace conceptsearch
