#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace ltd {

namespace detail {

inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
inline bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
inline char to_lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = to_lower(c);
  return out;
}

template <typename Range>
std::string join(const Range& parts, std::string_view sep) {
  std::string out;
  bool first = true;
  for (const auto& p : parts) {
    if (!first) out += sep;
    out += p;
    first = false;
  }
  return out;
}

/// One whitespace token of a cell, before and after normalization.
/// raw keeps the original casing (edge punctuation already stripped).
struct CellToken {
  std::string raw;
  std::string norm;
};

/// Splits on whitespace, strips leading/trailing punctuation per token and
/// lowercases. Tokens that are pure punctuation disappear. Non-ASCII bytes
/// pass through untouched.
inline std::vector<CellToken> tokenize(std::string_view text) {
  std::vector<CellToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i == start) break;
    std::size_t b = start, e = i;
    while (b < e && is_punct(text[b])) ++b;
    while (e > b && is_punct(text[e - 1])) --e;
    if (b == e) continue;
    CellToken tok;
    tok.raw.assign(text.substr(b, e - b));
    tok.norm = lower(tok.raw);
    out.push_back(std::move(tok));
  }
  return out;
}

}  // namespace detail

/// Canonical token form used for all lexicon matching: lowercase,
/// whitespace-split, edge punctuation stripped, intra-token hyphens kept.
inline std::vector<std::string> normalize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& tok : detail::tokenize(text)) out.push_back(std::move(tok.norm));
  return out;
}

}  // namespace ltd
