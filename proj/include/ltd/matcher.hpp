#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ltd/error.hpp"
#include "ltd/ontology.hpp"
#include "ltd/text.hpp"

namespace ltd {

enum class MatchKind { label, synonym };

/// Thesaurus lookup from normalized term to concept. One entry per concept
/// label and per synonym; injective by ontology validation.
struct Lexicon {
  struct Entry {
    ConceptId concept_id;
    MatchKind kind = MatchKind::label;
    std::size_t token_count = 0;
  };

  std::map<std::string, Entry> terms;  // key: normalized tokens joined with one space
  std::size_t max_token_count = 0;

  std::size_t size() const { return terms.size(); }
};

/// Builds the term lookup for an ontology. Re-checks term injectivity and
/// throws ValidationError on any duplicate, mirroring ontology validation.
inline Lexicon build_lexicon(const Ontology& o) {
  Lexicon lex;
  std::vector<std::string> violations;
  auto add = [&](const std::string& text, const ConceptId& id, MatchKind kind) {
    auto tokens = normalize(text);
    if (tokens.empty()) {
      violations.push_back("term \"" + text + "\" of concept \"" + id +
                           "\" normalizes to nothing");
      return;
    }
    std::string key = detail::join(tokens, " ");
    auto [it, inserted] = lex.terms.emplace(key, Lexicon::Entry{id, kind, tokens.size()});
    if (!inserted)
      violations.push_back("lexicon collision: term \"" + key + "\" belongs to concepts \"" +
                           it->second.concept_id + "\" and \"" + id + "\"");
    else
      lex.max_token_count = std::max(lex.max_token_count, tokens.size());
  };
  for (const auto& c : o.concepts) {
    add(c.label, c.id, MatchKind::label);
    for (const auto& s : c.synonyms) add(s, c.id, MatchKind::synonym);
  }
  if (!violations.empty()) throw ValidationError(violations);
  return lex;
}

/// A cell resolved to a concept. matched span indexes into normalize(cell);
/// qualifier holds the residual tokens in cell order, both normalized and as
/// written (the written form feeds display surfaces like the Condition column).
struct ConceptMatch {
  ConceptId concept_id;
  MatchKind kind = MatchKind::label;
  std::size_t match_start = 0;
  std::size_t match_len = 0;
  std::vector<std::string> qualifier;
  std::vector<std::string> qualifier_display;
};

/// Resolves a cell against the lexicon: the longest term occurring as a
/// contiguous token subsequence wins; ties go to the earliest start, then the
/// least concept id. Returns nullopt when nothing matches.
inline std::optional<ConceptMatch> match_cell(const Lexicon& lex, std::string_view cell) {
  auto tokens = detail::tokenize(cell);
  if (tokens.empty() || lex.terms.empty()) return std::nullopt;

  const std::size_t n = tokens.size();
  for (std::size_t len = std::min(n, lex.max_token_count); len >= 1; --len) {
    for (std::size_t start = 0; start + len <= n; ++start) {
      std::string key;
      for (std::size_t i = start; i < start + len; ++i) {
        if (i > start) key += ' ';
        key += tokens[i].norm;
      }
      auto it = lex.terms.find(key);
      if (it == lex.terms.end()) continue;
      // Term injectivity means one key never names two concepts, so the
      // concept-id tie-break is settled here implicitly.
      ConceptMatch m;
      m.concept_id = it->second.concept_id;
      m.kind = it->second.kind;
      m.match_start = start;
      m.match_len = len;
      for (std::size_t i = 0; i < n; ++i) {
        if (i >= start && i < start + len) continue;
        m.qualifier.push_back(tokens[i].norm);
        m.qualifier_display.push_back(tokens[i].raw);
      }
      return m;
    }
  }
  return std::nullopt;
}

/// match_cell over a column; unmatched cells are omitted, order preserved.
inline std::vector<std::pair<std::size_t, ConceptMatch>> match_column(
    const Lexicon& lex, const std::vector<std::pair<std::size_t, std::string>>& values) {
  std::vector<std::pair<std::size_t, ConceptMatch>> out;
  for (const auto& [row, cell] : values)
    if (auto m = match_cell(lex, cell)) out.emplace_back(row, std::move(*m));
  return out;
}

}  // namespace ltd
