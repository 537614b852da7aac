#pragma once

// Seeded input generators for the property suites. All randomness flows from
// the caller's engine, so any failure replays from its seed.

#include <cctype>
#include <cstddef>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <ltd/ltd.hpp>

namespace gen {

using Rng = std::mt19937;

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
  return std::bernoulli_distribution(p)(rng);
}

inline const std::vector<std::string>& word_pool() {
  static const std::vector<std::string> words{
      "alpha", "bravo", "citrus", "delta", "ember",  "flint",
      "gale",  "harbor", "iris",  "jasper", "krait", "lumen",
  };
  return words;
}

/// Random valid ontology: distinct ids and terms by construction, links with
/// no self loops and no repeated (source, target) pairs. Always passes
/// ltd::validate.
inline ltd::Ontology random_ontology(Rng& rng, std::size_t max_concepts = 12,
                                     std::size_t max_links = 20) {
  ltd::Ontology o;
  const std::size_t n = pick(rng, 1, max_concepts);
  for (std::size_t i = 0; i < n; ++i) {
    ltd::Concept c;
    c.id = "n" + std::to_string(i);
    std::string word = word_pool()[i % word_pool().size()];
    if (chance(rng, 0.5)) word[0] = static_cast<char>(std::toupper(word[0]));
    // Two-token labels exercise multi-token matching; the index keeps every
    // normalized term unique across the ontology.
    c.label = chance(rng, 0.4) ? word + " " + std::to_string(i) : word + std::to_string(i);
    std::size_t synonyms = pick(rng, 0, 2);
    for (std::size_t s = 0; s < synonyms; ++s)
      c.synonyms.push_back("syn" + std::to_string(i) + "x" + std::to_string(s));
    o.concepts.push_back(std::move(c));
  }

  std::set<std::pair<std::string, std::string>> used;
  const std::size_t wanted = pick(rng, 0, max_links);
  for (std::size_t tries = 0; tries < wanted * 4 && used.size() < wanted; ++tries) {
    std::size_t a = pick(rng, 0, n - 1);
    std::size_t b = pick(rng, 0, n - 1);
    if (a == b) continue;
    ltd::Link l;
    l.source = o.concepts[a].id;
    l.target = o.concepts[b].id;
    if (!used.insert({l.source, l.target}).second) continue;
    if (chance(rng, 0.5)) l.label = "rel" + std::to_string(used.size());
    o.links.push_back(std::move(l));
  }
  return o;
}

/// Every matchable term of the ontology as written (labels and synonyms).
inline std::vector<std::string> all_terms(const ltd::Ontology& o) {
  std::vector<std::string> terms;
  for (const auto& c : o.concepts) {
    terms.push_back(c.label);
    for (const auto& s : c.synonyms) terms.push_back(s);
  }
  return terms;
}

/// Random cell text: junk, a bare term, or a term wrapped in qualifier and
/// noise tokens, sometimes with punctuation stuck to the edges.
inline std::string random_cell(Rng& rng, const std::vector<std::string>& terms) {
  switch (pick(rng, 0, 5)) {
    case 0: return "";
    case 1: return "noise " + std::to_string(pick(rng, 0, 99));
    case 2: return terms.empty() ? "blank" : terms[pick(rng, 0, terms.size() - 1)];
    case 3: {
      if (terms.empty()) return "plain";
      static const char* quals[] = {"High", "Low", "Very High", "acute"};
      return std::string(quals[pick(rng, 0, 3)]) + " " + terms[pick(rng, 0, terms.size() - 1)];
    }
    case 4: {
      if (terms.empty()) return "word.";
      return terms[pick(rng, 0, terms.size() - 1)] + " (observed)";
    }
    default: {
      if (terms.empty()) return "x y z";
      return "pre " + terms[pick(rng, 0, terms.size() - 1)] + " post";
    }
  }
}

/// Random 2-column table over the ontology's vocabulary.
inline ltd::Table random_table(Rng& rng, const ltd::Ontology& o, const std::string& name,
                               const std::string& col_a, const std::string& col_b,
                               std::size_t max_rows = 10) {
  auto terms = all_terms(o);
  ltd::Table t;
  t.name = name;
  t.columns = {col_a, col_b};
  const std::size_t rows = pick(rng, 0, max_rows);
  for (std::size_t r = 0; r < rows; ++r)
    t.rows.push_back({random_cell(rng, terms), random_cell(rng, terms)});
  return t;
}

/// Random literal text that stresses every escape the serializer knows.
inline std::string random_literal(Rng& rng) {
  static const std::vector<std::string> pieces{
      "plain", "sp ace", "q\"uote", "back\\slash", "new\nline", "tab\ttab", "ret\rurn",
      "caf\xC3\xA9", "", "dot.",
  };
  std::string out;
  const std::size_t parts = pick(rng, 1, 3);
  for (std::size_t i = 0; i < parts; ++i) out += pieces[pick(rng, 0, pieces.size() - 1)];
  return out;
}

/// Random triples within the supported subset: minted IRIs, literal objects
/// roughly half the time.
inline std::vector<ltd::RdfTriple> random_triples(Rng& rng, const ltd::MintingPolicy& policy,
                                                  std::size_t max_count = 12) {
  std::vector<ltd::RdfTriple> out;
  const std::size_t count = pick(rng, 0, max_count);
  for (std::size_t i = 0; i < count; ++i) {
    auto term = [&](const char* stem) {
      return std::string(stem) + " " + word_pool()[pick(rng, 0, word_pool().size() - 1)] + " " +
             std::to_string(pick(rng, 0, 9));
    };
    ltd::Iri s = ltd::mint_iri(policy, ltd::IriKind::Concept, term("subject"));
    ltd::Iri p = ltd::mint_iri(policy, ltd::IriKind::Predicate, term("pred"));
    if (chance(rng, 0.5))
      out.push_back({s, p, ltd::mint_iri(policy, ltd::IriKind::Entity, term("object"))});
    else
      out.push_back({s, p, random_literal(rng)});
  }
  return out;
}

}  // namespace gen
