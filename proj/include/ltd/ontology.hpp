#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <istream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ltd/error.hpp"
#include "ltd/text.hpp"

namespace ltd {

using ConceptId = std::string;

/// Concept ids are single tokens: one or more of [A-Za-z0-9_-].
inline bool valid_concept_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-';
  });
}

struct Concept {
  ConceptId id;
  std::string label;
  std::vector<std::string> synonyms;

  friend bool operator==(const Concept&, const Concept&) = default;
};

/// Stored directed as written in the document; traversal direction is a
/// per-query choice. label is empty when the document gives none.
struct Link {
  ConceptId source;
  ConceptId target;
  std::string label;

  friend bool operator==(const Link&, const Link&) = default;
};

/// The domain graph: a concept set with synonym lexicons plus a link set.
/// Immutable after load; every query below is pure.
struct Ontology {
  std::vector<Concept> concepts;  // document order, kept for deterministic reporting
  std::vector<Link> links;

  const Concept* find(const ConceptId& id) const {
    for (const auto& c : concepts)
      if (c.id == id) return &c;
    return nullptr;
  }

  bool contains(const ConceptId& id) const { return find(id) != nullptr; }

  const std::string& label_of(const ConceptId& id) const {
    const Concept* c = find(id);
    if (!c) throw std::invalid_argument("unknown concept \"" + id + "\"");
    return c->label;
  }

  /// Stored-direction lookup; nullptr when (source, target) is not a link.
  const Link* find_link(const ConceptId& source, const ConceptId& target) const {
    for (const auto& l : links)
      if (l.source == source && l.target == target) return &l;
    return nullptr;
  }
};

/// A simple path through the ontology; nodes are pairwise distinct and every
/// consecutive pair is a link.
struct SemanticPath {
  std::vector<ConceptId> nodes;  // length >= 1

  std::size_t depth() const { return nodes.empty() ? 0 : nodes.size() - 1; }

  friend bool operator==(const SemanticPath&, const SemanticPath&) = default;
};

enum class Traversal {
  undirected,  // default: links usable in either direction
  forward,     // restrict to stored direction
};

// ---------------------------------------------------------------------------
// Validation

/// Returns every invariant violation, one description each; empty means valid.
inline std::vector<std::string> validate(const Ontology& o) {
  std::vector<std::string> out;

  std::set<ConceptId> ids;
  for (const auto& c : o.concepts) {
    if (!valid_concept_id(c.id))
      out.push_back("concept id \"" + c.id + "\" is not a valid id (want [A-Za-z0-9_-]+)");
    if (!ids.insert(c.id).second) out.push_back("duplicate concept id \"" + c.id + "\"");
    if (c.label.empty()) out.push_back("concept \"" + c.id + "\" has an empty label");
  }

  // Lexicon injectivity: normalized labels and synonyms must be distinct,
  // both within one concept and across the whole ontology.
  std::map<std::string, std::vector<ConceptId>> terms;
  for (const auto& c : o.concepts) {
    std::set<std::string> own;
    auto add = [&](const std::string& text, const char* what) {
      auto toks = normalize(text);
      if (toks.empty()) {
        if (!text.empty() || std::string_view(what) == "synonym")
          out.push_back("concept \"" + c.id + "\": " + what + " \"" + text +
                        "\" normalizes to nothing");
        return;
      }
      std::string key = detail::join(toks, " ");
      if (!own.insert(key).second)
        out.push_back("concept \"" + c.id + "\": term \"" + key +
                      "\" appears more than once (label/synonym overlap)");
      terms[key].push_back(c.id);
    };
    add(c.label, "label");
    for (const auto& s : c.synonyms) add(s, "synonym");
  }
  for (const auto& [term, owners] : terms) {
    std::set<ConceptId> distinct(owners.begin(), owners.end());
    if (distinct.size() > 1)
      out.push_back("lexicon collision: term \"" + term + "\" belongs to concepts " +
                    detail::join(distinct, ", "));
  }

  std::set<std::pair<ConceptId, ConceptId>> seen_links;
  for (const auto& l : o.links) {
    if (ids.find(l.source) == ids.end())
      out.push_back("link " + l.source + " -> " + l.target + ": unknown source \"" + l.source +
                    "\"");
    if (ids.find(l.target) == ids.end())
      out.push_back("link " + l.source + " -> " + l.target + ": unknown target \"" + l.target +
                    "\"");
    if (l.source == l.target)
      out.push_back("link " + l.source + " -> " + l.target + ": self-loops are not allowed");
    if (!seen_links.insert({l.source, l.target}).second)
      out.push_back("duplicate link " + l.source + " -> " + l.target);
  }

  return out;
}

// ---------------------------------------------------------------------------
// Loading

namespace detail {

inline std::pair<std::size_t, std::size_t> offset_to_position(std::string_view text,
                                                              std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> known,
                                const std::string& where) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : known)
      if (item.key() == k) ok = true;
    if (!ok) throw ParseError("unknown key \"" + item.key() + "\" in " + where);
  }
}

inline std::string require_string(const nlohmann::json& obj, const char* key,
                                  const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing required key \"" + key + "\"");
  if (!it->is_string()) throw ParseError(where + ": key \"" + std::string(key) + "\" must be a string");
  return it->get<std::string>();
}

}  // namespace detail

/// Parses an ontology document (JSON with top-level `concepts` and `links`)
/// and validates it. Throws ParseError for malformed documents and
/// ValidationError (listing every violation) for invalid graphs.
inline Ontology load_ontology(std::istream& in) {
  std::string data(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>{});
  if (data.size() >= 3 && data.compare(0, 3, "\xEF\xBB\xBF") == 0) data.erase(0, 3);

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(data);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = detail::offset_to_position(data, e.byte);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                         e.what(),
                     line, col);
  }

  if (!doc.is_object()) throw ParseError("ontology document must be an object");
  detail::reject_unknown_keys(doc, {"concepts", "links"}, "ontology document");

  Ontology o;
  if (doc.contains("concepts")) {
    const auto& cs = doc["concepts"];
    if (!cs.is_array()) throw ParseError("\"concepts\" must be an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto& c = cs[i];
      std::string where = "concept " + std::to_string(i + 1);
      if (!c.is_object()) throw ParseError(where + ": must be an object");
      detail::reject_unknown_keys(c, {"id", "label", "synonyms"}, where);
      Concept node;
      node.id = detail::require_string(c, "id", where);
      node.label = detail::require_string(c, "label", where);
      if (c.contains("synonyms")) {
        if (!c["synonyms"].is_array())
          throw ParseError(where + ": key \"synonyms\" must be an array of strings");
        for (const auto& s : c["synonyms"]) {
          if (!s.is_string())
            throw ParseError(where + ": key \"synonyms\" must be an array of strings");
          node.synonyms.push_back(s.get<std::string>());
        }
      }
      o.concepts.push_back(std::move(node));
    }
  }
  if (doc.contains("links")) {
    const auto& ls = doc["links"];
    if (!ls.is_array()) throw ParseError("\"links\" must be an array");
    for (std::size_t i = 0; i < ls.size(); ++i) {
      const auto& l = ls[i];
      std::string where = "link " + std::to_string(i + 1);
      if (!l.is_object()) throw ParseError(where + ": must be an object");
      detail::reject_unknown_keys(l, {"source", "target", "label"}, where);
      Link link;
      link.source = detail::require_string(l, "source", where);
      link.target = detail::require_string(l, "target", where);
      if (l.contains("label")) {
        if (!l["label"].is_string()) throw ParseError(where + ": key \"label\" must be a string");
        link.label = l["label"].get<std::string>();
      }
      o.links.push_back(std::move(link));
    }
  }

  if (auto violations = validate(o); !violations.empty()) throw ValidationError(violations);
  return o;
}

// ---------------------------------------------------------------------------
// Path queries

namespace detail {

using AdjacencyMap = std::map<ConceptId, std::vector<ConceptId>>;

inline AdjacencyMap adjacency(const Ontology& o, Traversal t, bool reversed = false) {
  AdjacencyMap adj;
  for (const auto& c : o.concepts) adj[c.id];
  for (const auto& l : o.links) {
    adj[l.source];
    adj[l.target];
    if (t == Traversal::undirected) {
      adj[l.source].push_back(l.target);
      adj[l.target].push_back(l.source);
    } else if (reversed) {
      adj[l.target].push_back(l.source);
    } else {
      adj[l.source].push_back(l.target);
    }
  }
  for (auto& [id, neighbors] : adj) {
    std::sort(neighbors.begin(), neighbors.end());
    neighbors.erase(std::unique(neighbors.begin(), neighbors.end()), neighbors.end());
  }
  return adj;
}

inline std::map<ConceptId, std::size_t> bfs_depths(const AdjacencyMap& adj, const ConceptId& start,
                                                   std::size_t max_depth) {
  std::map<ConceptId, std::size_t> depth{{start, 0}};
  std::vector<ConceptId> frontier{start};
  for (std::size_t d = 1; d <= max_depth && !frontier.empty(); ++d) {
    std::vector<ConceptId> next;
    for (const auto& u : frontier)
      for (const auto& v : adj.at(u))
        if (depth.emplace(v, d).second) next.push_back(v);
    frontier = std::move(next);
  }
  return depth;
}

inline void require_concept(const Ontology& o, const ConceptId& id) {
  if (!o.contains(id)) throw std::invalid_argument("unknown concept \"" + id + "\"");
}

inline void require_positive_depth(std::size_t max_depth) {
  if (max_depth == 0) throw std::invalid_argument("max_depth must be at least 1");
}

}  // namespace detail

/// Minimum-edge-count simple path from `from` to `to` of depth <= max_depth,
/// or nullopt. Among equal-depth paths the lexicographically least node-id
/// sequence wins, so results are reproducible.
inline std::optional<SemanticPath> shortest_path(const Ontology& o, const ConceptId& from,
                                                 const ConceptId& to, std::size_t max_depth,
                                                 Traversal t = Traversal::undirected) {
  detail::require_concept(o, from);
  detail::require_concept(o, to);
  detail::require_positive_depth(max_depth);
  if (from == to) return SemanticPath{{from}};

  auto forward = detail::adjacency(o, t);
  auto backward = (t == Traversal::undirected) ? forward : detail::adjacency(o, t, true);
  auto dist_to = detail::bfs_depths(backward, to, max_depth);

  auto it = dist_to.find(from);
  if (it == dist_to.end() || it->second > max_depth) return std::nullopt;

  // Greedy reconstruction: at each step take the least neighbor id that is
  // one hop closer to the target. Neighbor lists are sorted, so the first
  // admissible one is the least.
  SemanticPath path{{from}};
  ConceptId cur = from;
  std::size_t remaining = it->second;
  while (cur != to) {
    for (const auto& n : forward.at(cur)) {
      auto dn = dist_to.find(n);
      if (dn != dist_to.end() && dn->second + 1 == remaining) {
        path.nodes.push_back(n);
        cur = n;
        --remaining;
        break;
      }
    }
  }
  return path;
}

/// Every simple path of depth <= max_depth, sorted by (depth, node sequence).
/// Includes the depth-0 path when from == to.
inline std::vector<SemanticPath> all_paths(const Ontology& o, const ConceptId& from,
                                           const ConceptId& to, std::size_t max_depth,
                                           Traversal t = Traversal::undirected) {
  detail::require_concept(o, from);
  detail::require_concept(o, to);
  detail::require_positive_depth(max_depth);

  auto adj = detail::adjacency(o, t);
  std::vector<SemanticPath> out;
  std::vector<ConceptId> path{from};
  std::set<ConceptId> on_path{from};

  std::function<void(const ConceptId&)> dfs = [&](const ConceptId& cur) {
    if (cur == to) {
      // A simple path cannot pass through its endpoint, so stop extending.
      out.push_back(SemanticPath{path});
      return;
    }
    if (path.size() - 1 == max_depth) return;
    for (const auto& n : adj.at(cur)) {
      if (on_path.count(n)) continue;
      path.push_back(n);
      on_path.insert(n);
      dfs(n);
      on_path.erase(n);
      path.pop_back();
    }
  };
  dfs(from);

  std::sort(out.begin(), out.end(), [](const SemanticPath& a, const SemanticPath& b) {
    if (a.depth() != b.depth()) return a.depth() < b.depth();
    return a.nodes < b.nodes;
  });
  return out;
}

/// Concepts reachable within max_depth hops paired with their hop distance,
/// sorted by (depth, id). Includes `from` at depth 0.
inline std::vector<std::pair<ConceptId, std::size_t>> reachable_depths(
    const Ontology& o, const ConceptId& from, std::size_t max_depth,
    Traversal t = Traversal::undirected) {
  detail::require_concept(o, from);
  auto depths = detail::bfs_depths(detail::adjacency(o, t), from, max_depth);
  std::vector<std::pair<ConceptId, std::size_t>> out(depths.begin(), depths.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  return out;
}

/// The semantic transitive closure of `from`, bounded by max_depth.
inline std::set<ConceptId> reachable_set(const Ontology& o, const ConceptId& from,
                                         std::size_t max_depth,
                                         Traversal t = Traversal::undirected) {
  std::set<ConceptId> out;
  for (auto& [id, depth] : reachable_depths(o, from, max_depth, t)) out.insert(id);
  return out;
}

}  // namespace ltd
