#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ltd/matcher.hpp"
#include "ltd/ontology.hpp"
#include "ltd/table.hpp"
#include "ltd/text.hpp"

namespace ltd {

enum class PredicateMode {
  qualifier,  // predicate = residual cell tokens of the left match ("High")
  path,       // predicate = the connecting concepts ("via Fever")
};

/// One discovery run: which columns to correspond, how the middle column is
/// derived, and the mandatory search bound.
struct DiscoveryRequest {
  std::string left_column;
  std::string right_column;
  std::optional<std::string> projection;  // display column on the right table
  std::size_t max_depth = 4;
  PredicateMode predicate_mode = PredicateMode::qualifier;
  unsigned threads = 1;  // <=1 serial; output is identical either way
};

/// A discovered (subject, predicate, object) statement with the connecting
/// path and the source rows that produced it.
struct LatentRow {
  std::string subject;    // concept label of the left match, never the raw cell
  std::string predicate;  // never empty
  std::string object;     // projection cell, or the right cell itself
  SemanticPath path;
  std::vector<std::pair<std::size_t, std::size_t>> provenance;  // 0-based (left, right) rows
  std::string left_table;
  std::string right_table;
};

/// The discovered relation. Rows are unique by (subject, predicate, object);
/// merged duplicates union their provenance.
struct LatentTable {
  std::array<std::string, 3> headers{"Subject", "Condition", "Object"};
  std::vector<LatentRow> rows;
};

struct DiscoveryStats {
  std::size_t pairs_examined = 0;  // matched-left x matched-right cell pairs
  std::size_t paths_found = 0;     // pairs connected within max_depth
  std::size_t rows_emitted = 0;    // after deduplication
};

namespace detail {

inline std::string path_predicate(const SemanticPath& path, const Ontology& o) {
  if (path.nodes.size() <= 2) return "direct";
  std::vector<std::string> labels;
  for (std::size_t i = 1; i + 1 < path.nodes.size(); ++i)
    labels.push_back(o.label_of(path.nodes[i]));
  return "via " + join(labels, ", ");
}

struct Candidate {
  std::size_t left_row;
  std::size_t right_row;
  LatentRow row;
};

}  // namespace detail

/// Runs latent table discovery: matches both columns through the lexicon,
/// connects each match pair by the shortest ontology path within max_depth,
/// and materializes the deduplicated relation in first-occurrence order of
/// the (left row, right row) scan. An empty result is a valid result.
inline LatentTable discover(const DiscoveryRequest& req, const Table& left, const Table& right,
                            const Ontology& o, DiscoveryStats* stats = nullptr) {
  if (req.max_depth == 0) throw std::invalid_argument("max_depth must be at least 1");

  Lexicon lex = build_lexicon(o);
  auto left_values = column_values(left, req.left_column);
  auto right_values = column_values(right, req.right_column);
  if (req.projection) right.column_index(*req.projection);  // fail fast, names the columns

  auto left_matches = match_column(lex, left_values);
  auto right_matches = match_column(lex, right_values);

  auto make_row = [&](const std::pair<std::size_t, ConceptMatch>& lm,
                      const std::pair<std::size_t, ConceptMatch>& rm,
                      SemanticPath path) {
    LatentRow row;
    row.subject = o.label_of(lm.second.concept_id);
    if (req.predicate_mode == PredicateMode::qualifier && !lm.second.qualifier_display.empty())
      row.predicate = detail::join(lm.second.qualifier_display, " ");
    else
      row.predicate = detail::path_predicate(path, o);
    row.object = req.projection ? project(right, rm.first, *req.projection)
                                : right_values[rm.first].second;
    row.path = std::move(path);
    row.left_table = left.name;
    row.right_table = right.name;
    return row;
  };

  // Fan out over left matches; each chunk reports its candidates in scan
  // order, so the merged list is independent of scheduling.
  auto scan_chunk = [&](std::size_t begin, std::size_t end) {
    std::pair<std::vector<detail::Candidate>, std::size_t> result;  // candidates, paths found
    for (std::size_t i = begin; i < end; ++i) {
      const auto& lm = left_matches[i];
      for (const auto& rm : right_matches) {
        auto path = shortest_path(o, lm.second.concept_id, rm.second.concept_id, req.max_depth);
        if (!path) continue;
        ++result.second;
        result.first.push_back({lm.first, rm.first, make_row(lm, rm, std::move(*path))});
      }
    }
    return result;
  };

  std::vector<detail::Candidate> candidates;
  std::size_t paths_found = 0;
  const std::size_t chunk_count =
      std::min<std::size_t>(req.threads > 1 ? req.threads : 1, std::max<std::size_t>(left_matches.size(), 1));
  if (chunk_count <= 1) {
    auto [cands, paths] = scan_chunk(0, left_matches.size());
    candidates = std::move(cands);
    paths_found = paths;
  } else {
    std::vector<std::future<std::pair<std::vector<detail::Candidate>, std::size_t>>> futures;
    const std::size_t per = (left_matches.size() + chunk_count - 1) / chunk_count;
    for (std::size_t begin = 0; begin < left_matches.size(); begin += per) {
      std::size_t end = std::min(begin + per, left_matches.size());
      futures.push_back(std::async(std::launch::async, scan_chunk, begin, end));
    }
    for (auto& f : futures) {
      auto [cands, paths] = f.get();
      candidates.insert(candidates.end(), std::make_move_iterator(cands.begin()),
                        std::make_move_iterator(cands.end()));
      paths_found += paths;
    }
  }

  // Serial dedup pass; first occurrence fixes row position and path.
  LatentTable lt;
  std::map<std::array<std::string, 3>, std::size_t> index;
  for (auto& cand : candidates) {
    std::array<std::string, 3> key{cand.row.subject, cand.row.predicate, cand.row.object};
    auto it = index.find(key);
    if (it == index.end()) {
      cand.row.provenance.push_back({cand.left_row, cand.right_row});
      index.emplace(std::move(key), lt.rows.size());
      lt.rows.push_back(std::move(cand.row));
    } else {
      lt.rows[it->second].provenance.push_back({cand.left_row, cand.right_row});
    }
  }

  lt.headers[0] = req.left_column;
  lt.headers[1] = "Condition";
  lt.headers[2] = req.projection ? right.name : req.right_column;

  if (stats) {
    stats->pairs_examined = left_matches.size() * right_matches.size();
    stats->paths_found = paths_found;
    stats->rows_emitted = lt.rows.size();
  }
  return lt;
}

namespace detail {

inline std::string row_list(std::vector<std::size_t> rows) {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::string out = rows.size() == 1 ? "row " : "rows ";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) out += (i + 1 == rows.size()) ? " and " : ", ";
    out += std::to_string(rows[i] + 1);  // 1-based for humans
  }
  return out;
}

}  // namespace detail

/// Renders the inference chain behind a row: one line per hop with the stored
/// link label and direction, then the source rows.
inline std::string explain(const LatentRow& row, const Ontology& o) {
  std::ostringstream out;
  const auto& nodes = row.path.nodes;
  if (nodes.size() == 1) out << o.label_of(nodes[0]) << " (no intermediate concepts)\n";
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const std::string& a = o.label_of(nodes[i]);
    const std::string& b = o.label_of(nodes[i + 1]);
    if (const Link* l = o.find_link(nodes[i], nodes[i + 1])) {
      out << a << (l->label.empty() ? " -> " : " -(" + l->label + ")-> ") << b << '\n';
    } else if (const Link* r = o.find_link(nodes[i + 1], nodes[i])) {
      out << a << (r->label.empty() ? " <- " : " <-(" + r->label + ")- ") << b << '\n';
    } else {
      out << a << " -> " << b << '\n';
    }
  }
  std::vector<std::size_t> left_rows, right_rows;
  for (const auto& [l, r] : row.provenance) {
    left_rows.push_back(l);
    right_rows.push_back(r);
  }
  out << "from " << row.left_table << " " << detail::row_list(left_rows) << ", "
      << row.right_table << " " << detail::row_list(right_rows) << '\n';
  return out.str();
}

/// Flattens the latent table into a plain 3-column Table (plus `path` and
/// `source_rows` columns when asked), ready for the table serializer.
inline Table latent_to_table(const LatentTable& lt, bool provenance_columns = false) {
  Table t;
  t.name = "latent";
  t.columns.assign(lt.headers.begin(), lt.headers.end());
  if (provenance_columns) {
    t.columns.push_back("path");
    t.columns.push_back("source_rows");
  }
  for (const auto& row : lt.rows) {
    std::vector<std::string> cells{row.subject, row.predicate, row.object};
    if (provenance_columns) {
      cells.push_back(detail::join(row.path.nodes, " -> "));
      std::string sources;
      for (const auto& [l, r] : row.provenance) {
        if (!sources.empty()) sources += ";";
        sources += std::to_string(l + 1) + ":" + std::to_string(r + 1);
      }
      cells.push_back(sources);
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace ltd
