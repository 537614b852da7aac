#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <ltd/ltd.hpp>

namespace {

/// Command-line mistakes that CLI11 cannot catch itself (exit status 1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_stream(std::istream& in) {
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

/// Invocations touch every referenced file before any work starts, so a bad
/// path never aborts a half-finished run.
void require_readable(const std::string& path) {
  std::ifstream probe(path);
  if (!probe.good()) throw std::runtime_error(path + ": cannot open file");
}

ltd::Ontology load_ontology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error(path + ": cannot open file");
  try {
    return ltd::load_ontology(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

ltd::Table load_table_file(const std::string& path, const std::string& name, char delimiter) {
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error(path + ": cannot open file");
  try {
    return ltd::load_table(in, name, delimiter);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

/// The table takes its name from the file stem, first letter capitalized:
/// diagnosis.csv is presented as "Diagnosis".
std::string table_name_from_path(const std::string& path) {
  std::string stem = std::filesystem::path(path).stem().string();
  if (stem.empty()) return "Table";
  for (char& c : stem) {
    if (std::isalpha(static_cast<unsigned char>(c)) != 0) {
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      break;
    }
  }
  return stem;
}

/// Splits "file.csv:Column" at the last colon. An explicitly passed column
/// wins, freeing the colon for filenames that contain one.
std::pair<std::string, std::string> split_table_spec(const std::string& spec,
                                                     const std::string& explicit_column,
                                                     const std::string& flag) {
  if (!explicit_column.empty()) return {spec, explicit_column};
  auto colon = spec.rfind(':');
  if (colon == std::string::npos || colon + 1 == spec.size())
    throw UsageError(flag + ": expected FILE:COLUMN (or pass " + flag + "-column)");
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

char parse_delimiter(const std::string& value) {
  if (value == "\\t" || value == "tab") return '\t';
  if (value.size() != 1) throw UsageError("--delimiter: expected a single character");
  return value[0];
}

/// Writes data to the output path, or to standard output when none is given.
void write_output(const std::string& out_path, const std::string& data) {
  if (out_path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out.good()) throw std::runtime_error(out_path + ": cannot open file for writing");
  out << data;
  if (!out.good()) throw std::runtime_error(out_path + ": write failed");
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t cost = (a[i - 1] == b[j - 1]) ? 0 : 1;
      std::size_t next = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = row[j];
      row[j] = next;
    }
  }
  return row[b.size()];
}

/// Resolves a command-line concept reference: exact id first, then a full
/// label or synonym through the lexicon. Unresolved references abort with
/// the closest-looking ids as a hint (exit status 2).
ltd::ConceptId resolve_concept(const ltd::Ontology& o, const std::string& text) {
  if (o.contains(text)) return text;
  auto lex = ltd::build_lexicon(o);
  auto tokens = ltd::normalize(text);
  if (!tokens.empty()) {
    auto it = lex.terms.find(ltd::detail::join(tokens, " "));
    if (it != lex.terms.end()) return it->second.concept_id;
  }

  std::vector<std::string> ids;
  for (const auto& c : o.concepts) ids.push_back(c.id);
  std::sort(ids.begin(), ids.end(), [&](const std::string& x, const std::string& y) {
    auto dx = edit_distance(text, x), dy = edit_distance(text, y);
    if (dx != dy) return dx < dy;
    return x < y;
  });
  if (ids.size() > 3) ids.resize(3);
  throw std::runtime_error("unknown concept \"" + text +
                           "\" (nearest: " + ltd::detail::join(ids, ", ") + ")");
}

// ---------------------------------------------------------------------------

struct DiscoverOptions {
  std::string left_spec, right_spec, left_column, right_column;
  std::string ontology_path, projection, out_path, delimiter = ",";
  std::size_t max_depth = 4;
  ltd::PredicateMode predicate_mode = ltd::PredicateMode::qualifier;
  unsigned threads = 1;
  bool provenance = false;
};

int run_discover(const DiscoverOptions& opt) {
  auto [left_path, left_column] = split_table_spec(opt.left_spec, opt.left_column, "--left");
  auto [right_path, right_column] = split_table_spec(opt.right_spec, opt.right_column, "--right");
  char delimiter = parse_delimiter(opt.delimiter);

  require_readable(opt.ontology_path);
  require_readable(left_path);
  require_readable(right_path);

  auto o = load_ontology_file(opt.ontology_path);
  auto left = load_table_file(left_path, table_name_from_path(left_path), delimiter);
  auto right = load_table_file(right_path, table_name_from_path(right_path), delimiter);

  ltd::DiscoveryRequest req;
  req.left_column = left_column;
  req.right_column = right_column;
  if (!opt.projection.empty()) req.projection = opt.projection;
  req.max_depth = opt.max_depth;
  req.predicate_mode = opt.predicate_mode;
  req.threads = opt.threads;

  ltd::DiscoveryStats stats;
  auto lt = ltd::discover(req, left, right, o, &stats);

  write_output(opt.out_path, ltd::serialize_table(ltd::latent_to_table(lt, opt.provenance),
                                                  delimiter));
  if (lt.rows.empty()) std::cerr << "warning: latent table is empty\n";
  std::cerr << "rows=" << stats.rows_emitted << " pairs=" << stats.pairs_examined
            << " paths=" << stats.paths_found << "\n";
  return 0;
}

struct ClosureOptions {
  std::string ontology_path, from, to;
  std::size_t max_depth = 4;
  bool all = false;
  bool forward = false;
};

int run_closure(const ClosureOptions& opt) {
  auto o = load_ontology_file(opt.ontology_path);
  auto traversal = opt.forward ? ltd::Traversal::forward : ltd::Traversal::undirected;
  auto from = resolve_concept(o, opt.from);

  std::ostringstream out;
  if (opt.to.empty()) {
    for (const auto& [id, depth] : ltd::reachable_depths(o, from, opt.max_depth, traversal))
      out << id << " (depth " << depth << ")\n";
  } else {
    auto to = resolve_concept(o, opt.to);
    auto render = [&](const ltd::SemanticPath& p) {
      out << ltd::detail::join(p.nodes, " -> ") << " (depth " << p.depth() << ")\n";
    };
    if (opt.all) {
      auto paths = ltd::all_paths(o, from, to, opt.max_depth, traversal);
      for (const auto& p : paths) render(p);
      if (paths.empty())
        out << "no path from " << from << " to " << to << " within depth " << opt.max_depth
            << "\n";
    } else if (auto p = ltd::shortest_path(o, from, to, opt.max_depth, traversal)) {
      render(*p);
    } else {
      out << "no path from " << from << " to " << to << " within depth " << opt.max_depth << "\n";
    }
  }
  std::cout << out.str();
  return 0;
}

struct MatchOptions {
  std::string ontology_path, term;
};

int run_match(const MatchOptions& opt) {
  auto o = load_ontology_file(opt.ontology_path);
  auto lex = ltd::build_lexicon(o);
  auto m = ltd::match_cell(lex, opt.term);
  if (!m) {
    std::cout << "no match\n";
    return 0;
  }
  std::cout << "concept: " << m->concept_id << "\n";
  std::cout << "label: " << o.label_of(m->concept_id) << "\n";
  std::cout << "kind: " << (m->kind == ltd::MatchKind::label ? "label" : "synonym") << "\n";
  if (!m->qualifier.empty())
    std::cout << "qualifier: " << ltd::detail::join(m->qualifier, " ") << "\n";
  return 0;
}

struct EmitRdfOptions {
  std::string input_path, base_iri = "http://example.org/ltd/", out_path, delimiter = ",";
  bool literal_objects = false;
};

int run_emit_rdf(const EmitRdfOptions& opt) {
  char delimiter = parse_delimiter(opt.delimiter);

  ltd::Table table;
  if (opt.input_path == "-") {
    try {
      table = ltd::load_table(read_stream(std::cin), "latent", delimiter);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("standard input: ") + e.what());
    }
  } else {
    table = load_table_file(opt.input_path, "latent", delimiter);
  }

  const std::string where = opt.input_path == "-" ? "standard input" : opt.input_path;
  if (table.columns.size() < 3)
    throw std::runtime_error(where + ": a latent table needs at least 3 columns " +
                             "(subject, predicate, object), got " +
                             std::to_string(table.columns.size()));

  ltd::LatentTable lt;
  lt.headers = {table.columns[0], table.columns[1], table.columns[2]};
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& cells = table.rows[r];
    for (std::size_t c = 0; c < 3; ++c)
      if (cells[c].empty())
        throw std::runtime_error(where + ": row " + std::to_string(r + 1) + ": empty " +
                                 std::array<const char*, 3>{"subject", "predicate",
                                                            "object"}[c] +
                                 " cell");
    ltd::LatentRow row;
    row.subject = cells[0];
    row.predicate = cells[1];
    row.object = cells[2];
    lt.rows.push_back(std::move(row));
  }

  ltd::MintingPolicy policy{ltd::Iri(opt.base_iri), opt.literal_objects};
  for (const auto& warning : ltd::slug_collision_warnings(lt, policy))
    std::cerr << "warning: " << warning << "\n";

  auto triples = ltd::to_triples(lt, policy);
  write_output(opt.out_path, ltd::serialize_ntriples(triples));
  std::cerr << "triples=" << triples.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string version_line = std::string("ltd ") + ltd::version;

  CLI::App app{"Latent table discovery: route attribute values of two unrelated "
               "tables through a domain ontology to surface the relation between them."};
  app.set_version_flag("--version", version_line);
  app.require_subcommand(1);

  DiscoverOptions dopt;
  auto* discover = app.add_subcommand(
      "discover", "Discover the latent table connecting two delimited files");
  discover->set_version_flag("--version", version_line);
  discover->add_option("--left", dopt.left_spec, "Left table as FILE:COLUMN")->required();
  discover->add_option("--right", dopt.right_spec, "Right table as FILE:COLUMN")->required();
  discover->add_option("--left-column", dopt.left_column,
                       "Left column name (when the filename contains a colon)");
  discover->add_option("--right-column", dopt.right_column, "Right column name");
  discover->add_option("--ontology", dopt.ontology_path, "Ontology document")->required();
  discover->add_option("--project", dopt.projection,
                       "Right-table column to show as the object");
  discover->add_option("--out", dopt.out_path, "Write the latent table here (default: stdout)");
  discover->add_option("--max-depth", dopt.max_depth, "Longest allowed ontology path")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  discover
      ->add_option("--predicate-mode", dopt.predicate_mode,
                   "Middle column source: qualifier tokens or connecting concepts")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, ltd::PredicateMode>{
              {"qualifier", ltd::PredicateMode::qualifier}, {"path", ltd::PredicateMode::path}},
          CLI::ignore_case))
      ->default_str("qualifier");
  discover->add_option("--threads", dopt.threads, "Worker threads for the pair scan")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  discover->add_option("--delimiter", dopt.delimiter, "Field delimiter (a character, or \\t)")
      ->capture_default_str();
  discover->add_flag("--provenance", dopt.provenance,
                     "Append path and source_rows columns to the output");

  ClosureOptions copt;
  auto* closure = app.add_subcommand(
      "closure", "Explore the semantic transitive closure of a concept");
  closure->set_version_flag("--version", version_line);
  closure->add_option("--ontology", copt.ontology_path, "Ontology document")->required();
  closure->add_option("--from", copt.from, "Start concept (id, label or synonym)")->required();
  closure->add_option("--to", copt.to, "Target concept; omit to list everything reachable");
  closure->add_option("--max-depth", copt.max_depth, "Longest allowed path")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  closure->add_flag("--all", copt.all, "List every simple path, not just the shortest");
  closure->add_flag("--forward", copt.forward, "Follow links in their stored direction only");

  MatchOptions mopt;
  auto* match = app.add_subcommand("match", "Resolve a text term against the ontology lexicon");
  match->set_version_flag("--version", version_line);
  match->add_option("--ontology", mopt.ontology_path, "Ontology document")->required();
  match->add_option("--term", mopt.term, "Text to resolve")->required();

  EmitRdfOptions eopt;
  auto* emit = app.add_subcommand(
      "emit-rdf", "Convert a latent table file to RDF N-Triples");
  emit->set_version_flag("--version", version_line);
  emit->add_option("input", eopt.input_path, "Latent table file, or - for stdin")->required();
  emit->add_option("--base", eopt.base_iri, "Base IRI for minted identifiers")
      ->envname("LTD_BASE_IRI")
      ->capture_default_str();
  emit->add_option("--out", eopt.out_path, "Write N-Triples here (default: stdout)");
  emit->add_option("--delimiter", eopt.delimiter, "Field delimiter of the input table")
      ->capture_default_str();
  emit->add_flag("--literal-objects", eopt.literal_objects,
                 "Emit objects as plain literals instead of minted IRIs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*discover) return run_discover(dopt);
    if (*closure) return run_closure(copt);
    if (*match) return run_match(mopt);
    if (*emit) return run_emit_rdf(eopt);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
