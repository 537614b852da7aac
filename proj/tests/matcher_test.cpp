#include <fstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <ltd/ltd.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace {

ltd::Ontology fixture_ontology() {
  std::ifstream in(std::string(LTD_FIXTURE_DIR) + "/body.onto");
  REQUIRE(in.good());
  return ltd::load_ontology(in);
}

}  // namespace

TEST_CASE("normalize lowercases, splits and strips edge punctuation", "[matcher]") {
  CHECK(ltd::normalize("High Blood Pressure") ==
        std::vector<std::string>{"high", "blood", "pressure"});
  CHECK(ltd::normalize("  (BP).  ") == std::vector<std::string>{"bp"});
  CHECK(ltd::normalize("p-AminoPhenol") == std::vector<std::string>{"p-aminophenol"});
  CHECK(ltd::normalize("!!! ...") == std::vector<std::string>{});
  CHECK(ltd::normalize("") == std::vector<std::string>{});
}

TEST_CASE("normalize is idempotent over its own output", "[matcher]") {
  for (const char* text : {"High Blood Pressure", "  (BP).  ", "p-AminoPhenol", "a  b\tc", ""}) {
    auto once = ltd::normalize(text);
    std::string rejoined;
    for (const auto& tok : once) {
      if (!rejoined.empty()) rejoined += ' ';
      rejoined += tok;
    }
    CHECK(ltd::normalize(rejoined) == once);
  }
}

TEST_CASE("lexicon indexes every label and synonym once", "[matcher]") {
  auto o = fixture_ontology();
  auto lex = ltd::build_lexicon(o);

  CHECK(lex.size() == 18);  // 13 labels + 5 synonyms
  CHECK(lex.max_token_count == 2);

  REQUIRE(lex.terms.count("blood pressure") == 1);
  CHECK(lex.terms.at("blood pressure").concept_id == "blood-pressure");
  CHECK(lex.terms.at("blood pressure").kind == ltd::MatchKind::label);
  CHECK(lex.terms.at("bp").kind == ltd::MatchKind::synonym);
  CHECK(lex.terms.at("glucose").concept_id == "blood-sugar");

  SECTION("colliding terms are rejected") {
    ltd::Ontology bad;
    bad.concepts.push_back({"a", "Same", {}});
    bad.concepts.push_back({"b", "same", {}});
    CHECK_THROWS_AS(ltd::build_lexicon(bad), ltd::ValidationError);
  }
}

TEST_CASE("match_cell resolves cells to concepts with residual qualifiers", "[matcher]") {
  auto o = fixture_ontology();
  auto lex = ltd::build_lexicon(o);

  SECTION("label match with a leading qualifier") {
    auto m = ltd::match_cell(lex, "High Blood Pressure");
    REQUIRE(m.has_value());
    CHECK(m->concept_id == "blood-pressure");
    CHECK(m->kind == ltd::MatchKind::label);
    CHECK(m->match_start == 1);
    CHECK(m->match_len == 2);
    CHECK(m->qualifier == std::vector<std::string>{"high"});
    CHECK(m->qualifier_display == std::vector<std::string>{"High"});
  }
  SECTION("synonym match") {
    auto m = ltd::match_cell(lex, "Glucose");
    REQUIRE(m.has_value());
    CHECK(m->concept_id == "blood-sugar");
    CHECK(m->kind == ltd::MatchKind::synonym);
    CHECK(m->qualifier.empty());
  }
  SECTION("case and edge punctuation are ignored") {
    auto m = ltd::match_cell(lex, "  TEMPERATURE! ");
    REQUIRE(m.has_value());
    CHECK(m->concept_id == "temperature");

    auto bp = ltd::match_cell(lex, "(BP)");
    REQUIRE(bp.has_value());
    CHECK(bp->concept_id == "blood-pressure");
  }
  SECTION("qualifier keeps cell order and original casing") {
    auto m = ltd::match_cell(lex, "Very HIGH Temperature (resting)");
    REQUIRE(m.has_value());
    CHECK(m->concept_id == "temperature");
    CHECK(m->qualifier == std::vector<std::string>{"very", "high", "resting"});
    CHECK(m->qualifier_display == std::vector<std::string>{"Very", "HIGH", "resting"});
  }
  SECTION("unmatched and empty cells yield nothing") {
    CHECK_FALSE(ltd::match_cell(lex, "xyzzy").has_value());
    CHECK_FALSE(ltd::match_cell(lex, "").has_value());
    CHECK_FALSE(ltd::match_cell(lex, "...").has_value());
  }
}

TEST_CASE("longer terms beat shorter ones, earlier starts beat later", "[matcher]") {
  ltd::Ontology o;
  o.concepts.push_back({"blood", "Blood", {}});
  o.concepts.push_back({"blood-pressure", "Blood Pressure", {}});
  o.concepts.push_back({"iron", "Iron", {}});
  auto lex = ltd::build_lexicon(o);

  SECTION("longest contiguous term wins") {
    auto m = ltd::match_cell(lex, "high blood pressure");
    REQUIRE(m.has_value());
    CHECK(m->concept_id == "blood-pressure");
    CHECK(m->match_len == 2);
  }
  SECTION("the shorter term still matches alone") {
    auto m = ltd::match_cell(lex, "blood count");
    REQUIRE(m.has_value());
    CHECK(m->concept_id == "blood");
  }
  SECTION("equal length resolves to the earliest start") {
    auto m = ltd::match_cell(lex, "iron and blood");
    REQUIRE(m.has_value());
    CHECK(m->concept_id == "iron");
    CHECK(m->match_start == 0);
  }
  SECTION("interrupted token runs do not match multi-token terms") {
    auto m = ltd::match_cell(lex, "blood high pressure");
    REQUIRE(m.has_value());
    CHECK(m->concept_id == "blood");  // "blood ... pressure" is not contiguous
  }
}

TEST_CASE("match_column keeps row indexes and drops unmatched cells", "[matcher]") {
  auto o = fixture_ontology();
  auto lex = ltd::build_lexicon(o);
  std::vector<std::pair<std::size_t, std::string>> column{
      {0, "High Temperature"}, {1, "no concepts here"}, {2, "Low Haemoglobin"}};

  auto matches = ltd::match_column(lex, column);
  REQUIRE(matches.size() == 2);
  CHECK(matches[0].first == 0);
  CHECK(matches[0].second.concept_id == "temperature");
  CHECK(matches[1].first == 2);
  CHECK(matches[1].second.concept_id == "haemoglobin");
}

TEST_CASE("matching agrees with the brute-force scan on random input", "[matcher][property]") {
  gen::Rng rng(Catch::getSeed());
  for (int round = 0; round < 120; ++round) {
    auto o = gen::random_ontology(rng);
    auto lex = ltd::build_lexicon(o);
    auto terms = gen::all_terms(o);

    std::vector<oracle::detail::TermEntry> entries;
    for (const auto& c : o.concepts) {
      auto add = [&](const std::string& text) {
        oracle::detail::TermEntry e;
        for (const auto& t : oracle::detail::split_cell(text)) e.tokens.push_back(t.folded);
        e.concept_id = c.id;
        entries.push_back(std::move(e));
      };
      add(c.label);
      for (const auto& s : c.synonyms) add(s);
    }

    for (int cell_round = 0; cell_round < 8; ++cell_round) {
      std::string cell = gen::random_cell(rng, terms);
      INFO("round " << round << " cell \"" << cell << "\"");
      auto lib = ltd::match_cell(lex, cell);
      auto ref = oracle::detail::scan_cell(entries, cell);
      REQUIRE(lib.has_value() == ref.has_value());
      if (lib) {
        CHECK(lib->concept_id == ref->concept_id);
        CHECK(lib->qualifier_display == ref->qualifier_shown);

        // Splicing the matched window back into the qualifier must rebuild
        // the normalized cell exactly.
        auto toks = ltd::normalize(cell);
        REQUIRE(lib->match_start + lib->match_len <= toks.size());
        std::vector<std::string> residual(toks.begin(),
                                          toks.begin() + static_cast<long>(lib->match_start));
        residual.insert(residual.end(),
                        toks.begin() + static_cast<long>(lib->match_start + lib->match_len),
                        toks.end());
        CHECK(residual == lib->qualifier);
      }
    }
  }
}
