#pragma once

#include <cctype>
#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ltd/discovery.hpp"
#include "ltd/error.hpp"

namespace ltd {

/// An absolute IRI restricted to what N-Triples can carry unescaped: no
/// whitespace or control characters, none of < > " { } | ^ ` \.
class Iri {
public:
  explicit Iri(std::string value) : value_(std::move(value)) {
    if (auto why = why_invalid(value_); !why.empty())
      throw std::invalid_argument("invalid IRI \"" + value_ + "\": " + why);
  }

  const std::string& str() const noexcept { return value_; }

  friend bool operator==(const Iri&, const Iri&) = default;
  friend auto operator<=>(const Iri&, const Iri&) = default;

  /// Empty result means valid; otherwise the reason.
  static std::string why_invalid(std::string_view v) {
    auto colon = v.find(':');
    if (colon == std::string_view::npos || colon == 0) return "missing scheme";
    if (std::isalpha(static_cast<unsigned char>(v[0])) == 0) return "scheme must start with a letter";
    for (std::size_t i = 1; i < colon; ++i) {
      char c = v[i];
      if (std::isalnum(static_cast<unsigned char>(c)) == 0 && c != '+' && c != '-' && c != '.')
        return "invalid scheme character";
    }
    for (char c : v) {
      auto u = static_cast<unsigned char>(c);
      if (u <= 0x20 || u == 0x7F) return "whitespace or control character";
      if (c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
          c == '`' || c == '\\')
        return std::string("forbidden character '") + c + "'";
    }
    return {};
  }

private:
  std::string value_;
};

/// subject and predicate are always IRIs; the object may be a plain literal.
struct RdfTriple {
  Iri subject;
  Iri predicate;
  std::variant<Iri, std::string> object;

  friend bool operator==(const RdfTriple&, const RdfTriple&) = default;
};

enum class IriKind { Concept, Predicate, Entity };

/// How latent-table cells become IRIs: base IRI (trailing slash enforced)
/// plus a kind segment plus a slug of the term.
class MintingPolicy {
public:
  explicit MintingPolicy(Iri base, bool object_as_literal = false)
      : base_(base.str().back() == '/' ? std::move(base) : Iri(base.str() + "/")),
        object_as_literal_(object_as_literal) {}

  const Iri& base() const noexcept { return base_; }
  bool object_as_literal() const noexcept { return object_as_literal_; }

private:
  Iri base_;
  bool object_as_literal_;
};

/// Lowercases, collapses whitespace runs to single hyphens and
/// percent-encodes everything outside [a-z0-9._~-] as UTF-8 octets.
inline std::string slug(std::string_view term) {
  std::string trimmed = detail::trim(term);
  std::string out;
  bool in_space = false;
  for (char c : trimmed) {
    if (detail::is_space(c)) {
      in_space = true;
      continue;
    }
    if (in_space) {
      out += '-';
      in_space = false;
    }
    char l = detail::to_lower(c);
    auto u = static_cast<unsigned char>(l);
    if ((l >= 'a' && l <= 'z') || (l >= '0' && l <= '9') || l == '.' || l == '_' || l == '~' ||
        l == '-') {
      out += l;
    } else {
      static const char* hex = "0123456789ABCDEF";
      out += '%';
      out += hex[u >> 4];
      out += hex[u & 0xF];
    }
  }
  return out;
}

inline Iri mint_iri(const MintingPolicy& policy, IriKind kind, std::string_view term) {
  if (detail::trim(term).empty()) throw std::invalid_argument("cannot mint an IRI for an empty term");
  std::string_view segment;
  switch (kind) {
    case IriKind::Concept: segment = "concept/"; break;
    case IriKind::Predicate: segment = "predicate/"; break;
    case IriKind::Entity: segment = "entity/"; break;
  }
  return Iri(policy.base().str() + std::string(segment) + slug(term));
}

/// One triple per latent row, in row order: subject and predicate are always
/// minted; the object is minted or kept as a plain literal per the policy.
inline std::vector<RdfTriple> to_triples(const LatentTable& lt, const MintingPolicy& policy) {
  std::vector<RdfTriple> out;
  out.reserve(lt.rows.size());
  for (const auto& row : lt.rows) {
    Iri subject = mint_iri(policy, IriKind::Concept, row.subject);
    Iri predicate = mint_iri(policy, IriKind::Predicate, row.predicate);
    if (policy.object_as_literal())
      out.push_back({std::move(subject), std::move(predicate), row.object});
    else
      out.push_back(
          {std::move(subject), std::move(predicate), mint_iri(policy, IriKind::Entity, row.object)});
  }
  return out;
}

/// Distinct terms may slug to the same IRI ("A B" vs "a-b"); that is reported,
/// not rejected. One warning per colliding IRI, naming every source term.
inline std::vector<std::string> slug_collision_warnings(const LatentTable& lt,
                                                        const MintingPolicy& policy) {
  std::map<std::string, std::set<std::string>> minted;  // iri -> source terms
  for (const auto& row : lt.rows) {
    minted[mint_iri(policy, IriKind::Concept, row.subject).str()].insert(row.subject);
    minted[mint_iri(policy, IriKind::Predicate, row.predicate).str()].insert(row.predicate);
    if (!policy.object_as_literal())
      minted[mint_iri(policy, IriKind::Entity, row.object).str()].insert(row.object);
  }
  std::vector<std::string> out;
  for (const auto& [iri, terms] : minted) {
    if (terms.size() < 2) continue;
    std::string quoted;
    for (const auto& t : terms) {
      if (!quoted.empty()) quoted += ", ";
      quoted += "\"" + t + "\"";
    }
    out.push_back("slug collision: terms " + quoted + " all mint <" + iri + ">");
  }
  return out;
}

namespace detail {

inline std::string escape_literal(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// One `<s> <p> <o> .` line per triple, LF-terminated, UTF-8.
inline std::string serialize_ntriples(std::span<const RdfTriple> triples) {
  std::string out;
  for (const auto& t : triples) {
    out += '<';
    out += t.subject.str();
    out += "> <";
    out += t.predicate.str();
    out += "> ";
    if (const Iri* iri = std::get_if<Iri>(&t.object)) {
      out += '<';
      out += iri->str();
      out += '>';
    } else {
      out += '"';
      out += detail::escape_literal(std::get<std::string>(t.object));
      out += '"';
    }
    out += " .\n";
  }
  return out;
}

inline std::string serialize_ntriples(const std::vector<RdfTriple>& triples) {
  return serialize_ntriples(std::span<const RdfTriple>(triples));
}

namespace detail {

class NtriplesLineParser {
public:
  NtriplesLineParser(std::string_view line, std::size_t line_no) : s_(line), line_no_(line_no) {}

  RdfTriple parse() {
    skip_ws();
    Iri subject = parse_iri();
    require_ws();
    Iri predicate = parse_iri();
    require_ws();
    std::variant<Iri, std::string> object{std::in_place_type<std::string>};
    if (peek() == '<')
      object = parse_iri();
    else if (peek() == '"')
      object = parse_literal();
    else
      fail("expected an IRI or a literal object");
    skip_ws();
    if (!consume('.')) fail("expected terminating '.'");
    skip_ws();
    if (i_ != s_.size()) fail("trailing content after '.'");
    return {std::move(subject), std::move(predicate), std::move(object)};
  }

private:
  [[noreturn]] void fail(const std::string& why) {
    throw ParseError("line " + std::to_string(line_no_) + ": " + why, line_no_);
  }

  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
  bool consume(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  void skip_ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }
  void require_ws() {
    if (i_ >= s_.size() || (s_[i_] != ' ' && s_[i_] != '\t')) fail("expected whitespace");
    skip_ws();
  }

  Iri parse_iri() {
    if (!consume('<')) fail("expected '<'");
    std::size_t start = i_;
    while (i_ < s_.size() && s_[i_] != '>') ++i_;
    if (!consume('>')) fail("unterminated IRI");
    std::string value(s_.substr(start, i_ - 1 - start));
    if (auto why = Iri::why_invalid(value); !why.empty()) fail("bad IRI: " + why);
    return Iri(std::move(value));
  }

  std::string parse_literal() {
    if (!consume('"')) fail("expected '\"'");
    std::string out;
    while (i_ < s_.size() && s_[i_] != '"') {
      char c = s_[i_++];
      if (c != '\\') {
        out += c;
        continue;
      }
      if (i_ >= s_.size()) fail("dangling escape");
      switch (s_[i_++]) {
        case '\\': out += '\\'; break;
        case '"': out += '"'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        default: fail("unsupported escape sequence");
      }
    }
    if (!consume('"')) fail("unterminated literal");
    return out;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::size_t line_no_;
};

}  // namespace detail

/// Parses the subset serialize_ntriples emits (IRIs and plain literals).
/// Blank lines and `#` comment lines are skipped; anything else malformed
/// raises ParseError with its line number.
inline std::vector<RdfTriple> parse_ntriples(std::string_view data) {
  std::vector<RdfTriple> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= data.size()) {
    if (pos == data.size() && line_no > 0) break;
    std::size_t eol = data.find('\n', pos);
    std::string_view line =
        eol == std::string_view::npos ? data.substr(pos) : data.substr(pos, eol - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos && line[first] != '#')
      out.push_back(detail::NtriplesLineParser(line, line_no).parse());
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return out;
}

}  // namespace ltd
