#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ltd {

/// Input that could not be parsed. line/column are 1-based when known, 0 otherwise.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(std::string message, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(std::move(message)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed input that breaks a model invariant. Carries the complete
/// violation list, not just the first problem found.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::runtime_error(render(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
  static std::string render(const std::vector<std::string>& violations) {
    std::string msg = "validation failed";
    for (const auto& v : violations) {
      msg += "\n  - ";
      msg += v;
    }
    return msg;
  }

  std::vector<std::string> violations_;
};

}  // namespace ltd
