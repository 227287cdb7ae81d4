#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace taskdraft {

/// Domain failure with a stable, machine-readable code (e.g. "duplicate-goal")
/// and a free-form detail naming the offending ids, role or position.
class Error : public std::runtime_error {
 public:
  Error(std::string code, std::string detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)), detail_(std::move(detail)) {}

  const std::string& code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string code_;
  std::string detail_;
};

/// Syntax error in one of the textual file formats; `line` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("parse-error", "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace taskdraft
