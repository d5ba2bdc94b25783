#pragma once

#include <stdexcept>
#include <string>

namespace dks {

// Malformed input, bad parameter ranges, violated preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Edge-list or config text that does not parse.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Enumeration or memory budget exceeded. The CLI maps this to exit code 3.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// union_until_k: the inner solver made no progress on a graph that still
// has edges.
class StallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dks
