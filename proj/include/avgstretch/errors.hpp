#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace avgstretch {

/// Raised when caller-supplied data violates a documented precondition
/// (dimension mismatch, duplicate points, out-of-range parameters).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed text input. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A stretch quantity was requested on a graph that does not connect every pair.
class DisconnectedGraph : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace avgstretch
