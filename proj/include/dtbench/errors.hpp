#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dtbench {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters: bad oracle configuration, mismatched feature spaces,
/// violated tree invariants, empty datasets.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed tree, feature-space or dataset text.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& reason)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + reason),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// An enumeration would exceed its configured size guard.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

/// The exact learner ran out of explored nodes, wall time, or depth cap.
/// `infeasible_depth()` is the largest depth proven to admit no consistent
/// tree (-1 when nothing has been proven yet).
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, int infeasible_depth)
      : Error(what), infeasible_depth_(infeasible_depth) {}

  int infeasible_depth() const noexcept { return infeasible_depth_; }

 private:
  int infeasible_depth_;
};

}  // namespace dtbench
