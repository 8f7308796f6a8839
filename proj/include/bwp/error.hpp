#pragma once

#include <stdexcept>
#include <string>

namespace bwp {

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Parse failure in an input file; carries the 1-based line number.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, long line_no)
      : std::runtime_error(what + " (line " + std::to_string(line_no) + ")"),
        line(line_no) {}
  long line;
};

struct ConstructionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact enumeration refused because the search space exceeds the budget.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bwp
