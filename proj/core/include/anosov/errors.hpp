#pragma once

#include <stdexcept>
#include <string>

namespace anosov {

// configuration / input problems: bad JSON, unknown keys, inconsistent dimensions
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// numerical failures: degenerate matrices, non-convergent iterations, positivity violations
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// enumeration budget exceeded (word counts grow like (2k-1)^n)
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// a verification suite reported a failing check
struct VerificationError : std::runtime_error {
  explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace anosov
