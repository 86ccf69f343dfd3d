#pragma once

#include <stdexcept>
#include <string>

namespace toricurves {

/// Error categories. The numeric values are the CLI exit statuses.
enum class ErrorKind : int {
  usage = 1,
  validation = 2,
  budget = 3,
  consistency = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_status() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

struct UsageError : Error {
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

/// Malformed or geometrically invalid input (bad fan, degree outside the cone, ...).
struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

/// A computation would exceed its configured size budget.
struct BudgetError : Error {
  explicit BudgetError(const std::string& what) : Error(ErrorKind::budget, what) {}
};

/// Two routes that must agree did not. Always a bug or an invalid model assumption.
struct ConsistencyError : Error {
  explicit ConsistencyError(const std::string& what) : Error(ErrorKind::consistency, what) {}
};

}  // namespace toricurves
