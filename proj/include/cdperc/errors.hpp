#pragma once

#include <stdexcept>
#include <string>

namespace cdperc {

/// Requested instance does not fit the configured memory budget.
class SizingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wrong lattice kind/dimension for an operation, or out-of-range arguments.
class LatticeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Enumeration or oracle exceeded its configured work budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant failed (a bug or a falsified claim).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Experiment configuration failed validation; `field` names the offender.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace cdperc
