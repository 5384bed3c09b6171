#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace crnet {

/// Thrown on dimension mismatches, out-of-range parameters and malformed input.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown on malformed text input (net files, CSV, weight strings).
class ParseError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Thrown when an exhaustive enumeration would exceed its work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t required, std::uint64_t budget)
      : std::runtime_error(what + " (needs " + std::to_string(required) +
                           " work units, budget " + std::to_string(budget) + ")"),
        required_(required),
        budget_(budget) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

/// Work budget shared by all exhaustive enumerations.
inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

}  // namespace crnet
