#pragma once

#include <stdexcept>
#include <string>

namespace splinekit {

// Exhaustive enumeration would exceed the configured operation budget.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Rejection sampling ran out of attempts; carries the measured acceptance.
class SamplingFailure : public std::runtime_error {
 public:
  SamplingFailure(const std::string& what, std::uint64_t attempts,
                  std::uint64_t accepted)
      : std::runtime_error(what), attempts(attempts), accepted(accepted) {}
  std::uint64_t attempts;
  std::uint64_t accepted;
};

}  // namespace splinekit
