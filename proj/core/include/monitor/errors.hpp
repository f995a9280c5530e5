#pragma once

#include <stdexcept>
#include <string>

namespace monitor {

// Contract violation: caller passed arguments outside an operation's domain.
struct ContractError : std::invalid_argument {
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// A covariance factorization failed even after the jitter ladder.
struct ConditioningError : std::runtime_error {
  explicit ConditioningError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file.
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace monitor
