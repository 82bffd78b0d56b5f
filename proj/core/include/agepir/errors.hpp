#pragma once

#include <stdexcept>
#include <string>

namespace agepir {

// Invalid system description or malformed input file.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// The demanded rate (or a solver branch precondition) cannot be met.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// An exact enumeration would exceed its desk-scale budget.
class SizeLimitError : public std::runtime_error {
 public:
  explicit SizeLimitError(const std::string& what) : std::runtime_error(what) {}
};

// A policy cannot be sampled (for example fractional per-epoch allocations).
class SimError : public std::runtime_error {
 public:
  explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace agepir
