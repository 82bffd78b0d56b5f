#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "agepir/model.hpp"
#include "agepir/rational.hpp"

namespace agepir {

// Fraction of traffic per server; entries in [0,1], sum exactly 1.
struct TrafficRatio {
  std::vector<Rat> tau;

  explicit TrafficRatio(std::vector<Rat> entries);
  static TrafficRatio from_allocation(const DownloadAllocation& d);
};

// Symmetric-traffic PIR capacity (1 + 1/N + ... + 1/N^(M-1))^(-1).
Rat pir_capacity(int num_servers, int num_messages);

// Capacity under a traffic-ratio constraint, M in {2, 3}. Requires tau
// sorted non-increasing; throws std::invalid_argument otherwise.
Rat capacity_asym(const TrafficRatio& tau, int num_messages);
// Convenience wrapper that sorts internally (the value is order-invariant).
Rat capacity_asym_any_order(const TrafficRatio& tau, int num_messages);

// One halfspace (or hyperplane) over (d_1..d_N, D) with D = sum d_n.
struct LinearConstraint {
  enum class Sense { ge, le };

  std::vector<Rat> coeff_d;
  Rat coeff_D;
  Sense sense = Sense::ge;
  Rat rhs;
  std::string label;

  // Coefficients with the D term folded in: coeff_d[n] + coeff_D.
  std::vector<Rat> folded() const;
  bool satisfied(const DownloadAllocation& d) const;
  Rat lhs(const DownloadAllocation& d) const;
};

// The rate-feasibility system for (N, M, L): every permutation of servers
// crossed with the index multisets of the converse bound, plus d >= 0.
// rate_raw keeps the permutation form (N! * C(N+M-1, M) rows) before
// deduplication; rate is the deduplicated set the solvers use.
struct ConstraintSystem {
  int num_servers = 0;
  int num_messages = 0;
  long message_length = 0;
  std::vector<LinearConstraint> rate_raw;
  std::vector<LinearConstraint> rate;
  std::vector<LinearConstraint> nonneg;

  std::vector<LinearConstraint> all() const;  // rate + nonneg
};

ConstraintSystem pir_constraints(int num_servers, int num_messages, long message_length);

// Drops rate constraints that are dominated under d_1 >= d_2 >= ... >= d_N:
// among permuted copies of one row only the ascending-coefficient assignment
// can bind. Nonnegativity is folded into the chain elsewhere.
std::vector<LinearConstraint> sorted_reduction(const ConstraintSystem& sys);

// Exact feasibility: pir_constraints plus D <= L / r_min.
bool feasible(const DownloadAllocation& d, const SystemConfig& config);
// Name of the first violated constraint, or nullopt when feasible.
std::optional<std::string> first_violated(const DownloadAllocation& d,
                                          const SystemConfig& config);

struct CornerPoint {
  DownloadAllocation allocation;
  Rat rate;  // L / D
};

// The C(M+N-1, M) extreme allocations of the rate/download trade-off in the
// ordering d_1 >= ... >= d_N, sorted by decreasing total download.
std::vector<CornerPoint> corner_points(int num_servers, int num_messages,
                                       long message_length);
// All distinct permutation images of the above (for mixtures of schemes
// that swap server roles).
std::vector<CornerPoint> corner_points_all_orders(int num_servers, int num_messages,
                                                  long message_length);

// Exact vertex enumeration of {d in R^N : constraints}, by solving every
// N-subset of active constraints. Desk scale; throws SizeLimitError when the
// subset count exceeds the budget.
std::vector<DownloadAllocation> enumerate_vertices(
    const std::vector<LinearConstraint>& constraints, int num_servers,
    std::size_t subset_budget = 2'000'000);

}  // namespace agepir
