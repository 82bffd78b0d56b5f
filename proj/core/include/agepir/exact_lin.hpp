#pragma once

#include <optional>
#include <vector>

#include "agepir/rational.hpp"

namespace agepir::lin {

// Solves A x = b exactly by Gaussian elimination with first-nonzero pivoting.
// Returns nullopt when A is singular. A is row-major, square, small (<= ~6).
std::optional<std::vector<Rat>> solve(std::vector<std::vector<Rat>> a,
                                      std::vector<Rat> b);

// Finds p >= 0 with E p = t (phase-1 simplex, Bland's rule). When cost is
// given, continues with phase 2 and minimizes cost . p. Returns nullopt when
// no such p exists. E is m x k with m small (<= ~6); the result is basic,
// so at most m entries are nonzero.
std::optional<std::vector<Rat>> nonneg_solve(const std::vector<std::vector<Rat>>& e,
                                             const std::vector<Rat>& t,
                                             const std::vector<Rat>* cost = nullptr);

}  // namespace agepir::lin
