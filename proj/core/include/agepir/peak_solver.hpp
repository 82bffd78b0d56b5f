#pragma once

#include "agepir/capacity.hpp"
#include "agepir/model.hpp"

namespace agepir {

// Closed-form peak-age solver for N=2, M=3: evaluates the per-regime corner
// and rate-boundary candidates exactly and keeps the best, ties broken
// toward the lexicographically smallest sorted allocation. Accepts any
// 1/3 <= r_min <= 4/7.
Solution solve_peak_n2m3(const SystemConfig& config);

// General peak-age solver, M in {2, 3}: exact-rational vertex enumeration of
// the rate polytope restricted to the sorted ordering (valid because the
// polytope is permutation-symmetric), same tie rule.
Solution solve_peak_lp(const SystemConfig& config);

// Dispatcher used by the CLI: N=2, M=3 goes to the closed form.
Solution solve_peak(const SystemConfig& config);

// Exact decomposition of a feasible expected allocation into a randomized
// time share of corner-point schemes. For N=2 targets on the corner
// polyline this is the two adjacent corners; otherwise a basic solution of
// the mixing equations. Throws InfeasibleError when the target is not a
// mixture of the given corners.
MixturePolicy time_share_policy(const DownloadAllocation& target,
                                const std::vector<CornerPoint>& corners);

// Peak age of the high-rate regime's rate-boundary allocation
// ((2/r - 5/2) L, (5/2 - 1/r) L) for sorted means, as one expression.
// At r = 4/7 it collapses to the corner value 16 mu1 + 12 mu2 (L = 8 scale).
Rat peak_highrate_boundary_objective(const Rat& mu1, const Rat& mu2, const Rat& r,
                                     long message_length);

}  // namespace agepir
