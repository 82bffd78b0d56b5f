#pragma once

#include <cstddef>
#include <string>

#include "agepir/model.hpp"

namespace agepir {

struct OracleResult {
  DownloadAllocation best;
  Rat objective;            // exact metric value at best
  Rat slack;                // Lipschitz covering slack for this resolution
  std::size_t points_scanned = 0;
  std::size_t points_feasible = 0;
};

// Brute-force minimum of the chosen metric over the uniform grid of the
// given step intersected with the feasible set. Checks the raw
// permutation-form constraint system directly, independent of any solver
// ordering tricks. Ties break lexicographically on the non-increasing
// rearrangement (balanced first), then on the raw vector. N <= 3 only.
OracleResult grid_search(const SystemConfig& config, Metric metric, const Rat& resolution);

// Conservative bound on how far the grid minimum can sit above the true
// minimum at this resolution (gradient bound times step, covering factor 2).
Rat objective_lipschitz_slack(const SystemConfig& config, Metric metric,
                              const Rat& resolution);

struct VerifyReport {
  bool pass = false;
  bool allocation_feasible = false;
  bool objective_consistent = false;  // stored objective matches re-evaluation
  bool within_oracle_band = false;
  std::string violated_constraint;    // set when infeasible
  Rat recomputed_objective;           // mixture-aware metric re-evaluated
  Rat idealized_objective;            // metric at the expected allocation
  Rat oracle_objective;
  Rat slack;
  std::string detail;
};

// Re-derives feasibility and the objective from the solution's own mixture,
// then cross-examines against an independent grid search: the idealized
// objective must land within [grid - slack - eps, grid + slack].
VerifyReport verify(const Solution& solution, const SystemConfig& config,
                    const Rat& resolution);

}  // namespace agepir
