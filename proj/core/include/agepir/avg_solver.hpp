#pragma once

#include <vector>

#include "agepir/model.hpp"

namespace agepir {

// The fractional-program substitution t = 1 / (mu . d), x = d t that turns
// the average-age objective into (3/2)(1/t) + (1/2) sigma2 . x.
struct TransformedPoint {
  std::vector<double> x;
  double t = 0;
  double total = 0;  // D = sum d
};

TransformedPoint charnes_cooper(const DownloadAllocation& d, const std::vector<double>& mu);
std::vector<double> charnes_cooper_inverse(const std::vector<double>& x, double t);

// Stationary point of the substituted inner objective at fixed total D for
// N=2 with mu1 < mu2: t*(D) = sqrt(3 (mu2-mu1) / ((s1 mu2 - s2 mu1) D)).
// Throws std::domain_error when s1 mu2 - s2 mu1 <= 0 (no real stationary
// point; the optimum sits on the constraint boundary instead).
double inner_stationary_t(const SystemConfig& config, double total);
// The matching x* from the two equality constraints.
TransformedPoint inner_solution(const SystemConfig& config, double total);
// Substituted inner objective g_D(t), for stationarity tests.
double inner_objective(const SystemConfig& config, double total, double t);

// N=2 average-age solver for distinct means and s1 mu2 > s2 mu1 > 0. The
// stationary branch above gives the classic square-root objective at the
// least feasible D; when the stationary point falls outside the feasible
// band the optimum is a boundary point, which this solver also covers (the
// search is over the exact lower envelope, see solve_avg_general).
Solution outer_minimize(const SystemConfig& config);

// N=2, M=3, equal means: one-dimensional piecewise-convex minimization over
// D with closed-form per-piece minimizers; allocation tilts to the
// low-variance server, uniform on full symmetry.
Solution equal_mean_solver(const SystemConfig& config);

// Single-server branch: only valid at r_min = 1/M (rate of downloading all
// M messages from one server). Picks argmin (3/2) M L mu_n + sigma2_n/(2 mu_n),
// ties to the lowest index.
Solution single_server_fallback(const SystemConfig& config);

// General average-age solver, any desk-scale N, M in {2, 3}. Exact method:
// the objective depends on d only through (m, S) = (mu . d, sigma2 . d), so
// the minimum lies on the lower hull of the vertex projections of the rate
// polytope; each hull edge minimizes in closed form.
Solution solve_avg_general(const SystemConfig& config);

// Router used by the CLI: equal means -> equal_mean_solver; N=2 with the
// square-root branch valid -> outer_minimize; everything else ->
// solve_avg_general.
Solution solve_average(const SystemConfig& config);

}  // namespace agepir
