#include "agepir/peak_solver.hpp"

#include <optional>
#include <utility>

#include "agepir/errors.hpp"
#include "agepir/exact_lin.hpp"
#include "solver_util.hpp"

namespace agepir {

namespace {

// target = p*a + (1-p)*b with p in [0,1], solved exactly; nullopt otherwise.
std::optional<Rat> segment_weight(const DownloadAllocation& target,
                                  const DownloadAllocation& a, const DownloadAllocation& b) {
  std::optional<Rat> p;
  for (std::size_t n = 0; n < target.d.size(); ++n) {
    const Rat den = a.d[n] - b.d[n];
    if (den == 0) {
      if (target.d[n] != b.d[n]) return std::nullopt;
      continue;
    }
    const Rat pn = (target.d[n] - b.d[n]) / den;
    if (p && *p != pn) return std::nullopt;
    p = pn;
  }
  if (!p || *p < 0 || *p > 1) return std::nullopt;
  return p;
}

MixturePolicy strip_zero(MixturePolicy mix) {
  std::vector<MixtureComponent> kept;
  for (auto& c : mix.components)
    if (c.prob != 0) kept.push_back(std::move(c));
  mix.components = std::move(kept);
  return mix;
}

}  // namespace

MixturePolicy time_share_policy(const DownloadAllocation& target,
                                const std::vector<CornerPoint>& corners) {
  for (const auto& c : corners)
    if (c.allocation == target) return MixturePolicy::degenerate(target);

  // Two-server targets lie on the corner polyline; scan adjacent pairs.
  if (target.d.size() == 2) {
    for (std::size_t k = 0; k + 1 < corners.size(); ++k) {
      const auto& a = corners[k].allocation;
      const auto& b = corners[k + 1].allocation;
      if (auto p = segment_weight(target, a, b))
        return strip_zero(MixturePolicy{{{a, *p}, {b, 1 - *p}}});
    }
  }

  // General case: basic feasible solution of the mixing equations.
  const std::size_t n_servers = target.d.size();
  std::vector<std::vector<Rat>> e(n_servers + 1, std::vector<Rat>(corners.size()));
  std::vector<Rat> t(n_servers + 1);
  for (std::size_t n = 0; n < n_servers; ++n) {
    for (std::size_t k = 0; k < corners.size(); ++k) e[n][k] = corners[k].allocation.d[n];
    t[n] = target.d[n];
  }
  for (std::size_t k = 0; k < corners.size(); ++k) e[n_servers][k] = 1;
  t[n_servers] = 1;
  if (auto p = lin::nonneg_solve(e, t)) {
    MixturePolicy mix;
    for (std::size_t k = 0; k < corners.size(); ++k)
      mix.components.push_back(MixtureComponent{corners[k].allocation, (*p)[k]});
    return strip_zero(std::move(mix));
  }
  throw InfeasibleError("target allocation is not a mixture of the given corners");
}

namespace {

// Shared tail of both peak solvers: decompose the sorted-space optimum into a
// corner time share, map everything back to the caller's server order.
Solution finish_peak(const SystemConfig& original, const detail::SortedView& sv,
                     const DownloadAllocation& sorted_d) {
  MixturePolicy sorted_mix;
  try {
    sorted_mix = time_share_policy(
        sorted_d, corner_points(original.num_servers, original.num_messages,
                                original.message_length));
  } catch (const InfeasibleError&) {
    sorted_mix = time_share_policy(
        sorted_d, corner_points_all_orders(original.num_servers, original.num_messages,
                                           original.message_length));
  }

  Solution s;
  s.metric = Metric::peak;
  s.allocation = detail::to_original(sorted_d, sv.perm);
  s.mixture = detail::to_original(sorted_mix, sv.perm);
  s.achieved_rate = Rat(original.message_length) / sorted_d.total();
  const auto mu = original.mus();
  s.objective_exact = mixture_peak_aoi(mu, s.mixture);
  s.objective_idealized_exact = peak_aoi(mu, s.allocation);
  return s;
}

Rat peak_objective(const SystemConfig& sorted, const DownloadAllocation& d) {
  return peak_aoi(sorted.mus(), d);
}

}  // namespace

Rat peak_highrate_boundary_objective(const Rat& mu1, const Rat& mu2, const Rat& r,
                                     long message_length) {
  return 2 * (mu1 * (2 / r - Rat(5, 2)) + mu2 * (Rat(5, 2) - 1 / r)) * message_length;
}

Solution solve_peak_n2m3(const SystemConfig& config) {
  config.validate_for_solve();
  if (config.num_servers != 2 || config.num_messages != 3)
    throw std::invalid_argument("closed form covers N=2, M=3");
  const detail::SortedView sv = detail::sorted_by_mu(config);
  const Rat L = config.message_length;
  const Rat s = L / 8;
  const Rat r = config.r_min;

  std::vector<DownloadAllocation> candidates;
  candidates.push_back(DownloadAllocation{{7 * s, 7 * s}});
  candidates.push_back(DownloadAllocation{{8 * s, 6 * s}});
  if (r >= Rat(1, 2)) {
    // high-rate regime: the download cap D = L/r binds between D=14 and D=16
    candidates.push_back(DownloadAllocation{{(2 / r - Rat(5, 2)) * L, (Rat(5, 2) - 1 / r) * L}});
  } else {
    candidates.push_back(DownloadAllocation{{12 * s, 4 * s}});
    candidates.push_back(
        DownloadAllocation{{(3 / (2 * r) - Rat(3, 2)) * L, (Rat(3, 2) - 1 / (2 * r)) * L}});
  }

  const DownloadAllocation* best = nullptr;
  Rat best_obj;
  for (const auto& d : candidates) {
    const Rat obj = peak_objective(sv.config, d);
    if (!best || obj < best_obj || (obj == best_obj && detail::lex_less(d.d, best->d))) {
      best = &d;
      best_obj = obj;
    }
  }
  return finish_peak(config, sv, *best);
}

Solution solve_peak_lp(const SystemConfig& config) {
  config.validate_for_solve();
  const detail::SortedView sv = detail::sorted_by_mu(config);
  const int n = config.num_servers;

  const ConstraintSystem sys =
      pir_constraints(n, config.num_messages, config.message_length);
  std::vector<LinearConstraint> cons = sorted_reduction(sys);
  for (int k = 0; k < n; ++k) {
    LinearConstraint c;
    c.coeff_d.assign(n, Rat(0));
    c.coeff_d[k] = 1;
    if (k + 1 < n) c.coeff_d[k + 1] = -1;
    c.coeff_D = 0;
    c.sense = LinearConstraint::Sense::ge;
    c.rhs = 0;
    c.label = "chain";
    cons.push_back(std::move(c));
  }
  LinearConstraint box;
  box.coeff_d.assign(n, Rat(0));
  box.coeff_D = 1;
  box.sense = LinearConstraint::Sense::le;
  box.rhs = Rat(config.message_length) / config.r_min;
  box.label = "box";
  cons.push_back(std::move(box));

  const DownloadAllocation* best = nullptr;
  Rat best_obj;
  const std::vector<DownloadAllocation> verts = enumerate_vertices(cons, n);
  for (const auto& d : verts) {
    const Rat obj = peak_objective(sv.config, d);
    if (!best || obj < best_obj || (obj == best_obj && detail::lex_less(d.d, best->d))) {
      best = &d;
      best_obj = obj;
    }
  }
  if (!best) throw InfeasibleError("empty rate polytope");
  return finish_peak(config, sv, *best);
}

Solution solve_peak(const SystemConfig& config) {
  if (config.num_servers == 2 && config.num_messages == 3) return solve_peak_n2m3(config);
  return solve_peak_lp(config);
}

}  // namespace agepir
