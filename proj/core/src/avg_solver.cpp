#include "agepir/avg_solver.hpp"

#include <cmath>
#include <stdexcept>

#include "agepir/capacity.hpp"
#include "agepir/errors.hpp"
#include "agepir/peak_solver.hpp"
#include "solver_util.hpp"

namespace agepir {

TransformedPoint charnes_cooper(const DownloadAllocation& d, const std::vector<double>& mu) {
  TransformedPoint p;
  double m = 0;
  p.total = 0;
  for (std::size_t n = 0; n < mu.size(); ++n) {
    m += mu[n] * to_double(d.d[n]);
    p.total += to_double(d.d[n]);
  }
  p.t = 1.0 / m;
  p.x.reserve(mu.size());
  for (const Rat& dn : d.d) p.x.push_back(to_double(dn) * p.t);
  return p;
}

std::vector<double> charnes_cooper_inverse(const std::vector<double>& x, double t) {
  std::vector<double> d;
  d.reserve(x.size());
  for (double xn : x) d.push_back(xn / t);
  return d;
}

namespace {

void require_two_sorted_strict(const SystemConfig& config) {
  if (config.num_servers != 2) throw std::invalid_argument("inner solution covers N=2");
  if (!(config.servers[0].mu < config.servers[1].mu))
    throw std::invalid_argument("inner solution needs mu1 < mu2");
}

}  // namespace

double inner_stationary_t(const SystemConfig& config, double total) {
  require_two_sorted_strict(config);
  const double mu1 = to_double(config.servers[0].mu);
  const double mu2 = to_double(config.servers[1].mu);
  const double s = to_double(config.servers[0].sigma2) * mu2 -
                   to_double(config.servers[1].sigma2) * mu1;
  if (s <= 0)
    throw std::domain_error("no real stationary point: s1*mu2 - s2*mu1 <= 0");
  return std::sqrt(3 * (mu2 - mu1) / (s * total));
}

TransformedPoint inner_solution(const SystemConfig& config, double total) {
  const double t = inner_stationary_t(config, total);
  const double mu1 = to_double(config.servers[0].mu);
  const double mu2 = to_double(config.servers[1].mu);
  TransformedPoint p;
  p.t = t;
  p.total = total;
  p.x = {(mu2 * total * t - 1) / (mu2 - mu1), (1 - mu1 * total * t) / (mu2 - mu1)};
  return p;
}

double inner_objective(const SystemConfig& config, double total, double t) {
  require_two_sorted_strict(config);
  const double mu1 = to_double(config.servers[0].mu);
  const double mu2 = to_double(config.servers[1].mu);
  const double x1 = (mu2 * total * t - 1) / (mu2 - mu1);
  const double x2 = (1 - mu1 * total * t) / (mu2 - mu1);
  return 1.5 / t +
         0.5 * (to_double(config.servers[0].sigma2) * x1 +
                to_double(config.servers[1].sigma2) * x2);
}

namespace {

Rat clamp_rat(const Rat& x, const Rat& lo, const Rat& hi) {
  if (x < lo) return lo;
  if (x > hi) return hi;
  return x;
}

std::vector<LinearConstraint> boxed_constraints(const SystemConfig& config) {
  const ConstraintSystem sys = pir_constraints(config.num_servers, config.num_messages,
                                               config.message_length);
  std::vector<LinearConstraint> cons = sys.all();
  LinearConstraint box;
  box.coeff_d.assign(config.num_servers, Rat(0));
  box.coeff_D = 1;
  box.sense = LinearConstraint::Sense::le;
  box.rhs = Rat(config.message_length) / config.r_min;
  box.label = "box";
  cons.push_back(std::move(box));
  return cons;
}

Solution finish_avg(const SystemConfig& config, const DownloadAllocation& d) {
  MixturePolicy mix;
  try {
    mix = time_share_policy(d, corner_points(config.num_servers, config.num_messages,
                                             config.message_length));
  } catch (const InfeasibleError&) {
    mix = time_share_policy(
        d, corner_points_all_orders(config.num_servers, config.num_messages,
                                    config.message_length));
  }
  Solution s;
  s.metric = Metric::average;
  s.allocation = d;
  s.mixture = std::move(mix);
  s.achieved_rate = Rat(config.message_length) / d.total();
  const auto mu = config.mus();
  const auto s2 = config.sigma2s();
  s.objective_exact = mixture_avg_aoi(mu, s2, s.mixture);
  s.objective_idealized_exact = avg_aoi(mu, s2, s.allocation);
  return s;
}

// Exact global minimizer of aAoI over the boxed rate polytope. The objective
// is G(m, S) = (3/2)m + S/(2m) with (m, S) = (mu.d, sigma2.d), increasing in
// S, so the optimum lies on the lower hull of the projected vertex set:
// either at a vertex projection or interior to a chord, where on S = am + b
// the stationary point is m = sqrt(b/3) with value sqrt(3b) + a/2 (only when
// b > 0; otherwise G increases along the chord). All chords between vertex
// pairs are searched, which covers every lower-hull edge.
Solution hull_minimize(const SystemConfig& config) {
  const auto mu = config.mus();
  const auto s2 = config.sigma2s();
  const auto vertices = enumerate_vertices(boxed_constraints(config), config.num_servers);
  if (vertices.empty()) throw InfeasibleError("empty rate polytope");

  std::vector<Rat> vm(vertices.size()), vs(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    vm[i] = epoch_mean(mu, vertices[i]);
    vs[i] = 0;
    for (std::size_t n = 0; n < s2.size(); ++n) vs[i] += s2[n] * vertices[i].d[n];
  }

  std::vector<DownloadAllocation> candidates = vertices;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (vm[i] == vm[j]) continue;
      const Rat a = (vs[i] - vs[j]) / (vm[i] - vm[j]);
      const Rat b = vs[i] - a * vm[i];
      if (b <= 0) continue;
      const double m_star = std::sqrt(to_double(b) / 3.0);
      const double mi = to_double(vm[i]), mj = to_double(vm[j]);
      if (m_star <= std::min(mi, mj) || m_star >= std::max(mi, mj)) continue;
      const Rat lam = clamp_rat(Rat((m_star - mj) / (mi - mj)), Rat(0), Rat(1));
      DownloadAllocation d;
      d.d.reserve(mu.size());
      for (std::size_t n = 0; n < mu.size(); ++n)
        d.d.push_back(lam * vertices[i].d[n] + (1 - lam) * vertices[j].d[n]);
      candidates.push_back(std::move(d));
    }
  }

  const DownloadAllocation* best = nullptr;
  Rat best_obj;
  for (const auto& d : candidates) {
    const Rat obj = avg_aoi(mu, s2, d);
    if (!best || obj < best_obj || (obj == best_obj && detail::lex_less(d.d, best->d))) {
      best = &d;
      best_obj = obj;
    }
  }

  // Prefer the uniform representative when it projects to the same (m, S):
  // symmetric configs then return the symmetric scheme, which the vertex
  // list alone does not contain for N >= 3.
  DownloadAllocation chosen = *best;
  DownloadAllocation uniform;
  uniform.d.assign(config.num_servers, chosen.total() / config.num_servers);
  if (!(uniform == chosen) && feasible(uniform, config) &&
      epoch_mean(mu, uniform) == epoch_mean(mu, chosen)) {
    Rat su = 0, sc = 0;
    for (std::size_t n = 0; n < s2.size(); ++n) {
      su += s2[n] * uniform.d[n];
      sc += s2[n] * chosen.d[n];
    }
    if (su == sc) chosen = uniform;
  }
  return finish_avg(config, chosen);
}

}  // namespace

Solution outer_minimize(const SystemConfig& config) {
  config.validate_for_solve();
  if (config.num_servers != 2 || config.num_messages != 3)
    throw std::invalid_argument("outer_minimize covers N=2, M=3");
  const detail::SortedView sv = detail::sorted_by_mu(config);
  const Rat mu1 = sv.config.servers[0].mu, mu2 = sv.config.servers[1].mu;
  const Rat s1 = sv.config.servers[0].sigma2, s2 = sv.config.servers[1].sigma2;
  if (mu1 == mu2) throw std::invalid_argument("outer_minimize needs distinct means");
  if (s1 * mu2 <= s2 * mu1 || s2 * mu1 <= 0)
    throw std::invalid_argument("outer_minimize needs s1*mu2 > s2*mu1 > 0");
  return hull_minimize(config);
}

Solution equal_mean_solver(const SystemConfig& config) {
  config.validate_for_solve();
  if (config.num_servers != 2 || config.num_messages != 3)
    throw std::invalid_argument("equal_mean_solver covers N=2, M=3");
  if (config.servers[0].mu != config.servers[1].mu)
    throw std::invalid_argument("equal_mean_solver needs equal means");

  // sigma-sorted view: index lo has the smaller variance.
  const int lo = config.servers[0].sigma2 <= config.servers[1].sigma2 ? 0 : 1;
  const int hi = 1 - lo;
  const Rat mu = config.servers[0].mu;
  const Rat c = config.servers[hi].sigma2 - config.servers[lo].sigma2;
  const Rat L = config.message_length;
  const Rat d_min = Rat(7, 4) * L;
  const Rat d_max = L / config.r_min;

  // share of the total on the high-variance server when tilted to minimum
  const auto tilt = [&](const Rat& total) {
    return std::max(Rat(Rat(3, 2) * L - total / 2), Rat(Rat(5, 2) * L - total));
  };

  DownloadAllocation best_d;
  Rat best_obj;
  bool have = false;
  const auto mus = config.mus();
  const auto s2s = config.sigma2s();
  const auto consider = [&](const Rat& total) {
    if (total < d_min || total > d_max) return;
    DownloadAllocation d;
    d.d.assign(2, Rat(0));
    if (c == 0) {
      d.d[lo] = d.d[hi] = total / 2;
    } else {
      d.d[hi] = tilt(total);
      d.d[lo] = total - d.d[hi];
    }
    const Rat obj = avg_aoi(mus, s2s, d);
    if (!have || obj < best_obj || (obj == best_obj && detail::lex_less(d.d, best_d.d))) {
      best_d = d;
      best_obj = obj;
      have = true;
    }
  };

  consider(d_min);
  consider(std::min(Rat(2 * L), d_max));
  consider(d_max);
  if (c > 0) {
    // per-piece stationary totals of the convex 1-D objective
    const double dc = to_double(c), dl = to_double(L), dm = to_double(mu);
    const Rat hat1 = clamp_rat(Rat(std::sqrt(5 * dc * dl / 6) / dm), d_min,
                               std::min(Rat(2 * L), d_max));
    consider(hat1);
    if (d_max > 2 * L) {
      const Rat hat2 = clamp_rat(Rat(std::sqrt(dc * dl / 2) / dm), 2 * L, d_max);
      consider(hat2);
    }
  }
  return finish_avg(config, best_d);
}

Solution single_server_fallback(const SystemConfig& config) {
  config.validate();
  if (config.r_min != Rat(1, config.num_messages))
    throw InfeasibleError("single-server scheme has rate 1/M < r_min");
  const Rat ml = Rat(config.num_messages) * config.message_length;
  int best = 0;
  Rat best_obj;
  for (int n = 0; n < config.num_servers; ++n) {
    const Rat obj = Rat(3, 2) * ml * config.servers[n].mu +
                    config.servers[n].sigma2 / (2 * config.servers[n].mu);
    if (n == 0 || obj < best_obj) {
      best = n;
      best_obj = obj;
    }
  }
  DownloadAllocation d;
  d.d.assign(config.num_servers, Rat(0));
  d.d[best] = ml;

  Solution s;
  s.metric = Metric::average;
  s.allocation = d;
  s.mixture = MixturePolicy::degenerate(d);
  s.achieved_rate = Rat(1, config.num_messages);
  const auto mu = config.mus();
  const auto s2 = config.sigma2s();
  s.objective_exact = avg_aoi(mu, s2, d);
  s.objective_idealized_exact = s.objective_exact;
  return s;
}

Solution solve_avg_general(const SystemConfig& config) {
  config.validate_for_solve();
  return hull_minimize(config);
}

Solution solve_average(const SystemConfig& config) {
  config.validate_for_solve();
  if (config.num_servers == 2 && config.num_messages == 3) {
    const detail::SortedView sv = detail::sorted_by_mu(config);
    const Rat mu1 = sv.config.servers[0].mu, mu2 = sv.config.servers[1].mu;
    const Rat s1 = sv.config.servers[0].sigma2, s2 = sv.config.servers[1].sigma2;
    if (mu1 == mu2) return equal_mean_solver(config);
    if (s1 * mu2 > s2 * mu1 && s2 * mu1 > 0) return outer_minimize(config);
  }
  return solve_avg_general(config);
}

}  // namespace agepir
