#include "agepir/capacity.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "agepir/errors.hpp"
#include "agepir/exact_lin.hpp"

namespace agepir {

TrafficRatio::TrafficRatio(std::vector<Rat> entries) : tau(std::move(entries)) {
  if (tau.empty()) throw std::invalid_argument("traffic ratio needs >= 1 entry");
  Rat sum = 0;
  for (const Rat& t : tau) {
    if (t < 0 || t > 1) throw std::invalid_argument("traffic ratios lie in [0,1]");
    sum += t;
  }
  if (sum != 1) throw std::invalid_argument("traffic ratios must sum to 1");
}

TrafficRatio TrafficRatio::from_allocation(const DownloadAllocation& d) {
  const Rat total = d.total();
  if (total <= 0) throw std::invalid_argument("allocation must have positive total");
  std::vector<Rat> tau;
  tau.reserve(d.d.size());
  for (const Rat& x : d.d) tau.push_back(x / total);
  return TrafficRatio(std::move(tau));
}

Rat pir_capacity(int num_servers, int num_messages) {
  if (num_servers < 1 || num_messages < 1)
    throw std::invalid_argument("capacity needs N >= 1, M >= 1");
  Rat sum = 0;
  Rat pow = 1;
  for (int k = 0; k < num_messages; ++k) {
    sum += pow;
    pow /= num_servers;
  }
  return 1 / sum;
}

Rat capacity_asym(const TrafficRatio& tau, int num_messages) {
  const int n_servers = static_cast<int>(tau.tau.size());
  for (int i = 0; i + 1 < n_servers; ++i)
    if (tau.tau[i] < tau.tau[i + 1])
      throw std::invalid_argument("capacity_asym expects tau sorted non-increasing");
  if (num_messages != 2 && num_messages != 3)
    throw std::invalid_argument("capacity_asym covers M in {2, 3}");

  // tail(k) = sum of tau_n for n > k (1-indexed cutoff).
  auto tail = [&](int k) {
    Rat s = 0;
    for (int n = k; n < n_servers; ++n) s += tau.tau[n];
    return s;
  };

  std::optional<Rat> best;
  for (int n0 = 1; n0 <= n_servers; ++n0) {
    if (num_messages == 2) {
      const Rat value = (1 + tail(n0) / n0) / (1 + Rat(1, n0));
      if (!best || value < *best) best = value;
      continue;
    }
    for (int n1 = n0; n1 <= n_servers; ++n1) {
      const Rat value = (1 + tail(n0) / n0 + tail(n1) / (Rat(n0) * n1)) /
                        (1 + Rat(1, n0) + Rat(1, Rat(n0) * n1));
      if (!best || value < *best) best = value;
    }
  }
  return *best;
}

Rat capacity_asym_any_order(const TrafficRatio& tau, int num_messages) {
  TrafficRatio sorted = tau;
  std::sort(sorted.tau.begin(), sorted.tau.end(), std::greater<Rat>());
  return capacity_asym(sorted, num_messages);
}

std::vector<Rat> LinearConstraint::folded() const {
  std::vector<Rat> out;
  out.reserve(coeff_d.size());
  for (const Rat& c : coeff_d) out.push_back(c + coeff_D);
  return out;
}

Rat LinearConstraint::lhs(const DownloadAllocation& d) const {
  Rat v = 0;
  for (std::size_t n = 0; n < coeff_d.size(); ++n) v += coeff_d[n] * d.d[n];
  if (coeff_D != 0) v += coeff_D * d.total();
  return v;
}

bool LinearConstraint::satisfied(const DownloadAllocation& d) const {
  const Rat v = lhs(d);
  return sense == Sense::ge ? v >= rhs : v <= rhs;
}

std::vector<LinearConstraint> ConstraintSystem::all() const {
  std::vector<LinearConstraint> out = rate;
  out.insert(out.end(), nonneg.begin(), nonneg.end());
  return out;
}

namespace {

// Non-decreasing M-tuples over {1..N} (combinations with repetition).
std::vector<std::vector<int>> index_multisets(int n_servers, int size) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(size, 1);
  for (;;) {
    out.push_back(cur);
    int pos = size - 1;
    while (pos >= 0 && cur[pos] == n_servers) --pos;
    if (pos < 0) break;
    ++cur[pos];
    for (int j = pos + 1; j < size; ++j) cur[j] = cur[pos];
  }
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace

ConstraintSystem pir_constraints(int num_servers, int num_messages, long message_length) {
  if (num_servers < 1 || num_messages < 2 || message_length < 1)
    throw std::invalid_argument("constraint system needs N >= 1, M >= 2, L >= 1");
  ConstraintSystem sys;
  sys.num_servers = num_servers;
  sys.num_messages = num_messages;
  sys.message_length = message_length;

  std::vector<int> perm(num_servers);
  std::iota(perm.begin(), perm.end(), 0);
  const auto multisets = index_multisets(num_servers, num_messages);

  do {
    for (const auto& levels : multisets) {
      LinearConstraint c;
      c.coeff_d.assign(num_servers, Rat(0));
      c.coeff_D = 1;
      c.sense = LinearConstraint::Sense::ge;
      // Linearization of L/D <= C(tau) for one cutoff tuple: tail j carries
      // weight 1/(n_0...n_j). The last level is inert (only M-1 cutoffs
      // add tail sums), which keeps the permutation-form row count at
      // N! * C(N+M-1, M).
      Rat rhs_factor = 1;
      Rat denom = 1;
      for (int j = 0; j + 1 < num_messages; ++j) {
        denom *= levels[j];
        const Rat weight = 1 / denom;
        for (int n = levels[j]; n < num_servers; ++n) c.coeff_d[perm[n]] += weight;
        rhs_factor += weight;
      }
      c.rhs = Rat(message_length) * rhs_factor;
      std::vector<int> perm1(perm.size());
      for (std::size_t i = 0; i < perm.size(); ++i) perm1[i] = perm[i] + 1;
      c.label = "rate[perm=(" + join_ints(perm1) + "),levels=(" + join_ints(levels) + ")]";
      sys.rate_raw.push_back(std::move(c));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  for (const auto& c : sys.rate_raw) {
    bool dup = false;
    for (const auto& kept : sys.rate)
      if (kept.coeff_d == c.coeff_d && kept.rhs == c.rhs) {
        dup = true;
        break;
      }
    if (!dup) sys.rate.push_back(c);
  }

  for (int n = 0; n < num_servers; ++n) {
    LinearConstraint c;
    c.coeff_d.assign(num_servers, Rat(0));
    c.coeff_d[n] = 1;
    c.coeff_D = 0;
    c.sense = LinearConstraint::Sense::ge;
    c.rhs = 0;
    c.label = "nonneg(d" + std::to_string(n + 1) + ")";
    sys.nonneg.push_back(std::move(c));
  }
  return sys;
}

std::vector<LinearConstraint> sorted_reduction(const ConstraintSystem& sys) {
  // Under d_1 >= ... >= d_N the binding permutation image of a row pairs the
  // smallest coefficients with the largest entries, so only rows whose
  // coefficients are non-decreasing can be tight.
  std::vector<LinearConstraint> out;
  for (const auto& c : sys.rate) {
    bool ascending = true;
    for (std::size_t n = 0; n + 1 < c.coeff_d.size(); ++n)
      if (c.coeff_d[n] > c.coeff_d[n + 1]) {
        ascending = false;
        break;
      }
    if (ascending) out.push_back(c);
  }
  return out;
}

namespace {

LinearConstraint download_box(const SystemConfig& config) {
  LinearConstraint c;
  c.coeff_d.assign(config.num_servers, Rat(0));
  c.coeff_D = 1;
  c.sense = LinearConstraint::Sense::le;
  c.rhs = Rat(config.message_length) / config.r_min;
  c.label = "box(D <= L/r_min = " + format_rational(c.rhs) + ")";
  return c;
}

}  // namespace

std::optional<std::string> first_violated(const DownloadAllocation& d,
                                          const SystemConfig& config) {
  if (static_cast<int>(d.d.size()) != config.num_servers)
    throw std::invalid_argument("allocation dimension mismatch");
  const ConstraintSystem sys =
      pir_constraints(config.num_servers, config.num_messages, config.message_length);
  for (const auto& c : sys.nonneg)
    if (!c.satisfied(d)) return c.label;
  for (const auto& c : sys.rate)
    if (!c.satisfied(d)) return c.label;
  const LinearConstraint box = download_box(config);
  if (!box.satisfied(d)) return box.label;
  return std::nullopt;
}

bool feasible(const DownloadAllocation& d, const SystemConfig& config) {
  return !first_violated(d, config).has_value();
}

std::vector<DownloadAllocation> enumerate_vertices(
    const std::vector<LinearConstraint>& constraints, int num_servers,
    std::size_t subset_budget) {
  const std::size_t m = constraints.size();
  const std::size_t n = static_cast<std::size_t>(num_servers);
  if (m < n) return {};

  // Subset count C(m, n); bail out before any work if over budget.
  std::size_t subsets = 1;
  for (std::size_t i = 0; i < n; ++i) subsets = subsets * (m - i) / (i + 1);
  if (subsets > subset_budget)
    throw SizeLimitError("vertex enumeration over budget: " + std::to_string(subsets) +
                         " subsets > " + std::to_string(subset_budget));

  std::vector<std::vector<Rat>> folded;
  folded.reserve(m);
  for (const auto& c : constraints) folded.push_back(c.folded());

  std::vector<DownloadAllocation> vertices;
  std::vector<std::size_t> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  for (;;) {
    std::vector<std::vector<Rat>> a;
    std::vector<Rat> b;
    a.reserve(n);
    b.reserve(n);
    for (std::size_t i : pick) {
      a.push_back(folded[i]);
      b.push_back(constraints[i].rhs);
    }
    if (auto x = lin::solve(std::move(a), std::move(b))) {
      DownloadAllocation cand(std::move(*x));
      bool ok = true;
      for (const auto& c : constraints)
        if (!c.satisfied(cand)) {
          ok = false;
          break;
        }
      if (ok && std::find(vertices.begin(), vertices.end(), cand) == vertices.end())
        vertices.push_back(std::move(cand));
    }

    // next n-subset of {0..m-1}
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == m - n + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  return vertices;
}

std::vector<CornerPoint> corner_points(int num_servers, int num_messages,
                                       long message_length) {
  const ConstraintSystem sys = pir_constraints(num_servers, num_messages, message_length);
  std::vector<LinearConstraint> cons = sorted_reduction(sys);
  // Ordering chain d_1 >= d_2 >= ... >= d_N >= 0.
  for (int n = 0; n < num_servers; ++n) {
    LinearConstraint c;
    c.coeff_d.assign(num_servers, Rat(0));
    c.coeff_d[n] = 1;
    if (n + 1 < num_servers) c.coeff_d[n + 1] = -1;
    c.coeff_D = 0;
    c.sense = LinearConstraint::Sense::ge;
    c.rhs = 0;
    c.label = n + 1 < num_servers
                  ? "chain(d" + std::to_string(n + 1) + " >= d" + std::to_string(n + 2) + ")"
                  : "chain(d" + std::to_string(num_servers) + " >= 0)";
    cons.push_back(std::move(c));
  }

  std::vector<CornerPoint> corners;
  for (auto& v : enumerate_vertices(cons, num_servers)) {
    const Rat total = v.total();
    corners.push_back(CornerPoint{std::move(v), Rat(message_length) / total});
  }
  std::sort(corners.begin(), corners.end(), [](const CornerPoint& a, const CornerPoint& b) {
    const Rat ta = a.allocation.total(), tb = b.allocation.total();
    if (ta != tb) return ta > tb;
    return std::lexicographical_compare(b.allocation.d.begin(), b.allocation.d.end(),
                                        a.allocation.d.begin(), a.allocation.d.end());
  });
  return corners;
}

std::vector<CornerPoint> corner_points_all_orders(int num_servers, int num_messages,
                                                  long message_length) {
  std::vector<CornerPoint> out;
  for (const auto& corner : corner_points(num_servers, num_messages, message_length)) {
    std::vector<int> perm(num_servers);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<Rat> d(num_servers);
      for (int n = 0; n < num_servers; ++n) d[n] = corner.allocation.d[perm[n]];
      DownloadAllocation cand(std::move(d));
      bool seen = false;
      for (const auto& existing : out)
        if (existing.allocation == cand) {
          seen = true;
          break;
        }
      if (!seen) out.push_back(CornerPoint{std::move(cand), corner.rate});
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

}  // namespace agepir
