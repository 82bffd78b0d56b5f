#include "agepir/model.hpp"

#include <stdexcept>

#include "agepir/capacity.hpp"
#include "agepir/errors.hpp"

namespace agepir {

std::string to_string(Metric m) { return m == Metric::peak ? "peak" : "avg"; }

std::string to_string(DelayFamily f) {
  switch (f) {
    case DelayFamily::deterministic: return "deterministic";
    case DelayFamily::exponential: return "exponential";
    case DelayFamily::gamma: return "gamma";
    case DelayFamily::shifted_exponential: return "shifted_exponential";
  }
  throw std::logic_error("unknown family");
}

void SystemConfig::validate() const {
  if (num_servers < 1) throw ConfigError("N must be >= 1");
  if (num_messages < 2) throw ConfigError("M must be >= 2");
  if (message_length < 1) throw ConfigError("L must be >= 1");
  if (static_cast<int>(servers.size()) != num_servers)
    throw ConfigError("need exactly N server stats entries");
  if (!families.empty() && static_cast<int>(families.size()) != num_servers)
    throw ConfigError("family list must have N entries when present");
  for (const auto& s : servers) {
    if (s.mu <= 0) throw ConfigError("mu must be > 0");
    if (s.sigma2 < 0) throw ConfigError("sigma2 must be >= 0");
  }
  const Rat cap = pir_capacity(num_servers, num_messages);
  if (r_min < Rat(1, num_messages))
    throw ConfigError("r_min must be >= 1/M = " + format_rational(Rat(1, num_messages)));
  if (r_min > cap)
    throw InfeasibleError("r_min = " + format_rational(r_min) +
                          " exceeds the PIR capacity C_PIR(N,M) = " + format_rational(cap));
}

void SystemConfig::validate_for_solve() const {
  validate();
  if (num_servers < 2) throw ConfigError("solver requires N >= 2");
  if (num_messages != 2 && num_messages != 3)
    throw ConfigError("solver covers M in {2, 3}");
}

DelayFamily SystemConfig::family_of(int server) const {
  if (!families.empty()) return families[server];
  return servers[server].sigma2 > 0 ? DelayFamily::gamma : DelayFamily::deterministic;
}

std::vector<Rat> SystemConfig::mus() const {
  std::vector<Rat> v;
  v.reserve(servers.size());
  for (const auto& s : servers) v.push_back(s.mu);
  return v;
}

std::vector<Rat> SystemConfig::sigma2s() const {
  std::vector<Rat> v;
  v.reserve(servers.size());
  for (const auto& s : servers) v.push_back(s.sigma2);
  return v;
}

Rat DownloadAllocation::total() const {
  Rat sum = 0;
  for (const Rat& x : d) sum += x;
  return sum;
}

MixturePolicy MixturePolicy::degenerate(DownloadAllocation a) {
  return MixturePolicy{{MixtureComponent{std::move(a), Rat(1)}}};
}

void MixturePolicy::validate(int num_servers) const {
  if (components.empty()) throw ConfigError("mixture needs at least one component");
  Rat total = 0;
  for (const auto& c : components) {
    if (static_cast<int>(c.alloc.d.size()) != num_servers)
      throw ConfigError("mixture component dimension mismatch");
    if (c.prob < 0) throw ConfigError("mixture probabilities must be >= 0");
    for (const Rat& x : c.alloc.d)
      if (x < 0) throw ConfigError("allocations must be >= 0");
    total += c.prob;
  }
  if (total != 1) throw ConfigError("mixture probabilities must sum to 1");
}

DownloadAllocation MixturePolicy::expected() const {
  DownloadAllocation out;
  if (components.empty()) return out;
  out.d.assign(components[0].alloc.d.size(), Rat(0));
  for (const auto& c : components)
    for (std::size_t n = 0; n < out.d.size(); ++n) out.d[n] += c.prob * c.alloc.d[n];
  return out;
}

Rat epoch_mean(const std::vector<Rat>& mu, const DownloadAllocation& d) {
  Rat m = 0;
  for (std::size_t n = 0; n < mu.size(); ++n) m += mu[n] * d.d[n];
  return m;
}

Rat epoch_second_moment(const std::vector<Rat>& mu, const std::vector<Rat>& sigma2,
                        const DownloadAllocation& d) {
  // T is a sum of d_n independent per-bit delays: Var T = sigma2 . d.
  Rat var = 0;
  for (std::size_t n = 0; n < mu.size(); ++n) var += sigma2[n] * d.d[n];
  const Rat m = epoch_mean(mu, d);
  return var + m * m;
}

Rat peak_aoi(const std::vector<Rat>& mu, const DownloadAllocation& d) {
  return 2 * epoch_mean(mu, d);
}

Rat avg_aoi(const std::vector<Rat>& mu, const std::vector<Rat>& sigma2,
            const DownloadAllocation& d) {
  const Rat m = epoch_mean(mu, d);
  if (m == 0) throw std::invalid_argument("average age undefined for empty allocation");
  const Rat m2 = epoch_second_moment(mu, sigma2, d);
  return m + m2 / (2 * m);
}

MixtureMoments mixture_moments(const std::vector<Rat>& mu, const std::vector<Rat>& sigma2,
                               const MixturePolicy& policy) {
  MixtureMoments mm{Rat(0), Rat(0)};
  for (const auto& c : policy.components) {
    mm.mean += c.prob * epoch_mean(mu, c.alloc);
    mm.second_moment += c.prob * epoch_second_moment(mu, sigma2, c.alloc);
  }
  return mm;
}

Rat mixture_peak_aoi(const std::vector<Rat>& mu, const MixturePolicy& policy) {
  Rat m = 0;
  for (const auto& c : policy.components) m += c.prob * epoch_mean(mu, c.alloc);
  return 2 * m;
}

Rat mixture_avg_aoi(const std::vector<Rat>& mu, const std::vector<Rat>& sigma2,
                    const MixturePolicy& policy) {
  const MixtureMoments mm = mixture_moments(mu, sigma2, policy);
  if (mm.mean == 0) throw std::invalid_argument("average age undefined for empty mixture");
  return mm.mean + mm.second_moment / (2 * mm.mean);
}

}  // namespace agepir
