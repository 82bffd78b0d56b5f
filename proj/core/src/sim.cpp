#include "agepir/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "agepir/errors.hpp"

namespace agepir {

double Rng::uniform01() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }

double Rng::uniform01_positive() {
  double u;
  do {
    u = uniform01();
  } while (u <= 0.0);
  return u;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  have_spare_ = true;
  return u * f;
}

double Rng::exponential() { return -std::log(uniform01_positive()); }

double Rng::gamma(double shape, double scale) {
  if (shape < 1.0) {
    // Boost the shape by one, then correct with U^(1/shape).
    const double u = uniform01_positive();
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01_positive();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

DelayDistribution DelayDistribution::fit(DelayFamily family, double mean, double variance) {
  if (!(mean > 0)) throw ConfigError("delay mean must be positive");
  if (variance < 0) throw ConfigError("delay variance must be nonnegative");
  DelayDistribution d;
  d.family = family;
  d.mean = mean;
  d.variance = variance;
  switch (family) {
    case DelayFamily::deterministic:
      if (variance != 0) {
        throw ConfigError("deterministic delay family requires variance 0");
      }
      break;
    case DelayFamily::exponential:
      if (std::fabs(variance - mean * mean) > 1e-12 * std::max(1.0, mean * mean)) {
        throw ConfigError("exponential delay family requires variance == mean^2");
      }
      d.p0 = 1.0 / mean;
      break;
    case DelayFamily::shifted_exponential: {
      if (!(variance > 0)) {
        throw ConfigError("shifted exponential delay family requires variance > 0");
      }
      const double sd = std::sqrt(variance);
      if (sd > mean) {
        throw ConfigError("shifted exponential delay family requires sqrt(variance) <= mean");
      }
      d.p0 = mean - sd;  // shift
      d.p1 = 1.0 / sd;   // rate
      break;
    }
    case DelayFamily::gamma:
      if (!(variance > 0)) throw ConfigError("gamma delay family requires variance > 0");
      d.p0 = mean * mean / variance;  // shape
      d.p1 = variance / mean;         // scale
      break;
  }
  return d;
}

double DelayDistribution::sample(Rng& rng) const {
  switch (family) {
    case DelayFamily::deterministic:
      return mean;
    case DelayFamily::exponential:
      return rng.exponential() / p0;
    case DelayFamily::shifted_exponential:
      return p0 + rng.exponential() / p1;
    case DelayFamily::gamma:
      return rng.gamma(p0, p1);
  }
  return mean;
}

std::vector<DelayDistribution> fit_delays(const SystemConfig& config) {
  config.validate();
  std::vector<DelayDistribution> delays;
  delays.reserve(config.servers.size());
  for (int n = 0; n < config.num_servers; ++n) {
    delays.push_back(DelayDistribution::fit(config.family_of(n),
                                            to_double(config.servers[n].mu),
                                            to_double(config.servers[n].sigma2)));
  }
  return delays;
}

namespace {

// Per-bit sampling needs whole bits; reject anything fractional up front.
std::vector<std::vector<long>> integral_components(const MixturePolicy& policy,
                                                   std::size_t num_servers) {
  std::vector<std::vector<long>> out;
  out.reserve(policy.components.size());
  for (std::size_t c = 0; c < policy.components.size(); ++c) {
    const auto& alloc = policy.components[c].alloc;
    std::vector<long> bits(num_servers, 0);
    for (std::size_t n = 0; n < num_servers; ++n) {
      const Rat& x = alloc.d[n];
      if (denominator(x) != 1 || x < 0) {
        throw SimError("fractional allocation: component " + std::to_string(c + 1) +
                       " downloads " + format_rational(x) + " bits from server " +
                       std::to_string(n + 1));
      }
      bits[n] = numerator(x).convert_to<long>();
    }
    out.push_back(std::move(bits));
  }
  return out;
}

std::vector<double> cumulative_probs(const MixturePolicy& policy) {
  std::vector<double> cum;
  cum.reserve(policy.components.size());
  double acc = 0;
  for (const auto& comp : policy.components) {
    acc += to_double(comp.prob);
    cum.push_back(acc);
  }
  cum.back() = 1.0;
  return cum;
}

double epoch_from_bits(const std::vector<long>& bits,
                       const std::vector<DelayDistribution>& delays, Rng& rng) {
  double t = 0;
  for (std::size_t n = 0; n < bits.size(); ++n) {
    for (long i = 0; i < bits[n]; ++i) t += delays[n].sample(rng);
  }
  return t;
}

// Lag-1 Newey-West standard error of the mean of x.
double lag1_se(const std::vector<double>& x) {
  const std::size_t k = x.size();
  double mean = 0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(k);
  double g0 = 0, g1 = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const double e = x[j] - mean;
    g0 += e * e;
    if (j > 0) g1 += e * (x[j - 1] - mean);
  }
  g0 /= static_cast<double>(k);
  g1 /= static_cast<double>(k);
  const double var = (g0 + 2 * g1) / static_cast<double>(k);
  return var > 0 ? std::sqrt(var) : 0.0;
}

}  // namespace

double sample_epoch(const MixturePolicy& policy,
                    const std::vector<DelayDistribution>& delays, Rng& rng) {
  policy.validate(static_cast<int>(delays.size()));
  const auto comps = integral_components(policy, delays.size());
  std::size_t pick = 0;
  if (comps.size() > 1) {
    // Degenerate mixtures consume no randomness here, so a one-component
    // policy reproduces its component's stream bit for bit.
    const auto cum = cumulative_probs(policy);
    const double u = rng.uniform01();
    while (pick + 1 < cum.size() && u >= cum[pick]) ++pick;
  }
  return epoch_from_bits(comps[pick], delays, rng);
}

SimResult run(const SystemConfig& config, const MixturePolicy& policy,
              const std::vector<DelayDistribution>& delays,
              std::size_t num_epochs, std::uint64_t seed) {
  config.validate();
  policy.validate(config.num_servers);
  if (delays.size() != static_cast<std::size_t>(config.num_servers)) {
    throw SimError("delay list does not match the number of servers");
  }
  if (num_epochs < 2) throw SimError("need at least 2 measured epochs");

  const auto comps = integral_components(policy, delays.size());
  const auto cum = comps.size() > 1 ? cumulative_probs(policy) : std::vector<double>{};
  Rng rng(seed);
  auto draw_epoch = [&]() {
    std::size_t pick = 0;
    if (comps.size() > 1) {
      const double u = rng.uniform01();
      while (pick + 1 < cum.size() && u >= cum[pick]) ++pick;
    }
    return epoch_from_bits(comps[pick], delays, rng);
  };

  const std::size_t k = num_epochs;
  std::vector<double> t(k), p(k), a(k);
  double t_prev = draw_epoch();  // warm-up epoch, discarded
  for (std::size_t j = 0; j < k; ++j) {
    const double tj = draw_epoch();
    t[j] = tj;
    p[j] = t_prev + tj;                  // epoch peak
    a[j] = t_prev * tj + 0.5 * tj * tj;  // trapezoid area under the sawtooth
    t_prev = tj;
  }

  double sum_t = 0, sum_p = 0, sum_a = 0;
  for (std::size_t j = 0; j < k; ++j) {
    sum_t += t[j];
    sum_p += p[j];
    sum_a += a[j];
  }

  SimResult result;
  result.empirical_peak = sum_p / static_cast<double>(k);
  result.empirical_avg = sum_a / sum_t;
  result.se_peak = lag1_se(p);
  // Ratio estimator: delta-method residuals u_j = (A_j - R T_j) / mean(T).
  const double t_bar = sum_t / static_cast<double>(k);
  std::vector<double> u(k);
  for (std::size_t j = 0; j < k; ++j) u[j] = (a[j] - result.empirical_avg * t[j]) / t_bar;
  result.se_avg = lag1_se(u);
  result.seed = seed;
  result.epochs_measured = k;
  result.rng_algorithm = Rng::kAlgorithm;
  return result;
}

SimResult run(const SystemConfig& config, const MixturePolicy& policy,
              std::size_t num_epochs, std::uint64_t seed) {
  return run(config, policy, fit_delays(config), num_epochs, seed);
}

}  // namespace agepir
