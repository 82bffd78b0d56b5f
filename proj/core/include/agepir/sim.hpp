#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "agepir/model.hpp"

namespace agepir {

// Deterministic random source: mt19937_64 with fully specified transforms
// (53-bit shift uniforms, polar normals, Marsaglia-Tsang gammas), so equal
// seeds give equal streams on any conforming standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }
  double uniform01();            // in [0, 1)
  double uniform01_positive();   // in (0, 1)
  double normal();
  double exponential();          // unit mean
  double gamma(double shape, double scale);

  static constexpr const char* kAlgorithm = "mt19937_64/shift53-polar-mt2000";

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// One per-bit delay law, moment-fitted: the analytic mean and variance of
// the fitted parameters equal the targets by construction.
struct DelayDistribution {
  DelayFamily family = DelayFamily::gamma;
  double mean = 0;
  double variance = 0;
  double p0 = 0;  // gamma: shape; shifted_exponential: shift; exponential: rate
  double p1 = 0;  // gamma: scale; shifted_exponential: rate

  // Validates family/moment compatibility: deterministic needs variance 0,
  // exponential needs variance == mean^2, shifted exponential needs
  // sqrt(variance) <= mean, gamma needs variance > 0. Throws ConfigError.
  static DelayDistribution fit(DelayFamily family, double mean, double variance);

  double sample(Rng& rng) const;
};

// The per-server laws implied by the config's moments and family choices.
std::vector<DelayDistribution> fit_delays(const SystemConfig& config);

// Epoch length: draw a mixture component by its probability (no draw when
// degenerate), then sum one delay per downloaded bit, servers in order.
// Components must be integral; throws SimError on fractional entries.
double sample_epoch(const MixturePolicy& policy,
                    const std::vector<DelayDistribution>& delays, Rng& rng);

struct SimResult {
  double empirical_peak = 0;
  double empirical_avg = 0;
  double se_peak = 0;  // lag-1-corrected standard errors (adjacent epochs
  double se_avg = 0;   // share a boundary, so plain i.i.d. errors lie)
  std::uint64_t seed = 0;
  std::size_t epochs_measured = 0;
  std::string rng_algorithm;
};

// Zero-wait renewal simulation of the mixture policy. num_epochs counts the
// measured epochs; one extra warm-up epoch is simulated first and discarded
// (the process starts with a fresh update, so the warm-up peak would pair
// with T_0 = 0 and bias both estimators). num_epochs >= 2.
SimResult run(const SystemConfig& config, const MixturePolicy& policy,
              const std::vector<DelayDistribution>& delays,
              std::size_t num_epochs, std::uint64_t seed);
// Same, with delays fitted from the config.
SimResult run(const SystemConfig& config, const MixturePolicy& policy,
              std::size_t num_epochs, std::uint64_t seed);

}  // namespace agepir
