#pragma once

#include <string>
#include <vector>

#include "agepir/rational.hpp"

namespace agepir {

enum class Metric { peak, average };

enum class DelayFamily { deterministic, exponential, gamma, shifted_exponential };

std::string to_string(Metric m);
std::string to_string(DelayFamily f);

// Per-bit download delay statistics of one server.
struct ServerStats {
  Rat mu;      // mean, > 0
  Rat sigma2;  // variance, >= 0
};

// A replicated-storage system with a freshness-constrained PIR client.
// N servers each hold the same M messages of L bits; the client demands
// PIR rate at least r_min and downloads d_n bits per update from server n.
struct SystemConfig {
  int num_servers = 0;       // N
  int num_messages = 0;      // M; the solvers cover M in {2, 3}
  long message_length = 0;   // L, bits
  std::vector<ServerStats> servers;
  Rat r_min;
  // Optional per-server delay families for the simulator. Empty means the
  // default rule: gamma when sigma2 > 0, deterministic when sigma2 == 0.
  std::vector<DelayFamily> families;

  // Structural checks: sizes match, mu > 0, sigma2 >= 0, L >= 1, M >= 2,
  // N >= 1, and 1/M <= r_min <= C_PIR(N, M). Throws ConfigError.
  void validate() const;
  // Solvers additionally need N >= 2 and M in {2, 3}.
  void validate_for_solve() const;

  DelayFamily family_of(int server) const;
  std::vector<Rat> mus() const;
  std::vector<Rat> sigma2s() const;
};

// Bits pulled from each server per update cycle.
struct DownloadAllocation {
  std::vector<Rat> d;

  DownloadAllocation() = default;
  explicit DownloadAllocation(std::vector<Rat> entries) : d(std::move(entries)) {}

  Rat total() const;  // D
  bool operator==(const DownloadAllocation& o) const { return d == o.d; }
};

struct MixtureComponent {
  DownloadAllocation alloc;
  Rat prob;
};

// Epoch-wise randomized time sharing over a finite set of allocations.
struct MixturePolicy {
  std::vector<MixtureComponent> components;

  static MixturePolicy degenerate(DownloadAllocation a);
  // probs >= 0 and sum exactly 1, component dimensions all equal num_servers,
  // entries >= 0. Throws ConfigError.
  void validate(int num_servers) const;
  DownloadAllocation expected() const;
};

// First and second moments of the epoch length T = sum_n sum_bits Z_n.
Rat epoch_mean(const std::vector<Rat>& mu, const DownloadAllocation& d);
Rat epoch_second_moment(const std::vector<Rat>& mu, const std::vector<Rat>& sigma2,
                        const DownloadAllocation& d);

// Peak age 2 E[T]; average age (3/2) E[T] + var-term. Both exact.
Rat peak_aoi(const std::vector<Rat>& mu, const DownloadAllocation& d);
Rat avg_aoi(const std::vector<Rat>& mu, const std::vector<Rat>& sigma2,
            const DownloadAllocation& d);

struct MixtureMoments {
  Rat mean;           // E[T]
  Rat second_moment;  // E[T^2]
};

MixtureMoments mixture_moments(const std::vector<Rat>& mu, const std::vector<Rat>& sigma2,
                               const MixturePolicy& policy);

// Ages of an i.i.d. epoch mixture: peak is linear in the allocation, the
// average pays a dispersion penalty whenever component epoch means differ.
Rat mixture_peak_aoi(const std::vector<Rat>& mu, const MixturePolicy& policy);
Rat mixture_avg_aoi(const std::vector<Rat>& mu, const std::vector<Rat>& sigma2,
                    const MixturePolicy& policy);

// A solved rate/age trade-off point. Allocations and probabilities stay
// rational so feasibility and rates are exact; near-optimal irrational
// points are carried as rational approximations whose objective differs
// from the true optimum by far less than any reported tolerance.
struct Solution {
  Metric metric = Metric::peak;
  DownloadAllocation allocation;  // expected allocation of the mixture
  MixturePolicy mixture;
  Rat achieved_rate;              // L / E[D]
  // Metric evaluated on the mixture (exact: linear for peak, the
  // dispersion-aware formula for average).
  Rat objective_exact;
  // Metric formula applied to the expected allocation as if it were
  // directly schedulable. Equals objective_exact for peak.
  Rat objective_idealized_exact;

  double objective() const { return to_double(objective_exact); }
  double objective_idealized() const { return to_double(objective_idealized_exact); }
};

}  // namespace agepir
