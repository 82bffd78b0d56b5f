#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "agepir/model.hpp"

namespace agepir::detail {

// Servers reordered so mu is non-decreasing (stable: ties keep input order).
// perm[k] = original index of the k-th sorted server.
struct SortedView {
  SystemConfig config;
  std::vector<int> perm;
};

inline SortedView sorted_by_mu(const SystemConfig& in) {
  SortedView sv;
  sv.perm.resize(in.num_servers);
  std::iota(sv.perm.begin(), sv.perm.end(), 0);
  std::stable_sort(sv.perm.begin(), sv.perm.end(),
                   [&](int a, int b) { return in.servers[a].mu < in.servers[b].mu; });
  sv.config = in;
  for (int k = 0; k < in.num_servers; ++k) {
    sv.config.servers[k] = in.servers[sv.perm[k]];
    if (!in.families.empty()) sv.config.families[k] = in.families[sv.perm[k]];
  }
  return sv;
}

inline DownloadAllocation to_original(const DownloadAllocation& sorted_d,
                                      const std::vector<int>& perm) {
  DownloadAllocation out;
  out.d.resize(sorted_d.d.size());
  for (std::size_t k = 0; k < perm.size(); ++k) out.d[perm[k]] = sorted_d.d[k];
  return out;
}

inline MixturePolicy to_original(const MixturePolicy& sorted_mix,
                                 const std::vector<int>& perm) {
  MixturePolicy out;
  for (const auto& c : sorted_mix.components)
    out.components.push_back(MixtureComponent{to_original(c.alloc, perm), c.prob});
  return out;
}

// d is sorted like the view (largest first); true lexicographic order.
inline bool lex_less(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace agepir::detail
