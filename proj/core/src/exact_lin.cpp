#include "agepir/exact_lin.hpp"

#include <cstddef>

namespace agepir::lin {

std::optional<std::vector<Rat>> solve(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    const Rat inv = Rat(1) / a[col][col];
    for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
    b[col] *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      const Rat f = a[i][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
      b[i] -= f * b[col];
    }
  }
  return b;
}

namespace {

// Canonical-tableau simplex step with Bland's rule; exact arithmetic, so
// Bland guarantees termination.  Columns in `banned` may not enter.
void run_simplex(std::vector<std::vector<Rat>>& tab, std::vector<std::size_t>& basis,
                 const std::vector<Rat>& cost, const std::vector<bool>& banned) {
  const std::size_t m = tab.size();
  const std::size_t ncols = tab[0].size() - 1;  // last column is RHS
  for (;;) {
    // Reduced costs; entering = lowest index with negative reduced cost.
    std::size_t enter = ncols;
    for (std::size_t j = 0; j < ncols && enter == ncols; ++j) {
      if (banned[j]) continue;
      Rat r = cost[j];
      for (std::size_t i = 0; i < m; ++i)
        if (cost[basis[i]] != 0) r -= cost[basis[i]] * tab[i][j];
      if (r < 0) enter = j;
    }
    if (enter == ncols) return;  // optimal

    std::size_t leave = m;
    Rat best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (tab[i][enter] <= 0) continue;
      Rat ratio = tab[i][ncols] / tab[i][enter];
      if (leave == m || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) return;  // unbounded; cannot happen for our bounded feeds

    const Rat piv = tab[leave][enter];
    for (auto& v : tab[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || tab[i][enter] == 0) continue;
      const Rat f = tab[i][enter];
      for (std::size_t j = 0; j <= ncols; ++j) tab[i][j] -= f * tab[leave][j];
    }
    basis[leave] = enter;
  }
}

}  // namespace

std::optional<std::vector<Rat>> nonneg_solve(const std::vector<std::vector<Rat>>& e,
                                             const std::vector<Rat>& t,
                                             const std::vector<Rat>* cost) {
  const std::size_t m = e.size();
  if (m == 0) return std::vector<Rat>{};
  const std::size_t n = e[0].size();
  const std::size_t ncols = n + m;  // original + artificial

  std::vector<std::vector<Rat>> tab(m, std::vector<Rat>(ncols + 1));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = t[i] < 0;
    for (std::size_t j = 0; j < n; ++j) tab[i][j] = flip ? Rat(-e[i][j]) : e[i][j];
    tab[i][n + i] = 1;
    tab[i][ncols] = flip ? Rat(-t[i]) : t[i];
    basis[i] = n + i;
  }

  std::vector<bool> banned(ncols, false);
  std::vector<Rat> phase1(ncols, Rat(0));
  for (std::size_t j = n; j < ncols; ++j) phase1[j] = 1;
  run_simplex(tab, basis, phase1, banned);

  Rat infeas = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] >= n) infeas += tab[i][ncols];
  if (infeas != 0) return std::nullopt;

  for (std::size_t j = n; j < ncols; ++j) banned[j] = true;
  if (cost) {
    std::vector<Rat> phase2(ncols, Rat(0));
    for (std::size_t j = 0; j < n && j < cost->size(); ++j) phase2[j] = (*cost)[j];
    run_simplex(tab, basis, phase2, banned);
  }

  std::vector<Rat> x(n, Rat(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = tab[i][ncols];
  return x;
}

}  // namespace agepir::lin
