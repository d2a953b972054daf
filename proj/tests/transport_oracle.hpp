#pragma once

// Test-only optimal transport oracle, independent of the sorted-pair W1.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace selfex::testing {

// Minimum-cost perfect assignment (Hungarian method, O(n^3)).
inline double min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j) total += cost[p[j] - 1][j - 1];
  return total;
}

// Optimal transport between uniform empirical measures of sizes n and m.
// Splitting every a-atom into m units and every b-atom into n units gives
// an integral transportation problem, so an assignment on the n*m units
// attains the LP optimum.
inline double transport_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size(), m = b.size(), units = n * m;
  std::vector<std::vector<double>> cost(units, std::vector<double>(units));
  for (std::size_t r = 0; r < units; ++r) {
    for (std::size_t c = 0; c < units; ++c) cost[r][c] = std::fabs(a[r / m] - b[c / n]);
  }
  return min_cost_assignment(cost) / static_cast<double>(units);
}

}  // namespace selfex::testing
