#include <deque>

#include "htc/baselines.hpp"
#include "htc/error.hpp"

namespace htc {

DbscanResult dbscan(const DistanceMatrix& dm, double eps, std::size_t min_pts) {
  if (!(eps > 0.0)) fail(ErrorCategory::invalid_argument, "eps must be positive");
  if (min_pts < 1) fail(ErrorCategory::invalid_argument, "min_pts must be at least 1");

  const std::size_t n = dm.size();
  DbscanResult result;
  result.eps = eps;
  result.min_pts = min_pts;
  result.core.assign(n, false);
  result.assignments.assign(n, DbscanResult::kNoise);

  for (std::size_t i = 0; i < n; ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) count += dm(i, j) < eps ? 1 : 0;
    result.core[i] = count >= min_pts;
  }

  std::deque<std::size_t> frontier;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (!result.core[seed] || result.assignments[seed] != DbscanResult::kNoise) continue;
    const std::size_t cluster = result.cluster_count++;
    result.assignments[seed] = cluster;
    frontier.push_back(seed);
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      for (std::size_t q = 0; q < n; ++q) {
        if (!(dm(p, q) < eps) || result.assignments[q] != DbscanResult::kNoise) continue;
        result.assignments[q] = cluster;
        if (result.core[q]) frontier.push_back(q);
      }
    }
  }
  return result;
}

}  // namespace htc
