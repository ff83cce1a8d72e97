#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "htc/error.hpp"
#include "htc/metrics.hpp"
#include "htc/parallel.hpp"

namespace htc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Edge weights |x_i - x_j|^alpha; kInf marks edges removed by the kNN filter.
std::vector<double> edge_weights(const PointCloud& pc, const FermatOptions& options) {
  const std::size_t n = pc.size();
  const DistanceMatrix euclid = euclidean_matrix(pc);
  std::vector<double> w(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      w[i * n + j] = options.alpha == 1.0 ? euclid(i, j) : std::pow(euclid(i, j), options.alpha);
    }
  }
  if (!options.knn) return w;

  const std::size_t k = std::min(*options.knn, n - 1);
  std::vector<char> keep(n * n, 0);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return euclid(i, a) < euclid(i, b);
    });
    std::size_t taken = 0;
    for (std::size_t j : order) {
      if (taken == k) break;
      if (j == i) continue;
      keep[i * n + j] = keep[j * n + i] = 1;
      ++taken;
    }
  }
  for (std::size_t idx = 0; idx < n * n; ++idx) {
    if (!keep[idx] && idx % (n + 1) != 0) w[idx] = kInf;
  }
  return w;
}

// Dense Dijkstra from source; O(n^2), which is optimal on a complete graph.
std::vector<double> shortest_paths(const std::vector<double>& w, std::size_t n, std::size_t source) {
  std::vector<double> dist(n, kInf);
  std::vector<char> done(n, 0);
  dist[source] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!done[v] && (u == n || dist[v] < dist[u])) u = v;
    }
    if (u == n || dist[u] == kInf) break;
    done[u] = 1;
    const double* row = &w[u * n];
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v]) continue;
      const double candidate = dist[u] + row[v];
      if (candidate < dist[v]) dist[v] = candidate;
    }
  }
  return dist;
}

}  // namespace

DistanceMatrix fermat_matrix(const PointCloud& pc, const FermatOptions& options) {
  validate_point_cloud(pc);
  if (!(options.alpha >= 1.0) || !std::isfinite(options.alpha)) {
    fail(ErrorCategory::invalid_argument, "Fermat alpha must be >= 1");
  }
  if (pc.size() < 2) fail(ErrorCategory::invalid_argument, "Fermat distance needs at least two points");
  if (options.knn && *options.knn == 0) {
    fail(ErrorCategory::invalid_argument, "Fermat kNN size must be positive");
  }

  const std::size_t n = pc.size();
  const std::vector<double> w = edge_weights(pc, options);
  DistanceMatrix dm(n);
  std::vector<char> unreachable(n, 0);
  // Entry (i, j) with i < j comes from the Dijkstra run rooted at i, so each
  // worker owns a disjoint set of cells.
  parallel_for(n, [&](std::size_t i) {
    const auto dist = shortest_paths(w, n, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist[j] == kInf) {
        unreachable[i] = 1;
        continue;
      }
      dm.set(i, j, dist[j]);
    }
  });
  if (std::any_of(unreachable.begin(), unreachable.end(), [](char c) { return c != 0; })) {
    fail(ErrorCategory::degenerate, "Fermat kNN graph is disconnected; increase k");
  }
  if (pc.labels) dm.set_labels(*pc.labels);
  return dm;
}

}  // namespace htc
