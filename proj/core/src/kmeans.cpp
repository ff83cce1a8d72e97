#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "htc/baselines.hpp"
#include "htc/error.hpp"

namespace htc {

namespace {

double squared_distance(const PointCloud& pc, std::size_t i, const Eigen::MatrixXd& centroids,
                        std::size_t j) {
  return (pc.coords.row(static_cast<Eigen::Index>(i)) -
          centroids.row(static_cast<Eigen::Index>(j)))
      .squaredNorm();
}

}  // namespace

KMeansResult kmeans(const PointCloud& pc, std::size_t k, std::uint64_t seed, std::size_t max_iter) {
  validate_point_cloud(pc);
  const std::size_t n = pc.size();
  if (k < 1 || k > n) {
    fail(ErrorCategory::invalid_argument,
         "k must lie in [1, " + std::to_string(n) + "], got " + std::to_string(k));
  }
  if (max_iter == 0) fail(ErrorCategory::invalid_argument, "max_iter must be positive");

  KMeansResult result;
  result.seed = seed;

  // Partial Fisher-Yates draw of k distinct indices.
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t s = 0; s < k; ++s) {
    std::uniform_int_distribution<std::size_t> pick(s, n - 1);
    std::swap(order[s], order[pick(rng)]);
  }
  Eigen::MatrixXd centroids(static_cast<Eigen::Index>(k), pc.coords.cols());
  for (std::size_t j = 0; j < k; ++j) {
    centroids.row(static_cast<Eigen::Index>(j)) = pc.coords.row(static_cast<Eigen::Index>(order[j]));
  }

  std::vector<std::size_t> assign(n, k);
  std::vector<std::size_t> counts(k);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = squared_distance(pc, i, centroids, 0);
      for (std::size_t j = 1; j < k; ++j) {
        const double d = squared_distance(pc, i, centroids, j);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    if (!changed) {
      result.converged = true;
      break;
    }

    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t c : assign) ++counts[c];
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] != 0) continue;
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[assign[i]] < 2) continue;
        const double d = squared_distance(pc, i, centroids, assign[i]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      --counts[assign[far]];
      assign[far] = j;
      counts[j] = 1;
    }

    centroids.setZero();
    for (std::size_t i = 0; i < n; ++i) {
      centroids.row(static_cast<Eigen::Index>(assign[i])) += pc.coords.row(static_cast<Eigen::Index>(i));
    }
    for (std::size_t j = 0; j < k; ++j) {
      centroids.row(static_cast<Eigen::Index>(j)) /= static_cast<double>(counts[j]);
    }

    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) objective += squared_distance(pc, i, centroids, assign[i]);
    result.objective_history.push_back(objective);
    result.iterations = it;
  }

  result.assignments = std::move(assign);
  result.centroids = std::move(centroids);
  result.objective = result.objective_history.empty() ? 0.0 : result.objective_history.back();
  return result;
}

}  // namespace htc
