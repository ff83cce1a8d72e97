#include <cmath>
#include <string>

#include "htc/error.hpp"
#include "htc/metrics.hpp"
#include "htc/parallel.hpp"

namespace htc {

void validate_point_cloud(const PointCloud& pc) {
  if (pc.coords.rows() < 1 || pc.coords.cols() < 1) {
    fail(ErrorCategory::invalid_argument, "point cloud needs at least one item and one feature");
  }
  if (!pc.coords.allFinite()) {
    fail(ErrorCategory::invalid_argument, "point cloud has non-finite coordinates");
  }
  if (pc.labels && pc.labels->size() != pc.size()) {
    fail(ErrorCategory::invalid_argument, "label count does not match item count");
  }
}

DistanceMatrix euclidean_matrix(const PointCloud& pc) {
  validate_point_cloud(pc);
  const std::size_t n = pc.size();
  DistanceMatrix dm(n);
  const auto dim = pc.coords.cols();
  // Squares are summed in feature order so results do not depend on
  // vectorization width.
  parallel_for(n, [&](std::size_t i) {
    const auto a = static_cast<Eigen::Index>(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto b = static_cast<Eigen::Index>(j);
      double sum = 0.0;
      for (Eigen::Index c = 0; c < dim; ++c) {
        const double diff = pc.coords(a, c) - pc.coords(b, c);
        sum += diff * diff;
      }
      dm.set(i, j, std::sqrt(sum));
    }
  });
  if (pc.labels) dm.set_labels(*pc.labels);
  return dm;
}

}  // namespace htc
