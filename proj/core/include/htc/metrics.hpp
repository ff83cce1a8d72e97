#pragma once

#include <cstddef>
#include <optional>

#include "htc/distance_matrix.hpp"
#include "htc/point_cloud.hpp"

namespace htc {

DistanceMatrix euclidean_matrix(const PointCloud& pc);

struct FermatOptions {
  double alpha = 2.0;
  // When set, paths may only use edges to each point's k nearest
  // neighbours (an approximation). Unset means the complete graph.
  std::optional<std::size_t> knn;
};

// Set-relative Fermat distance: shortest paths through the cloud with edge
// weight |x - y|^alpha. alpha must be >= 1.
DistanceMatrix fermat_matrix(const PointCloud& pc, const FermatOptions& options);

inline DistanceMatrix fermat_matrix(const PointCloud& pc, double alpha) {
  return fermat_matrix(pc, FermatOptions{alpha, std::nullopt});
}

}  // namespace htc
