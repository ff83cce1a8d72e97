#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "htc/dendrogram.hpp"
#include "htc/distance_matrix.hpp"
#include "htc/point_cloud.hpp"

namespace htc {

// ---------------------------------------------------------------- K-means

struct KMeansResult {
  std::vector<std::size_t> assignments;
  Eigen::MatrixXd centroids;  // k x dim
  double objective = 0.0;     // sum of squared distances to own centroid
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  std::vector<double> objective_history;  // after each Lloyd iteration
};

// Lloyd iteration seeded with k distinct data points drawn by a
// mt19937_64(seed). An empty cluster takes over the point farthest from its
// centroid.
KMeansResult kmeans(const PointCloud& pc, std::size_t k, std::uint64_t seed,
                    std::size_t max_iter = 300);

// ------------------------------------------------ agglomerative clustering

enum class Linkage { complete, average, weighted, single };

std::string_view linkage_name(Linkage l) noexcept;
Linkage parse_linkage(std::string_view name);

inline constexpr Linkage kAllLinkages[] = {Linkage::complete, Linkage::average,
                                           Linkage::weighted, Linkage::single};

// n - 1 binary merges; each joins the closest pair under the linkage. Ties
// go to the pair with the smallest representatives.
Dendrogram hc_agglomerative(const DistanceMatrix& dm, Linkage linkage);

// Pearson correlation between d(i,j) and the cophenetic height over i < j.
double cophenetic_correlation(const DistanceMatrix& dm, const Dendrogram& dend);

struct LinkageChoice {
  Linkage linkage = Linkage::complete;
  double coefficient = 0.0;
};

// Linkage with the largest cophenetic correlation; earlier entries of
// kAllLinkages win ties. Linkages whose cophenetic heights are all equal are
// skipped; if every one is, the degenerate error is rethrown.
LinkageChoice select_best_linkage(const DistanceMatrix& dm);

// ----------------------------------------------------------------- DBSCAN

struct DbscanResult {
  static constexpr std::size_t kNoise = std::numeric_limits<std::size_t>::max();

  std::vector<std::size_t> assignments;  // cluster id or kNoise
  std::vector<bool> core;
  std::size_t cluster_count = 0;
  double eps = 0.0;
  std::size_t min_pts = 0;
};

// Neighbourhoods use d < eps and include the point itself. Clusters are
// numbered in order of their first core point; a border point joins the
// first cluster that reaches it.
DbscanResult dbscan(const DistanceMatrix& dm, double eps, std::size_t min_pts);

}  // namespace htc

namespace htc {

// Flat clusters obtained by applying merges in order until at most k trees
// remain. Cluster ids follow the smallest leaf of each cluster.
std::vector<std::size_t> cut_dendrogram(const Dendrogram& dend, std::size_t k);

}  // namespace htc
